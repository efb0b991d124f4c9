"""Recursive path constructions over subcubes, in parent-cube labels.

A subcube is described by its tuple of free dimensions (ascending); fixed
bits ride along inside the vertex labels, so routes never need relabeling on
the way out. Every recursion bottoms out at four free dimensions, where an
exhaustive search settles the instance and a memo keyed by the projected
instance makes repeats free.

The constructions here are the classical building blocks: Hamiltonian paths
under a small fault budget, paths avoiding one vertex, two-path partitions,
and paths through a prescribed edge. All choices scan ascending, so outputs
are deterministic.
"""

from __future__ import annotations

from .errors import ConstructionError
from .oracle import raw_search

#: recursions switch to exhaustive search at this many free dimensions
BASE_DIMENSION = 4


# ---------------------------------------------------------------------------
# Subcube helpers
# ---------------------------------------------------------------------------

def submask(dims) -> int:
    m = 0
    for d in dims:
        m |= 1 << d
    return m


def project(v: int, dims) -> int:
    out = 0
    for i, d in enumerate(dims):
        out |= ((v >> d) & 1) << i
    return out


def lift(pv: int, dims, anchor: int) -> int:
    v = anchor
    for i, d in enumerate(dims):
        if (pv >> i) & 1:
            v |= 1 << d
    return v


def iter_subcube(dims, anchor):
    """Subcube vertices in ascending full-label order."""
    k = len(dims)
    for idx in range(1 << k):
        yield lift(idx, dims, anchor)


def half_dims(dims, d):
    return tuple(x for x in dims if x != d)


def split_faults(faults, d):
    """Partition (low, dir) faults along direction d: (side0, side1, crossing)."""
    s0, s1, cross = [], [], []
    for f in faults:
        if f[1] == d:
            cross.append(f)
        elif (f[0] >> d) & 1:
            s1.append(f)
        else:
            s0.append(f)
    return s0, s1, cross


# ---------------------------------------------------------------------------
# Exhaustive base cases (projected to k-bit space, memoized)
# ---------------------------------------------------------------------------

_MEMO_HP: dict = {}
_MEMO_AVOID: dict = {}
_MEMO_THROUGH: dict = {}
_MEMO_TWO: dict = {}


def _project_faults(faults, dims):
    pos = {d: i for i, d in enumerate(dims)}
    out = []
    for low, d in faults:
        out.append((project(low, dims), pos[d]))
    out.sort()
    return tuple(out)


def base_hp(dims, anchor, faults, a, b, need_faulty):
    """Exhaustive HP a->b with 0 or exactly 1 faulty traversal. Returns
    (path, faulty_step_index); the index is -1 when need_faulty is not 1."""
    k = len(dims)
    pf = _project_faults(faults, dims)
    key = (k, pf, project(a, dims), project(b, dims), need_faulty)
    hit = _MEMO_HP.get(key)
    if hit is None:
        sols, _ = raw_search(k, list(pf), endpoints=key[2:4], need_faulty=need_faulty)
        if not sols:
            raise ConstructionError(
                f"base search found no HP for k={k} faults={pf} pair={key[2:4]}"
            )
        path = sols[0]
        idx = -1
        if need_faulty == 1:
            fset = set(pf)
            for i in range(len(path) - 1):
                x = path[i] ^ path[i + 1]
                if (path[i] & path[i + 1], x.bit_length() - 1) in fset:
                    idx = i
                    break
        hit = (tuple(path), idx)
        _MEMO_HP[key] = hit
    path, idx = hit
    return [lift(pv, dims, anchor) for pv in path], idx


def base_hp_avoid(dims, anchor, x, y, v):
    k = len(dims)
    key = (k, project(x, dims), project(y, dims), project(v, dims))
    hit = _MEMO_AVOID.get(key)
    if hit is None:
        sols, _ = raw_search(k, [], endpoints=key[1:3], excluded=key[3])
        if not sols:
            raise ConstructionError(f"base search found no vertex-avoiding HP for {key}")
        hit = tuple(sols[0])
        _MEMO_AVOID[key] = hit
    return [lift(pv, dims, anchor) for pv in hit]


def base_hp_through(dims, anchor, x, y, edge_pair):
    k = len(dims)
    pe = (project(edge_pair[0], dims), project(edge_pair[1], dims))
    key = (k, project(x, dims), project(y, dims), min(pe), max(pe))
    hit = _MEMO_THROUGH.get(key)
    if hit is None:
        sols, _ = raw_search(k, [], endpoints=key[1:3], required_pair=key[3:5])
        if not sols:
            raise ConstructionError(f"base search found no through-edge HP for {key}")
        hit = tuple(sols[0])
        _MEMO_THROUGH[key] = hit
    return [lift(pv, dims, anchor) for pv in hit]


def base_two_paths(dims, anchor, pair1, pair2):
    """Exhaustive partition into two disjoint covering paths."""
    k = len(dims)
    a1, b1 = (project(v, dims) for v in pair1)
    a2, b2 = (project(v, dims) for v in pair2)
    key = (k, a1, b1, a2, b2)
    hit = _MEMO_TWO.get(key)
    if hit is None:
        hit = _two_paths_search(k, a1, b1, a2, b2)
        if hit is None:
            raise ConstructionError(f"base search found no two-path partition for {key}")
        _MEMO_TWO[key] = hit
    p1, p2 = hit
    return (
        [lift(pv, dims, anchor) for pv in p1],
        [lift(pv, dims, anchor) for pv in p2],
    )


def _two_paths_search(k, a1, b1, a2, b2):
    """Backtracking for two vertex-disjoint covering paths a1->b1, a2->b2.

    Phase one walks from a1 keeping a2/b2 reserved; once it stands on b1 the
    search teleports to a2 and must finish on b2 covering the rest.
    """
    size = 1 << k
    visited = bytearray(size)
    visited[a1] = 1
    path1: list[int] = [a1]
    path2: list[int] = []
    out: list[tuple] = []

    def extend(cur, phase):
        if out:
            return
        total = len(path1) + len(path2)
        if phase == 2 and total == size:
            if cur == b2:
                out.append((tuple(path1), tuple(path2)))
            return
        if phase == 1 and cur == b1:
            if not visited[a2]:
                visited[a2] = 1
                path2.append(a2)
                extend(a2, 2)
                path2.pop()
                visited[a2] = 0
            return
        for d in range(k):
            w = cur ^ (1 << d)
            if visited[w]:
                continue
            # endpoints of the other path stay reserved for phase two
            if phase == 1 and (w == a2 or w == b2):
                continue
            if phase == 2 and w == b2 and total + 1 != size:
                continue
            visited[w] = 1
            (path1 if phase == 1 else path2).append(w)
            extend(w, phase)
            (path1 if phase == 1 else path2).pop()
            visited[w] = 0
            if out:
                return

    extend(a1, 1)
    return out[0] if out else None


# ---------------------------------------------------------------------------
# Fault-free recursive constructions
# ---------------------------------------------------------------------------

def hp_free(dims, a, b):
    """Hamiltonian path a->b in a fault-free subcube (opposite parities)."""
    mask = submask(dims)
    anchor = a & ~mask
    if len(dims) <= BASE_DIMENSION:
        return base_hp(dims, anchor, (), a, b, None)[0]
    # split where the endpoints separate; each half is solved by laceability
    d = next(dd for dd in dims if (a >> dd) & 1 != (b >> dd) & 1)
    bit = 1 << d
    hd = half_dims(dims, d)
    pa = (a & mask).bit_count() & 1
    u = _lowest(hd, a & ~submask(hd), mask, want_parity=1 - pa)
    return hp_free(hd, a, u) + hp_free(hd, u ^ bit, b)


def _lowest(dims, anchor, parity_mask, want_parity, exclude=(), healthy_crossing=None):
    """Lowest subcube vertex of the wanted parity, skipping exclusions.

    healthy_crossing, when given, is (fault_lows_in_dir, bit) and restricts
    the scan to vertices whose crossing edge in that direction is healthy.
    """
    for v in iter_subcube(dims, anchor):
        if (v & parity_mask).bit_count() & 1 != want_parity:
            continue
        if v in exclude:
            continue
        if healthy_crossing is not None:
            lows, bit = healthy_crossing
            if (v & ~bit) in lows:
                continue
        return v
    raise ConstructionError("no candidate vertex; choice preconditions violated")


def hp_avoid(dims, x, y, v):
    """HP x->y covering the subcube minus v (Par x = Par y != Par v)."""
    mask = submask(dims)
    anchor = x & ~mask
    if len(dims) <= BASE_DIMENSION:
        return base_hp_avoid(dims, anchor, x, y, v)
    p = (x & mask).bit_count() & 1

    for d in dims:
        if (x >> d) & 1 == (y >> d) & 1 != (v >> d) & 1:
            # x,y together, v apart: bridge through the far half around v
            bit = 1 << d
            hd = half_dims(dims, d)
            ha = x & ~submask(hd)
            w1 = _lowest(hd, ha, mask, 1 - p)
            w2 = _lowest(hd, ha, mask, 1 - p, exclude=(w1,))
            p1, p2 = two_paths(hd, (x, w1), (w2, y))
            far = hp_avoid(hd, w1 ^ bit, w2 ^ bit, v)
            return p1 + far + p2
    # otherwise split between x and y; v shares a half with one of them
    d = next(dd for dd in dims if (x >> dd) & 1 != (y >> dd) & 1)
    bit = 1 << d
    hd = half_dims(dims, d)
    hx = x & ~submask(hd)
    hy = y & ~submask(hd)
    if (v >> d) & 1 == (x >> d) & 1:
        # avoid v on x's side, then sweep y's side
        w = _lowest(hd, hx, mask, p, exclude=(x,))
        return hp_avoid(hd, x, w, v) + hp_free(hd, w ^ bit, y)
    w = _lowest(hd, hx, mask, 1 - p, exclude=(y ^ bit,))
    return hp_free(hd, x, w) + hp_avoid(hd, w ^ bit, y, v)


def two_paths(dims, pair1, pair2):
    """Partition the subcube into two disjoint paths pair1[0]->pair1[1] and
    pair2[0]->pair2[1]; each pair joins opposite parities, all four distinct."""
    mask = submask(dims)
    anchor = pair1[0] & ~mask
    if len(dims) <= BASE_DIMENSION:
        return base_two_paths(dims, anchor, pair1, pair2)

    a1, b1 = pair1
    a2, b2 = pair2
    d = dims[0]
    bit = 1 << d
    sides = ((a1 >> d) & 1, (b1 >> d) & 1, (a2 >> d) & 1, (b2 >> d) & 1)
    hd = half_dims(dims, d)
    sub = submask(hd)

    if sides[0] == sides[1] == sides[2] == sides[3]:
        # everything on one side: partition there, reroute one edge of the
        # first path through the untouched half
        p1, p2 = two_paths(hd, pair1, pair2)
        bridge = hp_free(hd, p1[0] ^ bit, p1[1] ^ bit)
        return [p1[0]] + bridge + p1[1:], p2

    if sides[0] == sides[1] and sides[2] == sides[3]:
        # one pair per half
        return hp_free(hd, a1, b1), hp_free(hd, a2, b2)

    if sides[0] == sides[2] and sides[1] == sides[3]:
        # both paths cross in parallel: a1,a2 on one side, b1,b2 on the other
        ha = a1 & ~sub
        pa1 = (a1 & mask).bit_count() & 1
        pa2 = (a2 & mask).bit_count() & 1
        avoid = (a1, a2, b1 ^ bit, b2 ^ bit)
        w1 = _lowest(hd, ha, mask, 1 - pa1, exclude=avoid)
        w2 = _lowest(hd, ha, mask, 1 - pa2, exclude=avoid + (w1,))
        h1, h2 = two_paths(hd, (a1, w1), (a2, w2))
        o1, o2 = two_paths(hd, (w1 ^ bit, b1), (w2 ^ bit, b2))
        return h1 + o1, h2 + o2

    if sides[0] == sides[3] and sides[1] == sides[2]:
        # opposite crossings: a1,b2 on one side, b1,a2 on the other
        ha = a1 & ~sub
        pa1 = (a1 & mask).bit_count() & 1
        pb2 = (b2 & mask).bit_count() & 1
        avoid = (a1, b2, a2 ^ bit, b1 ^ bit)
        g1 = _lowest(hd, ha, mask, 1 - pa1, exclude=avoid)
        g2 = _lowest(hd, ha, mask, 1 - pb2, exclude=avoid + (g1,))
        h1, h2 = two_paths(hd, (a1, g1), (g2, b2))
        o1, o2 = two_paths(hd, (g1 ^ bit, b1), (a2, g2 ^ bit))
        return h1 + o1, o2 + h2

    # three-and-one: normalize so the lone vertex sits in the b2 position
    if sides[2] != sides[0] == sides[1] == sides[3]:
        p1, p2 = two_paths(dims, pair1, (b2, a2))
        return p1, p2[::-1]
    if sides[1] != sides[0] == sides[2] == sides[3]:
        p2, p1 = two_paths(dims, pair2, pair1)
        return p1, p2
    if sides[0] != sides[1] == sides[2] == sides[3]:
        p2, p1 = two_paths(dims, pair2, (b1, a1))
        return p1[::-1], p2

    ha = a1 & ~sub
    pa2 = (a2 & mask).bit_count() & 1
    g = _lowest(hd, ha, mask, 1 - pa2, exclude=(a1, b1, b2 ^ bit))
    p1, p2 = two_paths(hd, (a1, b1), (a2, g))
    return p1, p2 + hp_free(hd, g ^ bit, b2)


def hp_through(dims, x, y, edge_pair):
    """HP x->y traversing the prescribed edge (fault-free subcube)."""
    mask = submask(dims)
    anchor = x & ~mask
    if len(dims) <= BASE_DIMENSION:
        return base_hp_through(dims, anchor, x, y, edge_pair)
    u, v = edge_pair
    if x in (u, v):
        other = v if x == u else u
        return [x] + hp_avoid(dims, other, y, x)
    if y in (u, v):
        other = v if y == u else u
        return hp_avoid(dims, x, other, y) + [y]
    px = (x & mask).bit_count() & 1
    e1 = u if (u & mask).bit_count() & 1 != px else v
    e2 = v if e1 is u else u
    p1, p2 = two_paths(dims, (x, e1), (e2, y))
    return p1 + p2


def hp_faulty(dims, faults, a, b):
    """HP a->b dodging every fault; the budget |F| <= k-2 keeps both halves
    of any fault-carrying split inside the inductive budget."""
    mask = submask(dims)
    anchor = a & ~mask
    k = len(dims)
    if k <= BASE_DIMENSION:
        return base_hp(dims, anchor, faults, a, b, None)[0]
    if not faults:
        return hp_free(dims, a, b)

    # split direction: fewest faulty crossings, both halves within budget
    best = None
    for d in dims:
        s0, s1, cross = split_faults(faults, d)
        if max(len(s0), len(s1)) <= k - 3:
            if best is None or len(cross) < best[0]:
                best = (len(cross), d, s0, s1, cross)
    if best is None:
        raise ConstructionError("no split direction fits the fault budget")
    _, d, s0, s1, cross = best
    bit = 1 << d
    hd = half_dims(dims, d)
    cross_lows = {f[0] for f in cross}

    sa, sb = (a >> d) & 1, (b >> d) & 1
    if sa != sb:
        pa = (a & mask).bit_count() & 1
        u = _lowest(
            hd, a & ~submask(hd), mask, 1 - pa,
            healthy_crossing=(cross_lows, bit),
        )
        fa, fb = (s0, s1) if sa == 0 else (s1, s0)
        return hp_faulty(hd, fa, a, u) + hp_faulty(hd, fb, u ^ bit, b)

    fh, fo = (s0, s1) if sa == 0 else (s1, s0)
    inside = hp_faulty(hd, fh, a, b)
    for i in range(len(inside) - 1):
        if (inside[i] & ~bit) not in cross_lows and (inside[i + 1] & ~bit) not in cross_lows:
            detour = hp_faulty(hd, fo, inside[i] ^ bit, inside[i + 1] ^ bit)
            return inside[: i + 1] + detour + inside[i + 1 :]
    raise ConstructionError("no healthy consecutive crossing pair on the path")
