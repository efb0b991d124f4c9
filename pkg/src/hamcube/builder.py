"""Constructive Hamiltonian paths and cycles under disjoint faults.

The engine behind the main theorems: a trap-free cube (no SCDHW, no DTBCE)
always admits a fault-free Hamiltonian path between opposite parities (the
La1 recursion) and, given at least one usable fault, a Hamiltonian path
traversing exactly one faulty edge (La2). Hamiltonian cycles follow: close a
fault-free path over the lowest healthy edge, or stitch the two balanced
healthy crossing edges of a DTBCE.

Recursion splits along a direction whose both halves stay trap-free (the
partition scan; guaranteed to exist for n >= 5), dispatches on where the
endpoints and faults landed, and bottoms out at n = 4 in exhaustive search.
All nondeterministic choices resolve to the lowest candidate, so identical
inputs give identical routes and traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import _paths as P
from .core import Edge, FaultSet, parity, vertex_str
from .errors import (
    ConstructionError,
    NoDimensionFound,
    NotHamiltonian,
    PreconditionViolated,
)
from .oracle import SearchConstraints, oracle_find
from .routes import Route, verify_route  # noqa: F401  (verify_route is part of this module's API)
from .traps import detect_claw, detect_dtbce, detect_scdhw, diagnose


@dataclass(frozen=True)
class TraceStep:
    depth: int
    n: int
    case: str
    split_dir: Optional[int] = None
    endpoints: tuple = ()
    chosen: tuple = ()


@dataclass
class BuildTrace:
    """Per-level record of the recursion: split, case label, choices."""

    steps: list[TraceStep] = field(default_factory=list)

    def add(self, depth, n, case, split_dir=None, endpoints=(), chosen=()):
        self.steps.append(TraceStep(depth, n, case, split_dir, endpoints, chosen))

    def render(self, n: int) -> str:
        lines = []
        for s in self.steps:
            parts = [f"{'  ' * s.depth}[n={s.n}] {s.case}"]
            if s.split_dir is not None:
                parts.append(f"split={s.split_dir}")
            if s.endpoints:
                parts.append(
                    "endpoints=" + ",".join(vertex_str(v, n) for v in s.endpoints)
                )
            if s.chosen:
                parts.append(
                    "chosen=" + ",".join(vertex_str(v, n) for v in s.chosen)
                )
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Partition-dimension selection
# ---------------------------------------------------------------------------

def _half_trap_free(faults, dims, d, side):
    """No SCDHW / DTBCE inside the half Q^d_side of the subcube `dims`.

    Works on per-(direction, parity) healthy crossing counts: trap-free means
    every direction keeps a healthy crossing edge of each parity and at least
    three healthy crossing edges in total.
    """
    hd = P.half_dims(dims, d)
    k = len(hd)
    mask = P.submask(hd)
    per_parity = 1 << (k - 2)
    tall = {dd: [0, 0] for dd in hd}
    for low, dd in faults:
        if dd == d or (low >> d) & 1 != side:
            continue
        tall[dd][(low & mask).bit_count() & 1] += 1
    for dd in hd:
        t0, t1 = tall[dd]
        h0 = per_parity - t0
        h1 = per_parity - t1
        if h0 == 0 or h1 == 0 or h0 + h1 == 2:
            return False
    return True


def _select_m(dims, faults):
    """Lowest direction whose both halves pass a fresh trap check."""
    for d in dims:
        if _half_trap_free(faults, dims, d, 0) and _half_trap_free(faults, dims, d, 1):
            return d
    raise NoDimensionFound(
        f"no direction of {dims} splits into two trap-free halves; "
        "this contradicts the partition guarantee and signals a bug"
    )


def select_partition_dimension(fs: FaultSet) -> int:
    """Direction m such that both halves Q^m_0, Q^m_1 are trap-free.

    Scans directions ascending. The postcondition is re-validated through
    the public trap detectors on the actual half fault sets, every time.
    """
    if fs.n < 5:
        raise PreconditionViolated(f"partition selection needs n >= 5, got {fs.n}")
    faults = [(e.low, e.dir) for e in fs.edges]
    m = _select_m(tuple(range(fs.n)), faults)
    for side in (0, 1):
        half = fs.restrict_to_half(m, side)
        if detect_scdhw(half) is not None or detect_dtbce(half) is not None:
            raise NoDimensionFound(
                f"direction {m} failed independent re-validation on side {side}"
            )
    return m


# ---------------------------------------------------------------------------
# La1: fault-free Hamiltonian path in a trap-free cube
# ---------------------------------------------------------------------------

def _drop_endpoint_edge(faults, a, b):
    """A path a->b never uses the edge (a,b); a faulty one may be ignored."""
    x = a ^ b
    if x and not (x & (x - 1)):
        key = (a & b, x.bit_length() - 1)
        if key in set(faults):
            return [f for f in faults if f != key]
    return faults


def _la1(dims, faults, a, b, trace, depth):
    k = len(dims)
    mask = P.submask(dims)
    faults = _drop_endpoint_edge(faults, a, b)

    if k == P.BASE_DIMENSION:
        if trace is not None:
            trace.add(depth, k, "Base n=4", endpoints=(a, b))
        return P.base_hp(dims, a & ~mask, faults, a, b, None)[0]
    if len(faults) <= 1:
        if trace is not None:
            trace.add(depth, k, "Base |F|<=1", endpoints=(a, b))
        return P.hp_faulty(dims, faults, a, b)

    m = _select_m(dims, faults)
    bit = 1 << m
    hd = P.half_dims(dims, m)
    s0, s1, cross = P.split_faults(faults, m)
    cross_lows = {f[0] for f in cross}
    pa = (a & mask).bit_count() & 1
    sa, sb = (a >> m) & 1, (b >> m) & 1

    if sa != sb:
        # endpoints in different halves: bridge over a healthy crossing edge
        # whose near-side endpoint has the parity opposite to a
        u = P._lowest(
            hd, a & ~P.submask(hd), mask, 1 - pa,
            healthy_crossing=(cross_lows, bit),
        )
        if trace is not None:
            trace.add(depth, k, "Case 1", m, (a, b), (u, u ^ bit))
        fa, fb = (s0, s1) if sa == 0 else (s1, s0)
        return (
            _la1(hd, fa, a, u, trace, depth + 1)
            + _la1(hd, fb, u ^ bit, b, trace, depth + 1)
        )

    fh, fo = (s0, s1) if sa == 0 else (s1, s0)
    anchor_h = a & ~P.submask(hd)
    if fh:
        # Subcase 2.1: a fault lives in the occupied half; run the one-fault
        # path there and detour around its traversal through the other half
        if trace is not None:
            trace.add(depth, k, "Subcase 2.1", m, (a, b))
        inside, j = _la2(hd, fh, a, b, trace, depth + 1)
        u, v = inside[j], inside[j + 1]
        bridge = _la1(hd, fo, u ^ bit, v ^ bit, trace, depth + 1)
        return inside[: j + 1] + bridge + inside[j + 1 :]

    # Subcase 2.2: occupied half is fault-free; pick two healthy crossing
    # edges of opposite near-side parity, not both sitting on the endpoints
    far, near = [], []
    for v in P.iter_subcube(hd, anchor_h):
        if (v & ~bit) in cross_lows:
            continue
        side_list = far if (v & mask).bit_count() & 1 != pa else near
        if len(side_list) < 2:
            side_list.append(v)
            if len(far) == 2 and len(near) == 2:
                break
    x = far[0]
    y = near[0]
    if x == b and y == a:
        if len(far) > 1:
            x = far[1]
        else:
            y = near[1]
    if trace is not None:
        trace.add(depth, k, "Subcase 2.2", m, (a, b), (x, y))
    if y == a:
        bridge = _la1(hd, fo, a ^ bit, x ^ bit, trace, depth + 1)
        return [a] + bridge + P.hp_avoid(hd, x, b, a)
    if x == b:
        bridge = _la1(hd, fo, y ^ bit, b ^ bit, trace, depth + 1)
        return P.hp_avoid(hd, a, y, b) + bridge + [b]
    p1, p2 = P.two_paths(hd, (a, x), (b, y))
    bridge = _la1(hd, fo, x ^ bit, y ^ bit, trace, depth + 1)
    return p1 + bridge + p2[::-1]


# ---------------------------------------------------------------------------
# La2: Hamiltonian path through exactly one faulty edge
# ---------------------------------------------------------------------------

def _la2(dims, faults, a, b, trace, depth):
    """Returns (path, j) where (path[j], path[j+1]) is the faulty step."""
    k = len(dims)
    mask = P.submask(dims)
    faults = _drop_endpoint_edge(faults, a, b)
    if not faults:
        raise ConstructionError("one-fault path requested without usable faults")

    if k == P.BASE_DIMENSION:
        if trace is not None:
            trace.add(depth, k, "Base n=4 (one fault)", endpoints=(a, b))
        return P.base_hp(dims, a & ~mask, faults, a, b, 1)
    if len(faults) == 1:
        low, d = faults[0]
        if trace is not None:
            trace.add(depth, k, "Base |F|=1 (through edge)", endpoints=(a, b))
        path = P.hp_through(dims, a, b, (low, low | (1 << d)))
        j = _locate_step(path, low, low | (1 << d))
        return path, j

    m = _select_m(dims, faults)
    bit = 1 << m
    hd = P.half_dims(dims, m)
    s0, s1, cross = P.split_faults(faults, m)
    cross_lows = {f[0] for f in cross}
    pa = (a & mask).bit_count() & 1
    pb = (b & mask).bit_count() & 1
    sa, sb = (a >> m) & 1, (b >> m) & 1

    if sa != sb:
        fa, fb = (s0, s1) if sa == 0 else (s1, s0)
        # Subcase 3.1: a faulty crossing edge with far parity on a's side
        for low, _ in sorted(cross):
            ua = low if sa == 0 else low ^ bit
            if (ua & mask).bit_count() & 1 == 1 - pa:
                if trace is not None:
                    trace.add(depth, k, "Subcase 3.1", m, (a, b), (ua, ua ^ bit))
                head = _la1(hd, fa, a, ua, trace, depth + 1)
                tail = _la1(hd, fb, ua ^ bit, b, trace, depth + 1)
                return head + tail, len(head) - 1

        anchor_a = a & ~P.submask(hd)
        anchor_b = b & ~P.submask(hd)
        if fa:
            # Subcase 3.2: fault inside a's half; spend it there
            f = min(fa)
            fends = (f[0], f[0] | (1 << f[1]))
            u = P._lowest(
                hd, anchor_a, mask, 1 - pa,
                exclude=fends, healthy_crossing=(cross_lows, bit),
            )
            if trace is not None:
                trace.add(depth, k, "Subcase 3.2", m, (a, b), (u, u ^ bit))
            inside, j = _la2(hd, fa, a, u, trace, depth + 1)
            tail = _la1(hd, fb, u ^ bit, b, trace, depth + 1)
            return inside + tail, j
        if fb:
            # mirror of 3.2: the fault sits in b's half
            f = min(fb)
            fends = (f[0], f[0] | (1 << f[1]))
            v = P._lowest(
                hd, anchor_b, mask, 1 - pb,
                exclude=fends, healthy_crossing=(cross_lows, bit),
            )
            if trace is not None:
                trace.add(depth, k, "Subcase 3.2'", m, (a, b), (v ^ bit, v))
            head = _la1(hd, fa, a, v ^ bit, trace, depth + 1)
            inside, j = _la2(hd, fb, v, b, trace, depth + 1)
            return head + inside, len(head) + j

        # Subcase 3.3: every fault is a crossing edge of near parity; route
        # through one of them between two fault-free half partitions
        x = None
        for low, _ in sorted(cross):
            ua = low if sa == 0 else low ^ bit
            if ua != a:
                x = ua
                break
        if x is None:
            raise ConstructionError("no faulty crossing edge clear of the start")
        yz = []
        for v in P.iter_subcube(hd, anchor_a):
            if (v & mask).bit_count() & 1 == 1 - pa and (v & ~bit) not in cross_lows:
                yz.append(v)
                if len(yz) == 2:
                    break
        y, z = yz
        if trace is not None:
            trace.add(depth, k, "Subcase 3.3", m, (a, b), (x, y, z))
        p1, p2 = P.two_paths(hd, (a, y), (x, z))
        if b != x ^ bit:
            q1, q2 = P.two_paths(hd, (y ^ bit, x ^ bit), (z ^ bit, b))
            route = p1 + q1 + p2[::-1] + q2
            return route, len(p1) + len(q1) - 1
        far = P.hp_avoid(hd, y ^ bit, z ^ bit, b)
        route = p1 + far + p2[::-1] + [b]
        return route, len(route) - 2

    # Case 4: endpoints share a half
    fh, fo = (s0, s1) if sa == 0 else (s1, s0)
    if cross:
        # Subcase 4.1: spend a faulty crossing edge off the inside path
        if trace is not None:
            trace.add(depth, k, "Subcase 4.1", m, (a, b))
        inside = _la1(hd, fh, a, b, trace, depth + 1)
        side_ends = {low if sa == 0 else low ^ bit for low in cross_lows}
        for i in range(len(inside) - 1):
            u, v = inside[i], inside[i + 1]
            if (u in side_ends) != (v in side_ends):
                bridge = _la1(hd, fo, u ^ bit, v ^ bit, trace, depth + 1)
                j = i if u in side_ends else i + len(bridge)
                return inside[: i + 1] + bridge + inside[i + 1 :], j
        raise ConstructionError("no mixed faulty/healthy crossing pair on the path")
    if fh:
        # Subcase 4.2: one-fault path inside, detour over any healthy step
        if trace is not None:
            trace.add(depth, k, "Subcase 4.2", m, (a, b))
        inside, j = _la2(hd, fh, a, b, trace, depth + 1)
        i = 0 if j != 0 else 1
        bridge = _la1(hd, fo, inside[i] ^ bit, inside[i + 1] ^ bit, trace, depth + 1)
        return (
            inside[: i + 1] + bridge + inside[i + 1 :],
            j if j < i else j + len(bridge),
        )
    # Subcase 4.3: all faults across; spend one inside the far half
    if trace is not None:
        trace.add(depth, k, "Subcase 4.3", m, (a, b))
    inside = _la1(hd, fh, a, b, trace, depth + 1)
    bridge, j = _la2(hd, fo, inside[0] ^ bit, inside[1] ^ bit, trace, depth + 1)
    return inside[:1] + bridge + inside[1:], 1 + j


def _locate_step(path, u, v):
    for i in range(len(path) - 1):
        if (path[i] == u and path[i + 1] == v) or (path[i] == v and path[i + 1] == u):
            return i
    raise ConstructionError("expected edge missing from constructed path")


# ---------------------------------------------------------------------------
# Public builders
# ---------------------------------------------------------------------------

def _check_common(fs: FaultSet, a: int, b: int):
    size = 1 << fs.n
    if not (0 <= a < size and 0 <= b < size):
        raise PreconditionViolated("endpoint out of range")
    if a == b:
        raise PreconditionViolated("endpoints must differ")
    if parity(a) == parity(b):
        raise PreconditionViolated(
            "endpoints of equal parity admit no Hamiltonian path"
        )
    scdhw = detect_scdhw(fs)
    if scdhw is not None:
        raise PreconditionViolated(f"cube has {scdhw.describe(fs.n)}")
    dtbce = detect_dtbce(fs)
    if dtbce is not None:
        raise PreconditionViolated(f"cube has {dtbce.describe(fs.n)}")


def build_hp(fs: FaultSet, a: int, b: int, trace: Optional[BuildTrace] = None) -> Route:
    """Fault-free Hamiltonian path a->b in a trap-free cube (n >= 4)."""
    if fs.n < 4:
        raise PreconditionViolated(f"path construction needs n >= 4, got {fs.n}")
    _check_common(fs, a, b)
    faults = [(e.low, e.dir) for e in fs.edges]
    path = _la1(tuple(range(fs.n)), faults, a, b, trace, 0)
    route = Route(fs.n, tuple(path), closed=False)
    verdict = verify_route(fs, route, endpoints=(a, b), faulty_max=0)
    if not verdict.ok:
        raise ConstructionError("; ".join(verdict.violations))
    return route


def build_hp_one_fault(
    fs: FaultSet, a: int, b: int, trace: Optional[BuildTrace] = None
) -> Route:
    """Hamiltonian path a->b traversing exactly one faulty edge (n >= 4)."""
    if fs.n < 4:
        raise PreconditionViolated(f"path construction needs n >= 4, got {fs.n}")
    _check_common(fs, a, b)
    if len(fs) == 0:
        raise PreconditionViolated("no faulty edge available to traverse")
    if len(fs) == 1 and fs.is_faulty(a, b):
        raise PreconditionViolated(
            "the only faulty edge joins the endpoints; a Hamiltonian path "
            "never uses its endpoint edge"
        )
    faults = [(e.low, e.dir) for e in fs.edges]
    path, _ = _la2(tuple(range(fs.n)), faults, a, b, trace, 0)
    route = Route(fs.n, tuple(path), closed=False)
    verdict = verify_route(fs, route, endpoints=(a, b), faulty_exactly=1)
    if not verdict.ok:
        raise ConstructionError("; ".join(verdict.violations))
    return route


def gray_cycle(n: int) -> Route:
    """The reflected-Gray-code Hamiltonian cycle of a fault-free cube."""
    return Route(n, tuple(i ^ (i >> 1) for i in range(1 << n)), closed=True)


def build_hc(fs: FaultSet, trace: Optional[BuildTrace] = None) -> Route:
    """A fault-free Hamiltonian cycle, whenever one exists.

    Fault-free cubes take the Gray-code fast path. A DTBCE still admits a
    cycle: both its healthy crossing edges bridge one Hamiltonian path per
    half (each half carries at most one fault). Otherwise the cycle closes a
    constructed path over the lowest healthy edge. An SCDHW is the one true
    obstruction and raises NotHamiltonian with its certificate.
    """
    n = fs.n
    if n < 2:
        raise PreconditionViolated("a cycle needs n >= 2")
    if len(fs) == 0:
        if trace is not None:
            trace.add(0, n, "Gray code (no faults)")
        return gray_cycle(n)
    if n < 3:
        raise PreconditionViolated("faulty cycle construction needs n >= 3")

    scdhw = detect_scdhw(fs)
    if scdhw is not None:
        raise NotHamiltonian(scdhw, f"cube has {scdhw.describe(n)}")

    if n == 3:
        # small-cube convenience: the classification is claw-or-cut; search
        claw = detect_claw(fs)
        if claw is not None:
            raise NotHamiltonian(claw, f"cube has {claw.describe(n)}")
        route = oracle_find(fs, SearchConstraints(closed=True))
        if route is None:
            raise ConstructionError(
                "Q_3 without SCDHW or claw must be Hamiltonian; search disagrees"
            )
        if trace is not None:
            trace.add(0, n, "Base n=3 (search)")
        verdict = verify_route(fs, route, closed=True, faulty_max=0)
        if not verdict.ok:
            raise ConstructionError("; ".join(verdict.violations))
        return route

    dtbce = detect_dtbce(fs)
    dims = tuple(range(n))
    if dtbce is not None:
        d, u, w = dtbce.dim, dtbce.u, dtbce.w
        bit = 1 << d
        hd = P.half_dims(dims, d)
        s0, s1, _ = P.split_faults([(e.low, e.dir) for e in fs.edges], d)
        if trace is not None:
            trace.add(0, n, "DTBCE bridge", d, (u, w, u ^ bit, w ^ bit))
        inside = P.hp_faulty(hd, s0, u, w)
        outside = P.hp_faulty(hd, s1, u ^ bit, w ^ bit)
        route = Route(n, tuple(inside + outside[::-1]), closed=True)
    else:
        a = b = -1
        for v in range(1 << n):
            for d in range(n):
                if not (v >> d) & 1 and not fs.is_faulty(v, v | (1 << d)):
                    a, b = v, v | (1 << d)
                    break
            if a >= 0:
                break
        if trace is not None:
            trace.add(0, n, "Close lowest healthy edge", endpoints=(a, b))
        faults = [(e.low, e.dir) for e in fs.edges]
        path = _la1(dims, faults, a, b, trace, 1)
        route = Route(n, tuple(path), closed=True)

    verdict = verify_route(fs, route, closed=True, faulty_max=0)
    if not verdict.ok:
        raise ConstructionError("; ".join(verdict.violations))
    return route
