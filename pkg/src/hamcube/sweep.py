"""Exhaustive and sampled verification sweeps over fault sets.

Every fault set is a matching of the cube graph. For n <= 4 all matchings
are enumerable; grouping them into orbits under the cube's automorphism
group (signed coordinate permutations: permute bit positions, then flip a
subset of bits) cuts the exhaustive checks down to a few hundred
representatives whose verdicts are provably orbit-invariant.

The sweep pits the trap-based classification against the exhaustive oracle
on every representative and, on request, exercises the constructive engine
over every (or a sampled set of) endpoint pairs. Any disagreement lands in
the report as a counterexample; the expected count is zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Iterator, Optional

import numpy as np

from .core import Edge, FaultSet, make_fault_set
from .errors import ConstraintUnsatisfiable, DimensionTooLarge, PreconditionViolated
from .oracle import SearchConstraints, oracle_exists
from .routes import verify_route
from .traps import detect_claw, detect_dtbce, detect_scdhw, diagnose
from . import builder

#: exhaustive enumeration bound; matching counts explode beyond n = 4
MAX_EXHAUSTIVE_DIMENSION = 4


# ---------------------------------------------------------------------------
# Automorphisms and canonical forms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def cube_automorphisms(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """All 2^n * n! signed coordinate permutations as (bit_map, xor_mask).

    bit_map[i] is the position bit i moves to; the mask is XORed afterwards.
    """
    out = []
    for perm in permutations(range(n)):
        for mask in range(1 << n):
            out.append((perm, mask))
    return tuple(out)


def apply_automorphism(v: int, bit_map, mask: int) -> int:
    out = 0
    for i, target in enumerate(bit_map):
        if (v >> i) & 1:
            out |= 1 << target
    return out ^ mask


def map_edge(e: Edge, bit_map, mask: int) -> Edge:
    a = apply_automorphism(e.low, bit_map, mask)
    b = apply_automorphism(e.high, bit_map, mask)
    return Edge.between(a, b)


def _edge_id(e: Edge) -> int:
    return (e.low << 5) | e.dir


def _edge_from_id(eid: int, n: int) -> Edge:
    return Edge(eid >> 5, eid & 31)


@lru_cache(maxsize=8)
def _auto_edge_table(n: int) -> np.ndarray:
    """edge-id permutation table of shape (|Aut|, edge_id_space)."""
    autos = cube_automorphisms(n)
    ids = {}
    edges = []
    for v in range(1 << n):
        for d in range(n):
            if not (v >> d) & 1:
                ids[(v, d)] = len(edges)
                edges.append(Edge(v, d))
    table = np.zeros((len(autos), len(edges)), dtype=np.int16)
    for ai, (bm, mask) in enumerate(autos):
        for j, e in enumerate(edges):
            m = map_edge(e, bm, mask)
            table[ai, j] = ids[(m.low, m.dir)]
    dense = np.array([_edge_id(e) for e in edges], dtype=np.int64)
    _auto_edge_table.dense_ids = getattr(_auto_edge_table, "dense_ids", {})
    _auto_edge_table.dense_ids[n] = (ids, dense)
    return table


def canonical_form(fs: FaultSet) -> tuple[int, ...]:
    """Lexicographically least sorted edge-index tuple over the orbit."""
    n = fs.n
    if not fs.edges:
        return ()
    table = _auto_edge_table(n)
    ids, _ = _auto_edge_table.dense_ids[n]
    idx = np.array([ids[(e.low, e.dir)] for e in fs.edges], dtype=np.int16)
    images = np.sort(table[:, idx], axis=1)
    k = images.shape[1]
    weights = (np.int64(1) << (7 * np.arange(k - 1, -1, -1))).astype(np.int64)
    packed = images.astype(np.int64) @ weights
    best = int(np.argmin(packed))
    return tuple(int(x) for x in images[best])


def _fs_from_canonical(n: int, form: tuple[int, ...]) -> FaultSet:
    _auto_edge_table(n)
    _, dense = _auto_edge_table.dense_ids[n]
    return make_fault_set(n, [_edge_from_id(int(dense[i]), n) for i in form])


# ---------------------------------------------------------------------------
# Matching enumeration
# ---------------------------------------------------------------------------

def all_matchings(n: int) -> Iterator[list[Edge]]:
    """Every matching of Q_n (including the empty one), in ascending
    edge-index order within each matching."""
    edges = []
    for v in range(1 << n):
        for d in range(n):
            if not (v >> d) & 1:
                edges.append(Edge(v, d))
    used = 0
    chosen: list[Edge] = []

    def rec(start: int):
        yield list(chosen)
        for i in range(start, len(edges)):
            e = edges[i]
            bits = (1 << e.low) | (1 << e.high)
            nonlocal used
            if used & bits:
                continue
            used |= bits
            chosen.append(e)
            yield from rec(i + 1)
            chosen.pop()
            used &= ~bits

    yield from rec(0)


def count_matchings(n: int) -> int:
    """Independent matching counter: bitmask DP over available vertices."""
    size = 1 << n
    if size > 1 << 16:
        raise DimensionTooLarge("matching DP meant for n <= 4")
    memo: dict[int, int] = {}

    def f(avail: int) -> int:
        if avail == 0:
            return 1
        got = memo.get(avail)
        if got is not None:
            return got
        v = (avail & -avail).bit_length() - 1
        rest = avail & ~(1 << v)
        total = f(rest)
        for d in range(n):
            u = v ^ (1 << d)
            if (rest >> u) & 1:
                total += f(rest & ~(1 << u))
        memo[avail] = total
        return total

    return f((1 << size) - 1)


@dataclass(frozen=True)
class CanonicalFaultSet:
    """One orbit of matchings under the automorphism group."""

    representative: FaultSet
    orbit_size: int


def enumerate_matchings(n: int) -> Iterator[CanonicalFaultSet]:
    """All matchings of Q_n grouped into orbits, streamed in canonical order.

    The sum of orbit sizes equals the independent matching count.
    """
    if n > MAX_EXHAUSTIVE_DIMENSION:
        raise DimensionTooLarge(
            f"exhaustive matching enumeration is bounded at n <= "
            f"{MAX_EXHAUSTIVE_DIMENSION}, got {n}"
        )
    orbits: dict[tuple[int, ...], int] = {}
    for m in all_matchings(n):
        form = canonical_form(make_fault_set(n, m)) if m else ()
        orbits[form] = orbits.get(form, 0) + 1
    for form in sorted(orbits, key=lambda t: (len(t), t)):
        yield CanonicalFaultSet(_fs_from_canonical(n, form), orbits[form])


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------

def random_disjoint_faults(
    n: int,
    size: int,
    *,
    require: Optional[str] = None,
    seed: int = 0,
    restarts: int = 1000,
) -> FaultSet:
    """Seeded random matching of the requested size.

    Greedy random augmentation with restarts. `require` conditions the
    sample: "no-trap", "has-scdhw", or "has-dtbce" (the trap patterns are
    planted, then padded up to `size` when possible).
    """
    if size > 1 << (n - 1):
        raise ConstraintUnsatisfiable(f"a matching of Q_{n} has at most {1 << (n - 1)} edges")
    if require not in (None, "no-trap", "has-scdhw", "has-dtbce"):
        raise ConstraintUnsatisfiable(f"unknown requirement {require!r}")
    rng = random.Random(seed)
    size_bits = 1 << n

    for _ in range(restarts):
        taken: list[Edge] = []
        used = bytearray(size_bits)
        if require == "has-scdhw":
            d = rng.randrange(n)
            p = rng.randrange(2)
            for v in range(size_bits):
                if not (v >> d) & 1 and v.bit_count() & 1 == p:
                    taken.append(Edge(v, d))
                    used[v] = used[v | (1 << d)] = 1
        elif require == "has-dtbce":
            d = rng.randrange(n)
            lows = [v for v in range(size_bits) if not (v >> d) & 1]
            u = rng.choice([v for v in lows if v.bit_count() & 1 == 0])
            w = rng.choice([v for v in lows if v.bit_count() & 1 == 1])
            for v in lows:
                if v not in (u, w):
                    taken.append(Edge(v, d))
                    used[v] = used[v | (1 << d)] = 1
        if len(taken) > size:
            continue

        tries = 0
        limit = 200 * max(size, 1) + 200
        while len(taken) < size and tries < limit:
            tries += 1
            v = rng.randrange(size_bits)
            if used[v]:
                continue
            dirs = [d for d in range(n) if not used[v ^ (1 << d)]]
            if not dirs:
                continue
            d = rng.choice(dirs)
            w = v ^ (1 << d)
            used[v] = used[w] = 1
            taken.append(Edge(min(v, w), d))
        if len(taken) < size:
            continue

        fs = make_fault_set(n, taken)
        if require == "no-trap":
            if detect_scdhw(fs) is not None or detect_dtbce(fs) is not None:
                continue
        elif require == "has-scdhw":
            if detect_scdhw(fs) is None:
                continue
        elif require == "has-dtbce":
            if detect_dtbce(fs) is None:
                continue
        return fs
    raise ConstraintUnsatisfiable(
        f"could not build a size-{size} matching with {require!r} in {restarts} restarts"
    )


# ---------------------------------------------------------------------------
# Sweep
# ---------------------------------------------------------------------------

@dataclass
class SweepReport:
    """Aggregated sweep outcome; counterexamples must stay empty."""

    n: int
    mode: str
    seed: Optional[int]
    total_matchings: int
    representatives: int
    counts: dict[str, int] = field(default_factory=dict)
    counterexamples: list[str] = field(default_factory=list)
    pairs_checked: int = 0
    builds_checked: int = 0

    def render(self) -> str:
        lines = [f"sweep n={self.n} mode={self.mode} seed={self.seed}"]
        lines.append(f"total_matchings={self.total_matchings}")
        lines.append(f"representatives={self.representatives}")
        for name in sorted(self.counts):
            lines.append(f"class={name} count={self.counts[name]}")
        lines.append(f"pairs_checked={self.pairs_checked}")
        lines.append(f"builds_checked={self.builds_checked}")
        lines.append(f"counterexamples={len(self.counterexamples)}")
        for c in self.counterexamples:
            lines.append(f"counterexample: {c}")
        return "\n".join(lines) + "\n"


def _oracle_hamiltonian(fs: FaultSet) -> bool:
    return oracle_exists(fs, SearchConstraints(closed=True))


def _oracle_laceable(fs: FaultSet) -> tuple[bool, Optional[tuple[int, int]]]:
    """Exhaustive laceability: every opposite-parity pair joined by an HP."""
    size = 1 << fs.n
    evens = [v for v in range(size) if v.bit_count() & 1 == 0]
    odds = [v for v in range(size) if v.bit_count() & 1 == 1]
    for a in evens:
        for b in odds:
            if not oracle_exists(fs, SearchConstraints(endpoints=(a, b))):
                return False, (a, b)
    return True, None


def _check_representative(fs: FaultSet, la_checks: bool, pair_sample: Optional[int],
                          rng: Optional[random.Random]):
    """Verdict cross-check for one fault set; returns (classes, problems, stats)."""
    classes: list[str] = []
    problems: list[str] = []
    pairs = builds = 0
    diag = diagnose(fs)

    ham = _oracle_hamiltonian(fs)
    if ham != diag.hamiltonian:
        problems.append(
            f"hamiltonian verdict {diag.hamiltonian} vs oracle {ham} for {fs.edges}"
        )
    lace, witness = _oracle_laceable(fs)
    if lace != diag.laceable:
        problems.append(
            f"laceable verdict {diag.laceable} vs oracle {lace} "
            f"(witness {witness}) for {fs.edges}"
        )

    scdhw = detect_scdhw(fs)
    dtbce = detect_dtbce(fs)
    claw = detect_claw(fs) if fs.n == 3 else None
    classes.append("hamiltonian" if ham else "non_hamiltonian")
    if not ham:
        if scdhw is not None:
            classes.append("non_hamiltonian_scdhw")
        if claw is not None:
            classes.append("non_hamiltonian_claw")
        if scdhw is None and claw is None:
            problems.append(f"non-Hamiltonian without SCDHW/claw: {fs.edges}")
    classes.append("laceable" if lace else "non_laceable")
    if not lace:
        if scdhw is not None:
            classes.append("non_laceable_scdhw")
        elif dtbce is not None:
            classes.append("non_laceable_dtbce")
        elif fs.n == 3:
            classes.append("non_laceable_small_cube")
        else:
            problems.append(f"non-laceable without SCDHW/DTBCE: {fs.edges}")

    if la_checks and scdhw is None and dtbce is None and fs.n >= 4:
        size = 1 << fs.n
        evens = [v for v in range(size) if v.bit_count() & 1 == 0]
        odds = [v for v in range(size) if v.bit_count() & 1 == 1]
        all_pairs = [(a, b) for a in evens for b in odds]
        if pair_sample is not None and pair_sample < len(all_pairs):
            all_pairs = rng.sample(all_pairs, pair_sample)
        for a, b in all_pairs:
            pairs += 1
            try:
                builder.build_hp(fs, a, b)
                builds += 1
            except Exception as exc:  # noqa: BLE001 - counterexample capture
                problems.append(f"build_hp({a},{b}) failed on {fs.edges}: {exc}")
            la2_ok = len(fs) >= 2 or (len(fs) == 1 and not fs.is_faulty(a, b))
            if la2_ok:
                try:
                    builder.build_hp_one_fault(fs, a, b)
                    builds += 1
                except Exception as exc:  # noqa: BLE001
                    problems.append(
                        f"build_hp_one_fault({a},{b}) failed on {fs.edges}: {exc}"
                    )
    return classes, problems, pairs, builds


def run_sweep(
    n: int,
    mode: str = "exhaustive",
    *,
    seed: int = 0,
    samples: int = 1000,
    la_checks: bool = True,
    pair_sample: Optional[int] = None,
    jobs: int = 1,
) -> SweepReport:
    """Cross-check classification, oracle, and builders over many matchings.

    exhaustive mode (n <= 4) walks every orbit representative; sampled mode
    (n <= 6, oracle-bound) draws seeded random matchings. `pair_sample`
    bounds the endpoint pairs exercised per trap-free instance; None means
    all of them.
    """
    if mode == "exhaustive":
        if n > MAX_EXHAUSTIVE_DIMENSION:
            raise DimensionTooLarge("exhaustive sweeps are bounded at n <= 4")
        reps = list(enumerate_matchings(n))
        total = sum(r.orbit_size for r in reps)
        report = SweepReport(n, mode, seed, total, len(reps))
        rng = random.Random(seed)
        items = [(r.representative, r.orbit_size) for r in reps]
    elif mode == "sampled":
        if n > 6:
            raise DimensionTooLarge("sampled sweeps are oracle-bound at n <= 6")
        rng = random.Random(seed)
        items = []
        for i in range(samples):
            size = rng.randint(0, 1 << (n - 1))
            try:
                fs = random_disjoint_faults(n, size, seed=rng.randrange(2**63))
            except ConstraintUnsatisfiable:
                fs = random_disjoint_faults(n, size // 2, seed=rng.randrange(2**63))
            items.append((fs, 1))
        report = SweepReport(n, mode, seed, len(items), len(items))
    else:
        raise PreconditionViolated(f"unknown sweep mode {mode!r}")

    if jobs > 1:
        results = _run_parallel(items, la_checks, pair_sample, seed, jobs)
    else:
        results = [
            _check_representative(fs, la_checks, pair_sample, random.Random(seed))
            for fs, _ in items
        ]

    for (fs, orbit), (classes, problems, pairs, builds) in zip(items, results):
        for c in classes:
            report.counts[c] = report.counts.get(c, 0) + orbit
        report.counterexamples.extend(problems)
        report.pairs_checked += pairs
        report.builds_checked += builds
    return report


def _run_parallel(items, la_checks, pair_sample, seed, jobs):
    from concurrent.futures import ProcessPoolExecutor

    args = [
        (fs.n, tuple((e.low, e.dir) for e in fs.edges), la_checks, pair_sample, seed)
        for fs, _ in items
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_check_worker, args, chunksize=8))


def _check_worker(arg):
    n, edges, la_checks, pair_sample, seed = arg
    fs = make_fault_set(n, [Edge(low, d) for low, d in edges])
    return _check_representative(fs, la_checks, pair_sample, random.Random(seed))
