"""Trap detection and the global Hamiltonicity / laceability verdict.

Under pairwise disjoint faults only a handful of configurations can block a
Hamiltonian cycle or path:

* SCDHW: some direction in which every crossing edge of one parity is faulty
  (a half of the cube gets cut off along its parity class);
* DTBCE: some direction with exactly two healthy crossing edges left whose
  same-side endpoints have different parity (cycles survive, but the two
  balanced endpoints pin down where Hamiltonian paths may end);
* claw (Q_3 only): three disjoint faults that leave the three neighbors of
  some vertex with degree 2 each.

For n >= 4 the verdict is a pure function of per-direction healthy crossing
counts; for n = 3 the classification is different and every verdict is cheap
enough to cross-check against the exhaustive oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .core import (
    Edge,
    FaultSet,
    SubcubeRef,
    crossing_edge_count,
    neighbor,
    parity,
    vertex_str,
)
from .errors import WrongDimension
from . import oracle as _oracle


@dataclass(frozen=True)
class ScdhwTrap:
    """All crossing edges of one parity in one direction are faulty."""

    dim: int
    parity: int
    witness: tuple[Edge, ...]

    def describe(self, n: int) -> str:
        return f"SCDHW(dim={self.dim}, parity={self.parity})"


@dataclass(frozen=True)
class DtbceTrap:
    """Exactly two healthy crossing edges left in a direction, balanced.

    u and w are the side-0 endpoints of the two healthy edges; they have
    different parity. No Hamiltonian path joins u to w, nor their side-1
    neighbors.
    """

    dim: int
    u: int
    w: int
    witness: tuple[Edge, ...]

    def describe(self, n: int) -> str:
        return (
            f"DTBCE(dim={self.dim}, u={vertex_str(self.u, n)}, "
            f"w={vertex_str(self.w, n)})"
        )


@dataclass(frozen=True)
class ClawTrap:
    """Three disjoint faults leaving all three neighbors of a Q_3 vertex at degree 2."""

    center: int
    witness: tuple[Edge, ...]

    def describe(self, n: int) -> str:
        return f"Claw(center={vertex_str(self.center, n)})"


@dataclass(frozen=True)
class SubcubeDhwTrap:
    """A half-cube cut halfway: SCDHW of the given subcube."""

    subcube: SubcubeRef
    parity: int
    witness: tuple[Edge, ...]

    def describe(self, n: int) -> str:
        ref = f"Q^{self.subcube.split_dir}_{self.subcube.side}"
        return f"SubcubeDHW({ref}, parity={self.parity})"


TrapCertificate = Union[ScdhwTrap, DtbceTrap, ClawTrap, SubcubeDhwTrap]


def detect_scdhw(fs: FaultSet) -> Optional[ScdhwTrap]:
    """Lowest (direction, parity) whose crossing edges are all faulty."""
    if fs.n < 3:
        raise WrongDimension(f"trap detection needs n >= 3, got {fs.n}")
    for d in range(fs.n):
        for p in (0, 1):
            if fs.tally(d, p) == crossing_edge_count(fs.n, d, p):
                witness = tuple(e for e in fs.edges if e.dir == d and e.parity == p)
                return ScdhwTrap(d, p, witness)
    return None


def all_scdhw(fs: FaultSet) -> list[ScdhwTrap]:
    """Every (direction, parity) pair that is fully faulty, ascending."""
    out = []
    for d in range(fs.n):
        for p in (0, 1):
            if fs.tally(d, p) == crossing_edge_count(fs.n, d, p):
                witness = tuple(e for e in fs.edges if e.dir == d and e.parity == p)
                out.append(ScdhwTrap(d, p, witness))
    return out


def detect_dtbce(fs: FaultSet) -> Optional[DtbceTrap]:
    """Lowest direction with exactly two healthy crossing edges, balanced.

    Two healthy crossing edges of the same parity are not a DTBCE: they mean
    the other parity class is fully faulty, which detect_scdhw reports.
    """
    if fs.n < 3:
        raise WrongDimension(f"trap detection needs n >= 3, got {fs.n}")
    for d in range(fs.n):
        h0, h1 = fs.healthy_crossing_counts(d)
        if h0 == 1 and h1 == 1:
            lows = []
            for v in range(1 << fs.n):
                if (v >> d) & 1:
                    continue
                if not fs.is_faulty(v, v | (1 << d)):
                    lows.append(v)
                    if len(lows) == 2:
                        break
            u, w = lows
            witness = tuple(e for e in fs.edges if e.dir == d)
            return DtbceTrap(d, u, w, witness)
    return None


def detect_claw(fs: FaultSet) -> Optional[ClawTrap]:
    """Lowest Q_3 vertex whose three neighbors all lost a third edge.

    The three faulty edges must be disjoint and must not touch the center.
    """
    if fs.n != 3:
        raise WrongDimension(f"claw traps are a Q_3 configuration, got n={fs.n}")
    if len(fs) < 3:
        return None
    for u in range(8):
        if not fs.is_free(u):
            continue
        witness = []
        for d in range(3):
            e = fs.incident(u ^ (1 << d))
            if e is None:
                break
            witness.append(e)
        else:
            return ClawTrap(u, tuple(witness))
    return None


class Feasibility(Enum):
    CONSTRUCTIBLE = "constructible"
    IMPOSSIBLE = "impossible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Diagnosis:
    """Full classification verdict for one fault set."""

    n: int
    fault_count: int
    per_dimension: tuple[tuple[int, int], ...]
    hamiltonian: bool
    hamiltonian_cert: Optional[TrapCertificate]
    laceable: bool
    laceable_cert: Optional[TrapCertificate]
    laceable_reason: Optional[str] = None

    def report(self) -> str:
        lines = []
        for d, (h0, h1) in enumerate(self.per_dimension):
            lines.append(f"dimension {d}: healthy0={h0} healthy1={h1}")
        if self.hamiltonian:
            lines.append("hamiltonian: yes")
        else:
            lines.append(f"hamiltonian: no {self.hamiltonian_cert.describe(self.n)}")
        if self.laceable:
            lines.append("laceable: yes")
        else:
            why = (
                self.laceable_cert.describe(self.n)
                if self.laceable_cert is not None
                else self.laceable_reason
            )
            lines.append(f"laceable: no {why}")
        return "\n".join(lines) + "\n"


def diagnose(fs: FaultSet) -> Diagnosis:
    """Classify a fault set: Hamiltonian? laceable? with certificates.

    n >= 4 reduces to per-direction healthy crossing counts; n = 3 follows
    the small-cube classification (SCDHW-or-claw blocks the cycle, any two
    faults break laceability).
    """
    if fs.n < 3:
        raise WrongDimension(f"diagnose needs n >= 3, got {fs.n}")
    per_dim = tuple(fs.healthy_crossing_counts(d) for d in range(fs.n))
    scdhw = detect_scdhw(fs)

    if fs.n == 3:
        claw = detect_claw(fs)
        ham_cert = scdhw or claw
        hamiltonian = ham_cert is None
        if len(fs) <= 1:
            return Diagnosis(fs.n, len(fs), per_dim, hamiltonian, ham_cert, True, None)
        lace_cert = ham_cert or detect_dtbce(fs)
        return Diagnosis(
            fs.n, len(fs), per_dim, hamiltonian, ham_cert,
            False, lace_cert, f"|F|={len(fs)} >= 2 in Q_3",
        )

    hamiltonian = scdhw is None
    if not hamiltonian:
        return Diagnosis(fs.n, len(fs), per_dim, False, scdhw, False, scdhw)
    dtbce = detect_dtbce(fs)
    if dtbce is not None:
        return Diagnosis(fs.n, len(fs), per_dim, True, None, False, dtbce)
    return Diagnosis(fs.n, len(fs), per_dim, True, None, True, None)


def detect_subcube_dhw(fs: FaultSet, split_dir: int, side: int) -> Optional[SubcubeDhwTrap]:
    """SCDHW inside a half of the cube, reported against the parent labels.

    Produced only where small-cube diagnosis wants a half-cube certificate;
    general subgraph cut detection is out of reach (exponential) and out of
    scope.
    """
    half = fs.restrict_to_half(split_dir, side)
    if half.n < 3:
        return None
    inner = detect_scdhw(half)
    if inner is None:
        return None
    # lift the witness edges back to parent-cube labels
    d_in = inner.dim if inner.dim < split_dir else inner.dim + 1
    low_mask = (1 << split_dir) - 1
    witness = []
    for e in half.edges:
        if e.dir != inner.dim or e.parity != inner.parity:
            continue
        lo = (e.low & low_mask) | ((e.low >> split_dir) << (split_dir + 1)) | (side << split_dir)
        witness.append(Edge(lo, d_in))
    return SubcubeDhwTrap(
        SubcubeRef(split_dir, side), inner.parity, tuple(witness)
    )


def hp_feasibility(fs: FaultSet, a: int, b: int) -> tuple[Feasibility, str]:
    """Can a Hamiltonian path join a and b? Verdict plus a one-line reason.

    Equal parities never admit a Hamiltonian path. A DTBCE rules out its two
    balanced pairs; an SCDHW pins down which side and parity each endpoint
    must have. Trap-free cubes (n >= 4) always admit the path. Remaining
    pairs under traps are not characterized, so the verdict is honest:
    unknown (n = 3 escalates to the oracle instead, eight vertices are free).
    """
    if a == b:
        raise WrongDimension("endpoints must differ")
    if parity(a) == parity(b):
        return Feasibility.IMPOSSIBLE, "endpoints have equal parity"

    scdhws = all_scdhw(fs)
    for t in scdhws:
        # endpoints must sit at (parity t.parity, side 0) and (1-t.parity, side 1)
        def fits(x, y):
            return (
                parity(x) == t.parity and not (x >> t.dim) & 1
                and parity(y) == 1 - t.parity and (y >> t.dim) & 1
            )

        if not (fits(a, b) or fits(b, a)):
            return (
                Feasibility.IMPOSSIBLE,
                f"{t.describe(fs.n)} forces one endpoint of parity {t.parity} in "
                f"Q^{t.dim}_0 and one of parity {1 - t.parity} in Q^{t.dim}_1",
            )

    dtbce = detect_dtbce(fs)
    if dtbce is not None:
        pairs = (
            {dtbce.u, dtbce.w},
            {neighbor(dtbce.u, dtbce.dim), neighbor(dtbce.w, dtbce.dim)},
        )
        if {a, b} in pairs:
            return Feasibility.IMPOSSIBLE, f"{dtbce.describe(fs.n)} forbidden pair"

    if not scdhws and dtbce is None and fs.n >= 4:
        return Feasibility.CONSTRUCTIBLE, "no SCDHW, no DTBCE"

    if fs.n == 3:
        found = _oracle.oracle_exists(
            fs, _oracle.SearchConstraints(endpoints=(a, b))
        )
        if found:
            return Feasibility.CONSTRUCTIBLE, "oracle witness exists (n=3)"
        return Feasibility.IMPOSSIBLE, "oracle exhausted the search (n=3)"

    return Feasibility.UNKNOWN, "trapped instance; pair not characterized"
