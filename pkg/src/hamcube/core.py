"""Vertices, edges, parity, subcube partitions, and validated fault sets.

Vertices of the n-dimensional hypercube are plain ints: bit i of the word is
coordinate b_i of the label b_{n-1}...b_1b_0.  An edge is stored in canonical
form (low, dir) where `low` is the endpoint whose bit `dir` is 0; with that
convention the parity of an edge is simply the parity of its `low` endpoint.

All iteration orders ascend numerically, so every "lowest candidate" choice
made downstream is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import (
    DimensionError,
    EdgeOutOfRange,
    InvalidEdge,
    NotDisjoint,
    ParseError,
)

#: Largest cube dimension accepted by default. A route of 2^24 labels is
#: around 128 MB of machine words; raise `max_dim` explicitly to go higher.
DEFAULT_MAX_DIMENSION = 24


def check_dimension(n: int, max_dim: int = DEFAULT_MAX_DIMENSION) -> int:
    """Validate a cube dimension (1 <= n <= max_dim) and return it."""
    if not isinstance(n, int) or n < 1:
        raise DimensionError(f"cube dimension must be a positive int, got {n!r}")
    if n > max_dim:
        raise DimensionError(f"cube dimension {n} exceeds the configured maximum {max_dim}")
    return n


def parity(x: int) -> int:
    """Parity of a vertex: popcount of its label mod 2."""
    return x.bit_count() & 1


def neighbor(x: int, i: int, n: Optional[int] = None) -> int:
    """The vertex adjacent to `x` along direction `i` (bit i flipped)."""
    if i < 0 or (n is not None and i >= n):
        raise EdgeOutOfRange(f"direction {i} out of range for Q_{n}")
    return x ^ (1 << i)


def distance(a: int, b: int) -> int:
    """Hamming distance between two vertex labels."""
    return (a ^ b).bit_count()


def vertex_str(x: int, n: int) -> str:
    """Render a vertex as the n-character binary string b_{n-1}...b_0."""
    return format(x, f"0{n}b")


def parse_vertex(text: str, n: int) -> int:
    """Parse a binary vertex label of exactly n characters."""
    if len(text) != n or any(c not in "01" for c in text):
        raise ParseError(f"expected {n}-bit binary label, got {text!r}")
    return int(text, 2)


@dataclass(frozen=True, order=True)
class Edge:
    """Canonical unordered hypercube edge: (endpoint with bit dir = 0, dir)."""

    low: int
    dir: int

    def __post_init__(self):
        if self.dir < 0 or self.low < 0:
            raise InvalidEdge(f"negative field in edge ({self.low}, {self.dir})")
        if (self.low >> self.dir) & 1:
            raise InvalidEdge(
                f"low endpoint {self.low} has bit {self.dir} set; not canonical"
            )

    @property
    def high(self) -> int:
        return self.low | (1 << self.dir)

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.low, self.high)

    @property
    def parity(self) -> int:
        """Edge parity: parity of the endpoint with 0 at the direction bit."""
        return parity(self.low)

    @classmethod
    def between(cls, a: int, b: int) -> "Edge":
        """Canonical edge for an adjacent vertex pair (any order)."""
        x = a ^ b
        if x == 0 or x & (x - 1):
            raise InvalidEdge(f"vertices {a} and {b} are not adjacent")
        return cls(a & b, x.bit_length() - 1)

    def str_in(self, n: int) -> str:
        return f"({vertex_str(self.low, n)},{vertex_str(self.high, n)})"


@dataclass(frozen=True)
class SubcubeRef:
    """A half (or quarter) of the cube fixed by one or two coordinates."""

    split_dir: int
    side: int
    second_dir: Optional[int] = None
    second_side: Optional[int] = None

    def __post_init__(self):
        if self.side not in (0, 1):
            raise DimensionError(f"subcube side must be 0 or 1, got {self.side}")
        if (self.second_dir is None) != (self.second_side is None):
            raise DimensionError("second split needs both a direction and a side")
        if self.second_dir is not None:
            if self.second_dir == self.split_dir:
                raise DimensionError("subcube split directions must be distinct")
            if self.second_side not in (0, 1):
                raise DimensionError("subcube quadrant sides must be 0 or 1")

    def contains(self, v: int) -> bool:
        if (v >> self.split_dir) & 1 != self.side:
            return False
        if self.second_dir is not None and (v >> self.second_dir) & 1 != self.second_side:
            return False
        return True


def crossing_edge_count(n: int, d: int, p: int) -> int:
    """Number of crossing edges of parity p in direction d of Q_n."""
    if n >= 2:
        return 1 << (n - 2)
    # Q_1 has a single edge, of parity 0.
    return 1 if p == 0 else 0


class FaultSet:
    """A validated set of pairwise disjoint faulty edges of one cube.

    Immutable after construction; all downstream code treats it as read-only.
    Use :func:`make_fault_set` to build one.
    """

    __slots__ = ("n", "edges", "_incidence", "_tallies")

    def __init__(self, n: int, edges: tuple[Edge, ...], incidence, tallies):
        self.n = n
        self.edges = edges
        self._incidence = incidence
        self._tallies = tallies

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"FaultSet(n={self.n}, faults={len(self.edges)})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FaultSet)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def tally(self, d: int, p: int) -> int:
        """Count of faulty crossing edges in direction d of parity p."""
        return self._tallies[d][p]

    def healthy_crossing_counts(self, d: int) -> tuple[int, int]:
        """Healthy crossing edges in direction d, split by edge parity."""
        if d < 0 or d >= self.n:
            raise EdgeOutOfRange(f"direction {d} out of range for Q_{self.n}")
        t = self._tallies[d]
        return (
            crossing_edge_count(self.n, d, 0) - t[0],
            crossing_edge_count(self.n, d, 1) - t[1],
        )

    def incident(self, v: int) -> Optional[Edge]:
        """The at-most-one faulty edge touching vertex v."""
        return self._incidence.get(v)

    def is_faulty(self, a: int, b: int) -> bool:
        """Whether the (assumed adjacent) pair a,b is a faulty edge."""
        e = self._incidence.get(a)
        return e is not None and (e.low == b or e.high == b)

    def is_free(self, v: int) -> bool:
        """A vertex is free when no faulty edge touches it."""
        return v not in self._incidence

    def faults_in_half(self, d: int) -> tuple[list[Edge], list[Edge], list[Edge]]:
        """Split the faults along direction d.

        Returns (inside Q^d_0, inside Q^d_1, crossing direction d); the first
        two lists carry the f_0 / f_1 bookkeeping of both halves.
        """
        side0: list[Edge] = []
        side1: list[Edge] = []
        crossing: list[Edge] = []
        bit = 1 << d
        for e in self.edges:
            if e.dir == d:
                crossing.append(e)
            elif e.low & bit:
                side1.append(e)
            else:
                side0.append(e)
        return side0, side1, crossing

    def restrict_to_half(self, d: int, side: int) -> "FaultSet":
        """Induced fault set of the half Q^d_side, relabeled to Q_{n-1}.

        Crossing edges in direction d do not belong to either half and are
        dropped. Bit d is removed from vertex labels; directions above d
        shift down by one.
        """
        check_dimension(self.n - 1)
        keep = self.faults_in_half(d)[side]
        low_mask = (1 << d) - 1
        out = []
        for e in keep:
            lo = (e.low & low_mask) | ((e.low >> (d + 1)) << d)
            nd = e.dir if e.dir < d else e.dir - 1
            out.append(Edge(lo, nd))
        return make_fault_set(self.n - 1, out)


def make_fault_set(n: int, edges: Iterable[Edge]) -> FaultSet:
    """Validate edges against Q_n and pairwise disjointness; build a FaultSet.

    Raises EdgeOutOfRange for an edge outside the cube and NotDisjoint
    (reporting the shared vertex and both edges) for any two edges that
    meet; a repeated edge counts as meeting itself.
    """
    check_dimension(n)
    size = 1 << n
    incidence: dict[int, Edge] = {}
    tallies = [[0, 0] for _ in range(n)]
    accepted: list[Edge] = []
    for e in edges:
        if not isinstance(e, Edge):
            raise InvalidEdge(f"expected Edge, got {e!r}")
        if e.dir >= n or e.high >= size:
            raise EdgeOutOfRange(f"edge {e} does not fit in Q_{n}")
        for v in e.endpoints:
            other = incidence.get(v)
            if other is not None:
                raise NotDisjoint(v, other, e)
        incidence[e.low] = e
        incidence[e.high] = e
        tallies[e.dir][e.parity] += 1
        accepted.append(e)
    accepted.sort()
    return FaultSet(n, tuple(accepted), incidence, tallies)


# ---------------------------------------------------------------------------
# Fault-file text format
#
# One edge per line: `<low-label-as-binary-string> <direction-index>`.
# Comments start with '#'; the first non-comment line is `n=<dim>`.
# ---------------------------------------------------------------------------

def parse_fault_file(text: str) -> FaultSet:
    """Parse the fault-set text format; line numbers appear in errors."""
    n: Optional[int] = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            if not line.startswith("n="):
                raise ParseError("first non-comment line must be n=<dim>", lineno)
            try:
                n = int(line[2:])
            except ValueError:
                raise ParseError(f"bad dimension {line[2:]!r}", lineno) from None
            try:
                check_dimension(n)
            except DimensionError as exc:
                raise ParseError(str(exc), lineno) from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected '<low-label> <direction>'", lineno)
        try:
            low = parse_vertex(parts[0], n)
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
        try:
            d = int(parts[1])
        except ValueError:
            raise ParseError(f"bad direction {parts[1]!r}", lineno) from None
        if d < 0 or d >= n:
            raise ParseError(f"direction {d} out of range for Q_{n}", lineno)
        if (low >> d) & 1:
            raise ParseError(
                f"low endpoint {parts[0]} has bit {d} set; not canonical", lineno
            )
        edges.append(Edge(low, d))
    if n is None:
        raise ParseError("no n=<dim> header found")
    try:
        return make_fault_set(n, edges)
    except (NotDisjoint, EdgeOutOfRange) as exc:
        raise ParseError(str(exc)) from exc


def format_fault_file(fs: FaultSet) -> str:
    """Serialize a FaultSet; parse(format(fs)) == fs, bit for bit."""
    lines = [f"n={fs.n}"]
    for e in fs.edges:
        lines.append(f"{vertex_str(e.low, fs.n)} {e.dir}")
    return "\n".join(lines) + "\n"


def iter_vertices(n: int) -> Iterator[int]:
    """All vertices of Q_n in ascending label order."""
    return iter(range(1 << n))


def iter_edges(n: int) -> Iterator[Edge]:
    """All edges of Q_n in ascending (low, dir) order."""
    for v in range(1 << n):
        for d in range(n):
            if not (v >> d) & 1:
                yield Edge(v, d)
