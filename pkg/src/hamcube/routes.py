"""Route certificates and the independent route verifier.

A Route is an ordered vertex sequence standing for a path or a cycle. The
verifier re-checks everything from scratch (adjacency, distinctness,
coverage, endpoints, closure, faulty-edge traversals) and reports every
violation it finds; builders never get the benefit of the doubt.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import Edge, FaultSet, check_dimension, parse_vertex, vertex_str
from .errors import ParseError


@dataclass(frozen=True)
class Route:
    """An ordered walk over distinct vertices of Q_n."""

    n: int
    vertices: tuple[int, ...]
    closed: bool = False

    def __post_init__(self):
        check_dimension(self.n)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.vertices[0], self.vertices[-1])

    def steps(self):
        """Consecutive vertex pairs, including last-to-first when closed."""
        vs = self.vertices
        for i in range(len(vs) - 1):
            yield vs[i], vs[i + 1]
        if self.closed and len(vs) > 1:
            yield vs[-1], vs[0]

    def reversed(self) -> "Route":
        return Route(self.n, tuple(reversed(self.vertices)), self.closed)


@dataclass
class RouteVerdict:
    """Outcome of verify_route: all violations found, plus traversal stats."""

    ok: bool
    violations: list[str] = field(default_factory=list)
    faulty_traversals: int = 0
    covered: int = 0

    def __bool__(self) -> bool:
        return self.ok


def verify_route(
    fs: FaultSet,
    route: Route,
    *,
    closed: Optional[bool] = None,
    endpoints: Optional[tuple[int, int]] = None,
    exclude: Optional[int] = None,
    faulty_exactly: Optional[int] = None,
    faulty_max: Optional[int] = None,
    require_edge: Optional[Edge] = None,
    full_coverage: bool = True,
) -> RouteVerdict:
    """Check a route certificate against a fault set and constraints.

    Coverage target is the whole cube, or the cube minus `exclude`. The
    verdict lists every violation; it never raises on a bad route.
    """
    violations: list[str] = []
    n = fs.n
    size = 1 << n
    vs = route.vertices

    if route.n != n:
        violations.append(f"route dimension {route.n} != fault set dimension {n}")
        return RouteVerdict(False, violations)
    if closed is not None and route.closed != closed:
        violations.append(
            f"route is {'closed' if route.closed else 'open'}, expected "
            f"{'closed' if closed else 'open'}"
        )
    if not vs:
        violations.append("route is empty")
        return RouteVerdict(False, violations)

    arr = np.fromiter(vs, dtype=np.int64, count=len(vs))
    if int(arr.min()) < 0 or int(arr.max()) >= size:
        violations.append("vertex label out of range")
        return RouteVerdict(False, violations)

    # distinctness
    uniq = np.unique(arr)
    if len(uniq) != len(arr):
        counts = np.bincount(arr, minlength=size)
        dup = int(np.argmax(counts > 1))
        violations.append(f"vertex {vertex_str(dup, n)} repeats")

    # coverage
    target = size - (1 if exclude is not None else 0)
    if exclude is not None and exclude in set(vs):
        violations.append(f"excluded vertex {vertex_str(exclude, n)} appears")
    if full_coverage and len(uniq) != target:
        violations.append(f"covers {len(uniq)} vertices, expected {target}")

    # adjacency along consecutive steps (plus the closing step)
    if route.closed and len(vs) > 1:
        nxt = np.roll(arr, -1)
    else:
        nxt = arr[1:]
        arr = arr[:-1]
    diff = arr ^ nxt
    bad = (diff == 0) | (diff & (diff - 1) != 0)
    if bad.any():
        i = int(np.argmax(bad))
        violations.append(
            f"step {i}: {vertex_str(int(arr[i]), n)} -> {vertex_str(int(nxt[i]), n)}"
            " is not a hypercube edge"
        )
        return RouteVerdict(False, violations)

    # faulty traversal count: canonical edge key is (low << 5) | dir
    faulty_traversals = 0
    if len(fs) and len(diff):
        lows = arr & nxt
        # diff entries are single set bits here, so log2 is exact
        dirs = np.round(np.log2(diff.astype(np.float64))).astype(np.int64)
        keys = (lows << 5) | dirs
        fault_keys = np.fromiter(
            ((e.low << 5) | e.dir for e in fs.edges), dtype=np.int64, count=len(fs)
        )
        fault_keys.sort()
        pos = np.searchsorted(fault_keys, keys)
        pos[pos == len(fault_keys)] = 0
        faulty_traversals = int(np.count_nonzero(fault_keys[pos] == keys))

    if faulty_exactly is not None and faulty_traversals != faulty_exactly:
        violations.append(
            f"traverses {faulty_traversals} faulty edges, expected exactly {faulty_exactly}"
        )
    if faulty_max is not None and faulty_traversals > faulty_max:
        violations.append(
            f"traverses {faulty_traversals} faulty edges, allowed at most {faulty_max}"
        )

    if endpoints is not None:
        a, b = endpoints
        if route.closed:
            violations.append("endpoint constraint given for a closed route")
        elif (vs[0], vs[-1]) != (a, b):
            violations.append(
                f"endpoints {vertex_str(vs[0], n)}..{vertex_str(vs[-1], n)} do not match "
                f"{vertex_str(a, n)}..{vertex_str(b, n)}"
            )

    if require_edge is not None:
        lo, hi = require_edge.endpoints
        used = any((u, v) in ((lo, hi), (hi, lo)) for u, v in route.steps())
        if not used:
            violations.append(f"required edge {require_edge.str_in(n)} not traversed")

    return RouteVerdict(not violations, violations, faulty_traversals, len(uniq))


# ---------------------------------------------------------------------------
# Certificate text format
#
# First line: `n=<dim> kind=path|cycle faulty_traversals=<k>`,
# then one binary vertex label per line.
# ---------------------------------------------------------------------------

def format_certificate(route: Route, faulty_traversals: int) -> str:
    kind = "cycle" if route.closed else "path"
    lines = [f"n={route.n} kind={kind} faulty_traversals={faulty_traversals}"]
    lines.extend(vertex_str(v, route.n) for v in route.vertices)
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> tuple[Route, int]:
    """Parse a certificate; returns (route, claimed faulty traversal count)."""
    n: Optional[int] = None
    closed = False
    claimed = 0
    vertices: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            fields = dict(
                part.split("=", 1) for part in line.split() if "=" in part
            )
            try:
                n = int(fields["n"])
                kind = fields["kind"]
                claimed = int(fields["faulty_traversals"])
            except (KeyError, ValueError):
                raise ParseError(
                    "header must be 'n=<dim> kind=path|cycle faulty_traversals=<k>'",
                    lineno,
                ) from None
            if kind not in ("path", "cycle"):
                raise ParseError(f"unknown kind {kind!r}", lineno)
            closed = kind == "cycle"
            continue
        try:
            vertices.append(parse_vertex(line, n))
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
    if n is None:
        raise ParseError("no certificate header found")
    if not vertices:
        raise ParseError("certificate has no vertices")
    return Route(n, tuple(vertices), closed), claimed


def route_from_vertices(n: int, vertices: Sequence[int], closed: bool = False) -> Route:
    return Route(n, tuple(vertices), closed)
