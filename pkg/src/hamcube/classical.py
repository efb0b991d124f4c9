"""Classical helper constructions: the four building-block lemmas.

These are standard hypercube facts, implemented constructively because the
recursive engine consumes them as subroutines:

* a cube with at most n-2 faults stays laceable (path dodging all faults);
* any two same-parity vertices are joined by a path covering everything
  except one chosen opposite-parity vertex;
* any four suitably-paired vertices split the cube into two covering paths;
* any opposite-parity pair is joined by a path through a prescribed edge.

Every recursion bottoms out at four dimensions in exhaustive search, and
every result is machine-verified on the way out; the contract is existence
plus verification, not a particular path shape.
"""

from __future__ import annotations

from . import _paths as P
from .core import Edge, FaultSet, check_dimension, parity
from .errors import PreconditionViolated
from .routes import Route, verify_route


def _as_route(n: int, path, fs: FaultSet, **checks) -> Route:
    route = Route(n, tuple(path), closed=False)
    verdict = verify_route(fs, route, **checks)
    if not verdict.ok:
        from .errors import ConstructionError

        raise ConstructionError("; ".join(verdict.violations))
    return route


def _empty(n: int) -> FaultSet:
    from .core import make_fault_set

    return make_fault_set(n, [])


def hp_few_faults(fs: FaultSet, a: int, b: int) -> Route:
    """Hamiltonian path a->b avoiding every fault, for |F| <= n-2, n >= 3."""
    n = fs.n
    if n < 3:
        raise PreconditionViolated(f"needs n >= 3, got {n}")
    if len(fs) > n - 2:
        raise PreconditionViolated(f"|F|={len(fs)} exceeds the budget n-2={n - 2}")
    if parity(a) == parity(b):
        raise PreconditionViolated("endpoints must have opposite parity")
    if a == b or not (0 <= a < 1 << n and 0 <= b < 1 << n):
        raise PreconditionViolated("bad endpoints")
    faults = [(e.low, e.dir) for e in fs.edges]
    path = P.hp_faulty(tuple(range(n)), faults, a, b)
    return _as_route(n, path, fs, endpoints=(a, b), faulty_max=0)


def hp_avoiding_vertex(n: int, x: int, y: int, v: int) -> Route:
    """Path x->y visiting every vertex except v exactly once (fault-free).

    Needs Par(x) = Par(y) != Par(v) and three distinct vertices.
    """
    check_dimension(n)
    if n < 2:
        raise PreconditionViolated("needs n >= 2")
    if len({x, y, v}) != 3:
        raise PreconditionViolated("x, y, v must be distinct")
    if parity(x) != parity(y) or parity(x) == parity(v):
        raise PreconditionViolated("need Par(x) = Par(y) != Par(v)")
    path = P.hp_avoid(tuple(range(n)), x, y, v)
    return _as_route(n, path, _empty(n), endpoints=(x, y), exclude=v)


def two_path_partition(n: int, p: int, q: int, r: int, s: int) -> tuple[Route, Route]:
    """Partition the cube into two vertex-disjoint paths p->r and q->s.

    Needs Par(p) = Par(q) = 0, Par(r) = Par(s) = 1, all four distinct,
    no faulty edges.
    """
    check_dimension(n)
    if n < 2:
        raise PreconditionViolated("needs n >= 2")
    if len({p, q, r, s}) != 4:
        raise PreconditionViolated("p, q, r, s must be distinct")
    if parity(p) != 0 or parity(q) != 0 or parity(r) != 1 or parity(s) != 1:
        raise PreconditionViolated("need Par(p)=Par(q)=0 and Par(r)=Par(s)=1")
    path1, path2 = P.two_paths(tuple(range(n)), (p, r), (q, s))
    fs = _empty(n)
    r1 = Route(n, tuple(path1), closed=False)
    r2 = Route(n, tuple(path2), closed=False)
    for route, ends in ((r1, (p, r)), (r2, (q, s))):
        verdict = verify_route(fs, route, endpoints=ends, full_coverage=False)
        if not verdict.ok:
            from .errors import ConstructionError

            raise ConstructionError("; ".join(verdict.violations))
    both = set(r1.vertices) | set(r2.vertices)
    if len(r1.vertices) + len(r2.vertices) != 1 << n or len(both) != 1 << n:
        from .errors import ConstructionError

        raise ConstructionError("the two paths do not partition the cube")
    return r1, r2


def hp_through_edge(n: int, x: int, y: int, e: Edge) -> Route:
    """Hamiltonian path x->y traversing the edge e (fault-free).

    Needs Par(x) != Par(y) and e != (x, y). When neither endpoint touches e
    the construction is a two-path partition glued across e; otherwise the
    path leaves through e immediately and covers the rest around the start.
    """
    check_dimension(n)
    if n < 2:
        raise PreconditionViolated("needs n >= 2")
    if parity(x) == parity(y):
        raise PreconditionViolated("endpoints must have opposite parity")
    if e.high >= 1 << n:
        raise PreconditionViolated(f"edge {e} does not fit in Q_{n}")
    if {x, y} == set(e.endpoints):
        raise PreconditionViolated("the prescribed edge must differ from (x, y)")
    path = P.hp_through(tuple(range(n)), x, y, e.endpoints)
    return _as_route(n, path, _empty(n), endpoints=(x, y), require_edge=e)
