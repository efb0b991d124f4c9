"""Exhaustive backtracking search for routes in small faulty hypercubes.

This is the ground truth the constructive machinery is checked against and
the base case its recursions bottom out in. Plain depth-first search with the
two prunings that matter in a bipartite graph:

* parity counting: the unvisited parity classes must still interleave into an
  alternating sequence that reaches the pending endpoint (or closes back);
* degree counting: an unvisited vertex left with too few usable edges kills
  the branch.

Exploration order is ascending direction, so witnesses are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import Edge, FaultSet
from .errors import DimensionError, DimensionTooLarge, SearchBudgetExceeded
from .routes import Route

#: Hard search bound: 2^6 = 64 vertices keeps worst cases on a desk.
MAX_SEARCH_DIMENSION = 6

#: Node-expansion budget per call; exceeding it raises, never answers "no".
DEFAULT_NODE_BUDGET = 10**9


@dataclass(frozen=True)
class SearchConstraints:
    """What the searched route must satisfy.

    Closed routes take no endpoints; an excluded vertex lowers the coverage
    target to 2^n - 1. required_faulty_traversals is an exact count (the
    one-faulty-edge contract is "exactly one", not "at least one").
    """

    endpoints: Optional[tuple[int, int]] = None
    closed: bool = False
    excluded_vertex: Optional[int] = None
    required_faulty_traversals: Optional[int] = None
    required_edge: Optional[Edge] = None

    def __post_init__(self):
        if self.closed and self.endpoints is not None:
            raise DimensionError("a closed route takes no endpoint constraint")
        if self.required_faulty_traversals not in (None, 0, 1):
            raise DimensionError("required_faulty_traversals must be 0 or 1")


def oracle_exists(fs: FaultSet, constraints: SearchConstraints, *,
                  node_budget: int = DEFAULT_NODE_BUDGET,
                  max_dim: int = MAX_SEARCH_DIMENSION) -> bool:
    """True iff a route satisfying the constraints exists."""
    return bool(_search_constraints(fs, constraints, node_budget, max_dim, 1))


def oracle_find(fs: FaultSet, constraints: SearchConstraints, *,
                node_budget: int = DEFAULT_NODE_BUDGET,
                max_dim: int = MAX_SEARCH_DIMENSION) -> Optional[Route]:
    """A witness route satisfying the constraints, or None if none exists."""
    sols = _search_constraints(fs, constraints, node_budget, max_dim, 1)
    if not sols:
        return None
    return Route(fs.n, tuple(sols[0]), constraints.closed)


def count_hamiltonian_cycles(fs: FaultSet, *,
                             node_budget: int = DEFAULT_NODE_BUDGET,
                             max_dim: int = MAX_SEARCH_DIMENSION) -> int:
    """Count distinct Hamiltonian cycles, as undirected edge sets.

    Debug/validation mode: full enumeration with the start pinned at the
    lowest vertex and the two traversal directions collapsed by keeping only
    sequences whose second vertex is below their last.
    """
    sols = _search_constraints(
        fs, SearchConstraints(closed=True), node_budget, max_dim, 0
    )
    return sum(1 for p in sols if p[1] < p[-1])


def _search_constraints(fs, c, node_budget, max_dim, limit):
    if fs.n > max_dim:
        raise DimensionTooLarge(f"n={fs.n} exceeds the search bound {max_dim}")
    faulty = [(e.low, e.dir) for e in fs.edges]
    req = c.required_edge.endpoints if c.required_edge is not None else None
    sols, _ = raw_search(
        fs.n, faulty,
        endpoints=c.endpoints, closed=c.closed, excluded=c.excluded_vertex,
        need_faulty=c.required_faulty_traversals, required_pair=req,
        budget=node_budget, limit=limit,
    )
    return sols


# ---------------------------------------------------------------------------
# Core backtracker, shared with the construction base cases
# ---------------------------------------------------------------------------

def raw_search(n, faulty, *, endpoints=None, closed=False, excluded=None,
               need_faulty=None, required_pair=None,
               budget=DEFAULT_NODE_BUDGET, limit=1):
    """Search Q_n minus the faulty edges for constrained routes.

    `faulty` is a list of canonical (low, dir) pairs. Returns (solutions,
    remaining budget); limit=0 enumerates everything. With need_faulty=1
    exactly one faulty edge must be traversed; otherwise faulty edges are
    unusable.
    """
    size = 1 << n
    par = [v.bit_count() & 1 for v in range(size)]

    fault_partner = [-1] * size
    for low, d in faulty:
        hi = low | (1 << d)
        fault_partner[low] = hi
        fault_partner[hi] = low

    allow_faulty = need_faulty == 1
    # neighbors in ascending direction order, tagged faulty / healthy
    nbrs = []
    healthy = []
    for v in range(size):
        row = []
        hrow = []
        for d in range(n):
            w = v ^ (1 << d)
            f = fault_partner[v] == w
            row.append((w, f))
            if not f:
                hrow.append(w)
        nbrs.append(tuple(row))
        healthy.append(tuple(hrow))

    target = size - (1 if excluded is not None else 0)
    if closed:
        if target < 4:
            return [], budget
        starts = [0 if excluded != 0 else 1]
        goal = None
    elif endpoints is not None:
        a, b = endpoints
        if a == b or a == excluded or b == excluded:
            return [], budget
        starts = [a]
        goal = b
    else:
        starts = [v for v in range(size) if v != excluded]
        goal = None

    solutions: list[list[int]] = []
    remaining = budget
    for start in starts:
        remaining = _run_from(
            n, size, par, nbrs, healthy, fault_partner, allow_faulty,
            start, goal, closed, target, excluded, need_faulty,
            required_pair, remaining, limit, solutions,
        )
        if limit and len(solutions) >= limit:
            break
    return solutions, remaining


def _run_from(n, size, par, nbrs, healthy, fault_partner, allow_faulty,
              start, goal, closed, target, excluded, need_faulty,
              required_pair, budget, limit, solutions):
    visited = bytearray(size)
    visited[start] = 1
    if excluded is not None:
        visited[excluded] = 1

    un = [0, 0]
    for v in range(size):
        if not visited[v]:
            un[par[v]] += 1

    deg = [0] * size
    for v in range(size):
        deg[v] = sum(0 if visited[w] else 1 for w in healthy[v])

    if required_pair is not None:
        req_lo, req_hi = required_pair
    else:
        req_lo = req_hi = -1

    path = [start]
    used_faulty = 0
    req_used = req_lo < 0  # no required edge means the obligation is met
    goal_par = par[goal] if goal is not None else par[start]
    start_healthy_nb = frozenset(healthy[start]) if closed else frozenset()
    start_fault_nb = fault_partner[start] if (closed and allow_faulty) else -1

    def complete_ok(cur):
        if closed:
            x = cur ^ start
            if x == 0 or x & (x - 1):
                return False
            step_faulty = fault_partner[cur] == start
            if step_faulty and not (allow_faulty and used_faulty == 0):
                return False
            total = used_faulty + (1 if step_faulty else 0)
            if need_faulty is not None and total != need_faulty:
                return False
            if not req_used:
                if not ((cur == req_lo and start == req_hi)
                        or (cur == req_hi and start == req_lo)):
                    return False
            return True
        if goal is not None and cur != goal:
            return False
        if need_faulty is not None and used_faulty != need_faulty:
            return False
        return req_used

    def parity_feasible(cur):
        u0, u1 = un
        length = u0 + u1
        pc = par[cur]
        if closed or goal is not None:
            # the remainder alternates starting at 1-pc and must end at a
            # vertex of parity goal_par (open) or adjacent to start (closed),
            # which pins its parity to 1-goal_par... for closed the last
            # unvisited vertex has parity 1-goal_par; for open it IS goal.
            end_par = goal_par if not closed else 1 - goal_par
            if end_par != pc:
                return (length & 1) == 1 and un[1 - pc] == (length + 1) // 2
            return (length & 1) == 0 and u0 == u1
        return abs(u0 - u1) <= 1

    def extend(cur):
        nonlocal used_faulty, req_used, budget
        if len(path) == target:
            if complete_ok(cur):
                solutions.append(list(path))
                return limit != 0 and len(solutions) >= limit
            return False

        if not parity_feasible(cur):
            return False

        budget -= 1
        if budget <= 0:
            raise SearchBudgetExceeded("node-expansion budget exhausted; no verdict")

        may_use_faulty = allow_faulty and used_faulty == 0
        completing = len(path) + 1 == target

        for w, step_faulty in nbrs[cur]:
            if visited[w]:
                continue
            if step_faulty and not may_use_faulty:
                continue
            if goal is not None and w == goal and not completing:
                continue

            req_mark = False
            if not req_used:
                if (cur == req_lo and w == req_hi) or (cur == req_hi and w == req_lo):
                    req_mark = True
                else:
                    # leaving a required endpoint for good: the edge stays
                    # usable only as the closing step out of the start vertex
                    if cur in (req_lo, req_hi) and not (closed and cur == start):
                        continue
                    # burying the second endpoint: arriving at w on another
                    # edge while the partner can no longer be stepped to
                    if w == req_lo or w == req_hi:
                        other = req_hi if w == req_lo else req_lo
                        if visited[other] and not (closed and other == start):
                            continue

            visited[w] = 1
            un[par[w]] -= 1
            for x in healthy[w]:
                deg[x] -= 1
            if step_faulty:
                used_faulty += 1
            if req_mark:
                req_used = True
            path.append(w)

            # degree pruning over the vertices whose availability changed
            ok = True
            if len(path) < target:
                fcredit = allow_faulty and used_faulty == 0
                for x in healthy[w]:
                    if visited[x]:
                        continue
                    avail = deg[x] + 1  # +1: adjacent to the new head w
                    if fcredit:
                        fp = fault_partner[x]
                        if fp >= 0 and (not visited[fp] or (closed and fp == start)):
                            avail += 1
                    if closed and x in start_healthy_nb:
                        avail += 1
                    if avail < (1 if x == goal else 2):
                        ok = False
                        break

            if ok and extend(w):
                return True

            path.pop()
            if req_mark:
                req_used = False
            if step_faulty:
                used_faulty -= 1
            for x in healthy[w]:
                deg[x] += 1
            un[par[w]] += 1
            visited[w] = 0
        return False

    # degenerate single-vertex path
    if target == 1:
        if complete_ok(start):
            solutions.append([start])
        return budget

    extend(start)
    return budget
