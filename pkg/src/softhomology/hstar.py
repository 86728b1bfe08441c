"""Best-first search under a soft homology penalty.

The cost of a vertex reached by a partial path ``p`` is
``W(p) + alpha * ||gamma(p) - gamma_ref||``, where ``gamma`` is the harmonic
projection. Vertices are settled once, in order of least cost, as in
Dijkstra's algorithm; the penalty breaks optimal substructure, so the result
is a heuristic answer to the penalized problem.
"""

from __future__ import annotations

import csv
import heapq
from dataclasses import dataclass, field

import numpy as np

from .complex import SimplicialSurface
from .homology import HarmonicBasis, class_key, path_projection
from .paths import Path, path_weight


class UnreachableError(RuntimeError):
    """The destination cannot be reached from the source."""


@dataclass
class SearchResult:
    path: Path
    length: float
    proj_diff: float
    total_cost: float
    visited_count: int
    alpha: float
    projection: np.ndarray = field(repr=False)
    truncated: bool = False
    trace: list | None = field(default=None, repr=False)
    # rollout only: incumbent cost after each stage, starting with the base H* cost
    incumbent_costs: list[float] | None = field(default=None, repr=False)

    @property
    def class_key(self) -> tuple[int, ...]:
        return class_key(self.projection)


def evaluate_path(surface: SimplicialSurface, basis: HarmonicBasis, path: Path,
                  reference_proj: np.ndarray, alpha: float) -> tuple[float, float, float, np.ndarray]:
    """``(W, dgamma, W + alpha * dgamma, gamma)`` for a full path."""
    length = path_weight(surface, path)
    proj = path_projection(surface, basis, path)
    diff = float(np.linalg.norm(proj - reference_proj))
    return length, diff, length + alpha * diff, proj


def make_result(surface, basis, path, reference_proj, alpha, visited, **kw) -> SearchResult:
    length, diff, total, proj = evaluate_path(surface, basis, path, reference_proj, alpha)
    return SearchResult(path, length, diff, total, visited, alpha, proj, **kw)


class SearchSpace:
    """Adjacency with per-slot harmonic steps, shared by repeated searches."""

    def __init__(self, surface: SimplicialSurface, basis: HarmonicBasis):
        if basis.num_edges != surface.num_edges:
            raise ValueError("basis does not match the surface's edge count")
        self.surface = surface
        self.basis = basis
        self.indptr = surface.indptr
        self.nbr = surface.nbr
        self.nbr_weight = surface.nbr_weight
        # harmonic projection of traversing slot k in its stored direction
        self.step = surface.nbr_sign[:, None] * basis.columns[surface.nbr_edge]
        self.dim = basis.dim


def run_hstar(space: SearchSpace, source: int, dest: int, target: np.ndarray, alpha: float,
              trace: list | None = None) -> tuple[list[int], int]:
    """Core search loop. Returns the vertex list and the number of pops."""
    n = len(space.indptr) - 1
    weight = np.full(n, np.inf)
    gamma = np.zeros((n, space.dim))
    cost = np.full(n, np.inf)
    prev = np.full(n, -1, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    target = np.asarray(target, dtype=float)

    weight[source] = 0.0
    cost[source] = alpha * float(np.linalg.norm(target))
    heap = [(cost[source], 0.0, source)]
    indptr, nbr, nbr_w, step = space.indptr, space.nbr, space.nbr_weight, space.step
    pops = 0
    while heap:
        c, w, u = heapq.heappop(heap)
        if visited[u] or c != cost[u] or w != weight[u]:
            continue
        visited[u] = True
        pops += 1
        if trace is not None:
            trace.append((pops - 1, u, w, float(np.linalg.norm(gamma[u] - target)), c))
        if u == dest:
            nodes = [dest]
            while prev[nodes[-1]] >= 0:
                nodes.append(int(prev[nodes[-1]]))
            return nodes[::-1], pops
        lo, hi = indptr[u], indptr[u + 1]
        vs = nbr[lo:hi]
        open_ = ~visited[vs]
        if not open_.any():
            continue
        vs = vs[open_]
        g_new = gamma[u] + step[lo:hi][open_]
        w_new = w + nbr_w[lo:hi][open_]
        c_new = w_new + alpha * np.sqrt(((g_new - target) ** 2).sum(axis=1))
        better = c_new < cost[vs]
        for v, cv, wv, gv in zip(vs[better], c_new[better], w_new[better], g_new[better]):
            cost[v] = cv
            weight[v] = wv
            gamma[v] = gv
            prev[v] = u
            heapq.heappush(heap, (float(cv), float(wv), int(v)))
    raise UnreachableError(f"vertex {dest} is unreachable from {source}")


def hstar_search(surface: SimplicialSurface, basis: HarmonicBasis, source: int, dest: int,
                 reference: Path, alpha: float, trace: bool = False,
                 space: SearchSpace | None = None) -> SearchResult:
    """Soft-homology best-first search from ``source`` to ``dest``.

    Parameters
    ----------
    reference : Path
        Path from ``source`` to ``dest`` whose homology class is preferred.
    alpha : float
        Weight of the projection-difference penalty; ``0`` gives Dijkstra.
    trace : bool
        Record ``(pop_index, vertex, weight, proj_diff, cost)`` per pop.
    """
    if source == dest:
        raise ValueError("source and destination must differ")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if reference.source != source or reference.dest != dest:
        raise ValueError("reference path must connect source to destination")
    space = space or SearchSpace(surface, basis)
    gbar = path_projection(surface, basis, reference)
    records = [] if trace else None
    nodes, pops = run_hstar(space, source, dest, gbar, alpha, records)
    return make_result(surface, basis, Path(nodes), gbar, alpha, pops, trace=records)


TRACE_COLUMNS = ["pop_index", "vertex", "weight", "proj_diff", "cost"]


def write_trace_csv(path, records, stage: int | None = None) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(TRACE_COLUMNS + (["stage"] if stage is not None else []))
        for rec in records:
            writer.writerow(list(rec) + ([stage] if stage is not None else []))
