"""Fortified rollout with H* as the base heuristic, with optional pruning."""

from __future__ import annotations

import numpy as np

from .complex import SimplicialSurface
from .homology import HarmonicBasis, path_projection
from .hstar import SearchResult, SearchSpace, evaluate_path, make_result, run_hstar
from .paths import Path


def stage_reference(partial: Path, v: int, reference: Path,
                    surface: SimplicialSurface | None = None) -> Path:
    """Reference for a sub-search started at ``v``: back along ``partial``, then ``reference``.

    ``v`` may equal the last node of ``partial``; otherwise it must be adjacent
    to it (checked when ``surface`` is given).
    """
    if partial.source != reference.source:
        raise ValueError("partial path and reference must start at the same vertex")
    back = -partial
    if v == partial.dest:
        return back + reference
    if surface is not None and not surface.has_edge(partial.dest, v):
        raise ValueError(f"{v} is not adjacent to {partial.dest}")
    return Path((v,) + back.nodes) + reference


def fortified_rollout(surface: SimplicialSurface, basis: HarmonicBasis, source: int, dest: int,
                      reference: Path, alpha: float, epsilon: float | None = None,
                      stage_limit: int | None = None, trace: bool = False) -> SearchResult:
    """Rollout of H*, keeping the best complete path found so far.

    At each stage every neighbor ``v`` of the current partial path's end is
    scored by completing ``partial + v`` with H* (using the reference shifted
    to start at ``v``). When the best completion beats the incumbent it
    becomes the incumbent and the partial path steps to ``v``; otherwise the
    partial path follows the incumbent one step. The incumbent is returned,
    so the result never costs more than plain H*.

    ``epsilon`` enables pruning: only neighbors whose one-step extension keeps
    the projection difference below the current one plus ``epsilon`` are
    scored; if none qualify, all neighbors are.

    ``visited_count`` is the total number of pops over all inner searches.
    """
    if source == dest:
        raise ValueError("source and destination must differ")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if epsilon is not None and not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if reference.source != source or reference.dest != dest:
        raise ValueError("reference path must connect source to destination")

    space = SearchSpace(surface, basis)
    stage_limit = 4 * surface.num_vertices if stage_limit is None else stage_limit
    gbar = path_projection(surface, basis, reference)
    records = [] if trace else None

    def inner(v, target, stage):
        sub = [] if trace else None
        nodes, pops = run_hstar(space, v, dest, target, alpha, sub)
        if trace:
            records.extend(rec + (stage,) for rec in sub)
        return nodes, pops

    first, total_pops = inner(source, gbar, 0)
    incumbent = first
    best = _cost(space, incumbent, gbar, alpha)
    history = [best]

    partial = [source]
    part_g = np.zeros(space.dim)
    stage = 0
    truncated = False
    indptr, nbr, step = space.indptr, space.nbr, space.step
    while partial[-1] != dest:
        if stage >= stage_limit:
            truncated = True
            break
        stage += 1
        u = partial[-1]
        slots = np.arange(indptr[u], indptr[u + 1])
        if epsilon is not None:
            here = np.linalg.norm(part_g - gbar)
            after = np.linalg.norm(part_g + step[slots] - gbar, axis=1)
            keep = slots[after < here + epsilon]
            if len(keep):
                slots = keep

        stage_best, stage_path, stage_slot = np.inf, None, -1
        for k in slots:
            v = int(nbr[k])
            g_v = part_g + step[k]
            if v == dest:
                tail, pops = [v], 0
            else:
                # reference from v: back along partial + (v), then along the reference
                tail, pops = inner(v, gbar - g_v, stage)
            total_pops += pops
            full = partial + tail
            c = _cost(space, full, gbar, alpha)
            if c < stage_best:
                stage_best, stage_path, stage_slot = c, full, k

        if stage_best < best:
            best, incumbent = stage_best, stage_path
            k = stage_slot
        else:
            # incumbent extends the partial path; follow its next vertex
            nxt = incumbent[len(partial)]
            lo = indptr[u]
            k = lo + int(np.flatnonzero(nbr[lo:indptr[u + 1]] == nxt)[0])
        partial.append(int(nbr[k]))
        part_g = part_g + step[k]
        history.append(best)

    return make_result(surface, basis, Path(incumbent), gbar, alpha, total_pops,
                       truncated=truncated, trace=records, incumbent_costs=history)


def pruned_rollout(surface: SimplicialSurface, basis: HarmonicBasis, source: int, dest: int,
                   reference: Path, alpha: float, epsilon: float | None = None,
                   stage_limit: int | None = None, trace: bool = False) -> SearchResult:
    """Fortified rollout restricted to neighbors that do not grow the projection difference.

    ``epsilon`` defaults to 5% of the reference projection's norm.
    """
    if epsilon is None:
        gbar = path_projection(surface, basis, reference)
        epsilon = max(0.05 * float(np.linalg.norm(gbar)), 1e-12)
    return fortified_rollout(surface, basis, source, dest, reference, alpha, epsilon=epsilon,
                             stage_limit=stage_limit, trace=trace)


def _cost(space: SearchSpace, nodes: list[int], gbar: np.ndarray, alpha: float) -> float:
    return evaluate_path(space.surface, space.basis, Path(nodes), gbar, alpha)[2]
