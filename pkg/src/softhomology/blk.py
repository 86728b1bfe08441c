"""Exact shortest path in a homology class by search over (vertex, signature) pairs.

Each augmented node pairs a vertex with the quantized harmonic projection of
the partial path reaching it. Uniform-cost search over this graph settles
augmented nodes in order of path length, so the first time the destination is
settled under a given signature yields the shortest path of that class.

The signature space is kept finite by a winding bound: augmented nodes whose
projection leaves the box spanned by ``0`` and the reference projection,
widened per coordinate by the loop value of every hole, are discarded.
"""

from __future__ import annotations

import csv
import heapq
from dataclasses import dataclass

import numpy as np

from .complex import SimplicialSurface, hole_cycles
from .homology import HarmonicBasis, format_class_key, harmonic_projection, path_projection
from .hstar import SearchResult, SearchSpace, make_result
from .paths import Path

SIGNATURE_QUANTUM = 1e-6


class SignatureBoundError(RuntimeError):
    """The reference class is unreachable inside the winding bound."""


@dataclass
class ClassRecord:
    signature_key: tuple[int, ...]
    shortest_length: float
    representative: Path
    discovery_rank: int
    projection: np.ndarray


def loop_values(surface: SimplicialSurface, basis: HarmonicBasis) -> np.ndarray:
    """Projection of each hole's boundary cycle, one row per hole."""
    cycles = hole_cycles(surface)
    if not cycles:
        return np.zeros((0, basis.dim))
    return np.array([harmonic_projection(basis, c) for c in cycles])


def winding_box(reference_proj: np.ndarray, loops: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    slack = np.abs(loops).sum(axis=0) if len(loops) else np.zeros_like(reference_proj)
    lo = np.minimum(0.0, reference_proj) - slack
    hi = np.maximum(0.0, reference_proj) + slack
    return lo, hi


def blk_search(surface: SimplicialSurface, basis: HarmonicBasis, source: int, dest: int,
               reference: Path, quantum: float = SIGNATURE_QUANTUM,
               max_pops: int | None = None) -> tuple[SearchResult, list[ClassRecord]]:
    """Shortest path homologous to ``reference``, plus every class settled before it.

    Returns the result for the reference class and the :class:`ClassRecord`
    of each other class whose destination node was settled first, in
    settlement order (hence non-decreasing length).
    """
    if reference.source != source or reference.dest != dest:
        raise ValueError("reference path must connect source to destination")
    space = SearchSpace(surface, basis)
    gbar = path_projection(surface, basis, reference)
    lo, hi = winding_box(gbar, loop_values(surface, basis))
    lo, hi = lo - quantum, hi + quantum
    target_key = np.rint(gbar / quantum).astype(np.int64).tobytes()

    # augmented nodes are numbered in creation order
    node_of: dict[tuple[int, bytes], int] = {}
    vert: list[int] = []
    dist: list[float] = []
    gamma: list[np.ndarray] = []
    pred: list[int] = []
    done: list[bool] = []

    def create(v, key, d, g, p):
        node_of[(v, key)] = len(vert)
        vert.append(v)
        dist.append(d)
        gamma.append(g)
        pred.append(p)
        done.append(False)
        return len(vert) - 1

    start_key = np.zeros(space.dim, dtype=np.int64).tobytes()
    create(source, start_key, 0.0, np.zeros(space.dim), -1)
    heap = [(0.0, source, start_key, 0)]
    records: list[ClassRecord] = []
    indptr, nbr, nbr_w, step = space.indptr, space.nbr, space.nbr_weight, space.step
    pops = 0

    def walk(a):
        out = []
        while a >= 0:
            out.append(vert[a])
            a = pred[a]
        return Path(out[::-1])

    while heap:
        d, u, key, a = heapq.heappop(heap)
        if done[a]:
            continue
        done[a] = True
        pops += 1
        if u == dest:
            if key == target_key:
                result = make_result(surface, basis, walk(a), gbar, 0.0, pops)
                return result, records
            sig = tuple(int(k) for k in np.frombuffer(key, dtype=np.int64))
            records.append(ClassRecord(sig, d, walk(a), len(records), gamma[a]))
        if max_pops is not None and pops >= max_pops:
            break
        s, e = indptr[u], indptr[u + 1]
        g_new = gamma[a] + step[s:e]
        inside = np.all((g_new >= lo) & (g_new <= hi), axis=1)
        keys = np.rint(g_new / quantum).astype(np.int64)
        for j in np.flatnonzero(inside):
            k = s + j
            v = int(nbr[k])
            kb = keys[j].tobytes()
            nd = d + nbr_w[k]
            b = node_of.get((v, kb))
            if b is None:
                b = create(v, kb, nd, g_new[j], a)
            elif done[b] or nd >= dist[b]:
                continue
            else:
                dist[b], gamma[b], pred[b] = nd, g_new[j], a
            heapq.heappush(heap, (nd, v, kb, b))
    raise SignatureBoundError(
        f"reference class not reached after {pops} pops ({len(records)} other classes found)"
    )


def alpha_threshold(records: list[ClassRecord], target_length: float,
                    reference_proj: np.ndarray, tol: float = 1e-9) -> float:
    """Smallest penalty weight above which the reference class wins.

    The maximum over classes shorter than the target of
    ``(target_length - W_i) / ||gamma_i - gamma_ref||``; ``0`` if none is shorter.
    """
    best = 0.0
    for rec in records:
        if not rec.shortest_length < target_length:
            continue
        gap = float(np.linalg.norm(np.asarray(rec.projection) - reference_proj))
        if gap <= tol:
            raise ValueError(
                f"class {rec.discovery_rank} is shorter than the target but has zero projection "
                "difference; homology bookkeeping is inconsistent"
            )
        best = max(best, (target_length - rec.shortest_length) / gap)
    return best


def write_class_records_csv(path, records: list[ClassRecord]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["discovery_rank", "signature_key", "shortest_length"])
        for rec in records:
            writer.writerow([rec.discovery_rank, format_class_key(rec.signature_key),
                             repr(rec.shortest_length)])
