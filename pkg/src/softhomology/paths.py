"""Paths on a surface: weight, concatenation/reversal algebra, chains, Dijkstra."""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .complex import SimplicialSurface


@dataclass(frozen=True)
class Path:
    """Edge-connected vertex sequence. Vertices may repeat."""

    nodes: tuple[int, ...]

    def __init__(self, nodes: Iterable[int]):
        nodes = tuple(int(v) for v in nodes)
        if not nodes:
            raise ValueError("a path needs at least one node")
        object.__setattr__(self, "nodes", nodes)

    @property
    def source(self) -> int:
        return self.nodes[0]

    @property
    def dest(self) -> int:
        return self.nodes[-1]

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __add__(self, other: "Path") -> "Path":
        return concat(self, other)

    def __neg__(self) -> "Path":
        return negate(self)

    def __sub__(self, other: "Path") -> "Path":
        return concat(self, negate(other))

    def to_json(self) -> str:
        return json.dumps(list(self.nodes))


def concat(a: Path, b: Path) -> Path:
    if a.dest != b.source:
        raise ValueError(f"cannot join path ending at {a.dest} to path starting at {b.source}")
    return Path(a.nodes + b.nodes[1:])


def negate(a: Path) -> Path:
    return Path(a.nodes[::-1])


def append_node(surface: SimplicialSurface, a: Path, v: int) -> Path:
    if not surface.has_edge(a.dest, v):
        raise ValueError(f"no edge between {a.dest} and {v}")
    return Path(a.nodes + (v,))


def validate_path(surface: SimplicialSurface, path: Path) -> None:
    for u, v in zip(path.nodes, path.nodes[1:]):
        if not surface.has_edge(u, v):
            raise ValueError(f"consecutive nodes {u}, {v} are not joined by an edge")


def edge_ids_and_signs(surface: SimplicialSurface, path: Path) -> tuple[np.ndarray, np.ndarray]:
    ids, signs = [], []
    for u, v in zip(path.nodes, path.nodes[1:]):
        try:
            ids.append(surface.edge_id(u, v))
        except KeyError:
            raise ValueError(f"consecutive nodes {u}, {v} are not joined by an edge") from None
        signs.append(1.0 if u < v else -1.0)
    return np.array(ids, dtype=np.int64), np.array(signs)


def path_weight(surface: SimplicialSurface, path: Path) -> float:
    """Sum of edge weights along the path, accumulated left to right."""
    total = 0.0
    for u, v in zip(path.nodes, path.nodes[1:]):
        try:
            total += surface.weights[surface.edge_id(u, v)]
        except KeyError:
            raise ValueError(f"consecutive nodes {u}, {v} are not joined by an edge") from None
    return float(total)


def chain_of_path(surface: SimplicialSurface, path: Path) -> np.ndarray:
    """Signed edge-traversal counts: ``+1`` for tail-to-head, ``-1`` otherwise."""
    ids, signs = edge_ids_and_signs(surface, path)
    chain = np.zeros(surface.num_edges)
    np.add.at(chain, ids, signs)
    return chain


def dijkstra(surface: SimplicialSurface, source: int, dest: int | None = None):
    """Shortest distances and predecessors from ``source``.

    Ties are broken toward the smallest vertex index, and predecessors only
    change on strict improvement, so results are deterministic.
    Stops early once ``dest`` is settled.
    """
    n = surface.num_vertices
    dist = np.full(n, np.inf)
    prev = np.full(n, -1, dtype=np.int64)
    done = np.zeros(n, dtype=bool)
    dist[source] = 0.0
    heap = [(0.0, source)]
    indptr, nbr, wts = surface.indptr, surface.nbr, surface.nbr_weight
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if u == dest:
            break
        for k in range(indptr[u], indptr[u + 1]):
            v = nbr[k]
            if done[v]:
                continue
            nd = d + wts[k]
            if nd < dist[v]:
                dist[v] = nd
                prev[v] = u
                heapq.heappush(heap, (nd, int(v)))
    return dist, prev


def walk_back(prev: Sequence[int], dest: int) -> list[int]:
    out = [dest]
    while prev[out[-1]] >= 0:
        out.append(int(prev[out[-1]]))
    return out[::-1]


def shortest_path(surface: SimplicialSurface, source: int, dest: int) -> Path:
    dist, prev = dijkstra(surface, source, dest)
    if not np.isfinite(dist[dest]):
        raise ValueError(f"vertex {dest} is unreachable from {source}")
    return Path(walk_back(prev, dest))


def reference_from_keypoints(surface: SimplicialSurface, keypoints: Sequence[int]) -> Path:
    """Chain shortest paths between consecutive keypoints into one path."""
    if len(keypoints) < 2:
        raise ValueError("need at least two keypoints")
    for v in keypoints:
        if not 0 <= v < surface.num_vertices:
            raise ValueError(f"keypoint {v} is not a vertex")
    out = Path([keypoints[0]])
    for a, b in zip(keypoints, keypoints[1:]):
        out = out + (Path([a]) if a == b else shortest_path(surface, a, b))
    return out
