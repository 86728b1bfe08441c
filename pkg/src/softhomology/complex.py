"""Oriented 2-D simplicial surfaces built from triangulated grids with holes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp


class Rect(NamedTuple):
    """Axis-aligned rectangle ``[xmin, xmax] x [ymin, ymax]``."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def contains_open(self, x, y):
        return (x > self.xmin) & (x < self.xmax) & (y > self.ymin) & (y < self.ymax)


class SurfaceError(ValueError):
    """Raised when a requested surface is invalid or degenerate."""


@dataclass(frozen=True, eq=False)
class SimplicialSurface:
    """Vertices, canonically oriented edges and triangles of a 2-complex.

    Edges are stored as ``(tail, head)`` with ``tail < head`` and triangles as
    sorted vertex triples; both arrays are ordered lexicographically so that
    matrix layouts are reproducible.

    ``grid_index`` maps each vertex back to its ``(col, row)`` grid location
    when the surface was built by :func:`build_grid_complex`.
    """

    positions: np.ndarray
    edges: np.ndarray
    weights: np.ndarray
    triangles: np.ndarray
    grid_index: np.ndarray | None = None
    # CSR adjacency; per slot: neighbor vertex, edge id, traversal sign, weight
    indptr: np.ndarray = field(init=False, repr=False)
    nbr: np.ndarray = field(init=False, repr=False)
    nbr_edge: np.ndarray = field(init=False, repr=False)
    nbr_sign: np.ndarray = field(init=False, repr=False)
    nbr_weight: np.ndarray = field(init=False, repr=False)
    _edge_lookup: dict = field(init=False, repr=False)

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        n = len(positions)

        if not np.all(np.isfinite(positions)):
            raise SurfaceError("vertex positions must be finite")
        if len(weights) != len(edges):
            raise SurfaceError("one weight per edge required")
        if np.any(weights <= 0):
            raise SurfaceError("edge weights must be positive")
        if len(edges) and (np.any(edges[:, 0] >= edges[:, 1]) or edges.min() < 0 or edges.max() >= n):
            raise SurfaceError("edges must satisfy 0 <= tail < head < N")
        if len(triangles) and (np.any(np.diff(triangles, axis=1) <= 0) or triangles.max() >= n):
            raise SurfaceError("triangle vertices must be strictly increasing and < N")
        if len(edges) > 1 and not _strictly_lex_sorted(edges):
            raise SurfaceError("edges must be unique and lexicographically sorted")
        if len(triangles) > 1 and not _strictly_lex_sorted(triangles):
            raise SurfaceError("triangles must be unique and lexicographically sorted")

        lookup = {(int(a), int(b)): k for k, (a, b) in enumerate(edges)}
        for t in triangles:
            a, b, c = (int(x) for x in t)
            if (a, b) not in lookup or (a, c) not in lookup or (b, c) not in lookup:
                raise SurfaceError(f"triangle {(a, b, c)} has a missing edge")

        # both traversal directions of every edge, grouped by origin vertex
        origin = np.concatenate([edges[:, 0], edges[:, 1]])
        target = np.concatenate([edges[:, 1], edges[:, 0]])
        eid = np.concatenate([np.arange(len(edges))] * 2)
        sign = np.concatenate([np.ones(len(edges)), -np.ones(len(edges))])
        order = np.lexsort((target, origin))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, origin + 1, 1)
        indptr = np.cumsum(indptr)

        for name, value in [
            ("positions", positions),
            ("edges", edges),
            ("weights", weights),
            ("triangles", triangles),
            ("indptr", indptr),
            ("nbr", target[order]),
            ("nbr_edge", eid[order]),
            ("nbr_sign", sign[order]),
            ("nbr_weight", weights[eid[order]]),
            ("_edge_lookup", lookup),
        ]:
            if isinstance(value, np.ndarray):
                value.setflags(write=False)
            object.__setattr__(self, name, value)
        if self.grid_index is not None:
            gi = np.asarray(self.grid_index, dtype=np.int64).reshape(-1, 2)
            gi.setflags(write=False)
            object.__setattr__(self, "grid_index", gi)

    @property
    def num_vertices(self) -> int:
        return len(self.positions)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def neighbors(self, v: int) -> np.ndarray:
        return self.nbr[self.indptr[v]:self.indptr[v + 1]]

    def edge_id(self, u: int, v: int) -> int:
        """Index of the edge joining ``u`` and ``v``; raises ``KeyError`` if absent."""
        return self._edge_lookup[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_lookup

    def edge_weight(self, u: int, v: int) -> float:
        return float(self.weights[self.edge_id(u, v)])

    def vertex_at(self, col: int, row: int) -> int:
        """Vertex id of the grid point ``(col, row)``."""
        if self.grid_index is None:
            raise SurfaceError("surface was not built from a grid")
        hit = np.flatnonzero((self.grid_index[:, 0] == col) & (self.grid_index[:, 1] == row))
        if len(hit) == 0:
            raise SurfaceError(f"grid point ({col}, {row}) is not a vertex of the surface")
        return int(hit[0])

    def to_json(self) -> dict:
        out = {
            "vertices": self.positions.tolist(),
            "edges": self.edges.tolist(),
            "weights": self.weights.tolist(),
            "triangles": self.triangles.tolist(),
        }
        if self.grid_index is not None:
            out["grid_index"] = self.grid_index.tolist()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialSurface":
        return cls(
            positions=np.array(data["vertices"], dtype=float),
            edges=np.array(data["edges"], dtype=np.int64),
            weights=np.array(data["weights"], dtype=float),
            triangles=np.array(data["triangles"], dtype=np.int64),
            grid_index=np.array(data["grid_index"]) if "grid_index" in data else None,
        )

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json(), f)

    @classmethod
    def load(cls, path) -> "SimplicialSurface":
        with open(path) as f:
            return cls.from_json(json.load(f))


def _strictly_lex_sorted(a: np.ndarray) -> bool:
    prev = a[:-1]
    nxt = a[1:]
    for k in range(a.shape[1]):
        lt = prev[:, k] < nxt[:, k]
        gt = prev[:, k] > nxt[:, k]
        if k == 0:
            ok, undecided = lt, ~(lt | gt)
        else:
            ok = ok | (undecided & lt)
            undecided = undecided & ~(lt | gt)
    return bool(np.all(ok))


def surface_from_simplices(positions, triangles, weights=None) -> SimplicialSurface:
    """Close a triangle list under faces and build the surface.

    Edge weights default to the Euclidean length of each edge.
    """
    positions = np.asarray(positions, dtype=float)
    tris = np.sort(np.asarray(triangles, dtype=np.int64).reshape(-1, 3), axis=1)
    tris = np.unique(tris, axis=0)
    edges = np.concatenate([tris[:, [0, 1]], tris[:, [0, 2]], tris[:, [1, 2]]])
    edges = np.unique(edges, axis=0)
    if weights is None:
        weights = np.linalg.norm(positions[edges[:, 1]] - positions[edges[:, 0]], axis=1)
    return SimplicialSurface(positions, edges, weights, tris)


def build_grid_complex(rows: int, cols: int, bounds: Rect | Sequence[float] = (-1.0, -1.0, 1.0, 1.0),
                       holes: Sequence[Rect | Sequence[float]] = ()) -> SimplicialSurface:
    """Triangulate a ``rows x cols`` grid of points and cut rectangular holes.

    Every grid cell is split along its lower-left to upper-right diagonal.
    A triangle is removed when its centroid lies in the open interior of a
    hole; an edge is removed when all of its triangles were removed and its
    midpoint lies inside a hole; vertices left without edges are dropped.
    Edge weights are Euclidean lengths.

    Raises
    ------
    SurfaceError
        If a hole is not strictly inside ``bounds``, the result is
        disconnected, or holes touch each other or the outer boundary.
    """
    if rows < 2 or cols < 2:
        raise SurfaceError("grid needs at least 2 rows and 2 cols")
    bounds = Rect(*bounds)
    if not (bounds.xmin < bounds.xmax and bounds.ymin < bounds.ymax):
        raise SurfaceError(f"empty bounds {tuple(bounds)}")
    holes = [Rect(*h) for h in holes]
    for h in holes:
        if not (bounds.xmin < h.xmin < h.xmax < bounds.xmax and bounds.ymin < h.ymin < h.ymax < bounds.ymax):
            raise SurfaceError(f"hole {tuple(h)} is not strictly inside bounds {tuple(bounds)}")

    xs = np.linspace(bounds.xmin, bounds.xmax, cols)
    ys = np.linspace(bounds.ymin, bounds.ymax, rows)
    col_idx, row_idx = np.meshgrid(np.arange(cols), np.arange(rows))
    col_idx, row_idx = col_idx.ravel(), row_idx.ravel()
    pos = np.column_stack([xs[col_idx], ys[row_idx]])

    vid = np.arange(rows * cols).reshape(rows, cols)
    ll, lr = vid[:-1, :-1].ravel(), vid[:-1, 1:].ravel()
    ul, ur = vid[1:, :-1].ravel(), vid[1:, 1:].ravel()
    tris = np.concatenate([np.column_stack([ll, lr, ur]), np.column_stack([ll, ul, ur])])
    tris = np.sort(tris, axis=1)

    centroids = pos[tris].mean(axis=1)
    removed_tri = np.zeros(len(tris), dtype=bool)
    hits_per_hole = []
    for h in holes:
        hit = h.contains_open(centroids[:, 0], centroids[:, 1])
        hits_per_hole.append(int(hit.sum()))
        removed_tri |= hit

    all_edges = np.concatenate([tris[:, [0, 1]], tris[:, [0, 2]], tris[:, [1, 2]]])
    all_edges, inverse = np.unique(all_edges, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    tri_of_slot = np.tile(np.arange(len(tris)), 3)
    kept_incidence = np.zeros(len(all_edges), dtype=np.int64)
    np.add.at(kept_incidence, inverse[~removed_tri[tri_of_slot]], 1)
    mid = pos[all_edges].mean(axis=1)
    in_hole = np.zeros(len(all_edges), dtype=bool)
    for h in holes:
        in_hole |= h.contains_open(mid[:, 0], mid[:, 1])
    keep_edge = ~((kept_incidence == 0) & in_hole)

    edges = all_edges[keep_edge]
    tris = tris[~removed_tri]
    used = np.zeros(rows * cols, dtype=bool)
    used[edges.ravel()] = True
    used[tris.ravel()] = True
    new_id = np.cumsum(used) - 1

    surface = SimplicialSurface(
        positions=pos[used],
        edges=new_id[edges],
        weights=np.linalg.norm(pos[edges[:, 1]] - pos[edges[:, 0]], axis=1),
        triangles=np.unique(new_id[tris], axis=0) if len(tris) else np.zeros((0, 3), dtype=np.int64),
        grid_index=np.column_stack([col_idx, row_idx])[used],
    )

    if not is_connected(surface):
        raise SurfaceError("holes disconnect the surface")
    num_holes = sum(1 for k in hits_per_hole if k > 0)
    if euler_characteristic(surface) != 1 - num_holes or len(boundary_cycles(surface)) != 1 + num_holes:
        raise SurfaceError("holes overlap, touch each other, or touch the outer boundary")
    return surface


def is_connected(surface: SimplicialSurface) -> bool:
    n = surface.num_vertices
    if n == 0:
        return False
    adj = sp.coo_matrix(
        (np.ones(surface.num_edges), (surface.edges[:, 0], surface.edges[:, 1])), shape=(n, n)
    )
    ncomp, _ = sp.csgraph.connected_components(adj, directed=False)
    return ncomp == 1


def boundary_matrix(surface: SimplicialSurface, k: int) -> sp.csc_matrix:
    """Signed incidence matrix of the boundary map on ``k``-chains.

    ``k=1`` maps edges to vertices (``-tail + head``); ``k=2`` maps triangles
    ``[a, b, c]`` to ``[b, c] - [a, c] + [a, b]``.
    """
    if k == 1:
        E = surface.num_edges
        rows = surface.edges.T.ravel()
        cols = np.tile(np.arange(E), 2)
        vals = np.concatenate([-np.ones(E), np.ones(E)])
        shape = (surface.num_vertices, E)
    elif k == 2:
        T = surface.num_triangles
        tri = surface.triangles
        faces = [(tri[:, 1], tri[:, 2], 1.0), (tri[:, 0], tri[:, 2], -1.0), (tri[:, 0], tri[:, 1], 1.0)]
        rows = np.concatenate([[surface.edge_id(int(a), int(b)) for a, b in zip(u, v)] for u, v, _ in faces])
        rows = rows.astype(np.int64) if T else np.zeros(0, dtype=np.int64)
        cols = np.tile(np.arange(T), 3)
        vals = np.concatenate([np.full(T, s) for _, _, s in faces])
        shape = (surface.num_edges, T)
    else:
        raise ValueError(f"boundary order must be 1 or 2, got {k}")
    return sp.csc_matrix((vals.astype(np.int8), (rows, cols)), shape=shape)


def euler_characteristic(surface: SimplicialSurface) -> int:
    return surface.num_vertices - surface.num_edges + surface.num_triangles


def triangle_orientation(surface: SimplicialSurface) -> np.ndarray:
    """+1 where a sorted-vertex triangle is counter-clockwise in the plane, else -1."""
    p = surface.positions[surface.triangles]
    a, b, c = p[:, 0], p[:, 1], p[:, 2]
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    return np.where(cross > 0, 1.0, -1.0)


def boundary_cycles(surface: SimplicialSurface) -> list[np.ndarray]:
    """Boundary of the counter-clockwise fundamental 2-chain, split by component.

    Each entry is a 1-chain over edges. The outer boundary runs
    counter-clockwise and comes first; hole boundaries run clockwise and
    follow, ordered by their smallest edge index.
    """
    d2 = boundary_matrix(surface, 2).astype(float)
    chain = d2 @ triangle_orientation(surface)
    chain = np.rint(chain)
    on_boundary = np.flatnonzero(chain)
    if len(on_boundary) == 0:
        return []
    n = surface.num_vertices
    ends = surface.edges[on_boundary]
    adj = sp.coo_matrix((np.ones(len(ends)), (ends[:, 0], ends[:, 1])), shape=(n, n))
    _, label = sp.csgraph.connected_components(adj, directed=False)
    comp_of_edge = label[ends[:, 0]]
    cycles = []
    for comp in dict.fromkeys(comp_of_edge.tolist()):
        c = np.zeros(surface.num_edges)
        sel = on_boundary[comp_of_edge == comp]
        c[sel] = chain[sel]
        cycles.append(c)
    # outer boundary is the one touching the leftmost vertex
    leftmost = int(np.lexsort((surface.positions[:, 1], surface.positions[:, 0]))[0])
    touching = [k for k, c in enumerate(cycles) if np.any(surface.edges[c != 0] == leftmost)]
    outer = touching[0] if touching else 0
    return [cycles[outer]] + [c for k, c in enumerate(cycles) if k != outer]


def hole_cycles(surface: SimplicialSurface) -> list[np.ndarray]:
    """Boundary cycles of the holes, excluding the outer boundary."""
    return boundary_cycles(surface)[1:]
