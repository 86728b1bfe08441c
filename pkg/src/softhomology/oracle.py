"""Brute-force ground truth on tiny surfaces.

Enumerates every simple path between two vertices and groups them by
homology class. Membership is checked two ways: harmonic signatures, and a
direct least-squares test of whether a chain difference is a boundary of a
2-chain. The second route never touches the Laplacian.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .complex import SimplicialSurface, boundary_matrix
from .homology import HarmonicBasis, class_key, harmonic_projection
from .paths import Path, chain_of_path, path_weight

MAX_ORACLE_VERTICES = 30


class OracleError(RuntimeError):
    pass


@dataclass
class ClassEntry:
    shortest_length: float
    representative: Path
    member_count: int
    projection: np.ndarray = field(repr=False)


@dataclass
class ClassTable:
    classes: dict[tuple[int, ...], ClassEntry]

    def __len__(self):
        return len(self.classes)

    def lengths(self) -> list[float]:
        return sorted(c.shortest_length for c in self.classes.values())


def simple_paths(surface: SimplicialSurface, source: int, dest: int) -> Iterator[tuple[int, ...]]:
    """All paths from ``source`` to ``dest`` without repeated vertices, in DFS order."""
    nbrs = [tuple(int(v) for v in surface.neighbors(u)) for u in range(surface.num_vertices)]
    on_path = [False] * surface.num_vertices
    stack_nodes = [source]
    on_path[source] = True
    iters = [iter(nbrs[source])]
    while iters:
        nxt = next(iters[-1], None)
        if nxt is None:
            iters.pop()
            on_path[stack_nodes.pop()] = False
            continue
        if on_path[nxt]:
            continue
        if nxt == dest:
            yield tuple(stack_nodes) + (dest,)
            continue
        on_path[nxt] = True
        stack_nodes.append(nxt)
        iters.append(iter(nbrs[nxt]))


class BoundaryTest:
    """Decides ``x in im(d2)`` by the least-squares residual of ``d2 y = x``."""

    def __init__(self, surface: SimplicialSurface):
        d2 = boundary_matrix(surface, 2).toarray().astype(float)
        if d2.shape[1]:
            # orthonormal basis of im(d2); SVD tolerates rank deficiency
            u, s, _ = np.linalg.svd(d2, full_matrices=False)
            self.image = u[:, s > 1e-10 * s.max()]
        else:
            self.image = np.zeros((d2.shape[0], 0))

    def residual(self, chain) -> float:
        chain = np.asarray(chain, dtype=float)
        return float(np.linalg.norm(chain - self.image @ (self.image.T @ chain)))

    def is_boundary(self, chain, tol: float = 1e-8) -> bool:
        return self.residual(chain) < tol


def enumerate_classes(surface: SimplicialSurface, basis: HarmonicBasis, source: int, dest: int,
                      max_nodes: int = MAX_ORACLE_VERTICES) -> ClassTable:
    """Shortest simple path and member count of every homology class.

    Paths are grouped by their quantized harmonic projection, then every pair
    of class representatives is confirmed distinct (and one member per class
    confirmed equivalent) by the least-squares boundary test.

    Raises
    ------
    OracleError
        If the surface has more than ``max_nodes`` vertices, ``max_nodes``
        exceeds the hard cap of 30, or the two membership tests disagree.
    """
    if max_nodes > MAX_ORACLE_VERTICES:
        raise OracleError(f"max_nodes is capped at {MAX_ORACLE_VERTICES}")
    if surface.num_vertices > max_nodes:
        raise OracleError(f"surface has {surface.num_vertices} vertices, limit is {max_nodes}")

    classes: dict[tuple[int, ...], ClassEntry] = {}
    last_member: dict[tuple[int, ...], Path] = {}
    for nodes in simple_paths(surface, source, dest):
        path = Path(nodes)
        proj = harmonic_projection(basis, chain_of_path(surface, path))
        key = class_key(proj)
        w = path_weight(surface, path)
        entry = classes.get(key)
        if entry is None:
            classes[key] = ClassEntry(w, path, 1, proj)
        else:
            entry.member_count += 1
            if w < entry.shortest_length:
                entry.shortest_length, entry.representative = w, path
        last_member[key] = path

    test = BoundaryTest(surface)
    keys = list(classes)
    chains = {k: chain_of_path(surface, classes[k].representative) for k in keys}
    for i, a in enumerate(keys):
        if not test.is_boundary(chains[a] - chain_of_path(surface, last_member[a])):
            raise OracleError(f"members of class {a} differ by a non-boundary")
        for b in keys[i + 1:]:
            if test.is_boundary(chains[a] - chains[b]):
                raise OracleError(f"classes {a} and {b} differ by a boundary")
    return ClassTable(classes)
