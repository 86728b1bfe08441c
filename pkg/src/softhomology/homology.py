"""Hodge 1-Laplacian, harmonic bases, and harmonic projections of paths."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .complex import SimplicialSurface, boundary_matrix
from .paths import Path, chain_of_path

DEFAULT_NULL_TOLERANCE = 1e-9
DEFAULT_HOMOLOGY_TOLERANCE = 1e-6
MIN_SPECTRAL_GAP = 1e3
DENSE_LIMIT = 5000


class SpectralGapError(RuntimeError):
    """No clear gap separates the numerical kernel from the rest of the spectrum."""


@dataclass(frozen=True, eq=False)
class HarmonicBasis:
    """Orthonormal columns spanning ``ker(L1)``; one column per hole."""

    columns: np.ndarray
    null_tolerance: float = DEFAULT_NULL_TOLERANCE

    def __post_init__(self):
        cols = np.array(self.columns, dtype=float, order="C")
        if cols.ndim != 2:
            raise ValueError("basis columns must be a 2-D array")
        cols.setflags(write=False)
        object.__setattr__(self, "columns", cols)

    @property
    def dim(self) -> int:
        return self.columns.shape[1]

    @property
    def num_edges(self) -> int:
        return self.columns.shape[0]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "num_edges": self.num_edges,
            "null_tolerance": self.null_tolerance,
            # column-major flattening: column d occupies [d*E, (d+1)*E)
            "columns": self.columns.ravel(order="F").tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "HarmonicBasis":
        flat = np.asarray(data["columns"], dtype=float)
        cols = flat.reshape((data["num_edges"], data["dim"]), order="F")
        return cls(cols, float(data["null_tolerance"]))

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json(), f)

    @classmethod
    def load(cls, path) -> "HarmonicBasis":
        with open(path) as f:
            return cls.from_json(json.load(f))


def hodge_laplacian_1(surface: SimplicialSurface) -> sp.csr_matrix:
    """Unweighted combinatorial Laplacian ``d1^T d1 + d2 d2^T`` on edges."""
    d1 = boundary_matrix(surface, 1).astype(float)
    d2 = boundary_matrix(surface, 2).astype(float)
    return (d1.T @ d1 + d2 @ d2.T).tocsr()


def harmonic_basis(laplacian, null_tolerance: float = DEFAULT_NULL_TOLERANCE,
                   seed: int = 0) -> HarmonicBasis:
    """Orthonormal basis of the numerical kernel of a symmetric PSD matrix.

    Eigenvalues below ``null_tolerance * lambda_max`` are treated as zero.
    Matrices up to ``DENSE_LIMIT`` rows use a dense symmetric
    eigendecomposition; larger ones use shift-invert Lanczos with a starting
    vector drawn from ``seed``.

    Raises
    ------
    SpectralGapError
        If the smallest retained nonzero eigenvalue is less than
        ``MIN_SPECTRAL_GAP`` times the largest kernel eigenvalue (or the
        threshold, when the kernel is empty), i.e. the kernel is ambiguous.
    """
    n = laplacian.shape[0]
    if n == 0:
        return HarmonicBasis(np.zeros((0, 0)), null_tolerance)
    if n <= DENSE_LIMIT:
        dense = laplacian.toarray() if sp.issparse(laplacian) else np.asarray(laplacian, dtype=float)
        evals, evecs = scipy.linalg.eigh(dense)
        lam_max = max(evals[-1], 0.0)
    else:
        evals, evecs, lam_max = _sparse_low_spectrum(sp.csr_matrix(laplacian), null_tolerance, seed)

    threshold = null_tolerance * lam_max
    in_kernel = evals < threshold
    kernel_top = np.max(np.abs(evals[in_kernel])) if in_kernel.any() else 0.0
    above = evals[~in_kernel]
    if len(above):
        floor = max(kernel_top, threshold, np.finfo(float).tiny)
        if above.min() < MIN_SPECTRAL_GAP * floor:
            raise SpectralGapError(
                f"kernel not separated: smallest nonzero eigenvalue {above.min():.3e}, "
                f"kernel/threshold level {floor:.3e}"
            )
    return HarmonicBasis(evecs[:, in_kernel], null_tolerance)


def _sparse_low_spectrum(lap: sp.csr_matrix, null_tolerance: float, seed: int):
    n = lap.shape[0]
    rng = np.random.default_rng(seed)
    lam_max = spla.eigsh(lap, k=1, which="LA", return_eigenvectors=False, v0=rng.standard_normal(n))[0]
    threshold = null_tolerance * lam_max
    k = 8
    while True:
        k = min(k, n - 2)
        evals, evecs = spla.eigsh(lap, k=k, sigma=-1e-3 * lam_max, which="LM", v0=rng.standard_normal(n))
        order = np.argsort(evals)
        evals, evecs = evals[order], evecs[:, order]
        # need at least one eigenvalue above the kernel to judge the gap
        if (evals >= threshold).any() or k >= n - 2:
            return evals, evecs, lam_max
        k *= 2


def harmonic_projection(basis: HarmonicBasis, chain: np.ndarray) -> np.ndarray:
    """``H^T x`` for a 1-chain ``x``."""
    chain = np.asarray(chain, dtype=float)
    if chain.shape[0] != basis.num_edges:
        raise ValueError(f"chain has {chain.shape[0]} entries, basis expects {basis.num_edges}")
    return basis.columns.T @ chain


def path_projection(surface: SimplicialSurface, basis: HarmonicBasis, path: Path) -> np.ndarray:
    return harmonic_projection(basis, chain_of_path(surface, path))


def projection_difference(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"projection dimensions differ: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def are_homologous(surface: SimplicialSurface, basis: HarmonicBasis, p1: Path, p2: Path,
                   tol: float = DEFAULT_HOMOLOGY_TOLERANCE) -> bool:
    """Whether two co-terminal paths have equal harmonic projections (within ``tol``)."""
    if p1.source != p2.source or p1.dest != p2.dest:
        raise ValueError(
            f"paths do not share endpoints: {p1.source}->{p1.dest} vs {p2.source}->{p2.dest}"
        )
    return projection_difference(
        path_projection(surface, basis, p1), path_projection(surface, basis, p2)
    ) <= tol


CLASS_QUANTUM = 1e-6


def class_key(projection, quantum: float = CLASS_QUANTUM) -> tuple[int, ...]:
    """Integer signature of a projection, used to label homology classes."""
    return tuple(int(k) for k in np.rint(np.asarray(projection, dtype=float) / quantum))


def format_class_key(key) -> str:
    return ":".join(str(k) for k in key)
