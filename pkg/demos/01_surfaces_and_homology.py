"""Surfaces with holes, boundary operators and the harmonic homology invariant."""

# %%
import numpy as np

from softhomology import (
    Path,
    are_homologous,
    boundary_matrix,
    build_grid_complex,
    euler_characteristic,
    harmonic_basis,
    harmonic_projection,
    hodge_laplacian_1,
    hole_cycles,
    path_projection,
)

# A 4x4 grid on [0,3]^2 with its centre cell cut out: an annulus.
surface = build_grid_complex(4, 4, bounds=(0, 0, 3, 3), holes=[(1, 1, 2, 2)])
print("V, E, T =", surface.num_vertices, surface.num_edges, surface.num_triangles)
print("Euler characteristic:", euler_characteristic(surface))

# %%
# Boundary of a boundary vanishes.
d1 = boundary_matrix(surface, 1)
d2 = boundary_matrix(surface, 2)
print("nonzeros in d1 @ d2:", (d1 @ d2).count_nonzero())

# %%
# The kernel of the Hodge 1-Laplacian has one dimension per hole.
basis = harmonic_basis(hodge_laplacian_1(surface))
print("harmonic dimension:", basis.dim)
(loop,) = hole_cycles(surface)
print("projection of the hole's boundary cycle:", harmonic_projection(basis, loop))

# %%
# Two routes from the bottom-left to the bottom-right corner: under and around the hole.
v = surface.vertex_at
under = Path([v(0, 0), v(1, 0), v(2, 0), v(3, 0)])
around = Path([v(0, 0), v(0, 1), v(1, 2), v(2, 2), v(2, 1), v(2, 0), v(3, 0)])
over = Path([v(0, 0), v(0, 1), v(0, 2), v(1, 2), v(2, 2), v(3, 2), v(3, 1), v(3, 0)])
for name, p in [("under", under), ("around", around), ("over", over)]:
    print(f"{name:>7}: gamma = {path_projection(surface, basis, p)}")
print("around ~ over:", are_homologous(surface, basis, around, over))
print("under ~ over:", are_homologous(surface, basis, under, over))

# %%
# Adding the boundary of any triangle leaves the projection unchanged.
chain = np.zeros(surface.num_edges)
chain += d2[:, 0].toarray().ravel()
print("projection of a triangle boundary:", harmonic_projection(basis, chain))
