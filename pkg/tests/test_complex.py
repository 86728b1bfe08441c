import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from softhomology import (
    SurfaceError,
    boundary_matrix,
    build_grid_complex,
    euler_characteristic,
    hole_cycles,
)
from softhomology.complex import (
    SimplicialSurface,
    boundary_cycles,
    is_connected,
    surface_from_simplices,
)

from .helpers import random_hole_layout


def enumerate_counts(rows, cols, bounds, holes):
    """Independent count of (V, E, T) straight from the construction rule."""
    x0, y0, x1, y1 = bounds
    xs = [x0 + (x1 - x0) * c / (cols - 1) for c in range(cols)]
    ys = [y0 + (y1 - y0) * r / (rows - 1) for r in range(rows)]

    def inside(x, y):
        return any(a < x < c and b < y < d for a, b, c, d in holes)

    all_tris = []
    for r in range(rows - 1):
        for c in range(cols - 1):
            ll, lr, ul, ur = (c, r), (c + 1, r), (c, r + 1), (c + 1, r + 1)
            all_tris += [(ll, lr, ur), (ll, ur, ul)]

    def centroid(t):
        return (sum(xs[p[0]] for p in t) / 3, sum(ys[p[1]] for p in t) / 3)

    def sides(t):
        return [frozenset(s) for s in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2]))]

    kept = [t for t in all_tris if not inside(*centroid(t))]
    all_edges = {e for t in all_tris for e in sides(t)}
    kept_edges = {e for t in kept for e in sides(t)}
    edges = set()
    for e in all_edges:
        (a, b) = tuple(e)
        mid = ((xs[a[0]] + xs[b[0]]) / 2, (ys[a[1]] + ys[b[1]]) / 2)
        if e in kept_edges or not inside(*mid):
            edges.add(e)
    verts = {p for e in edges for p in e}
    return len(verts), len(edges), len(kept)


def test_single_cell_disk():
    s = build_grid_complex(2, 2, (0, 0, 1, 1))
    assert (s.num_vertices, s.num_edges, s.num_triangles) == (4, 5, 2)
    assert euler_characteristic(s) == 1


def test_center_cell_annulus():
    holes = [(1, 1, 2, 2)]
    s = build_grid_complex(5, 5, (0, 0, 4, 4), holes)
    assert (s.num_vertices, s.num_edges, s.num_triangles) == enumerate_counts(5, 5, (0, 0, 4, 4), holes)
    assert euler_characteristic(s) == 0


@pytest.mark.parametrize("holes", [
    [(1, 1, 3, 2)],
    [(1, 1, 2, 2), (3, 3, 4, 4)],
    [(1.2, 1.5, 1.45, 1.8)],
    [(0.8, 0.8, 2.2, 2.2)],
])
def test_counts_match_enumeration(holes):
    bounds = (0, 0, 5, 5)
    s = build_grid_complex(6, 6, bounds, holes)
    assert (s.num_vertices, s.num_edges, s.num_triangles) == enumerate_counts(6, 6, bounds, holes)
    assert euler_characteristic(s) == 1 - len(holes)


def test_fig2_surface(fig2):
    assert fig2.surface.num_vertices == 316
    assert euler_characteristic(fig2.surface) == -4


def test_nine_hole_euler():
    from softhomology.experiments import load_config, prepare

    from .conftest import config_path

    st_ = prepare(load_config(config_path("fig4_approx")))
    assert euler_characteristic(st_.surface) == -8


def test_boundary_matrix_single_triangle():
    s = surface_from_simplices(np.array([[0, 0], [1, 0], [0, 1.0]]), [(0, 1, 2)])
    # edges sorted: [0,1], [0,2], [1,2]
    assert [tuple(e) for e in s.edges] == [(0, 1), (0, 2), (1, 2)]
    d2 = boundary_matrix(s, 2).toarray()
    assert d2[:, 0].tolist() == [1, -1, 1]
    d1 = boundary_matrix(s, 1).toarray()
    assert d1[:, 0].tolist() == [-1, 1, 0]


def test_boundary_matrix_bad_k(annulus):
    with pytest.raises(ValueError):
        boundary_matrix(annulus.surface, 3)


def test_boundary_of_boundary_annulus(annulus):
    d1 = boundary_matrix(annulus.surface, 1)
    d2 = boundary_matrix(annulus.surface, 2)
    assert abs(d1 @ d2).sum() == 0
    assert ((d1 != 0).sum(axis=0) == 2).all()
    assert ((d2 != 0).sum(axis=0) == 3).all()


def test_construction_is_deterministic():
    a = build_grid_complex(7, 6, holes=[(-0.5, -0.5, 0.1, 0.2)])
    b = build_grid_complex(7, 6, holes=[(-0.5, -0.5, 0.1, 0.2)])
    assert np.array_equal(a.edges, b.edges)
    assert np.array_equal(a.triangles, b.triangles)
    assert np.array_equal(a.positions, b.positions)


def test_weights_are_euclidean(annulus):
    s = annulus.surface
    d = np.linalg.norm(s.positions[s.edges[:, 0]] - s.positions[s.edges[:, 1]], axis=1)
    assert np.allclose(s.weights, d)


def test_json_roundtrip(tmp_path, annulus):
    p = tmp_path / "s.json"
    annulus.surface.save(p)
    data = json.loads(p.read_text())
    assert {"vertices", "edges", "weights", "triangles"} <= set(data)
    back = SimplicialSurface.load(p)
    assert np.array_equal(back.edges, annulus.surface.edges)
    assert np.array_equal(back.triangles, annulus.surface.triangles)
    assert np.allclose(back.weights, annulus.surface.weights)
    assert back.vertex_at(3, 0) == annulus.surface.vertex_at(3, 0)


def test_hole_outside_bounds():
    with pytest.raises(SurfaceError):
        build_grid_complex(5, 5, (0, 0, 4, 4), [(3, 3, 5, 5)])


def test_touching_holes_rejected():
    with pytest.raises(SurfaceError):
        build_grid_complex(5, 5, (0, 0, 4, 4), [(0.5, 0.5, 2, 2), (2, 0.5, 3.5, 2)])


def test_too_small_grid():
    with pytest.raises(SurfaceError):
        build_grid_complex(1, 3)


def test_disconnected_detected():
    s = surface_from_simplices(np.array([[0, 0], [1, 0], [0, 1], [5, 5], [6, 5], [5, 6.0]]),
                               [(0, 1, 2), (3, 4, 5)])
    assert not is_connected(s)


def test_boundary_cycles_annulus(annulus):
    cycles = boundary_cycles(annulus.surface)
    assert len(cycles) == 2
    d1 = boundary_matrix(annulus.surface, 1)
    for c in cycles:
        assert not np.any(d1 @ c)
    inner = hole_cycles(annulus.surface)
    assert len(inner) == 1 and np.abs(inner[0]).sum() == 4


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_random_layout_invariants(seed):
    rows, cols, holes = random_hole_layout(np.random.default_rng(seed), max_side=11, max_holes=4)
    s = build_grid_complex(rows, cols, (0, 0, cols - 1, rows - 1), holes)
    d1 = boundary_matrix(s, 1)
    d2 = boundary_matrix(s, 2)
    assert abs(d1 @ d2).sum() == 0
    per_edge = np.asarray(abs(d2).sum(axis=1)).ravel()
    assert per_edge.max() <= 2
    # edges in exactly one triangle are the boundary-cycle edges
    cyc = np.zeros(s.num_edges)
    for c in boundary_cycles(s):
        cyc += np.abs(c)
    assert np.array_equal(per_edge == 1, cyc > 0)
    assert euler_characteristic(s) == 1 - len(holes)
    assert len(hole_cycles(s)) == len(holes)
