import csv

import numpy as np
import pytest

from softhomology import (
    ClassRecord,
    Path,
    SignatureBoundError,
    alpha_threshold,
    are_homologous,
    blk_search,
    enumerate_classes,
    hstar_search,
    loop_values,
    path_projection,
    path_weight,
)
from softhomology.blk import winding_box, write_class_records_csv
from softhomology.homology import class_key
from softhomology.paths import dijkstra, validate_path


def record(length, proj, rank=0):
    proj = np.asarray(proj, dtype=float)
    return ClassRecord(class_key(proj), length, Path([0]), rank, proj)


def test_disk_reduces_to_dijkstra(disk):
    res, records = blk_search(disk.surface, disk.basis, disk.source, disk.dest, disk.reference)
    dist, _ = dijkstra(disk.surface, disk.source)
    assert res.length == dist[disk.dest]
    assert records == []


@pytest.mark.parametrize("name", ["annulus", "two_holes"])
def test_class_lengths_match_oracle(request, name):
    fx = request.getfixturevalue(name)
    table = enumerate_classes(fx.surface, fx.basis, fx.source, fx.dest)
    for key, entry in table.classes.items():
        res, _ = blk_search(fx.surface, fx.basis, fx.source, fx.dest, entry.representative)
        assert res.class_key == key
        assert res.length == pytest.approx(entry.shortest_length, abs=1e-12)


def test_records_sorted_and_shorter(two_holes):
    fx = two_holes
    res, records = blk_search(fx.surface, fx.basis, fx.source, fx.dest, fx.reference)
    lengths = [r.shortest_length for r in records]
    assert lengths == sorted(lengths)
    assert [r.discovery_rank for r in records] == list(range(len(records)))
    assert all(r.shortest_length <= res.length for r in records)
    assert len({r.signature_key for r in records}) == len(records)
    for r in records:
        validate_path(fx.surface, r.representative)
        assert r.shortest_length == pytest.approx(path_weight(fx.surface, r.representative), abs=1e-12)
        assert class_key(path_projection(fx.surface, fx.basis, r.representative)) == r.signature_key


def test_fig2_blk(fig2):
    res, records = blk_search(fig2.surface, fig2.basis, fig2.source, fig2.dest, fig2.reference)
    assert are_homologous(fig2.surface, fig2.basis, res.path, fig2.reference)
    assert res.alpha == 0
    h = hstar_search(fig2.surface, fig2.basis, fig2.source, fig2.dest, fig2.reference, 2.0)
    assert h.proj_diff < 1e-6
    assert res.length == pytest.approx(h.length, rel=0.05)
    assert res.length <= h.length + 1e-12
    assert res.visited_count >= 10 * h.visited_count


def test_fig2_threshold_global_minimizer(fig2):
    res, records = blk_search(fig2.surface, fig2.basis, fig2.source, fig2.dest, fig2.reference)
    gbar = path_projection(fig2.surface, fig2.basis, fig2.reference)
    a_star = alpha_threshold(records, res.length, gbar)
    assert a_star > 0
    for a in (a_star * 1.05, a_star * 2):
        best_other = min(r.shortest_length + a * np.linalg.norm(r.projection - gbar) for r in records)
        assert res.length < best_other
    # the heuristic gets there too, at a larger penalty
    r = hstar_search(fig2.surface, fig2.basis, fig2.source, fig2.dest, fig2.reference, a_star * 2)
    assert are_homologous(fig2.surface, fig2.basis, r.path, fig2.reference)


@pytest.mark.xfail(strict=True, reason=(
    "H* settles each vertex once; just above the threshold it still commits to a "
    "shorter class whose penalised cost exceeds the reference-class optimum"))
def test_fig2_hstar_just_above_threshold(fig2):
    res, records = blk_search(fig2.surface, fig2.basis, fig2.source, fig2.dest, fig2.reference)
    gbar = path_projection(fig2.surface, fig2.basis, fig2.reference)
    a_star = alpha_threshold(records, res.length, gbar)
    r = hstar_search(fig2.surface, fig2.basis, fig2.source, fig2.dest, fig2.reference, a_star * 1.05)
    assert are_homologous(fig2.surface, fig2.basis, r.path, fig2.reference)


def test_alpha_threshold_examples():
    assert alpha_threshold([], 5.0, np.zeros(2)) == 0.0
    # only longer classes: nothing to beat
    assert alpha_threshold([record(6.0, [1.0, 0.0])], 5.0, np.zeros(2)) == 0.0
    recs = [record(3.0, [1.0, 0.0]), record(4.0, [0.0, 0.5])]
    assert alpha_threshold(recs, 5.0, np.zeros(2)) == pytest.approx(max(2.0 / 1.0, 1.0 / 0.5))
    with pytest.raises(ValueError):
        alpha_threshold([record(3.0, [0.0, 0.0])], 5.0, np.zeros(2))


def test_threshold_separates_annulus(annulus):
    fx = annulus
    res, records = blk_search(fx.surface, fx.basis, fx.source, fx.dest, fx.reference)
    gbar = path_projection(fx.surface, fx.basis, fx.reference)
    a_star = alpha_threshold(records, res.length, gbar)
    cands = [(r.shortest_length, float(np.linalg.norm(r.projection - gbar)), False) for r in records]
    cands.append((res.length, 0.0, True))
    for a in np.linspace(a_star + 1e-6, a_star + 5, 10):
        assert min(cands, key=lambda c: c[0] + a * c[1])[2]


def test_loop_values_and_box(two_holes):
    loops = loop_values(two_holes.surface, two_holes.basis)
    assert loops.shape == (2, 2)
    assert np.all(np.linalg.norm(loops, axis=1) > 0)
    gbar = np.array([1.0, -2.0])
    lo, hi = winding_box(gbar, loops)
    assert np.all(lo <= np.minimum(gbar, 0)) and np.all(hi >= np.maximum(gbar, 0))
    assert np.allclose(hi - lo, np.abs(gbar) + 2 * np.abs(loops).sum(axis=0))


def test_exhaustion_raises(fig2):
    with pytest.raises(SignatureBoundError):
        blk_search(fig2.surface, fig2.basis, fig2.source, fig2.dest, fig2.reference, max_pops=50)


def test_records_csv(tmp_path, two_holes):
    fx = two_holes
    _, records = blk_search(fx.surface, fx.basis, fx.source, fx.dest, fx.reference)
    p = tmp_path / "c.csv"
    write_class_records_csv(p, records)
    rows = list(csv.reader(open(p)))
    assert rows[0] == ["discovery_rank", "signature_key", "shortest_length"]
    assert len(rows) == len(records) + 1
    assert all(":" in r[1] for r in rows[1:])
