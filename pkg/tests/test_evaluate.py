import numpy as np
import pytest
from hypothesis import given
from hypothesis.extra.numpy import arrays

from cgranger.adjacency import AdjacencyMatrix
from cgranger.evaluate import confusion, format_table, sweep
from cgranger.exceptions import ShapeMismatch
from cgranger.series import from_matrix

from conftest import cached_motif


def truth(edges, n=3):
    return AdjacencyMatrix.from_edges(n, edges)


def test_perfect_recovery():
    t = truth([(0, 2), (2, 1)])
    r = confusion(t, t)
    assert (r.fp, r.fn, r.shd) == (0, 0, 0)
    assert r.precision == r.recall == r.f1 == 1.0


def test_empty_predictor():
    t = truth([(0, 2), (2, 1), (1, 0)])
    r = confusion(t, np.zeros((3, 3), bool))
    assert (r.fn, r.tn, r.recall) == (3, 3, 0.0)
    assert r.precision == 1.0


def test_chain_bvgc_false_positive():
    r = confusion(truth([(0, 2), (2, 1)]), truth([(0, 2), (2, 1), (0, 1)]))
    assert (r.tp, r.fp) == (2, 1)
    assert r.precision == pytest.approx(2 / 3)


def test_empty_truth_convention():
    r = confusion(truth([]), truth([]))
    assert r.precision == 1.0 and r.recall == 1.0


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        confusion(truth([], 3), truth([], 4))


@given(a=arrays(bool, (6, 6)), b=arrays(bool, (6, 6)))
def test_confusion_invariants(a, b):
    r = confusion(a, b)
    assert r.tp + r.fp + r.tn + r.fn == 30
    assert r.shd == r.fp + r.fn
    assert confusion(a, a).shd == 0
    if r.precision + r.recall:
        assert r.f1 == pytest.approx(2 * r.precision * r.recall / (r.precision + r.recall))


def test_sweep_chain_precision():
    s, t = cached_motif("chain", 0)
    rows = sweep([0.05], [("chain", s, t.adjacency())])
    by = {r.method: r.report for r in rows}
    assert [r.method for r in rows] == ["bvgc", "mvgc", "combined"]
    assert by["combined"].precision > by["bvgc"].precision


def test_sweep_null_fp_rate_grows_with_alpha():
    fp = {0.01: 0, 0.05: 0}
    empty = truth([], 3)
    for seed in range(100):
        s = from_matrix(np.random.default_rng(seed).normal(size=(3, 300)))
        for row in sweep([0.01, 0.05], [("null", s, empty)]):
            if row.method == "combined":
                fp[row.alpha] += row.report.fp
                assert row.report.precision == 1.0 or row.report.fp > 0
    assert fp[0.05] > fp[0.01]


def test_format_table_shape():
    s, t = cached_motif("chain", 0)
    rows = sweep([0.01, 0.05], [("chain", s, t.adjacency())])
    lines = format_table(rows).splitlines()
    assert len(lines) == 1 + 6
    assert lines[0].split()[:3] == ["dataset", "alpha", "method"]
