from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stemkit.errors import ChartFormatError, ResourceLimitError
from stemkit.ext import charts, cobar
from stemkit.ext.resolution import (
    d_squared_is_zero,
    default_budget,
    h_lines,
    is_minimal,
    minimal_resolution,
)
from stemkit.f2 import GradedMatrix


@pytest.fixture(scope="module")
def res():
    return minimal_resolution(8, 22)


@pytest.fixture(scope="module")
def classical():
    return cobar.classical_cobar(4, 12)


@pytest.fixture(scope="module")
def motivic_cx():
    return cobar.motivic_cobar(4, 8)


def stem_total(res, n):
    return sum(res.dim(s, s + n) for s in range(res.max_s + 1))


def test_bottom_row(res):
    assert res.dim(0, 0) == 1
    assert all(res.dim(0, t) == 0 for t in range(1, res.max_t + 1))
    assert [t for t in range(1, 9) if res.dim(1, t)] == [1, 2, 4, 8]
    assert all(res.dim(1, t) == 1 for t in (1, 2, 4, 8))


def test_vanishing_below_diagonal(res):
    assert all(res.dim(s, t) == 0 for s in range(res.max_s + 1) for t in range(s))


def test_stem_three_and_thirteen(res):
    assert stem_total(res, 3) == 3
    assert stem_total(res, 13) == 0


def test_h0_tower(res):
    assert all(res.dim(s, s) == 1 for s in range(res.max_s + 1))
    edges = h_lines(res, 0)
    for s in range(res.max_s):
        assert ((s, s, 0), (s + 1, s + 1, 0)) in edges


def test_h1_and_h0_lines(res):
    assert ((1, 2, 0), (2, 4, 0)) in h_lines(res, 1)
    assert not [e for e in h_lines(res, 0) if e[0] == (1, 2, 0)]
    assert ((1, 4, 0), (2, 8, 0)) in h_lines(res, 2)
    with pytest.raises(ValueError):
        h_lines(res, 3)


def test_resolution_is_a_minimal_complex(res):
    assert is_minimal(res)
    for s in range(2, res.max_s + 1):
        for g in range(len(res.columns[s].degrees)):
            assert d_squared_is_zero(res, s, g)


def test_differentials_are_homogeneous(res):
    for s in range(1, res.max_s + 1):
        col, prev = res.columns[s], res.columns[s - 1]
        for g, diff in enumerate(col.differentials):
            for h, coeff in diff.items():
                assert all(sum(w) == col.degrees[g] - prev.degrees[h] for w in coeff)


def test_resource_limit_reports_progress():
    with pytest.raises(ResourceLimitError) as info:
        minimal_resolution(5, 20, max_dim=8)
    assert info.value.last_completed is not None


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("STEMKIT_MAX_DIM", "123")
    assert default_budget() == 123
    monkeypatch.setenv("STEMKIT_MAX_DIM", "-1")
    with pytest.raises(ValueError):
        default_budget()


def test_classical_cobar_examples(classical):
    assert classical.terms[(0, 0)] == [()]
    assert classical.homology_dim(1, 2) == 1
    assert cobar.d_squared_zero(classical)


def test_classical_euler_characteristic(classical):
    # the alternating sum of chain dimensions equals that of homology when every
    # differential is in range
    for t in range(classical.max_t + 1):
        top = min(t, classical.max_s)
        if top != t:
            continue
        chains = sum((-1) ** s * classical.dim(s, t) for s in range(t + 1))
        homology = sum((-1) ** s * classical.homology_dim(s, t) for s in range(t + 1))
        assert chains == homology


def test_cobar_matches_resolution(classical, res):
    for s in range(5):
        for n in range(9):
            assert classical.homology_dim(s, s + n) == res.dim(s, s + n), (s, n)


def test_motivic_cobar_examples(motivic_cx, res):
    assert cobar.tau_homology_at(motivic_cx, 0, (0, 0)) == cobar.TauModuleDescriptor(1)
    h1 = cobar.tau_homology(motivic_cx, 1, 2)
    assert sum(d.free_rank for d in h1.values()) == 1
    stem3 = sum(d.free_rank for s in range(5) for d in cobar.tau_homology(motivic_cx, s, s + 3).values())
    assert stem3 == 3
    assert cobar.d_squared_zero(motivic_cx)


def test_motivic_free_ranks_match_classical(motivic_cx, res):
    for s in range(5):
        for n in range(9):
            free = sum(d.free_rank for d in cobar.tau_homology(motivic_cx, s, s + n).values())
            assert free == res.dim(s, s + n), (s, n)


def test_h1_four_is_tau_torsion(motivic_cx):
    # h1^4 is killed by tau: tau h1^4 = h0^3 h2 h1 = 0
    assert cobar.tau_homology(motivic_cx, 4, 8) == {4: cobar.TauModuleDescriptor(0, (1,))}
    assert cobar.tau_homology(motivic_cx, 3, 6) == {3: cobar.TauModuleDescriptor(1)}


def test_motivic_matrices_are_homogeneous(motivic_cx):
    for (s, t), d in motivic_cx.differentials.items():
        assert isinstance(d, GradedMatrix)
        assert d.row_weights == tuple(motivic_cx.weights[(s, t)])
        assert d.col_weights == tuple(motivic_cx.weights[(s + 1, t)])


def test_tau_multiplication_complex():
    out = cobar.graded_homology([1], GradedMatrix((1,), (0,), (1,)), None)
    assert out == {1: cobar.TauModuleDescriptor(0, (1,))}
    src = cobar.graded_homology([0], None, GradedMatrix((1,), (0,), (1,)))
    assert src == {}


@given(st.integers(0, 3), st.lists(st.integers(0, 3), min_size=1, max_size=3))
def test_tau_power_maps(k, weights):
    # F2[tau]^n --diag(tau^k)--> F2[tau]^n has cokernel (F2[tau]/tau^k)^n
    w = sorted(weights)
    n = len(w)
    m = GradedMatrix(tuple(1 << i for i in range(n)), tuple(x for x in w), tuple(x + k for x in w))
    out = cobar.graded_homology([x + k for x in w], m, None)
    total_torsion = sorted(e for d in out.values() for e in d.torsion)
    assert total_torsion == ([k] * n if k else [])
    assert sum(d.free_rank for d in out.values()) == 0


def test_descriptor_validation():
    with pytest.raises(ValueError):
        cobar.TauModuleDescriptor(-1)
    with pytest.raises(ValueError):
        cobar.TauModuleDescriptor(0, (0,))


def test_chart_csv(res):
    single = charts.ExtChart(0, 0, {(0, 0): 1})
    assert charts.emit_chart(single, "csv") == "s,t,dim\n0,0,1\n"
    assert charts.emit_chart(charts.ExtChart(0, 0, {}), "csv") == "s,t,dim\n"
    text = charts.emit_chart(charts.ext_chart(res), "csv")
    rows = [tuple(map(int, line.split(","))) for line in text.splitlines()[1:]]
    assert rows == sorted(rows, key=lambda r: (r[1] - r[0], r[0]))
    assert all(d > 0 for _, _, d in rows)


def test_chart_text_tower(res):
    chart = charts.ext_chart(minimal_resolution(3, 4))
    grid = charts.emit_chart(chart, "txt").splitlines()
    # the stem-0 column holds a dot in every filtration
    assert all(line.split("|")[1].split()[0] == "1" for line in grid[:4])


def test_chart_svg_deterministic(res):
    chart = charts.ext_chart(res, with_lines=True)
    a = charts.emit_chart(chart, "svg")
    b = charts.emit_chart(charts.ext_chart(res, with_lines=True), "svg")
    assert a == b and a.startswith("<svg") and a.count("<circle") == sum(
        d for (s, t), d in chart.dims.items() if t - s < chart.max_t
    )


def test_chart_rejects_unknown_format(res):
    with pytest.raises(ChartFormatError):
        charts.emit_chart(charts.ext_chart(res), "png")
