import pytest

import germlift as gl
from germlift.localalg import get_context, required_jet_order
from oracles import oracle_gamma, oracle_graded_delta, oracle_tke_codim


def test_graded_delta_examples():
    cusp = gl.multigerm(1, 2, [["x1^2", "x1^3"]])
    assert gl.graded_delta(cusp, 1) == 2
    psi2 = gl.multigerm(2, 3, [["x1", "x2^2", "x1*x2"]])
    assert gl.graded_delta(psi2, 1) == 4
    # level 0 recovers the local-algebra dimension
    for g in (cusp, psi2):
        assert gl.graded_delta(g, 0) == gl.stabilization(g).delta


def test_graded_gamma_examples():
    cusp = gl.multigerm(1, 2, [["x1^2", "x1^3"]])
    assert gl.graded_gamma(cusp, 0) == 1
    ex36 = gl.multigerm(2, 2, [["x1", "x1*x2 + x2^5 + x2^7"]])
    assert gl.graded_gamma(ex36, 2) == 12
    ident = gl.multigerm(1, 1, [["x1"]])
    for i in range(3):
        assert gl.graded_gamma(ident, i) == 0


def test_predicted_graded_examples():
    psi2 = gl.multigerm(2, 3, [["x1", "x2^2", "x1*x2"]])
    pred = gl.predicted_graded(psi2, 1)
    assert (pred.i_delta, pred.i_gamma) == (4, 2)
    pred0 = gl.predicted_graded(psi2, 0)
    assert (pred0.i_delta, pred0.i_gamma) == (2, 1)
    ex37 = gl.multigerm(
        4, 5, [["x1", "x2", "x3", "x4^4 + x1*x4", "x4^6 + x4^7 + x2*x4 + x3*x4^2"]]
    )
    pred2 = gl.predicted_graded(ex37, 2)
    assert (pred2.i_delta, pred2.i_gamma) == (40, 30)


def test_graded_values_match_closed_formulas_smalls(small_germs):
    for name, g in small_germs.items():
        for i in range(4):
            pred = gl.predicted_graded(g, i)
            assert gl.graded_delta(g, i) == pred.i_delta, (name, i)
            assert gl.graded_gamma(g, i) == pred.i_gamma, (name, i)


def test_graded_values_match_literal_jet_oracle(small_germs):
    cases = ("cuspidal_curve", "transverse_cusps", "lines_3", "cross_cap",
             "plane_map_xy_y5_y7")
    for name in cases:
        g = small_germs[name]
        ell = get_context(g).ell
        for i in range(2):
            order = (i + 2) * ell + ell
            assert gl.graded_delta(g, i) == oracle_graded_delta(g, i, order), (name, i)
            assert gl.graded_gamma(g, i) == oracle_gamma(g, i, order), (name, i)


def test_graded_oracle_is_jet_order_stable():
    g = gl.multigerm(1, 2, [["x1^2", "x1^3"]])
    base = required_jet_order(g, 1)
    assert oracle_graded_delta(g, 1, base) == oracle_graded_delta(g, 1, base + 1)
    assert oracle_gamma(g, 1, base) == oracle_gamma(g, 1, base + 1)


def test_jet_order_precondition_enforced():
    g = gl.multigerm(1, 2, [["x1^2", "x1^3"]])
    bound = required_jet_order(g, 1)
    with pytest.raises(gl.JetOrderTooSmallError):
        gl.graded_delta(g, 1, jet_order=bound - 1)
    with pytest.raises(gl.JetOrderTooSmallError):
        gl.graded_gamma(g, 1, jet_order=bound - 1)
    assert gl.graded_delta(g, 1, jet_order=bound) == 2


def test_tke_codim_examples():
    assert gl.tke_codim(gl.multigerm(1, 1, [["x1"]])) == 0
    assert gl.tke_codim(gl.multigerm(1, 2, [["x1^2", "x1^3"]])) == 3
    assert gl.tke_codim(gl.multigerm(2, 3, [["x1", "x2^2", "x1*x2"]])) == 3


def test_tke_codim_matches_literal_oracle(small_germs):
    for name in ("cuspidal_curve", "lines_2", "transverse_cusps", "cross_cap"):
        g = small_germs[name]
        order = 2 * get_context(g).ell + 2
        assert gl.tke_codim(g) == oracle_tke_codim(g, order), name


def test_tke_codim_closed_form_on_corpus(germs):
    for name, g in germs.items():
        expected = (g.p - g.n) * gl.stabilization(g).delta + gl.graded_gamma(g, 0)
        assert gl.tke_codim(g) == expected, name


def test_gamma_zero_is_delta_minus_branches(germs):
    for name, g in germs.items():
        st_res = gl.stabilization(g)
        assert gl.graded_gamma(g, 0) == st_res.delta - g.num_branches, name
