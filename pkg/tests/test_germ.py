from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import germlift as gl
from germlift.germ import ideal_jet_span
from germlift.jetcore import Polynomial, compose, monomials_upto, source_ring


def test_load_cusp_document():
    g = gl.load_multigerm(
        {"n": 1, "p": 2, "branches": [{"components": ["x1^2", "x1^3"]}]}
    )
    assert g.n == 1 and g.p == 2 and g.num_branches == 1
    assert gl.corank(g) == 1


def test_load_rejects_corank_two():
    with pytest.raises(gl.GermValidationError, match="corank"):
        gl.load_multigerm(
            {"n": 2, "p": 2, "branches": [{"components": ["x1^2", "x2^2"]}]}
        )


def test_load_trigerm_document_is_valid():
    g = gl.load_multigerm(
        {
            "n": 1,
            "p": 2,
            "branches": [
                {"components": ["x1", "0"]},
                {"components": ["0", "x1"]},
                {"components": ["x1^2", "x1^3+x1^4"]},
            ],
        }
    )
    assert g.num_branches == 3
    assert gl.corank(g) == 1


def test_load_rejects_schema_violations():
    with pytest.raises(gl.GermValidationError):
        gl.load_multigerm({"n": 1, "p": 2})
    with pytest.raises(gl.GermValidationError):
        gl.load_multigerm({"n": 1, "p": 2, "branches": []})
    with pytest.raises(gl.GermValidationError):
        gl.load_multigerm({"n": 1, "p": 2, "branches": [{"components": ["x1"]}]})
    with pytest.raises(gl.GermValidationError):
        gl.load_multigerm({"n": 0, "p": 2, "branches": [{"components": []}]})
    with pytest.raises(gl.GermValidationError):
        gl.load_multigerm(
            {"n": 1, "p": 2, "branches": [{"components": ["x1", 7]}]}
        )


def test_load_rejects_source_exceeding_target():
    with pytest.raises(gl.GermValidationError, match="exceeds"):
        gl.load_multigerm(
            {"n": 2, "p": 1, "branches": [{"components": ["x1 + x2"]}]}
        )


def test_load_rejects_nonzero_constant_term():
    with pytest.raises(gl.GermValidationError, match="constant"):
        gl.load_multigerm(
            {"n": 1, "p": 2, "branches": [{"components": ["1 + x1", "x1"]}]}
        )


def test_load_rejects_bad_expression():
    with pytest.raises(gl.GermValidationError, match="component"):
        gl.load_multigerm(
            {"n": 1, "p": 2, "branches": [{"components": ["x1 +", "x1"]}]}
        )


def test_corank_examples():
    assert gl.corank(gl.multigerm(1, 2, [["x1", "0"]])) == 0
    assert gl.corank(gl.multigerm(1, 2, [["x1^2", "x1^3"]])) == 1
    assert gl.corank(gl.multigerm(2, 3, [["x1", "x2^2", "x1*x2"]])) == 1


def test_stabilization_identity():
    st_res = gl.stabilization(gl.multigerm(1, 1, [["x1"]]))
    assert st_res.delta == 1 and st_res.ell == 1


def test_stabilization_cusp_matches_monomial_ideal_oracle():
    # the ideal (x^2, x^3) equals (x^2): standard monomials {1, x}
    st_res = gl.stabilization(gl.multigerm(1, 2, [["x1^2", "x1^3"]]))
    assert st_res.delta == 2
    assert st_res.ell == 2


def test_stabilization_bigerm_additivity():
    st_res = gl.stabilization(
        gl.multigerm(1, 2, [["x1^2", "x1^3"], ["x1^3", "x1^2"]])
    )
    assert st_res.delta == 4
    assert st_res.delta_per_branch == (2, 2)


def test_stabilization_immersive_branch():
    st_res = gl.stabilization(gl.multigerm(1, 2, [["x1", "0"]]))
    assert st_res.delta == 1 and st_res.ell == 1


def test_stabilization_detects_infinite_delta():
    g = gl.multigerm(1, 2, [["0", "0"]])
    with pytest.raises(gl.DeltaNotFiniteError):
        gl.stabilization(g, 6)


def test_stabilization_rejects_tiny_nmax():
    with pytest.raises(ValueError):
        gl.stabilization(gl.multigerm(1, 1, [["x1"]]), 1)


def test_delta_additivity_over_corpus(germs):
    for g in germs.values():
        st_res = gl.stabilization(g)
        assert st_res.delta == sum(st_res.delta_per_branch)


def _monomial_ideal_delta(exponents, nvars, bound=12):
    """Standard-monomial count for a pure monomial ideal (independent oracle)."""
    count = 0
    for m in monomials_upto(nvars, bound):
        if not any(all(m[i] >= g[i] for i in range(nvars)) for g in exponents):
            count += 1
    return count


def test_monomial_germ_deltas_match_monomial_ideal_oracle():
    cases = [
        (gl.multigerm(1, 2, [["x1^2", "x1^3"]]), [(2,), (3,)], 1),
        (gl.multigerm(1, 2, [["x1^4", "x1^5"]]), [(4,), (5,)], 1),
        (gl.multigerm(2, 3, [["x1", "x2^2", "x1*x2"]]), [(1, 0), (0, 2), (1, 1)], 2),
    ]
    for germ, gens, nvars in cases:
        assert gl.stabilization(germ).delta == _monomial_ideal_delta(gens, nvars)


@st.composite
def unimodular_2x2(draw):
    # random invertible integer matrix with determinant +-1 built from shears
    a = draw(st.integers(-2, 2))
    b = draw(st.integers(-2, 2))
    swap = draw(st.booleans())
    m = [[1, a], [0, 1]]
    m2 = [[1, 0], [b, 1]]
    prod = [
        [m[0][0] * m2[0][0] + m[0][1] * m2[1][0], m[0][0] * m2[0][1] + m[0][1] * m2[1][1]],
        [m[1][0] * m2[0][0] + m[1][1] * m2[1][0], m[1][0] * m2[0][1] + m[1][1] * m2[1][1]],
    ]
    if swap:
        prod = [prod[1], prod[0]]
    return prod


def _substitute_linear(g, matrix):
    """Apply x_k -> sum_l matrix[k][l] x_l to every branch component."""
    ring = source_ring(g.n)
    forms = []
    for k in range(g.n):
        terms = {}
        for l in range(g.n):
            if matrix[k][l]:
                mono = tuple(1 if j == l else 0 for j in range(g.n))
                terms[mono] = Fraction(matrix[k][l])
        forms.append(Polynomial(ring, terms))
    branches = []
    for branch in g.branches:
        comps = []
        for comp in branch.components:
            deg = max(comp.degree(), 0)
            comps.append(compose_into_source(comp, forms, deg))
        branches.append(tuple(gl.poly_to_text(c) for c in comps))
    return gl.multigerm(g.n, g.p, branches)


def compose_into_source(poly, forms, order):
    # reuse jet composition: linear forms vanish at the origin
    reindexed = Polynomial(source_ring(len(forms)), dict(poly.items()))
    return compose(reindexed, forms, order)


@settings(max_examples=12, deadline=None)
@given(unimodular_2x2())
def test_stabilization_invariant_under_linear_source_change(matrix):
    g = gl.multigerm(2, 3, [["x1", "x2^2", "x1*x2"]])
    transformed = _substitute_linear(g, matrix)
    st_a = gl.stabilization(g)
    st_b = gl.stabilization(transformed)
    assert st_a.delta == st_b.delta
    assert st_a.ell == st_b.ell


def test_ideal_jet_span_matches_oracle_rank():
    from oracles import rank as oracle_rank

    g = gl.multigerm(1, 2, [["x1^2", "x1^3"]])
    branch = g.branches[0]
    for order in (1, 2, 3, 5):
        span = ideal_jet_span(branch, order)
        monos = monomials_upto(1, order)
        rows = []
        for comp in branch.components:
            for m in monos:
                shifted = comp.mul_monomial(m)
                rows.append(
                    [
                        Fraction(str(gl.truncate(shifted, order).coefficient(mm)))
                        for mm in monos
                    ]
                )
        assert span.rank == oracle_rank(rows)
