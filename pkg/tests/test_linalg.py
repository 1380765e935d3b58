from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from germlift._linalg import QQ, RowSpace, kernel_basis, solve_sparse
from oracles import kernel_of_columns, rank as dense_rank


def to_dense(row, width):
    return [Fraction(str(row.get(j, 0))) for j in range(width)]


sparse_rows = st.lists(
    st.lists(st.tuples(st.integers(0, 5), st.integers(-4, 4)), max_size=5).map(
        lambda pairs: {c: QQ(v) for c, v in pairs if v}
    ),
    max_size=8,
)


@settings(max_examples=80, deadline=None)
@given(sparse_rows)
def test_rowspace_rank_matches_dense_oracle(rows):
    space = RowSpace()
    for row in rows:
        if row:
            space.add(dict(row))
    dense = [to_dense(r, 6) for r in rows]
    assert space.rank == dense_rank(dense)


@settings(max_examples=80, deadline=None)
@given(sparse_rows)
def test_rowspace_is_reduced_echelon(rows):
    space = RowSpace()
    for row in rows:
        if row:
            space.add(dict(row))
    pivots = sorted(space.pivot_row)
    seen = []
    for col in pivots:
        r = space.rows[space.pivot_row[col]]
        assert r, "rows are nonzero"
        assert min(r) == col, "pivot is the leading column"
        assert r[col] == QQ(1), "pivot entries are one"
        seen.append(col)
        for other_col in pivots:
            if other_col != col:
                assert other_col not in r, "pivot columns eliminated elsewhere"
    assert seen == sorted(seen)


@settings(max_examples=80, deadline=None)
@given(sparse_rows)
def test_rowspace_membership(rows):
    space = RowSpace()
    for row in rows:
        if row:
            space.add(dict(row))
    # sums of generators are members; reduction remainders are canonical
    total = {}
    for row in rows:
        for c, v in row.items():
            nv = total.get(c, QQ(0)) + v
            if nv:
                total[c] = nv
            else:
                del total[c]
    assert space.contains(total)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.tuples(st.integers(0, 3), st.integers(-3, 3)), max_size=4).map(
            lambda pairs: {c: QQ(v) for c, v in pairs if v}
        ),
        min_size=1,
        max_size=5,
    )
)
def test_kernel_basis_matches_dense_oracle(columns):
    nvars = len(columns)
    kernel = kernel_basis(list(columns))
    eq_rows = {}
    for j, col in enumerate(columns):
        for r, v in col.items():
            eq_rows.setdefault(r, [Fraction(0)] * nvars)[j] = Fraction(str(v))
    dense_kernel = kernel_of_columns(list(eq_rows.values()), nvars)
    assert len(kernel) == len(dense_kernel)
    for vec in kernel:
        image = {}
        for j, coeff in vec.items():
            for r, v in columns[j].items():
                image[r] = image.get(r, QQ(0)) + coeff * v
        assert not any(image.values())


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.tuples(st.integers(0, 4), st.integers(-3, 3)), max_size=4).map(
            lambda pairs: {c: QQ(v) for c, v in pairs if v}
        ),
        min_size=1,
        max_size=6,
    ),
    st.lists(st.integers(-3, 3), min_size=6, max_size=6),
)
def test_solve_sparse_solutions_check_out(rows, rhs_values):
    rhs = [QQ(v) for v in rhs_values[: len(rows)]]
    solution = solve_sparse(rows, rhs)
    if solution is None:
        return
    for row, b in zip(rows, rhs):
        total = QQ(0)
        for c, v in row.items():
            total += v * solution.get(c, QQ(0))
        assert total == b
