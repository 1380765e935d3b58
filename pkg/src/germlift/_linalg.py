"""Exact rational sparse row reduction.

All rank and kernel decisions in this package go through the RowSpace
class below, which maintains a reduced row-echelon basis (pivot entries 1,
pivot columns eliminated everywhere) over exact rationals.  Rows are
sparse dicts column -> coefficient.  gmpy2.mpq is used when available;
fractions.Fraction is a drop-in fallback.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as QQ

QQ0 = QQ(0)
QQ1 = QQ(1)


def qq(value) -> QQ:
    """Coerce ints / strings like '3/2' / rationals to the coefficient type."""
    if isinstance(value, str):
        return QQ(value)
    return QQ(value)


class RowSpace:
    """Incrementally built reduced row-echelon basis of a sparse row span.

    Columns are integers; the pivot of a row is its smallest column.
    Insertion order of equal spans does not affect the resulting basis,
    so any deterministic generator order yields a deterministic basis.
    """

    __slots__ = ("rows", "pivot_row", "_col_rows")

    def __init__(self):
        self.rows: list[dict] = []
        self.pivot_row: dict[int, int] = {}
        # column -> set of row indices with a nonzero entry there
        self._col_rows: dict[int, set] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.pivot_row)

    def reduce(self, row: dict) -> dict:
        """Return the remainder of row after elimination by the basis."""
        pivot_row = self.pivot_row
        rows = self.rows
        rem = dict(row)
        for col in sorted(row):
            coeff = rem.get(col)
            if not coeff:
                rem.pop(col, None)
                continue
            ridx = pivot_row.get(col)
            if ridx is None:
                continue
            base = rows[ridx]
            for c, v in base.items():
                nv = rem.get(c, QQ0) - coeff * v
                if nv:
                    rem[c] = nv
                else:
                    rem.pop(c, None)
        return rem

    def coordinates(self, row: dict):
        """Express row against the basis: (coeff per basis row, remainder)."""
        pivot_row = self.pivot_row
        rows = self.rows
        rem = dict(row)
        coeffs = {}
        for col in sorted(row):
            coeff = rem.get(col)
            if not coeff:
                rem.pop(col, None)
                continue
            ridx = pivot_row.get(col)
            if ridx is None:
                continue
            coeffs[ridx] = coeffs.get(ridx, QQ0) + coeff
            base = rows[ridx]
            for c, v in base.items():
                nv = rem.get(c, QQ0) - coeff * v
                if nv:
                    rem[c] = nv
                else:
                    rem.pop(c, None)
        return coeffs, rem

    def add(self, row: dict) -> bool:
        """Insert a row; True if it increased the rank."""
        rem = self.reduce(row)
        if not rem:
            return False
        lead = min(rem)
        inv = QQ1 / rem[lead]
        if inv != QQ1:
            rem = {c: v * inv for c, v in rem.items()}
        new_idx = len(self.rows)
        # eliminate the new pivot column from existing rows
        touching = self._col_rows.get(lead)
        if touching:
            for ridx in sorted(touching):
                base = self.rows[ridx]
                factor = base.get(lead)
                if not factor:
                    continue
                for c, v in rem.items():
                    nv = base.get(c, QQ0) - factor * v
                    if nv:
                        if c not in base:
                            self._col_rows.setdefault(c, set()).add(ridx)
                        base[c] = nv
                    else:
                        if c in base:
                            del base[c]
                            self._col_rows[c].discard(ridx)
        self.rows.append(rem)
        self.pivot_row[lead] = new_idx
        for c in rem:
            self._col_rows.setdefault(c, set()).add(new_idx)
        return True

    def add_all(self, rows) -> None:
        for row in rows:
            self.add(row)

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def contains_space(self, other: "RowSpace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def basis_rows(self) -> list[dict]:
        """Rows sorted by pivot column (the canonical RREF presentation)."""
        return [self.rows[self.pivot_row[c]] for c in sorted(self.pivot_row)]


def kernel_basis(columns: list[dict], ncols_hint=None) -> list[dict]:
    """Kernel of the linear map x -> sum_j x_j * columns[j].

    columns[j] is the sparse image of the j-th unit vector.  Returns a
    deterministic basis of sparse vectors over the column indices j,
    one per free variable, ordered by free-variable index.
    """
    njets = len(columns)
    # transpose into equation rows over variables 0..njets-1
    eq_rows: dict[int, dict] = {}
    for j, col in enumerate(columns):
        for r, v in col.items():
            eq_rows.setdefault(r, {})[j] = v
    space = RowSpace()
    for r in sorted(eq_rows):
        space.add(eq_rows[r])
    pivot_cols = set(space.pivot_row)
    free = [j for j in range(njets) if j not in pivot_cols]
    basis = []
    rows_by_pivot = [(c, space.rows[idx]) for c, idx in sorted(space.pivot_row.items())]
    for f in free:
        vec = {f: QQ1}
        for c, row in rows_by_pivot:
            coeff = row.get(f)
            if coeff:
                vec[c] = -coeff
        basis.append(vec)
    return basis


def solve_sparse(rows: list[dict], rhs: list, ncols_order=None):
    """Solve the sparse system rows . x = rhs exactly.

    rows[i] maps column -> coefficient; rhs[i] is the right-hand entry.
    Returns the solution dict with free variables set to zero, or None if
    the system is inconsistent.  The augmented column must compare larger
    than every unknown column, so unknown columns must be >= 0.
    """
    sentinel = 1 << 62  # augmented column; sorts after every unknown
    space = RowSpace()
    for i, row in enumerate(rows):
        r = dict(row)
        b = rhs[i]
        if b:
            r[sentinel] = b
        if r:
            space.add(r)
    if sentinel in space.pivot_row:
        return None
    solution = {}
    for c, idx in sorted(space.pivot_row.items()):
        row = space.rows[idx]
        val = row.get(sentinel, QQ0)
        # free variables are zero, so x_c = rhs-part directly
        solution[c] = val
    return solution
