"""Graded local-algebra invariants of a multigerm.

The pullback ideal I = (f_1,...,f_p) of a branch is modelled by an exact
tower of echelon bases for the jet images of I, I^2, ..., I^depth at a
single working order L = depth*ell - 1.  Stabilization certifies that all
monomials of degree >= ell lie in I, hence m^(k*ell) lies in I^k, so every
quotient C/I^k read off the tower at this order is exact, not a truncation
heuristic.  The graded pieces I^i/I^(i+1) then live inside the small space
C/I^(i+1) and all rank decisions happen there.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from ._linalg import QQ0, QQ1, RowSpace
from .germ import Branch, Multigerm, stabilization
from .jetcore import (
    Polynomial,
    grlex_key,
    monomials_of_degree,
    monomials_upto,
    partial,
    truncate,
)


class JetOrderTooSmallError(ValueError):
    """The requested jet order is below the sound truncation bound."""


class InternalInvariantError(RuntimeError):
    """An exact cross-check that should never fail did fail."""


class BranchTower:
    """Echelon tower of pullback-ideal powers for one branch.

    levels[i] (1 <= i <= depth) is the reduced echelon basis of the jet
    image of I^i at order L; its non-pivot columns are the standard
    monomials, a basis of C/I^i.
    """

    def __init__(self, branch: Branch, ell: int, depth: int):
        self.branch = branch
        self.ell = ell
        self.depth = depth
        n = branch.n
        self.L = max(depth * ell - 1, 0)
        self.monos = monomials_upto(n, self.L)
        self.col_of = {m: i for i, m in enumerate(self.monos)}
        self._shift = []
        for comp in branch.components:
            comp_t = truncate(comp, self.L)
            terms = sorted(comp_t.items(), key=lambda mc: grlex_key(mc[0]))
            table = []
            for mono in self.monos:
                room = self.L - sum(mono)
                entries = [
                    (self.col_of[tuple(a + b for a, b in zip(mono, m2))], c)
                    for m2, c in terms
                    if sum(m2) <= room
                ]
                table.append(entries)
            self._shift.append(table)
        self.levels: list = [None]
        self._build_levels()
        self._std_cols = {
            i: [c for c in range(len(self.monos)) if c not in self.levels[i].pivot_row]
            for i in range(1, depth + 1)
        }
        self.q_basis = [self.monos[c] for c in self._std_cols[1]]
        self.delta = len(self.q_basis)
        self._fpow = {(0,) * branch.p: Polynomial.constant(branch.components[0].ring, 1)}
        self._pieces = {}

    def _row_times_component(self, row: dict, q: int) -> dict:
        table = self._shift[q]
        acc = {}
        for c0, v0 in row.items():
            for c1, v1 in table[c0]:
                nv = acc.get(c1, QQ0) + v0 * v1
                if nv:
                    acc[c1] = nv
                else:
                    del acc[c1]
        return acc

    def _build_levels(self):
        p = self.branch.p
        ncols = len(self.monos)
        for i in range(1, self.depth + 1):
            space = RowSpace()
            if i == 1:
                sources = [{c: QQ1} for c in range(ncols)]
            else:
                sources = self.levels[i - 1].basis_rows()
            for q in range(p):
                for src in sources:
                    prod = self._row_times_component(src, q)
                    if prod:
                        space.add(prod)
            self.levels.append(space)

    # -- normal forms -----------------------------------------------------------

    def row_of(self, poly: Polynomial) -> dict:
        col_of = self.col_of
        return {
            col_of[m]: c for m, c in truncate(poly, self.L).items()
        }

    def class_row(self, level: int, poly: Polynomial) -> dict:
        """Normal form of poly modulo I^level, as a row on standard monomials."""
        return self.levels[level].reduce(self.row_of(poly))

    def std_cols(self, level: int) -> list:
        return self._std_cols[level]

    def f_power(self, alpha: tuple) -> Polynomial:
        """Jet of f^alpha = f_1^a1 * ... * f_p^ap at the working order."""
        cached = self._fpow.get(alpha)
        if cached is not None:
            return cached
        q = next(k for k, e in enumerate(alpha) if e)
        prev = tuple(e - 1 if k == q else e for k, e in enumerate(alpha))
        poly = truncate(self.f_power(prev) * self.branch.components[q], self.L)
        self._fpow[alpha] = poly
        return poly

    def graded_piece(self, i: int) -> "GradedPiece":
        piece = self._pieces.get(i)
        if piece is None:
            if i + 1 > self.depth:
                raise JetOrderTooSmallError(
                    f"tower depth {self.depth} cannot serve graded level {i}"
                )
            piece = GradedPiece(self, i)
            self._pieces[i] = piece
        return piece


class GradedPiece:
    """The quotient I^i / I^(i+1) of one branch, coordinatized inside
    C/I^(i+1) by the echelon of the canonical spanning family f^alpha * b."""

    def __init__(self, tower: BranchTower, i: int):
        self.tower = tower
        self.level = i
        self.space = RowSpace()
        self.tags = []
        p = tower.branch.p
        for alpha in monomials_of_degree(p, i):
            fpow = tower.f_power(alpha)
            for b_mono in tower.q_basis:
                row = tower.levels[i + 1].reduce(
                    tower.row_of(fpow.mul_monomial(b_mono))
                )
                if row and self.space.add(row):
                    self.tags.append((alpha, b_mono))
        self.dim = self.space.rank

    def rep(self, k: int) -> Polynomial:
        alpha, b_mono = self.tags[k]
        return self.tower.f_power(alpha).mul_monomial(b_mono)

    def coords(self, poly: Polynomial) -> dict:
        """Coordinates of the class of poly (an element of I^i) on the basis."""
        row = self.tower.class_row(self.level + 1, poly)
        coeffs, rem = self.space.coordinates(row)
        if rem:
            raise InternalInvariantError(
                "polynomial is not in the expected ideal power"
            )
        return coeffs


class GermContext:
    """Cached per-germ computation state: stabilization data and branch towers."""

    def __init__(self, germ: Multigerm, nmax: int = 12):
        self.germ = germ
        self.stab = stabilization(germ, nmax)
        self.depth = 0
        self.towers: list[BranchTower] = []
        self._mtowers = {}
        self._omegas = {}

    @property
    def delta(self) -> int:
        return self.stab.delta

    @property
    def ell(self) -> int:
        return self.stab.ell

    def ensure_depth(self, depth: int):
        if depth > self.depth:
            self.towers = [
                BranchTower(branch, self.stab.ell_per_branch[j], depth)
                for j, branch in enumerate(self.germ.branches)
            ]
            self.depth = depth
            self._mtowers = {}
            self._omegas = {}
        return self.towers

    def pieces(self, i: int) -> list:
        self.ensure_depth(i + 1)
        return [tower.graded_piece(i) for tower in self.towers]


_contexts: dict = {}


def get_context(germ: Multigerm, nmax: int = 12) -> GermContext:
    ctx = _contexts.get(germ)
    if ctx is None or (ctx.stab is None):
        ctx = GermContext(germ, nmax)
        _contexts[germ] = ctx
    return ctx


def clear_context_cache():
    _contexts.clear()


# -- the graded invariants -----------------------------------------------------


@dataclass(frozen=True)
class GradedInvariants:
    i: int
    i_delta: int
    i_gamma: int


def required_jet_order(g: Multigerm, i: int) -> int:
    """Sound default truncation order for level-i computations."""
    ell = get_context(g).ell
    return (i + 2) * ell


def _check_jet_order(g: Multigerm, i: int, jet_order):
    if jet_order is not None and jet_order < required_jet_order(g, i):
        raise JetOrderTooSmallError(
            f"jet order {jet_order} is below the sound bound "
            f"{required_jet_order(g, i)} for level {i}; raise it"
        )


def graded_delta(g: Multigerm, i: int, jet_order=None) -> int:
    """dim of the i-th graded piece of the pullback-ideal filtration,
    summed over branches (exact, independent of jet order in the valid range)."""
    _check_jet_order(g, i, jet_order)
    ctx = get_context(g)
    return sum(piece.dim for piece in ctx.pieces(i))


def _tbar_columns(piece: GradedPiece):
    """Columns of the induced differential map on the i-th graded piece
    for one branch: domain (basis element, source slot), codomain
    (target component, basis element)."""
    tower = piece.tower
    branch = tower.branch
    n, p = branch.n, branch.p
    partials = [
        [partial(comp, k) for k in range(n)] for comp in branch.components
    ]
    d = piece.dim
    columns = []
    for k in range(n):
        for bidx in range(d):
            rep = piece.rep(bidx)
            col = {}
            for q in range(p):
                image = truncate(rep * partials[q][k], tower.L)
                if image.is_zero():
                    continue
                for ridx, v in piece.coords(image).items():
                    if v:
                        col[q * d + ridx] = v
            columns.append(col)
    return columns


def graded_gamma(g: Multigerm, i: int, jet_order=None) -> int:
    """Kernel dimension of the induced differential on the i-th graded piece
    (n copies to p copies), summed over branches."""
    _check_jet_order(g, i, jet_order)
    ctx = get_context(g)
    total = 0
    for piece in ctx.pieces(i):
        columns = _tbar_columns(piece)
        space = RowSpace()
        for col in columns:
            if col:
                space.add(dict(col))
        total += len(columns) - space.rank
    return total


def predicted_graded(g: Multigerm, i: int) -> GradedInvariants:
    """Closed-formula values: binomial(n+i-1, i) times (delta, delta - |S|)."""
    ctx = get_context(g)
    factor = comb(g.n + i - 1, i)
    delta = ctx.delta
    return GradedInvariants(
        i=i, i_delta=factor * delta, i_gamma=factor * (delta - g.num_branches)
    )


def tke_codim(g: Multigerm) -> int:
    """Codimension of the extended contact tangent space inside all vector
    fields along the germ, computed as an exact jet-quotient rank and
    cross-checked against (p - n) * delta + gamma."""
    ctx = get_context(g)
    ctx.ensure_depth(1)
    total = 0
    for j, tower in enumerate(ctx.towers):
        branch = tower.branch
        n, p = branch.n, branch.p
        delta_j = tower.delta
        std = tower.std_cols(1)
        slot = {c: idx for idx, c in enumerate(std)}
        space = RowSpace()
        partials = [
            [partial(comp, k) for k in range(n)] for comp in branch.components
        ]
        for k in range(n):
            for b_mono in tower.q_basis:
                row = {}
                for q in range(p):
                    image = partials[q][k].mul_monomial(b_mono)
                    rem = tower.class_row(1, image)
                    for c, v in rem.items():
                        row[q * delta_j + slot[c]] = v
                if row:
                    space.add(row)
        total += p * delta_j - space.rank
    expected = (g.p - g.n) * ctx.delta + graded_gamma(g, 0)
    if total != expected:
        raise InternalInvariantError(
            f"contact-space codimension {total} disagrees with closed form {expected}"
        )
    return total
