"""Higher reduced Kodaira-Spencer-Mather maps as exact matrices.

The level-i map sends degree-i target monomial vector fields to the quotient
of the i-th graded piece of the pullback filtration on fields along the germ
by the part reachable through the differential.  The reachable part is
computed from a per-branch tower of modules

    M_i = { source fields eta : df o eta lies in I^i * (fields along f) },

carried as explicit generator lists: level i+1 is generated by lifts of the
kernel of the induced map on M_i/(m * M_i)-coordinates together with the
products (component) * (generator).  Everything stays inside the small
graded quotients; no full jet-space echelon is ever needed on this path.
The literal jet-space objects (tr_e_jets, pullback_power_jets) are also
provided and back the tests on small inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from ._linalg import QQ0, QQ1, RowSpace, kernel_basis
from .germ import Multigerm
from .jetcore import (
    Polynomial,
    grlex_key,
    monomials_of_degree,
    monomials_upto,
    partial,
    poly_to_text,
    target_ring,
    truncate,
)
from .localalg import (
    BranchTower,
    GermContext,
    JetOrderTooSmallError,
    get_context,
    predicted_graded,
)


class HypothesisNotMetError(RuntimeError):
    """A mathematical hypothesis required by the requested operation fails."""


@dataclass(frozen=True)
class TargetVectorField:
    """A polynomial vector field on the target: component q multiplies d/dX_q."""

    coefficients: tuple

    @property
    def p(self) -> int:
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def describe(self) -> list:
        return [poly_to_text(c) for c in self.coefficients]

    def __repr__(self):
        return f"TargetVectorField({self.describe()})"


def field_from_vector(p: int, vector: dict, domain_basis) -> TargetVectorField:
    ring = target_ring(p)
    comps = [Polynomial.zero(ring) for _ in range(p)]
    for j, coeff in sorted(vector.items()):
        alpha, q = domain_basis[j]
        comps[q] = comps[q] + Polynomial.from_monomial(ring, alpha, coeff)
    return TargetVectorField(coefficients=tuple(comps))


class BranchMTower:
    """Generators of the modules M_i for one branch, with the induced maps
    into the graded pieces (columns, image space, kernel data)."""

    def __init__(self, ctx: GermContext, branch_index: int):
        self.ctx = ctx
        self.branch_index = branch_index
        tower = ctx.towers[branch_index]
        branch = tower.branch
        self.n = branch.n
        self.p = branch.p
        ring = branch.components[0].ring
        unit = []
        for k in range(self.n):
            vec = [Polynomial.zero(ring) for _ in range(self.n)]
            vec[k] = Polynomial.constant(ring, 1)
            unit.append(tuple(vec))
        self.gens: list[list] = [unit]  # level -> list of n-tuples of polynomials
        self.labels: list[list] = [[("e", k) for k in range(self.n)]]
        self.columns: list[list] = []  # level -> G-columns over (gen, basis mono)
        self.image_space: list[RowSpace] = []
        self.kernel_mingens: list[list] = []  # level -> kernel vectors (dicts)
        self._partials = [
            [partial(comp, k) for k in range(self.n)] for comp in branch.components
        ]

    def tower(self) -> BranchTower:
        return self.ctx.towers[self.branch_index]

    def tf(self, gen) -> list:
        """Components of df o eta for a source field eta, at the working order."""
        tower = self.tower()
        out = []
        for q in range(self.p):
            acc = Polynomial.zero(gen[0].ring)
            for k in range(self.n):
                if gen[k].is_zero():
                    continue
                acc = acc + truncate(self._partials[q][k] * gen[k], tower.L)
            out.append(acc)
        return out

    def extend_to(self, level: int):
        """Populate maps and generators so that levels 0..level are usable."""
        tower = self.tower()
        while len(self.columns) <= level:
            i = len(self.columns)
            piece = tower.graded_piece(i)
            d = piece.dim
            gens = self.gens[i]
            columns = []
            space = RowSpace()
            for gen in gens:
                images = self.tf(gen)
                for b_mono in tower.q_basis:
                    col = {}
                    for q in range(self.p):
                        if images[q].is_zero():
                            continue
                        shifted = truncate(images[q].mul_monomial(b_mono), tower.L)
                        if shifted.is_zero():
                            continue
                        for ridx, v in piece.coords(shifted).items():
                            if v:
                                col[q * d + ridx] = v
                    columns.append(col)
                    if col:
                        space.add(dict(col))
            self.columns.append(columns)
            self.image_space.append(space)
            if len(self.gens) <= i + 1:
                self._build_next_gens(i, columns)

    def _q_action_tables(self):
        tower = self.tower()
        delta = tower.delta
        slot = {c: idx for idx, c in enumerate(tower.std_cols(1))}
        tables = []
        ring = tower.branch.components[0].ring
        for k in range(self.n):
            var_mono = tuple(1 if j == k else 0 for j in range(self.n))
            table = []
            for b_mono in tower.q_basis:
                prod = Polynomial.from_monomial(ring, tuple(a + b for a, b in zip(b_mono, var_mono)))
                rem = tower.class_row(1, prod)
                table.append([(slot[c], v) for c, v in sorted(rem.items())])
            tables.append(table)
        return tables

    def _build_next_gens(self, i: int, columns: list):
        tower = self.tower()
        delta = tower.delta
        gens = self.gens[i]
        kernel = kernel_basis(columns)
        # Nakayama-minimal generators of the kernel as a module over the
        # local quotient algebra: keep vectors independent modulo m * kernel.
        act = self._q_action_tables()
        mk = RowSpace()
        for vec in kernel:
            for k in range(self.n):
                table = act[k]
                moved = {}
                for idx, coeff in vec.items():
                    t, b = divmod(idx, delta)
                    for b2, v in table[b]:
                        key = t * delta + b2
                        nv = moved.get(key, QQ0) + coeff * v
                        if nv:
                            moved[key] = nv
                        else:
                            del moved[key]
                if moved:
                    mk.add(moved)
        mingens = []
        for vec in kernel:
            if mk.add(dict(vec)):
                mingens.append(vec)
        self.kernel_mingens.append(mingens)
        ring = tower.branch.components[0].ring
        new_gens = []
        new_labels = []
        seen = set()
        serial = 0
        for vec in mingens:
            lifted = [Polynomial.zero(ring) for _ in range(self.n)]
            for idx, coeff in sorted(vec.items()):
                t, b = divmod(idx, delta)
                b_mono = tower.q_basis[b]
                gen = gens[t]
                for k in range(self.n):
                    if not gen[k].is_zero():
                        lifted[k] = lifted[k] + truncate(
                            gen[k].mul_monomial(b_mono, coeff), tower.L
                        )
            if any(not c.is_zero() for c in lifted):
                label = ("k", i + 1, serial)
                serial += 1
                new_gens.append(tuple(lifted))
                new_labels.append(label)
                seen.add(label)
        for t, gen in enumerate(gens):
            base_label = self.labels[i][t]
            if base_label[0] == "m":
                base, counts = base_label[1], list(base_label[2])
            else:
                base, counts = base_label, [0] * self.p
            for q in range(self.p):
                counts[q] += 1
                label = ("m", base, tuple(counts))
                counts[q] -= 1
                if label in seen:
                    continue
                seen.add(label)
                comp = self.tower().branch.components[q]
                product = tuple(
                    truncate(comp * gen[k], self.tower().L) for k in range(self.n)
                )
                if any(not c.is_zero() for c in product):
                    new_gens.append(product)
                    new_labels.append(label)
        self.gens.append(new_gens)
        self.labels.append(new_labels)


@dataclass(frozen=True)
class OmegaMap:
    """Matrix model of the level-i map from degree-i target vector fields."""

    level: int
    domain_basis: tuple  # ((alpha, q), ...) in (graded-lex, component) order
    target_dim: int
    columns: tuple  # quotient-coordinate column per domain element
    rank: int
    per_branch_target_dims: tuple

    @property
    def domain_dim(self) -> int:
        return len(self.domain_basis)

    @property
    def surjective(self) -> bool:
        return self.rank == self.target_dim

    @property
    def injective(self) -> bool:
        return self.rank == self.domain_dim

    @property
    def kernel_dim(self) -> int:
        return self.domain_dim - self.rank


def _mtowers(ctx: GermContext, level: int) -> list:
    ctx.ensure_depth(level + 1)
    towers = ctx._mtowers
    if not towers:
        for j in range(len(ctx.germ.branches)):
            towers[j] = BranchMTower(ctx, j)
    for j in range(len(ctx.germ.branches)):
        towers[j].extend_to(level)
    return [towers[j] for j in range(len(ctx.germ.branches))]


def omega_map(g: Multigerm, i: int, jet_order=None) -> OmegaMap:
    """Build the level-i map: domain basis (degree-i target monomial, component),
    target the graded piece modulo the differential-reachable subspace."""
    if i < 0:
        raise ValueError("level must be non-negative")
    ctx = get_context(g)
    if jet_order is not None and jet_order < (i + 3) * ctx.ell:
        raise JetOrderTooSmallError(
            f"jet order {jet_order} is below the sound bound {(i + 3) * ctx.ell} "
            f"for the level-{i} map; raise it"
        )
    cached = ctx._omegas.get(i)
    if cached is not None:
        return cached
    mtowers = _mtowers(ctx, i)
    pieces = ctx.pieces(i)
    p = g.p
    domain_basis = tuple(
        (alpha, q)
        for alpha in sorted(monomials_of_degree(p, i), key=grlex_key)
        for q in range(p)
    )
    per_branch_dims = []
    branch_data = []
    offset = 0
    for j, piece in enumerate(pieces):
        d = piece.dim
        w = mtowers[j].image_space[i]
        free_cols = [c for c in range(p * d) if c not in w.pivot_row]
        slot = {c: offset + idx for idx, c in enumerate(free_cols)}
        per_branch_dims.append(len(free_cols))
        branch_data.append((piece, w, slot, d))
        offset += len(free_cols)
    target_dim = offset
    columns = []
    for alpha, q in domain_basis:
        col = {}
        for piece, w, slot, d in branch_data:
            fpow = piece.tower.f_power(alpha)
            vec = {}
            if not fpow.is_zero():
                for ridx, v in piece.coords(fpow).items():
                    if v:
                        vec[q * d + ridx] = v
            rem = w.reduce(vec) if vec else {}
            for c, v in rem.items():
                col[slot[c]] = v
        columns.append(col)
    space = RowSpace()
    for col in columns:
        if col:
            space.add(dict(col))
    result = OmegaMap(
        level=i,
        domain_basis=domain_basis,
        target_dim=target_dim,
        columns=tuple(columns),
        rank=space.rank,
        per_branch_target_dims=tuple(per_branch_dims),
    )
    ctx._omegas[i] = result
    return result


def omega_kernel(g: Multigerm, i: int):
    """Exact kernel of the level-i map, as homogeneous degree-i vector fields."""
    omega = omega_map(g, i)
    vectors = kernel_basis(list(omega.columns))
    fields = [field_from_vector(g.p, vec, omega.domain_basis) for vec in vectors]
    return len(fields), fields


def predicted_kernel_dim(g: Multigerm, i: int) -> int:
    """Closed-formula kernel dimension of the level-(i+1) map, valid when that
    map is surjective: p*C(p+i, i+1) minus the graded target dimension."""
    omega = omega_map(g, i + 1)
    if not omega.surjective:
        raise HypothesisNotMetError(
            f"level-{i + 1} map is not surjective; the closed formula does not apply"
        )
    ctx = get_context(g)
    p, n = g.p, g.n
    next_pred = predicted_graded(g, i + 1)
    cur_pred = predicted_graded(g, i)
    return p * comb(p + i, i + 1) - (
        (p - n) * next_pred.i_delta + next_pred.i_gamma - cur_pred.i_gamma
    )


@dataclass(frozen=True)
class LevelSummary:
    i: int
    domain_dim: int
    target_dim: int
    rank: int
    surjective: bool
    injective: bool
    kernel_dim: int


@dataclass(frozen=True)
class IndexReport:
    i1: int | None
    i2: int | None
    i2_status: str  # "found" | "minus_infinity" | "at_least_kmax"
    kmax: int
    levels: tuple

    @property
    def i1_found(self) -> bool:
        return self.i1 is not None

    @property
    def well_behaved(self) -> int | None:
        if self.i1 is not None and self.i2 is not None:
            return self.i1 - self.i2
        return None

    @property
    def bijective_level(self) -> int | None:
        for lv in self.levels:
            if lv.surjective and lv.injective:
                return lv.i
        return None


def level_summary(g: Multigerm, i: int) -> LevelSummary:
    omega = omega_map(g, i)
    return LevelSummary(
        i=i,
        domain_dim=omega.domain_dim,
        target_dim=omega.target_dim,
        rank=omega.rank,
        surjective=omega.surjective,
        injective=omega.injective,
        kernel_dim=omega.kernel_dim,
    )


def default_kmax(g: Multigerm) -> int:
    return get_context(g).ell + 2


def indices(g: Multigerm, kmax=None) -> IndexReport:
    """Scan levels upward for the first surjective and last injective map.

    Monotonicity (surjectivity upward, injectivity downward) lets the scan
    stop once both the first surjective level and the first non-injective
    level have been seen.
    """
    if kmax is None:
        kmax = default_kmax(g)
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    levels = []
    first_surjective = None
    first_non_injective = None
    for i in range(kmax + 1):
        summary = level_summary(g, i)
        levels.append(summary)
        if summary.surjective and first_surjective is None:
            first_surjective = i
        if not summary.injective and first_non_injective is None:
            first_non_injective = i
        if first_surjective is not None and first_non_injective is not None:
            break
    if first_non_injective is None:
        i2, i2_status = None, "at_least_kmax"
    elif first_non_injective == 0:
        i2, i2_status = None, "minus_infinity"
    else:
        i2, i2_status = first_non_injective - 1, "found"
    return IndexReport(
        i1=first_surjective,
        i2=i2,
        i2_status=i2_status,
        kmax=kmax,
        levels=tuple(levels),
    )


def bijective_level(g: Multigerm, kmax=None) -> int:
    report = indices(g, kmax)
    level = report.bijective_level
    if level is None:
        raise HypothesisNotMetError(
            "no level with a bijective map was found within the scan bound "
            f"(i1={report.i1!r}, i2={report.i2!r}, kmax={report.kmax}); "
            "the minimal-generator count is outside this method's hypothesis"
        )
    return level


# -- literal jet-space subspaces -------------------------------------------------


@dataclass
class JetSubspace:
    """Echelonized subspace of the degree-<=N jets of fields along the germ.

    Columns are indexed (branch, component, source monomial) in that
    lexicographic priority, monomials ascending graded-lex.
    """

    jet_order: int
    germ: Multigerm
    space: RowSpace

    def __post_init__(self):
        n = self.germ.n
        self.monos = monomials_upto(n, self.jet_order)
        self.mono_col = {m: i for i, m in enumerate(self.monos)}
        self.block = len(self.monos)

    def column(self, branch_j: int, q: int, mono: tuple) -> int:
        return (branch_j * self.germ.p + q) * self.block + self.mono_col[mono]

    def vector_row(self, branch_j: int, comps) -> dict:
        row = {}
        base = branch_j * self.germ.p
        for q, poly in enumerate(comps):
            for m, c in truncate(poly, self.jet_order).items():
                row[(base + q) * self.block + self.mono_col[m]] = c
        return row

    @property
    def dim(self) -> int:
        return self.space.rank

    def contains_vector(self, branch_vectors) -> bool:
        """branch_vectors: list of p-tuples of source polynomials, one per branch."""
        row = {}
        for j, comps in enumerate(branch_vectors):
            row.update(self.vector_row(j, comps))
        return self.space.contains(row)


def tr_e_jets(g: Multigerm, jet_order: int) -> JetSubspace:
    """Jet span of the image of the differential: rows are the jets of
    (df/dx_k) * monomial on each branch."""
    sub = JetSubspace(jet_order=jet_order, germ=g, space=RowSpace())
    for j, branch in enumerate(g.branches):
        partials = [
            [partial(comp, k) for k in range(g.n)] for comp in branch.components
        ]
        for k in range(g.n):
            cols = [partials[q][k] for q in range(g.p)]
            for mono in sub.monos:
                row = sub.vector_row(j, [c.mul_monomial(mono) for c in cols])
                if row:
                    sub.space.add(row)
    return sub


def pullback_power_jets(g: Multigerm, i: int, jet_order: int) -> JetSubspace:
    """Jet span of the fields with coefficients in the i-th pullback-ideal power."""
    if i < 0:
        raise ValueError("level must be non-negative")
    sub = JetSubspace(jet_order=jet_order, germ=g, space=RowSpace())
    if i == 0:
        total_cols = g.num_branches * g.p * sub.block
        for c in range(total_cols):
            sub.space.add({c: QQ1})
        return sub
    for j, branch in enumerate(g.branches):
        ideal = RowSpace()
        mono_rows = []
        for alpha in sorted(monomials_of_degree(g.p, i), key=grlex_key):
            fpow = Polynomial.constant(branch.components[0].ring, 1)
            for q, e in enumerate(alpha):
                for _ in range(e):
                    fpow = truncate(fpow * branch.components[q], jet_order)
            for mono in sub.monos:
                poly = truncate(fpow.mul_monomial(mono), jet_order)
                row = {sub.mono_col[m]: c for m, c in poly.items()}
                if row and ideal.add(row):
                    pass
        base = j * g.p
        for r in ideal.basis_rows():
            for q in range(g.p):
                sub.space.add({(base + q) * sub.block + c: v for c, v in r.items()})
    return sub


def liftable_denominator_jets(g: Multigerm, i: int, jet_order: int) -> JetSubspace:
    """Jet span of (df o M_i): the differential image intersected with the
    i-th pullback power of the field module, generated from the module tower."""
    ctx = get_context(g)
    mtowers = _mtowers(ctx, i)
    sub = JetSubspace(jet_order=jet_order, germ=g, space=RowSpace())
    for j, mt in enumerate(mtowers):
        for gen in mt.gens[i]:
            images = mt.tf(gen)
            for mono in sub.monos:
                row = sub.vector_row(j, [c.mul_monomial(mono) for c in images])
                if row:
                    sub.space.add(row)
    return sub


def graded_reachable_equality(g: Multigerm, i: int, jet_order: int) -> bool:
    """Jet-level equality of (pullback ideal) * (df o M_(i+1)) with df o M_(i+2):
    the subspace identity behind the generator construction, checked by double
    inclusion of echelon bases at the given order."""
    ctx = get_context(g)
    mtowers = _mtowers(ctx, i + 2)
    left = JetSubspace(jet_order=jet_order, germ=g, space=RowSpace())
    for j, mt in enumerate(mtowers):
        branch = g.branches[j]
        for gen in mt.gens[i + 1]:
            images = mt.tf(gen)
            for q in range(g.p):
                scaled = [
                    truncate(branch.components[q] * c, jet_order) for c in images
                ]
                for mono in left.monos:
                    row = left.vector_row(j, [c.mul_monomial(mono) for c in scaled])
                    if row:
                        left.space.add(row)
    right = liftable_denominator_jets(g, i + 2, jet_order)
    return right.space.contains_space(left.space) and left.space.contains_space(
        right.space
    )
