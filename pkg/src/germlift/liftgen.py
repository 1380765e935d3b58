"""Minimal generator counts and explicit generators for the module of
vector fields liftable over a multigerm.

A target field xi is liftable when xi o f lies in the image of the
differential on every branch; verification is one exact linear solve per
branch.  Construction starts from a kernel basis of the level-(i+1) map at
the bijective level i and solves, per kernel element, a single joint linear
system for a higher-order target correction (shared across branches) and
per-branch source witnesses.  Free variables are set to zero after echelon
reduction, so outputs are deterministic and short.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._linalg import QQ0, RowSpace, kernel_basis, solve_sparse
from .germ import Multigerm
from .jetcore import (
    Polynomial,
    compose,
    grlex_key,
    monomials_upto,
    partial,
    poly_to_text,
    target_ring,
    truncate,
)
from .ksm import (
    HypothesisNotMetError,
    TargetVectorField,
    bijective_level,
    omega_kernel,
    predicted_kernel_dim,
)
from .localalg import InternalInvariantError, get_context


@dataclass(frozen=True)
class LiftWitness:
    """Per-branch source fields eta with xi o f = df o eta to the working order."""

    per_branch_eta: tuple  # one n-tuple of source polynomials per branch
    jet_order: int
    residual_order: int | None  # smallest degree with nonzero exact residual

    @property
    def exact(self) -> bool:
        return self.residual_order is None

    def describe(self) -> list:
        return [
            {"branch": j + 1, "eta": [poly_to_text(c) for c in eta]}
            for j, eta in enumerate(self.per_branch_eta)
        ]


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    witness: LiftWitness | None
    failed_branches: tuple


@dataclass(frozen=True)
class GeneratorSet:
    level: int
    rho: int
    generators: tuple  # TargetVectorField
    witnesses: tuple  # LiftWitness
    jet_order: int
    degree_bound: int

    def describe(self) -> dict:
        return {
            "level": self.level,
            "rho": self.rho,
            "jet_order": self.jet_order,
            "degree_bound": self.degree_bound,
            "generators": [
                {
                    "components": gen.describe(),
                    "exact": wit.exact,
                    "residual_order": wit.residual_order,
                    "witnesses": wit.describe(),
                }
                for gen, wit in zip(self.generators, self.witnesses)
            ],
        }


def _exact_compose(poly: Polynomial, comps) -> Polynomial:
    """Exact (untruncated) composition of a target polynomial with a branch."""
    max_deg = max((c.degree() for c in comps), default=0)
    bound = max(poly.degree(), 0) * max(max_deg, 1)
    return compose(poly, comps, bound)


def apply_differential(branch_components, eta, order=None) -> list:
    """df o eta, exactly (order=None) or truncated."""
    n = eta[0].ring.arity if eta else 0
    out = []
    for comp in branch_components:
        acc = Polynomial.zero(comp.ring)
        for k in range(n):
            if eta[k].is_zero():
                continue
            term = partial(comp, k) * eta[k]
            acc = acc + (term if order is None else truncate(term, order))
        out.append(acc)
    return out


def _branch_lift_solve(branch, rhs, jet_order):
    """Solve df o eta = rhs modulo degree > jet_order for one branch.

    Returns the n source-field coefficients (free variables zero) or None.
    """
    n = branch.n
    p = branch.p
    ring = branch.components[0].ring
    monos = monomials_upto(n, jet_order)
    col_of = {m: i for i, m in enumerate(monos)}
    block = len(monos)
    partials = [[partial(comp, k) for k in range(n)] for comp in branch.components]
    # equations indexed by (q, monomial); unknown columns (k, monomial)
    equations: dict = {}
    for k in range(n):
        for midx, mono in enumerate(monos):
            colid = k * block + midx
            for q in range(p):
                image = truncate(partials[q][k].mul_monomial(mono), jet_order)
                for m, c in image.items():
                    row = equations.setdefault((q, grlex_key(m)), {})
                    row[colid] = row.get(colid, QQ0) + c
    # monomials present only in the right-hand side still constrain the system
    for q in range(p):
        for m in truncate(rhs[q], jet_order).monomials():
            equations.setdefault((q, grlex_key(m)), {})
    rows = []
    rhs_vals = []
    for q, key in sorted(equations):
        rows.append(equations[(q, key)])
        rhs_vals.append(rhs[q].coefficient(key[1]))
    solution = solve_sparse(rows, rhs_vals)
    if solution is None:
        return None
    eta = []
    for k in range(n):
        terms = {}
        for midx, mono in enumerate(monos):
            v = solution.get(k * block + midx)
            if v:
                terms[mono] = v
        eta.append(Polynomial(ring, terms))
    return tuple(eta)


def verify_liftable(g: Multigerm, xi: TargetVectorField, jet_order: int) -> VerifyResult:
    """Decide jet-liftability of xi at the given order, with witnesses.

    Inconsistency on some branch is the ok=False outcome, not an error.
    """
    if xi.p != g.p:
        raise ValueError(f"field has {xi.p} components, germ target is {g.p}")
    etas = []
    failed = []
    for j, branch in enumerate(g.branches):
        rhs = [
            truncate(_exact_compose(c, list(branch.components)), jet_order)
            for c in xi.coefficients
        ]
        eta = _branch_lift_solve(branch, rhs, jet_order)
        if eta is None:
            failed.append(j + 1)
        else:
            etas.append(eta)
    if failed:
        return VerifyResult(ok=False, witness=None, failed_branches=tuple(failed))
    residual_order = None
    for j, branch in enumerate(g.branches):
        comps = list(branch.components)
        exact_rhs = [_exact_compose(c, comps) for c in xi.coefficients]
        image = apply_differential(comps, etas[j])
        for q in range(g.p):
            diff = exact_rhs[q] - image[q]
            if not diff.is_zero():
                order = diff.order()
                if residual_order is None or order < residual_order:
                    residual_order = order
    witness = LiftWitness(
        per_branch_eta=tuple(etas), jet_order=jet_order, residual_order=residual_order
    )
    return VerifyResult(ok=True, witness=witness, failed_branches=())


def min_generators(g: Multigerm, kmax=None) -> int:
    """Minimal number of generators of the liftable-field module, via the
    kernel dimension at the level above the bijective one; the direct matrix
    kernel and the closed-formula prediction must agree."""
    level = bijective_level(g, kmax)
    direct, _ = omega_kernel(g, level + 1)
    predicted = predicted_kernel_dim(g, level)
    if direct != predicted:
        raise InternalInvariantError(
            f"kernel dimension {direct} disagrees with closed formula {predicted}"
        )
    return direct


def default_construction_order(g: Multigerm, level: int) -> int:
    ell = get_context(g).ell
    return (level + 6) * ell


def construct_generators(
    g: Multigerm,
    degree_bound=None,
    jet_order=None,
    kmax=None,
    max_retries: int = 3,
) -> GeneratorSet:
    """Construct rho explicit polynomial generators.

    For each kernel basis field xi of the level-(i+1) map, one joint exact
    system is solved: unknowns are a target correction supported on degrees
    i+2..degree_bound (shared by all branches) and per-branch source fields;
    equations force the jets of (xi + correction) o f - df o eta to vanish
    through the working order on every branch.  The correction degree is
    searched upward from the smallest admissible value, and every solution
    must survive re-verification two jet orders deeper; otherwise both
    bounds are raised and the solve repeats.
    """
    level = bijective_level(g, kmax)
    rho, kernel_fields = omega_kernel(g, level + 1)
    n_work = jet_order if jet_order is not None else default_construction_order(g, level)
    ell = get_context(g).ell
    if degree_bound is not None and degree_bound < level + 2:
        raise ValueError(f"degree bound {degree_bound} is below level+2 = {level + 2}")
    for attempt in range(max_retries + 1):
        if degree_bound is not None:
            d_candidates = [degree_bound]
        else:
            d_candidates = list(range(level + 2, min(n_work, level + 2 + 4 * ell) + 1))
        for d_work in d_candidates:
            try:
                gens, wits = _construct_at(g, level, kernel_fields, d_work, n_work)
            except _InconsistentSystem:
                continue
            # deepening check: a solution only coincidentally liftable at the
            # working order fails re-verification two orders deeper
            if all(verify_liftable(g, gen, n_work + 2).ok for gen in gens):
                return GeneratorSet(
                    level=level,
                    rho=rho,
                    generators=tuple(gens),
                    witnesses=tuple(wits),
                    jet_order=n_work,
                    degree_bound=d_work,
                )
        n_work += 2 * ell
    raise HypothesisNotMetError(
        f"generator correction system stayed inconsistent up to jet order {n_work}"
    )


class _InconsistentSystem(Exception):
    pass


def _construct_at(g: Multigerm, level, kernel_fields, degree_bound, jet_order):
    p = g.p
    n = g.n
    ring = target_ring(p)
    corr_monos = [
        m
        for m in monomials_upto(p, degree_bound)
        if level + 2 <= sum(m) <= degree_bound
    ]
    corr_monos.sort(key=grlex_key)
    corr_index = {}
    for beta in corr_monos:
        for q in range(p):
            corr_index[(beta, q)] = len(corr_index)
    ncorr = len(corr_index)
    src_monos = monomials_upto(n, jet_order)
    src_block = len(src_monos)
    eta_offset = {}
    next_col = ncorr
    for j in range(g.num_branches):
        eta_offset[j] = next_col
        next_col += n * src_block
    # per-branch static data
    branch_static = []
    for j, branch in enumerate(g.branches):
        comps = list(branch.components)
        partials = [[partial(c, k) for k in range(n)] for c in comps]
        beta_jets = {
            beta: compose(Polynomial.from_monomial(ring, beta), comps, jet_order)
            for beta in corr_monos
        }
        branch_static.append((comps, partials, beta_jets))
    generators = []
    witnesses = []
    for xi in kernel_fields:
        rows_map: dict = {}
        rhs_map: dict = {}

        def touch(key):
            if key not in rows_map:
                rows_map[key] = {}
                rhs_map[key] = QQ0
            return rows_map[key]

        for j, branch in enumerate(g.branches):
            comps, partials, beta_jets = branch_static[j]
            base = eta_offset[j]
            for (beta, q), cidx in corr_index.items():
                jet = beta_jets[beta]
                for m, c in jet.items():
                    row = touch((j, q, grlex_key(m)))
                    row[cidx] = row.get(cidx, QQ0) + c
            for k in range(n):
                for midx, mono in enumerate(src_monos):
                    colid = base + k * src_block + midx
                    for q in range(p):
                        image = truncate(partials[q][k].mul_monomial(mono), jet_order)
                        for m, c in image.items():
                            row = touch((j, q, grlex_key(m)))
                            row[colid] = row.get(colid, QQ0) - c
            for q in range(p):
                rhs_poly = truncate(
                    _exact_compose(xi.coefficients[q], comps), jet_order
                )
                for m, c in rhs_poly.items():
                    touch((j, q, grlex_key(m)))
                    rhs_map[(j, q, grlex_key(m))] = rhs_map[(j, q, grlex_key(m))] - c
        keys = sorted(rows_map)
        rows = [rows_map[key] for key in keys]
        rhs = [rhs_map[key] for key in keys]
        solution = solve_sparse(rows, rhs)
        if solution is None:
            raise _InconsistentSystem
        corr_comps = [Polynomial.zero(ring) for _ in range(p)]
        for (beta, q), cidx in corr_index.items():
            v = solution.get(cidx)
            if v:
                corr_comps[q] = corr_comps[q] + Polynomial.from_monomial(ring, beta, v)
        full_field = TargetVectorField(
            coefficients=tuple(
                xi.coefficients[q] + corr_comps[q] for q in range(p)
            )
        )
        etas = []
        for j, branch in enumerate(g.branches):
            base = eta_offset[j]
            comps_eta = []
            for k in range(n):
                terms = {}
                for midx, mono in enumerate(src_monos):
                    v = solution.get(base + k * src_block + midx)
                    if v:
                        terms[mono] = v
                comps_eta.append(Polynomial(branch.components[0].ring, terms))
            etas.append(tuple(comps_eta))
        residual_order = None
        for j, branch in enumerate(g.branches):
            comps = list(branch.components)
            exact_rhs = [_exact_compose(c, comps) for c in full_field.coefficients]
            image = apply_differential(comps, etas[j])
            for q in range(p):
                diff = exact_rhs[q] - image[q]
                if not diff.is_zero():
                    order = diff.order()
                    if order <= jet_order:
                        raise InternalInvariantError(
                            "construction residual fails below the working order"
                        )
                    if residual_order is None or order < residual_order:
                        residual_order = order
        generators.append(full_field)
        witnesses.append(
            LiftWitness(
                per_branch_eta=tuple(etas),
                jet_order=jet_order,
                residual_order=residual_order,
            )
        )
    return generators, witnesses


@dataclass(frozen=True)
class ConstructionStep:
    """One round of the correction iteration: the accumulated field and the
    exact residual it leaves on each branch."""

    field: TargetVectorField
    residual_orders: tuple  # per branch, None = exact there
    residuals: tuple  # per branch, component texts of the exact residual

    @property
    def exact(self) -> bool:
        return all(order is None for order in self.residual_orders)


def construction_steps(
    g: Multigerm, field_index: int = 0, kmax=None, max_steps: int = 8
):
    """Diagnostic mode: construct one generator by repeated shallow solves.

    Starting from a kernel basis field of the level-(i+1) map, each step
    solves the joint correction system only up to the current smallest
    residual order, so the residual order strictly increases step by step
    (the per-step residuals of the hand iteration).  Stops at exactness or
    after max_steps and returns the steps together with the final field.
    """
    level = bijective_level(g, kmax)
    rho, kernel_fields = omega_kernel(g, level + 1)
    if not 0 <= field_index < rho:
        raise ValueError(f"field index {field_index} out of range 0..{rho - 1}")
    current = kernel_fields[field_index]
    steps = []
    for _ in range(max_steps):
        res_orders = []
        res_texts = []
        for branch in g.branches:
            comps = list(branch.components)
            rhs = [_exact_compose(c, comps) for c in current.coefficients]
            cap = max((p.degree() for p in rhs), default=0) + 2
            # lift to the deepest consistent jet order on this branch
            eta = None
            for o in range(1, cap + 1):
                attempt = _branch_lift_solve(branch, rhs, o)
                if attempt is None:
                    break
                eta = attempt
            image = (
                apply_differential(comps, eta)
                if eta is not None
                else [Polynomial.zero(comps[0].ring)] * g.p
            )
            worst = None
            parts = []
            for q in range(g.p):
                diff = rhs[q] - image[q]
                parts.append(poly_to_text(diff))
                if not diff.is_zero():
                    worst = diff.order() if worst is None else min(worst, diff.order())
            res_orders.append(worst)
            res_texts.append(tuple(parts))
        finite = [o for o in res_orders if o is not None]
        steps.append(
            ConstructionStep(
                field=current,
                residual_orders=tuple(res_orders),
                residuals=tuple(res_texts),
            )
        )
        if not finite:
            break
        order = min(finite)
        try:
            gens, _ = _construct_at(g, level, [current], order + 1, order)
        except _InconsistentSystem:
            break
        nxt = gens[0]
        if nxt == current:
            break
        current = nxt
    return steps, current


# -- span comparison --------------------------------------------------------------


def _field_space_columns(g: Multigerm, degree_bound: int, source_order: int):
    """Columns of the map (target-field coefficients) -> per-branch residues
    modulo the differential image, used to carve out the liftable jet fields."""
    p = g.p
    ring = target_ring(p)
    domain = [
        (beta, q)
        for beta in sorted(monomials_upto(p, degree_bound), key=grlex_key)
        for q in range(p)
    ]
    tr_spaces = []
    col_maps = []
    for branch in g.branches:
        monos = monomials_upto(g.n, source_order)
        col_of = {m: i for i, m in enumerate(monos)}
        block = len(monos)
        space = RowSpace()
        partials = [[partial(c, k) for k in range(g.n)] for c in branch.components]
        for k in range(g.n):
            for mono in monos:
                row = {}
                for q in range(p):
                    image = truncate(partials[q][k].mul_monomial(mono), source_order)
                    for m, c in image.items():
                        row[q * block + col_of[m]] = c
                if row:
                    space.add(row)
        tr_spaces.append(space)
        col_maps.append((col_of, block))
    columns = []
    for beta, q in domain:
        col = {}
        offset = 0
        for j, branch in enumerate(g.branches):
            comps = list(branch.components)
            col_of, block = col_maps[j]
            jet = compose(Polynomial.from_monomial(ring, beta), comps, source_order)
            vec = {q * block + col_of[m]: c for m, c in jet.items()}
            rem = tr_spaces[j].reduce(vec) if vec else {}
            for c, v in rem.items():
                col[offset + c] = v
            offset += g.p * block
        columns.append(col)
    return domain, columns


def min_branch_order(g: Multigerm) -> int:
    """Smallest vanishing order of a branch map (min over components)."""
    return min(
        min(c.order() for c in branch.components if not c.is_zero())
        for branch in g.branches
    )


def matched_source_order(g: Multigerm, degree_bound: int) -> int:
    """Deepest source jet order not contaminated by target terms of degree
    above degree_bound: such terms compose to source order at least
    (degree_bound+1) * (minimal branch order)."""
    return (degree_bound + 1) * min_branch_order(g) - 1


def liftable_field_space(g: Multigerm, degree_bound: int, source_order=None):
    """Echelon basis of the fields of degree <= degree_bound that are
    jet-liftable at the given source order: (domain, RowSpace over domain).

    Without an explicit source order, the order is deepened from the
    tail-safe bound until the space's dimension stops shrinking twice in a
    row, which pins the genuinely liftable fields of bounded degree.
    """
    if source_order is not None:
        domain, columns = _field_space_columns(g, degree_bound, source_order)
        vectors = kernel_basis(columns)
        space = RowSpace()
        for vec in vectors:
            space.add(vec)
        return domain, space
    ell = get_context(g).ell
    order = matched_source_order(g, degree_bound)
    cap = order + 6 * ell * max(degree_bound, 1) + 12
    domain, space = liftable_field_space(g, degree_bound, order)
    stable = 0
    while stable < 2 and order < cap:
        order += 1
        domain, nxt = liftable_field_space(g, degree_bound, order)
        stable = stable + 1 if nxt.rank == space.rank else 0
        space = nxt
    return domain, space


def _span_of_fields(g: Multigerm, fields, degree_bound: int, domain) -> RowSpace:
    slot = {key: idx for idx, key in enumerate(domain)}
    p = g.p
    ring = target_ring(p)
    space = RowSpace()
    for field in fields:
        for nu in sorted(monomials_upto(p, degree_bound), key=grlex_key):
            row = {}
            for q in range(p):
                shifted = truncate(field.coefficients[q].mul_monomial(nu), degree_bound)
                for m, c in shifted.items():
                    row[slot[(m, q)]] = c
            if row:
                space.add(row)
    return space


def _span_slice_at(g: Multigerm, fields, degree_bound: int, domain, jet_bound: int) -> RowSpace:
    """Fields of degree <= degree_bound that agree with a module combination
    of the given fields modulo degree > jet_bound: the jet span of all
    monomial multiples, intersected with the low-degree coordinate subspace."""
    slot = {key: idx for idx, key in enumerate(domain)}
    p = g.p
    big = RowSpace()
    for field in fields:
        ords = [c.order() for c in field.coefficients if not c.is_zero()]
        room = jet_bound - min(ords, default=jet_bound)
        for nu in sorted(monomials_upto(p, max(room, 0)), key=grlex_key):
            row = {}
            for q in range(p):
                shifted = truncate(field.coefficients[q].mul_monomial(nu), jet_bound)
                for m, c in shifted.items():
                    row[(sum(m), m, q)] = c
            if row:
                big.add(row)
    # combinations whose part of degree > degree_bound vanishes
    columns = []
    kept = []
    high_slot = {}
    for r in big.basis_rows():
        low = {}
        high = {}
        for (deg, m, q), c in r.items():
            if deg <= degree_bound:
                low[slot[(m, q)]] = c
            else:
                key = (m, q)
                if key not in high_slot:
                    high_slot[key] = len(high_slot)
                high[high_slot[key]] = c
        columns.append(high)
        kept.append(low)
    space = RowSpace()
    for vec in kernel_basis(columns):
        row = {}
        for j, coeff in vec.items():
            for c, v in kept[j].items():
                nv = row.get(c, QQ0) + coeff * v
                if nv:
                    row[c] = nv
                else:
                    del row[c]
        if row:
            space.add(row)
    return space


def _bounded_module_span(g: Multigerm, fields, degree_bound: int, domain) -> RowSpace:
    """Degree-bounded slice of the module generated by fields, computed at a
    deepening jet bound until the slice dimension stabilizes (coefficients
    are germs, so tail cancellations beyond any fixed degree must be allowed)."""
    max_gen_deg = max(
        (max(c.degree() for c in f.coefficients) for f in fields), default=0
    )
    jet_bound = degree_bound + max_gen_deg + 1
    space = _span_slice_at(g, fields, degree_bound, domain, jet_bound)
    stable = 0
    cap = jet_bound + 4 * max_gen_deg + 12
    while stable < 2 and jet_bound < cap:
        jet_bound += 1
        nxt = _span_slice_at(g, fields, degree_bound, domain, jet_bound)
        stable = stable + 1 if nxt.rank == space.rank else 0
        space = nxt
    return space


def span_check(g: Multigerm, gens, degree_bound: int, source_order=None) -> bool:
    """True iff the degree-bounded part of the module generated by gens is
    exactly the space of liftable fields of that degree."""
    fields = gens.generators if isinstance(gens, GeneratorSet) else tuple(gens)
    domain, lift_space = liftable_field_space(g, degree_bound, source_order)
    gen_space = _bounded_module_span(g, fields, degree_bound, domain)
    return lift_space.contains_space(gen_space) and gen_space.contains_space(
        lift_space
    )


def span_equal(g: Multigerm, fields_a, fields_b, degree_bound: int) -> bool:
    """True iff two generator families span the same jet module."""
    fields_a = fields_a.generators if isinstance(fields_a, GeneratorSet) else tuple(fields_a)
    fields_b = fields_b.generators if isinstance(fields_b, GeneratorSet) else tuple(fields_b)
    p = g.p
    domain = [
        (m, q)
        for m in sorted(monomials_upto(p, degree_bound), key=grlex_key)
        for q in range(p)
    ]
    span_a = _span_of_fields(g, fields_a, degree_bound, domain)
    span_b = _span_of_fields(g, fields_b, degree_bound, domain)
    return span_a.contains_space(span_b) and span_b.contains_space(span_a)


def parse_field(g: Multigerm, component_texts) -> TargetVectorField:
    from .jetcore import parse_poly

    ring = target_ring(g.p)
    comps = tuple(parse_poly(text, ring) for text in component_texts)
    if len(comps) != g.p:
        raise ValueError(f"expected {g.p} components")
    return TargetVectorField(coefficients=comps)
