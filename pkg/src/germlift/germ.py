"""Multigerm model: validation, corank, and pullback-ideal stabilization.

A multigerm is a finite family of polynomial map-germs (K^n,0) -> (K^p,0),
one branch per base point, each stored in its own centered source chart.
Stabilization finds delta per branch together with an order ell such that
every source monomial of degree >= ell lies in the pullback ideal; the
certificate is Nakayama's lemma applied to two consecutive jet quotients,
so every truncation bound derived from ell downstream is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._linalg import RowSpace
from .jetcore import (
    Ring,
    monomials_upto,
    parse_poly,
    poly_to_text,
    source_ring,
    target_ring,
    truncate,
)


class GermValidationError(ValueError):
    """The input document violates the multigerm invariants."""


class DeltaNotFiniteError(ValueError):
    """The local-algebra dimension did not stabilize below the probe bound."""


@dataclass(frozen=True)
class Branch:
    """One branch: p component polynomials in the centered source chart."""

    label: str
    components: tuple

    def __post_init__(self):
        for q, comp in enumerate(self.components):
            if comp.constant_term():
                raise GermValidationError(
                    f"branch {self.label}: component {q + 1} has a nonzero constant term"
                )

    @property
    def n(self) -> int:
        return self.components[0].ring.arity

    @property
    def p(self) -> int:
        return len(self.components)

    def jacobian_rank_at_origin(self) -> int:
        """Rank of the p x n Jacobian at the origin (degree-1 coefficients)."""
        n = self.n
        space = RowSpace()
        for comp in self.components:
            row = {}
            for k in range(n):
                mono = tuple(1 if j == k else 0 for j in range(n))
                c = comp.coefficient(mono)
                if c:
                    row[k] = c
            if row:
                space.add(row)
        return space.rank


@dataclass(frozen=True)
class Multigerm:
    n: int
    p: int
    branches: tuple

    def __post_init__(self):
        if not self.branches:
            raise GermValidationError("a multigerm needs at least one branch")
        if self.n > self.p:
            raise GermValidationError(
                f"source dimension {self.n} exceeds target dimension {self.p}"
            )
        for branch in self.branches:
            if branch.p != self.p:
                raise GermValidationError(
                    f"branch {branch.label}: expected {self.p} components, got {branch.p}"
                )
            if branch.n != self.n:
                raise GermValidationError(
                    f"branch {branch.label}: expected {self.n} source variables"
                )
        if corank(self) > 1:
            raise GermValidationError("corank exceeds one")

    @property
    def num_branches(self) -> int:
        return len(self.branches)

    @property
    def source(self) -> Ring:
        return self.branches[0].components[0].ring

    @property
    def target(self) -> Ring:
        return target_ring(self.p)

    def describe(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "branches": [
                {
                    "label": b.label,
                    "components": [poly_to_text(c) for c in b.components],
                }
                for b in self.branches
            ],
        }


def corank(g: Multigerm) -> int:
    """max over branches of (n - rank of the Jacobian at the base point)."""
    return max(g.n - b.jacobian_rank_at_origin() for b in g.branches)


def multigerm(n: int, p: int, branch_exprs, labels=None) -> Multigerm:
    """Build a multigerm from component expression strings."""
    ring = source_ring(n)
    branches = []
    for j, exprs in enumerate(branch_exprs):
        label = labels[j] if labels else f"s{j + 1}"
        comps = tuple(parse_poly(text, ring) for text in exprs)
        branches.append(Branch(label=label, components=comps))
    return Multigerm(n=n, p=p, branches=tuple(branches))


def load_multigerm(document: dict) -> Multigerm:
    """Validate and load the JSON input schema:

    { "n": int, "p": int,
      "branches": [ { "components": [ "expr", ... p strings ] }, ... ] }

    Source variables are exactly x1..xn.
    """
    if not isinstance(document, dict):
        raise GermValidationError("input must be a JSON object")
    for key in ("n", "p", "branches"):
        if key not in document:
            raise GermValidationError(f"missing required key {key!r}")
    n, p, branches = document["n"], document["p"], document["branches"]
    if not isinstance(n, int) or not isinstance(p, int) or n < 1 or p < 1:
        raise GermValidationError("'n' and 'p' must be positive integers")
    if not isinstance(branches, list) or not branches:
        raise GermValidationError("'branches' must be a non-empty list")
    ring = source_ring(n)
    built = []
    for j, doc in enumerate(branches):
        if not isinstance(doc, dict) or "components" not in doc:
            raise GermValidationError(f"branch {j + 1}: expected an object with 'components'")
        comps = doc["components"]
        if not isinstance(comps, list) or len(comps) != p:
            raise GermValidationError(f"branch {j + 1}: expected {p} component expressions")
        label = doc.get("label", f"s{j + 1}")
        parsed = []
        for q, text in enumerate(comps):
            if not isinstance(text, str):
                raise GermValidationError(f"branch {j + 1}: component {q + 1} must be a string")
            try:
                parsed.append(parse_poly(text, ring))
            except ValueError as exc:
                raise GermValidationError(
                    f"branch {j + 1}, component {q + 1}: {exc}"
                ) from exc
        built.append(Branch(label=str(label), components=tuple(parsed)))
    return Multigerm(n=n, p=p, branches=tuple(built))


@dataclass(frozen=True)
class StabilizationResult:
    ell: int
    delta_per_branch: tuple
    ell_per_branch: tuple

    @property
    def delta(self) -> int:
        return sum(self.delta_per_branch)


def ideal_jet_span(branch: Branch, order: int) -> RowSpace:
    """Row space of the pullback ideal (f_1,...,f_p) inside jets of degree <= order.

    Columns are indexed by the position of the monomial in ascending
    graded-lex order.
    """
    n = branch.n
    monos = monomials_upto(n, order)
    index = {m: i for i, m in enumerate(monos)}
    space = RowSpace()
    for comp in branch.components:
        comp_t = truncate(comp, order)
        if comp_t.is_zero():
            continue
        for mono in monos:
            shifted = comp_t.mul_monomial(mono)
            row = {index[m]: c for m, c in truncate(shifted, order).items()}
            if row:
                space.add(row)
    return space


def _branch_quotient_dims(branch: Branch, nmax: int):
    """dim of jets/<ideal jets> at orders 0..nmax."""
    dims = []
    for order in range(nmax + 1):
        total = len(monomials_upto(branch.n, order))
        dims.append(total - ideal_jet_span(branch, order).rank)
    return dims


def stabilization(g: Multigerm, nmax: int = 12) -> StabilizationResult:
    """Detect, per branch, the local-algebra dimension delta and an order ell
    with every monomial of degree >= ell inside the pullback ideal.

    The detection compares quotient dimensions at consecutive jet orders;
    equality at orders N and N+1 certifies (by Nakayama) that the quotient
    is exactly the degree-<=N jet quotient, giving delta and ell = N+1.
    """
    if nmax < 2:
        raise ValueError("nmax must be at least 2")
    deltas = []
    ells = []
    for branch in g.branches:
        dims = _branch_quotient_dims(branch, nmax)
        found = None
        for order in range(nmax):
            if dims[order] == dims[order + 1]:
                found = (dims[order], order + 1)
                break
        if found is None:
            raise DeltaNotFiniteError(
                f"branch {branch.label}: quotient dimension still growing at jet order "
                f"{nmax}; delta is possibly infinite (raise nmax to probe further)"
            )
        deltas.append(found[0])
        ells.append(found[1])
    return StabilizationResult(
        ell=max(ells), delta_per_branch=tuple(deltas), ell_per_branch=tuple(ells)
    )
