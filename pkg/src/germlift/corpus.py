"""Built-in corpus of multigerms with frozen expected invariants.

Entries cover the classical corank-one families (fold/cusp/swallowtail maps,
cross-caps and higher open umbrellas), plane curve multigerms, rational-slope
line arrangements, and one K^4 -> K^5 germ.  Expected values were computed by
this package's exact pipeline and cross-checked against the independent
jet-space oracles in the test suite; line-arrangement index values follow the
direct matrix computation on these rational-slope models.

The two_lines_cusp_tangential entry keeps the degenerate configuration in
which the cusp branch is tangent to a line branch: there no level map is
bijective (the tangency couples the branches at every level), so the
minimal-generator hypothesis fails and the expected count is None.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    summary: str
    document: dict
    delta: int
    gamma: int
    i1: int | None
    i2: int | None
    i2_status: str
    min_generators: int | None
    # optional module-span fixture: fields whose span the constructed
    # generators must reproduce, compared at span_degree
    span_fixture: tuple | None = None
    span_degree: int | None = None
    kmax: int | None = None


def _doc(n, p, *branches):
    return {
        "n": n,
        "p": p,
        "branches": [{"components": list(comps)} for comps in branches],
    }


CORPUS = (
    CorpusEntry(
        name="whitney_cusp_map",
        summary="plane-to-plane cusp map (x, y^3 + x*y)",
        document=_doc(2, 2, ["x1", "x2^3 + x1*x2"]),
        delta=3,
        gamma=2,
        i1=0,
        i2=0,
        i2_status="found",
        min_generators=2,
    ),
    CorpusEntry(
        name="swallowtail_map",
        summary="swallowtail map K^3 -> K^3",
        document=_doc(3, 3, ["x1", "x2", "x3^4 + x1*x3 + x2*x3^2"]),
        delta=4,
        gamma=3,
        i1=0,
        i2=0,
        i2_status="found",
        min_generators=3,
    ),
    CorpusEntry(
        name="cross_cap",
        summary="cross-cap (v, y^2, v*y)",
        document=_doc(2, 3, ["x1", "x2^2", "x1*x2"]),
        delta=2,
        gamma=1,
        i1=0,
        i2=0,
        i2_status="found",
        min_generators=4,
        span_fixture=(
            ("X1", "0", "X3"),
            ("X3", "0", "X1*X2"),
            ("0", "2*X3", "X1^2"),
            ("0", "2*X2", "X3"),
        ),
        span_degree=4,
    ),
    CorpusEntry(
        name="higher_umbrella_4_5",
        summary="corank-one stable-type germ K^4 -> K^5, cubic y-power",
        document=_doc(4, 5, ["x1", "x2", "x3", "x4^3 + x1*x4", "x2*x4 + x3*x4^2"]),
        delta=3,
        gamma=2,
        i1=0,
        i2=0,
        i2_status="found",
        min_generators=7,
    ),
    CorpusEntry(
        name="umbrella_3_5",
        summary="open umbrella (v1, v2, y^2, v1*y, v2*y)",
        document=_doc(3, 5, ["x1", "x2", "x3^2", "x1*x3", "x2*x3"]),
        delta=2,
        gamma=1,
        i1=0,
        i2=0,
        i2_status="found",
        min_generators=11,
    ),
    CorpusEntry(
        name="quartic_quintic_curve",
        summary="plane curve (x^4, x^5 + x^7)",
        document=_doc(1, 2, ["x1^4", "x1^5 + x1^7"]),
        delta=4,
        gamma=3,
        i1=1,
        i2=1,
        i2_status="found",
        min_generators=2,
    ),
    CorpusEntry(
        name="transverse_cusps",
        summary="bigerm of two transverse cusps (x^2,x^3) and (x^3,x^2)",
        document=_doc(1, 2, ["x1^2", "x1^3"], ["x1^3", "x1^2"]),
        delta=4,
        gamma=2,
        i1=1,
        i2=1,
        i2_status="found",
        min_generators=2,
        span_fixture=(
            ("6*X1*X2 - 6*X1^2*X2^2", "4*X2^2 + 5*X1^3 - 9*X1*X2^3"),
            ("4*X1^2 + 5*X2^3 - 9*X1^3*X2", "6*X1*X2 - 6*X1^2*X2^2"),
        ),
        span_degree=5,
    ),
    CorpusEntry(
        name="two_lines_and_cusp",
        summary="trigerm: two transverse lines and a cusp transverse to both",
        document=_doc(1, 2, ["x1", "x1"], ["0", "x1"], ["x1^2", "x1^3 + x1^4"]),
        delta=4,
        gamma=1,
        i1=1,
        i2=1,
        i2_status="found",
        min_generators=2,
    ),
    CorpusEntry(
        name="two_lines_cusp_tangential",
        summary="degenerate trigerm: cusp tangent to a line branch",
        document=_doc(1, 2, ["x1", "0"], ["0", "x1"], ["x1^2", "x1^3 + x1^4"]),
        delta=4,
        gamma=1,
        i1=None,
        i2=0,
        i2_status="found",
        min_generators=None,
    ),
    CorpusEntry(
        name="plane_map_xy_y5_y7",
        summary="plane-to-plane map (x, x*y + y^5 + y^7)",
        document=_doc(2, 2, ["x1", "x1*x2 + x2^5 + x2^7"]),
        delta=5,
        gamma=4,
        i1=1,
        i2=1,
        i2_status="found",
        min_generators=2,
    ),
    CorpusEntry(
        name="corank_one_4_5",
        summary="corank-one germ K^4 -> K^5 with quartic y-power",
        document=_doc(
            4,
            5,
            ["x1", "x2", "x3", "x4^4 + x1*x4", "x4^6 + x4^7 + x2*x4 + x3*x4^2"],
        ),
        delta=4,
        gamma=3,
        i1=1,
        i2=1,
        i2_status="found",
        min_generators=17,
    ),
    CorpusEntry(
        name="lines_2",
        summary="two coordinate axes in the plane",
        document=_doc(1, 2, ["x1", "0"], ["0", "x1"]),
        delta=2,
        gamma=0,
        i1=0,
        i2=0,
        i2_status="found",
        min_generators=2,
        span_fixture=(("X1", "0"), ("0", "X2")),
        span_degree=3,
    ),
    CorpusEntry(
        name="lines_3",
        summary="three pairwise-distinct rational-slope lines",
        document=_doc(1, 2, ["x1", "0"], ["x1", "x1"], ["0", "x1"]),
        delta=3,
        gamma=0,
        i1=1,
        i2=0,
        i2_status="found",
        min_generators=None,
    ),
    CorpusEntry(
        name="lines_4",
        summary="four pairwise-distinct rational-slope lines",
        document=_doc(1, 2, ["x1", "0"], ["x1", "x1"], ["x1", "2*x1"], ["0", "x1"]),
        delta=4,
        gamma=0,
        i1=2,
        i2=0,
        i2_status="found",
        min_generators=None,
    ),
    CorpusEntry(
        name="cuspidal_curve",
        summary="cuspidal plane curve (x^2, x^3)",
        document=_doc(1, 2, ["x1^2", "x1^3"]),
        delta=2,
        gamma=1,
        i1=1,
        i2=0,
        i2_status="found",
        min_generators=None,
    ),
    CorpusEntry(
        name="plane_embedding",
        summary="embedded line (x, 0)",
        document=_doc(1, 2, ["x1", "0"]),
        delta=1,
        gamma=0,
        i1=0,
        i2=None,
        i2_status="minus_infinity",
        min_generators=None,
    ),
    CorpusEntry(
        name="identity_line",
        summary="identity germ of the line",
        document=_doc(1, 1, ["x1"]),
        delta=1,
        gamma=0,
        i1=0,
        i2=None,
        i2_status="minus_infinity",
        min_generators=None,
    ),
)


def entry(name: str) -> CorpusEntry:
    for item in CORPUS:
        if item.name == name:
            return item
    raise KeyError(name)
