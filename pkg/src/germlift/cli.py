"""Command-line front end: analyze, mingen, liftgen, verify, corpus.

JSON output is deterministic (sorted keys, no timing fields); timing and
progress go to standard error.  Exit codes: 0 success, 1 mathematical-
hypothesis failure or corpus expectation failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .corpus import CORPUS
from .germ import (
    DeltaNotFiniteError,
    GermValidationError,
    Multigerm,
    corank,
    load_multigerm,
)
from .jetcore import PolyParseError
from .ksm import (
    HypothesisNotMetError,
    default_kmax,
    indices,
    omega_kernel,
    predicted_kernel_dim,
)
from .liftgen import (
    construct_generators,
    min_generators,
    parse_field,
    span_check,
    span_equal,
    verify_liftable,
)
from .localalg import (
    JetOrderTooSmallError,
    get_context,
    graded_delta,
    graded_gamma,
)


class InputError(ValueError):
    pass


def _load_document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_germ(path: str) -> Multigerm:
    try:
        return load_multigerm(_load_document(path))
    except GermValidationError as exc:
        raise InputError(f"invalid multigerm in {path}: {exc}") from exc


def analyze_report(g: Multigerm, kmax=None, jet_order=None) -> dict:
    ctx = get_context(g)
    if kmax is None:
        kmax = default_kmax(g)
    report = indices(g, kmax)
    if jet_order is not None:
        deepest = max(lv.i for lv in report.levels)
        needed = (deepest + 2) * ctx.ell
        if jet_order < needed:
            raise JetOrderTooSmallError(
                f"jet order {jet_order} is below the sound bound {needed}; raise it"
            )
    levels = []
    for lv in report.levels:
        levels.append(
            {
                "i": lv.i,
                "i_delta": graded_delta(g, lv.i),
                "i_gamma": graded_gamma(g, lv.i),
                "domain_dim": lv.domain_dim,
                "target_dim": lv.target_dim,
                "surjective": lv.surjective,
                "injective": lv.injective,
                "kernel_dim": lv.kernel_dim,
            }
        )
    min_gen = None
    min_gen_note = None
    predicted = None
    bij = report.bijective_level
    if bij is not None:
        direct, _ = omega_kernel(g, bij + 1)
        predicted = predicted_kernel_dim(g, bij)
        min_gen = direct
        if direct != predicted:
            min_gen_note = (
                f"direct kernel dimension {direct} disagrees with the closed "
                f"formula {predicted}"
            )
    else:
        min_gen_note = (
            "no bijective level within the scan bound; the minimal-generator "
            "count is outside this method's hypothesis"
        )
    scanned = {lv.i for lv in report.levels}
    return {
        "germ": g.describe(),
        "corank": corank(g),
        "delta": ctx.delta,
        "delta_per_branch": list(ctx.stab.delta_per_branch),
        "gamma": graded_gamma(g, 0),
        "ell": ctx.ell,
        "kmax": kmax,
        "max_tower_order": max(t.L for t in ctx.towers) if ctx.towers else 0,
        "levels": levels,
        "scan_stopped_early": max(scanned) < kmax,
        "i1": report.i1,
        "i1_status": "found" if report.i1 is not None else "not_found_within_kmax",
        "i2": report.i2,
        "i2_status": report.i2_status,
        "well_behaved_index": report.well_behaved,
        "bijective_level": bij,
        "min_generators": min_gen,
        "predicted_min_generators": predicted,
        "min_generators_note": min_gen_note,
    }


def mingen_report(g: Multigerm, kmax=None) -> dict:
    from .ksm import bijective_level

    level = bijective_level(g, kmax)
    direct, _ = omega_kernel(g, level + 1)
    predicted = predicted_kernel_dim(g, level)
    count = min_generators(g, kmax)
    return {
        "bijective_level": level,
        "direct_kernel_dim": direct,
        "closed_formula": predicted,
        "min_generators": count,
    }


def liftgen_report(g: Multigerm, degree_bound=None, jet_order=None, kmax=None) -> dict:
    gens = construct_generators(
        g, degree_bound=degree_bound, jet_order=jet_order, kmax=kmax
    )
    return gens.describe()


def verify_report(g: Multigerm, field_docs, jet_order=None) -> dict:
    ctx = get_context(g)
    fields = []
    for k, doc in enumerate(field_docs):
        if not isinstance(doc, dict) or "components" not in doc:
            raise InputError(f"field {k + 1}: expected an object with 'components'")
        try:
            fields.append(parse_field(g, doc["components"]))
        except (PolyParseError, ValueError) as exc:
            raise InputError(f"field {k + 1}: {exc}") from exc
    if jet_order is None:
        max_deg = max(
            (max(c.degree() for c in f.coefficients) for f in fields), default=1
        )
        jet_order = (max(max_deg, 1) + 2) * ctx.ell + 2
    results = []
    for field in fields:
        res = verify_liftable(g, field, jet_order)
        results.append(
            {
                "field": field.describe(),
                "ok": res.ok,
                "exact": res.witness.exact if res.ok else None,
                "residual_order": res.witness.residual_order if res.ok else None,
                "witnesses": res.witness.describe() if res.ok else None,
                "failed_branches": list(res.failed_branches),
            }
        )
    return {"jet_order": jet_order, "results": results}


def _corpus_entry_checks(item) -> list:
    g = load_multigerm(item.document)
    checks = []

    def check(name, expected, actual):
        checks.append(
            {
                "check": name,
                "expected": expected,
                "actual": actual,
                "pass": expected == actual,
            }
        )

    report = analyze_report(g, kmax=item.kmax)
    check("delta", item.delta, report["delta"])
    check("gamma", item.gamma, report["gamma"])
    check("i1", item.i1, report["i1"])
    check("i2", item.i2, report["i2"])
    check("i2_status", item.i2_status, report["i2_status"])
    check("min_generators", item.min_generators, report["min_generators"])
    if item.min_generators is not None:
        check(
            "min_generators_closed_formula",
            item.min_generators,
            report["predicted_min_generators"],
        )
    if item.span_fixture is not None:
        fixture = [parse_field(g, comps) for comps in item.span_fixture]
        order = 2 * (item.span_degree + 2) * get_context(g).ell
        ok_all = all(verify_liftable(g, f, order).ok for f in fixture)
        check("fixture_fields_liftable", True, ok_all)
        gens = construct_generators(g)
        check("constructed_count", item.min_generators, gens.rho)
        check(
            "constructed_span_matches_fixture",
            True,
            span_equal(g, gens, fixture, item.span_degree),
        )
        check(
            "constructed_span_is_all_liftable_jets",
            True,
            span_check(g, gens, item.span_degree),
        )
    return checks


def corpus_report() -> dict:
    entries = []
    for item in CORPUS:
        t0 = time.perf_counter()
        checks = _corpus_entry_checks(item)
        elapsed = time.perf_counter() - t0
        print(f"[corpus] {item.name}: {elapsed:.2f}s", file=sys.stderr)
        entries.append(
            {
                "name": item.name,
                "summary": item.summary,
                "pass": all(c["pass"] for c in checks),
                "checks": checks,
            }
        )
    return {"entries": entries, "all_pass": all(e["pass"] for e in entries)}


# -- rendering -------------------------------------------------------------------


def _emit_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def _render_analyze_text(d: dict) -> str:
    lines = []
    germ = d["germ"]
    lines.append(f"multigerm: n={germ['n']} p={germ['p']} branches={len(germ['branches'])}")
    for b in germ["branches"]:
        lines.append(f"  {b['label']}: ({', '.join(b['components'])})")
    lines.append(
        f"corank={d['corank']}  delta={d['delta']} {tuple(d['delta_per_branch'])}"
        f"  gamma={d['gamma']}  ell={d['ell']}  kmax={d['kmax']}"
    )
    lines.append("  i | i_delta i_gamma | dom -> tgt | surj inj | ker")
    for lv in d["levels"]:
        lines.append(
            f"  {lv['i']} | {lv['i_delta']:7d} {lv['i_gamma']:7d} |"
            f" {lv['domain_dim']:3d} -> {lv['target_dim']:3d} |"
            f" {'yes' if lv['surjective'] else ' no'}  {'yes' if lv['injective'] else ' no'} |"
            f" {lv['kernel_dim']}"
        )
    if d["scan_stopped_early"]:
        lines.append(
            "  (scan stopped early: surjectivity persists above, injectivity "
            "fails above, by monotonicity)"
        )
    i1 = d["i1"] if d["i1"] is not None else f"not found <= {d['kmax']}"
    if d["i2_status"] == "minus_infinity":
        i2 = "-infinity"
    elif d["i2_status"] == "at_least_kmax":
        i2 = f">= {d['kmax']}"
    else:
        i2 = d["i2"]
    lines.append(f"i1 = {i1}   i2 = {i2}   well-behaved index = {d['well_behaved_index']}")
    if d["min_generators"] is not None:
        lines.append(
            f"minimal generators = {d['min_generators']} "
            f"(closed formula: {d['predicted_min_generators']})"
        )
    else:
        lines.append(f"minimal generators: {d['min_generators_note']}")
    return "\n".join(lines) + "\n"


def _render_corpus_text(d: dict) -> str:
    lines = []
    for e in d["entries"]:
        status = "PASS" if e["pass"] else "FAIL"
        lines.append(f"{status}  {e['name']}  ({e['summary']})")
        if not e["pass"]:
            for c in e["checks"]:
                if not c["pass"]:
                    lines.append(
                        f"      {c['check']}: expected {c['expected']!r}, "
                        f"got {c['actual']!r}"
                    )
    lines.append("all passed" if d["all_pass"] else "FAILURES present")
    return "\n".join(lines) + "\n"


def _render_liftgen_text(d: dict) -> str:
    lines = [
        f"level={d['level']}  rho={d['rho']}  jet_order={d['jet_order']}"
        f"  degree_bound={d['degree_bound']}"
    ]
    for k, gen in enumerate(d["generators"]):
        exact = "exact" if gen["exact"] else f"to jet order (residual at {gen['residual_order']})"
        lines.append(f"generator {k + 1} ({exact}):")
        for q, comp in enumerate(gen["components"]):
            lines.append(f"  ({comp}) d/dX{q + 1}")
        for wit in gen["witnesses"]:
            lines.append(f"  branch {wit['branch']}: eta = ({', '.join(wit['eta'])})")
    return "\n".join(lines) + "\n"


def _render_verify_text(d: dict) -> str:
    lines = [f"jet order {d['jet_order']}"]
    for r in d["results"]:
        if r["ok"]:
            kind = "liftable (exact)" if r["exact"] else (
                f"liftable to the working order (residual at degree {r['residual_order']})"
            )
            lines.append(f"OK   ({', '.join(r['field'])}): {kind}")
            for wit in r["witnesses"]:
                lines.append(f"     branch {wit['branch']}: eta = ({', '.join(wit['eta'])})")
        else:
            lines.append(
                f"NOT liftable ({', '.join(r['field'])}): "
                f"inconsistent on branches {r['failed_branches']}"
            )
    return "\n".join(lines) + "\n"


def _render_mingen_text(d: dict) -> str:
    return (
        f"bijective level: {d['bijective_level']}\n"
        f"direct kernel dimension: {d['direct_kernel_dim']}\n"
        f"closed formula: {d['closed_formula']}\n"
        f"minimal generators: {d['min_generators']}\n"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="germlift",
        description=(
            "Exact invariants and liftable vector fields of corank-one "
            "polynomial multigerms"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, germ_arg=True):
        if germ_arg:
            p.add_argument("germ", help="path to a multigerm JSON document")
        p.add_argument("--max-index", type=int, default=None, dest="kmax")
        p.add_argument("--jet-order", type=int, default=None, dest="jet_order")
        p.add_argument("--degree", type=int, default=None, dest="degree")
        p.add_argument(
            "--format", choices=("json", "text"), default="text", dest="fmt"
        )

    add_common(sub.add_parser("analyze", help="full invariant report"))
    add_common(sub.add_parser("mingen", help="minimal number of generators"))
    add_common(sub.add_parser("liftgen", help="construct explicit generators"))
    verify = sub.add_parser("verify", help="check liftability of given fields")
    verify.add_argument("germ", help="path to a multigerm JSON document")
    verify.add_argument("fields", help="path to a JSON document with 'fields'")
    verify.add_argument("--max-index", type=int, default=None, dest="kmax")
    verify.add_argument("--jet-order", type=int, default=None, dest="jet_order")
    verify.add_argument("--degree", type=int, default=None, dest="degree")
    verify.add_argument("--format", choices=("json", "text"), default="text", dest="fmt")
    add_common(sub.add_parser("corpus", help="run the built-in expectation table"), germ_arg=False)
    return parser


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "analyze":
            g = _load_germ(args.germ)
            t0 = time.perf_counter()
            data = analyze_report(g, kmax=args.kmax, jet_order=args.jet_order)
            print(f"[analyze] {time.perf_counter() - t0:.2f}s", file=sys.stderr)
            out.write(_emit_json(data) if args.fmt == "json" else _render_analyze_text(data))
            return 0
        if args.command == "mingen":
            g = _load_germ(args.germ)
            data = mingen_report(g, kmax=args.kmax)
            out.write(_emit_json(data) if args.fmt == "json" else _render_mingen_text(data))
            return 0
        if args.command == "liftgen":
            g = _load_germ(args.germ)
            data = liftgen_report(
                g, degree_bound=args.degree, jet_order=args.jet_order, kmax=args.kmax
            )
            out.write(_emit_json(data) if args.fmt == "json" else _render_liftgen_text(data))
            return 0
        if args.command == "verify":
            g = _load_germ(args.germ)
            doc = _load_document(args.fields)
            if not isinstance(doc, dict) or "fields" not in doc:
                raise InputError("fields document must be an object with 'fields'")
            data = verify_report(g, doc["fields"], jet_order=args.jet_order)
            out.write(_emit_json(data) if args.fmt == "json" else _render_verify_text(data))
            return 0
        if args.command == "corpus":
            data = corpus_report()
            out.write(_emit_json(data) if args.fmt == "json" else _render_corpus_text(data))
            return 0 if data["all_pass"] else 1
    except (InputError, GermValidationError, PolyParseError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except DeltaNotFiniteError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except JetOrderTooSmallError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except HypothesisNotMetError as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
