"""Command-line interface.

Exit status: 0 when a verdict was computed (positive, negative or rejected),
2 for bad input, 3 when a computed object contradicted a proven identity.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

from .corpus import corpus_items
from .crosscheck import cross_check, discrepancy_table
from .endring import e_of_morphism
from .errors import InputError, Rejected, SelfTestFailure
from .fields import field_from_tag
from .localization import (
    certify_open_immersion,
    conservativity_check,
    localize_element,
)
from .properties import SUITES, SuiteResult, run_monoid_suites, suite_gluing, suite_presheaf
from .quotient import base_change_quotient, e_quotient_matches, quotient_element, quotient_ideal
from .report import CertificateReport, digest_of, render, ring_block
from .scheme import (
    QCIdealSheaf,
    check_cover,
    closed_subscheme,
    function_field,
    is_integral,
    local_ring_at,
    validate_gluing,
)
from .workspace import Workspace, emit, parse

VERBS = ("check-monoid", "end-ring", "localize", "quotient", "quotient-ideal", "check-cover",
         "certify-immersion", "check-conservative", "check-basechange", "integrality", "function-field",
         "glue", "closed-subscheme", "local-ring", "cross-check", "corpus-run")
NO_WORKSPACE = ("cross-check", "corpus-run")


def _need(args, n, usage):
    if len(args) < n:
        raise InputError(f"usage: {usage}")


def _report(ws, verb, args, verdict, witnesses, field=None):
    F = field or ws.inst.field.tag
    return CertificateReport([verb, *args], verdict, F, witnesses, digest=digest_of(emit(ws)))


# -- verb handlers -------------------------------------------------------------

def _check_monoid(ws, args, opts):
    _need(args, 1, "check-monoid A")
    rep = ws.axioms.get(args[0])
    if rep is None:
        raise InputError(f"unknown monoid {args[0]!r}")
    a = ws.monoid(args[0], checked=False)
    w = {"dims": a.dims, "violations": rep.violations}
    return _report(ws, "check-monoid", args, "monoid" if rep.ok else "not a monoid", w)


def _end_ring(ws, args, opts):
    _need(args, 1, "end-ring A")
    a = ws.monoid(args[0])
    E = a.end
    dom, pair = E.domain_verdict()
    top = a.inst.top
    w = {"ring": ring_block(E), "domain": dom, "reduced": E.is_reduced(),
         "basis_at_top": [h.comp(top).col(0) if h.comp(top).cols else () for h in E.hom1.basis]}
    if not dom and pair:
        w["zero_divisor"] = pair
    return _report(ws, "end-ring", args, "computed", w)


def _localize(ws, args, opts):
    _need(args, 2, "localize A t")
    a = ws.monoid(args[0])
    t = ws.element(args[0], args[1])
    loc = localize_element(a, t)
    et = e_of_morphism(loc.structure)
    Et = loc.target.end
    w = {"element": t, "index": loc.index, "traces": loc.traces, "dims": loc.target.dims,
         "localized_ring": ring_block(Et)}
    if Et.dim:
        image = et(t)
        w["image_of_t"] = image
        w["inverse_of_t"] = Et.inverse(image)
    return _report(ws, "localize", args, "zero" if loc.is_zero else "nonzero", w)


def _quotient_witness(q):
    E = q.target.end
    return {"dims": q.target.dims, "generators": q.generators, "ring": ring_block(E), "checks": q.checks,
            "matches_classical_quotient": e_quotient_matches(q)}


def _quotient(ws, args, opts):
    _need(args, 2, "quotient A t")
    a = ws.monoid(args[0])
    q = quotient_element(a, ws.element(args[0], args[1]))
    return _report(ws, "quotient", args, "zero" if q.is_zero else "nonzero", _quotient_witness(q))


def _ideal_gens(ws, a_name, ref):
    if ref in ws.ideals:
        owner, gens = ws.ideals[ref]
        if owner != a_name:
            raise InputError(f"ideal {ref!r} lives in {owner!r}, not {a_name!r}")
        return gens
    return [ws.element(a_name, ref)]


def _quotient_ideal(ws, args, opts):
    _need(args, 2, "quotient-ideal A J [--alt J2]")
    a = ws.monoid(args[0])
    gens = _ideal_gens(ws, args[0], args[1])
    alt = _ideal_gens(ws, args[0], opts.alt) if opts.alt else None
    q = quotient_ideal(a, gens, alt)
    return _report(ws, "quotient-ideal", args, "zero" if q.is_zero else "nonzero", _quotient_witness(q))


def _check_cover(ws, args, opts):
    _need(args, 1, "check-cover A t1 ... tk")
    a = ws.monoid(args[0])
    ts = [ws.element(args[0], t) for t in args[1:]]
    cert = check_cover(a, ts)
    w = {"ring": ring_block(a.end), "elements": cert.elements, "positive": cert.positive}
    if cert.positive:
        w["coefficients"] = cert.witnesses
    else:
        w["proper_ideal"] = cert.proper_ideal
    return _report(ws, "check-cover", args, "cover" if cert.positive else "not a cover", w)


def _certify(ws, args, opts):
    _need(args, 1, "certify-immersion f | certify-immersion A t")
    if len(args) >= 2:
        f = localize_element(ws.monoid(args[0]), ws.element(args[0], args[1])).structure
        from_loc = True
    elif args[0] in ws.morphisms:
        f, from_loc = ws.morphisms[args[0]], False
    else:
        raise InputError(f"unknown morphism {args[0]!r}")
    cert = certify_open_immersion(f, from_localization=from_loc)
    w = {"epi": {"ok": cert.epi.ok, "dim_B": cert.epi.dim_b, "dim_BB": cert.epi.dim_bb},
         "flat": cert.flat.rows if cert.flat else [], "basis": cert.basis, "notes": cert.notes}
    return _report(ws, "certify-immersion", args, "open immersion" if cert.positive else "not certified", w)


def _conservative(ws, args, opts):
    _need(args, 5, "check-conservative A u M N t1 ... tk")
    a = ws.monoid(args[0])
    if args[1] not in ws.maps:
        raise InputError(f"unknown map {args[1]!r}")
    u = ws.maps[args[1]]
    m, n = ws.module(args[2]), ws.module(args[3])
    ts = [ws.element(args[0], t) for t in args[4:]]
    rep = conservativity_check(a, ts, u, m, n)
    if rep.status == "rejected":
        return _report(ws, "check-conservative", args, "rejected", {"reason": rep.reason})
    verdict = "isomorphism" if rep.global_iso else "not an isomorphism"
    return _report(ws, "check-conservative", args, verdict, {"rows": rep.rows, "local_iso": rep.local_iso})


def _basechange(ws, args, opts):
    _need(args, 3, "check-basechange A J t")
    a = ws.monoid(args[0])
    q = quotient_ideal(a, _ideal_gens(ws, args[0], args[1]))
    loc = localize_element(a, ws.element(args[0], args[2]))
    rep = base_change_quotient(q, loc)
    w = {"left_dims": rep.left_dims, "right_dims": rep.right_dims, "extended_ideal": rep.extended_ideal}
    return _report(ws, "check-basechange", args, "isomorphic", w)


def _integrality(ws, args, opts):
    _need(args, 1, "integrality A")
    a = ws.monoid(args[0])
    rep = is_integral(a)
    w = {"ring": ring_block(a.end), "zero": rep.zero, "reduced": rep.reduced.value,
         "weakly_integral": rep.weakly_integral.value, "condition1": rep.condition1,
         "condition2": rep.condition2, "notes": rep.notes}
    if rep.reduced.witness is not None:
        w["nilpotent"] = rep.reduced.witness
    if rep.weakly_integral.witness is not None:
        w["zero_divisor"] = rep.weakly_integral.witness
    return _report(ws, "integrality", args, "integral" if rep.integral else "not integral", w)


def _function_field(ws, args, opts):
    _need(args, 1, "function-field A")
    a = ws.monoid(args[0])
    try:
        ff = function_field(a)
    except Rejected as exc:
        return _report(ws, "function-field", args, f"rejected: {exc.reason}", {"element": exc.witness})
    w = {"ring": ring_block(ff.ring), "inverses": list(ff.inverses.items()), "exhaustive": ff.exhaustive,
         "stability": ff.stability, "provenance": ff.provenance}
    return _report(ws, "function-field", args, "field", w)


def _scheme(ws, name):
    if name not in ws.schemes:
        raise InputError(f"unknown scheme {name!r}")
    sd = ws.schemes[name]
    return sd, validate_gluing(sd.charts, sd.overlaps, sd.transitions, sd.names)


def _glue(ws, args, opts):
    _need(args, 1, "glue X")
    _, (rep, x) = _scheme(ws, args[0])
    w = {"failures": rep.failures, "notes": rep.notes}
    if x is not None:
        ring, _ = x.global_ring()
        w["ring"] = ring_block(ring)
    return _report(ws, "glue", args, "valid" if rep.valid else "invalid", w)


def _glued(ws, name):
    _, (rep, x) = _scheme(ws, name)
    if x is None:
        f = rep.failures[0]
        raise Rejected(f"gluing data invalid: {f['kind']}", reason=f["kind"], witness=f.get("pair"))
    return x


def _sheaf(ws, x, scheme_name, j_name):
    if j_name not in ws.ideal_sheaves:
        raise InputError(f"unknown ideal sheaf {j_name!r}")
    owner, ideals = ws.ideal_sheaves[j_name]
    if owner != scheme_name:
        raise InputError(f"ideal sheaf {j_name!r} lives on {owner!r}")
    return QCIdealSheaf(x, ideals)


def _closed(ws, args, opts):
    _need(args, 2, "closed-subscheme X J")
    try:
        x = _glued(ws, args[0])
        y = closed_subscheme(x, _sheaf(ws, x, args[0], args[1]))
    except Rejected as exc:
        return _report(ws, "closed-subscheme", args, f"rejected: {exc.reason}", {"where": exc.witness})
    ring, _ = y.scheme.global_ring()
    w = {"charts": [q.target.dims for q in y.quotients], "base_change": y.base_change,
         "stabilization": y.stabilization, "ring": ring_block(ring)}
    return _report(ws, "closed-subscheme", args, "empty" if y.is_empty else "computed", w)


def _local_ring(ws, args, opts):
    _need(args, 2, "local-ring X J [--chart i]")
    try:
        x = _glued(ws, args[0])
        y = closed_subscheme(x, _sheaf(ws, x, args[0], args[1]))
        lr = local_ring_at(x, y, opts.chart)
    except Rejected as exc:
        return _report(ws, "local-ring", args, f"rejected: {exc.reason}", {"where": exc.witness})
    w = {"chart": lr.chart, "ring": ring_block(lr.ring), "maximal_ideal": lr.maximal_ideal,
         "locality": lr.locality, "germs": lr.pairs_route, "chart_independence": lr.chart_independence}
    return _report(ws, "local-ring", args, "local", w)


# -- corpus verbs ------------------------------------------------------------------

def _corpus_report(verb, args, opts, verdict, witnesses):
    return CertificateReport([verb, *args, f"--field={opts.field}", f"--dim-max={opts.dim_max}"], verdict,
                             field_from_tag(opts.field).tag, witnesses,
                             digest=digest_of(f"corpus:{opts.field}:{opts.dim_max}"))


def _cross_check(ws, args, opts):
    if ws is not None:
        names = args or [n for n in ws.monoids if ws.inst.kind == "finvect" and ws.axioms[n].ok]
        items = [(n, ws.monoid(n)) for n in names]
        res = cross_check(items)
        rep = _report(ws, "cross-check", args, "no discrepancies", {"counts": res.counts})
    else:
        res = cross_check(corpus_items(opts.field, opts.dim_max))
        rep = _corpus_report("cross-check", args, opts, "no discrepancies", {"counts": res.counts})
    if not res.ok:
        raise SelfTestFailure("engine and oracle disagree:\n" + "\n".join(discrepancy_table(res)))
    return rep


@lru_cache(maxsize=None)
def _items(field, dim_max):
    return corpus_items(field, dim_max)


def _suite_job(job):
    field, dim_max, index = job
    item = _items(field, dim_max)[index]
    return item.name, run_monoid_suites(item)


def _corpus_run(ws, args, opts):
    items = _items(opts.field, opts.dim_max)
    jobs = [(opts.field, opts.dim_max, k) for k in range(len(items))]
    if opts.jobs and opts.jobs > 1:
        with ProcessPoolExecutor(max_workers=opts.jobs) as pool:
            results = list(pool.map(_suite_job, jobs))
    else:
        results = [_suite_job(j) for j in jobs]
    totals = {k: SuiteResult(SUITES[k]) for k in SUITES}
    for _, per in results:
        for k, r in per.items():
            totals[k].merge(r)
    totals[9] = suite_gluing()
    totals[10] = suite_presheaf(field=field_from_tag(opts.field))
    table = {f"{k:02d}_{r.name.replace(' ', '_')}": {"checked": r.checked, "failed": len(r.failures)}
             for k, r in totals.items()}
    failed = [r for r in totals.values() if r.failures]
    if failed:
        lines = [f"{r.name}: {r.failures[0]}" for r in failed]
        raise SelfTestFailure("property suites failed:\n" + "\n".join(lines))
    w = {"monoids": [name for name, _ in results], "suites": table}
    return _corpus_report("corpus-run", args, opts, "all property suites pass", w)


HANDLERS = {
    "check-monoid": _check_monoid,
    "end-ring": _end_ring,
    "localize": _localize,
    "quotient": _quotient,
    "quotient-ideal": _quotient_ideal,
    "check-cover": _check_cover,
    "certify-immersion": _certify,
    "check-conservative": _conservative,
    "check-basechange": _basechange,
    "integrality": _integrality,
    "function-field": _function_field,
    "glue": _glue,
    "closed-subscheme": _closed,
    "local-ring": _local_ring,
    "cross-check": _cross_check,
    "corpus-run": _corpus_run,
}


def run_command(verb: str, args, workspace: Workspace | None, opts=None) -> CertificateReport:
    if verb not in HANDLERS:
        raise InputError(f"unknown verb {verb!r}")
    opts = opts or build_parser().parse_intermixed_args([verb])
    if workspace is None and verb not in NO_WORKSPACE:
        raise InputError(f"{verb} needs a workspace (--workspace PATH)")
    return HANDLERS[verb](workspace, list(args), opts)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monoidal-geometry",
                                description="Certified computations with commutative monoids in "
                                            "FinVect and presheaf categories.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("args", nargs="*", help="names or coordinate literals such as '[1,0]'")
    p.add_argument("-w", "--workspace", help="JSON workspace file")
    p.add_argument("--field", default="F2", help="corpus field: F2, F3 or Q (corpus verbs)")
    p.add_argument("--dim-max", type=int, default=3, help="largest corpus dimension (corpus verbs)")
    p.add_argument("--report", help="also write the report to this path")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for corpus-run")
    p.add_argument("--alt", help="second generating set for quotient-ideal")
    p.add_argument("--chart", type=int, help="chart index for local-ring")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        opts = parser.parse_intermixed_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        ws = parse(opts.workspace) if opts.workspace else None
        report = run_command(opts.verb, opts.args, ws, opts)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except SelfTestFailure as exc:
        print(f"self-test failure: {exc}", file=sys.stderr)
        return 3
    except Rejected as exc:
        print(f"rejected: {exc.reason}", file=sys.stderr)
        return 0
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    report.command = list(sys.argv[1:] if argv is None else argv)
    text = render(report, opts.format)
    sys.stdout.write(text)
    if opts.report:
        with open(opts.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def entry() -> None:
    sys.exit(main())


__all__ = ["main", "run_command", "build_parser"]
