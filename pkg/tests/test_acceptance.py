"""Acceptance criteria 1-11, exact arithmetic, zero tolerance.

Each test records one line ``PASS criterion N: ...`` or ``FAIL criterion N: ...``;
the lines are printed as they are produced and again in the terminal summary.
Run directly with ``python3 tests/test_acceptance.py`` for just these criteria.
"""

import sys
from itertools import combinations

import pytest

from monoidal_geometry import cli, crosscheck, properties
from monoidal_geometry.corpus import corpus_modules, full_corpus, presheaf_corpus
from monoidal_geometry.crosscheck import (
    Bridge,
    CrossCheckResult,
    compare_fraction_field,
    compare_localization,
    compare_quotient,
    cover_queries,
)
from monoidal_geometry.fields import PrimeField
from monoidal_geometry.localization import (
    localize_element,
    localize_module,
    standard_probes,
    verify_epi,
    verify_flat,
)
from monoidal_geometry.monoid import module_cokernel, tensor_over_A
from monoidal_geometry.oracle import oracle_ideal_membership
from monoidal_geometry.properties import SuiteResult, hand_built_schemes
from monoidal_geometry.quotient import base_change_quotient, quotient_ideal, quotient_sequence
from monoidal_geometry.scheme import (
    QCIdealSheaf,
    check_cover,
    closed_subscheme,
    function_field,
    irreducibility_probe,
    is_integral,
    is_reduced,
    is_weakly_integral,
    local_ring_at,
    nonzero_elements,
)

CORPUS = full_corpus(3)
LINES = {}


def record(n, ok, text):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {text}"
    LINES[n] = line
    print(line)
    return ok


def basis_of(a):
    E = a.end
    return [E.basis_element(i) for i in range(E.dim)]


def generator_sets(a):
    b = basis_of(a)
    return [list(g) for k in (1, 2) for g in combinations(b, k)]


def residue(a, t):
    """``A/tA`` as an A-module."""
    m, _ = module_cokernel(a.end.to_morphism(t), a.regular)
    return m


@pytest.fixture(scope="module")
def bridges():
    return {id(item): Bridge(item.monoid) for item in CORPUS}


def test_corpus_scope():
    names = {(str(i.monoid.field), i.name) for i in CORPUS}
    assert len(CORPUS) == 27 and len(names) == 27


# -- 1 ------------------------------------------------------------------------------

def test_criterion_01_cover_biconditional(bridges):
    queries = agree = subsets = 0
    bad = []
    for item in CORPUS:
        a = item.monoid
        bridge = bridges[id(item)]
        E = a.end
        qs = cover_queries(a)
        basis = basis_of(a)
        for k in range(len(basis) + 1):
            for sub in combinations(basis, k):
                assert list(sub) in qs
                subsets += 1
        for ts in qs:
            cert = check_cover(a, ts)
            member, _ = oracle_ideal_membership(bridge.ring, [bridge.to_classical(t) for t in ts], bridge.ring.unit)
            queries += 1
            if cert.positive == member and cert.recheck(E):
                agree += 1
            else:
                bad.append((item.name, ts))
    ok = not bad and queries >= 500
    record(1, ok, f"{agree}/{queries} cover queries agree with the oracle "
                  f"({subsets} basis subsets, {len(CORPUS)} monoids)")
    assert ok, bad[:5]


# -- 2 ------------------------------------------------------------------------------

def test_criterion_02_localization(bridges):
    res = CrossCheckResult()
    for item in CORPUS:
        for t in basis_of(item.monoid):
            compare_localization(bridges[id(item)], t, res, item.name)
    n = res.counts["localization"]
    record(2, res.ok, f"E(A_t) = E(A)_t on {n} (monoid, basis t) pairs, "
                      f"{res.counts.get('localization-search', 0)} also by ideal search")
    assert res.ok, res.discrepancies[:5]


# -- 3 ------------------------------------------------------------------------------

def test_criterion_03_quotients(bridges):
    res = CrossCheckResult()
    tensor_checks = 0
    bad = []
    for item in CORPUS:
        a = item.monoid
        for gens in generator_sets(a):
            compare_quotient(bridges[id(item)], gens, res, item.name)
            q = quotient_sequence(a, gens)
            parts = [residue(a, t) for t in gens]
            t = parts[0]
            for m in parts[1:]:
                t = tensor_over_A(t, m)
            # the engine compares the two routes itself only when there are two or more generators
            routed = q.checks["tensor_route"] or len(gens) == 1
            tensor_checks += 1
            if not (routed and t.carrier.dims == q.target.dims):
                bad.append((item.name, gens))
    ok = res.ok and not bad
    record(3, ok, f"E(A/J) = E(A)/J on {res.counts['quotient']} ideals; "
                  f"A/(t1,..,tk) = tensor of A/tiA on {tensor_checks}")
    assert ok, (res.discrepancies[:5], bad[:5])


# -- 4 ------------------------------------------------------------------------------

def test_criterion_04_base_change():
    checked, bad = 0, []
    for item in CORPUS:
        a = item.monoid
        locs = [localize_element(a, t) for t in basis_of(a)]
        for gens in generator_sets(a):
            q = quotient_ideal(a, gens)
            for loc in locs:
                rep = base_change_quotient(q, loc)
                checked += 1
                if not (rep.ok and rep.left_dims == rep.right_dims):
                    bad.append((item.name, gens, loc.element))
    record(4, not bad, f"A/J (x)_A A_t = A_t/J' on {checked - len(bad)}/{checked} triples")
    assert not bad, bad[:5]


# -- 5 ------------------------------------------------------------------------------

def test_criterion_05_flat_epimorphisms():
    checked, bad, min_probes = 0, [], None
    for item in CORPUS:
        a = item.monoid
        probes = standard_probes(a)
        min_probes = len(probes) if min_probes is None else min(min_probes, len(probes))
        for t in basis_of(a):
            loc = localize_element(a, t)
            checked += 1
            if not (verify_epi(loc.structure).ok and verify_flat(loc, probes).ok):
                bad.append((item.name, t))
    ok = not bad and min_probes >= 3
    record(5, ok, f"{checked - len(bad)}/{checked} localizations are flat epimorphisms "
                  f"(at least {min_probes} probe sequences per monoid)")
    assert ok, bad[:5]


# -- 6 ------------------------------------------------------------------------------

def test_criterion_06_zero_detection():
    checked, bad = 0, []
    for item in CORPUS:
        a = item.monoid
        basis = basis_of(a)
        covers = [list(c) for k in range(1, len(basis) + 1) for c in combinations(basis, k)
                  if check_cover(a, list(c)).positive]
        modules = corpus_modules(a)
        assert len(modules) <= 3
        for ts in covers:
            for m in modules:
                local_zero = [localize_module(m, t).module.is_zero() for t in ts]
                checked += 1
                if m.is_zero() != all(local_zero):
                    bad.append((item.name, ts, m.carrier.dims))
    record(6, not bad, f"M = 0 iff all M_ti = 0 on {checked - len(bad)}/{checked} (cover, module) pairs")
    assert not bad, bad[:5]


# -- 7 ------------------------------------------------------------------------------

def brute_force_flags(bridge):
    """(field, reduced, domain) by enumerating a small classical ring; a finite domain is a field."""
    r = bridge.ring
    elems = [x for x in r.elements() if any(x)]
    zero = r.zero()
    reduced = all(r.mul(x, x) != zero for x in elems)
    domain = all(r.mul(x, y) != zero for x in elems for y in elems)
    return domain, reduced, domain


# (integral, reduced, weakly integral), derived by enumeration and frozen here
F2_DIM2 = {
    "F4": (True, True, True),
    "F2xF2": (False, True, False),
    "F2[x]/(x^2)": (False, False, False),
}


def test_criterion_07_integrality(bridges):
    bad = []
    implications = 0
    for item in CORPUS:
        a = item.monoid
        rep = is_integral(a)
        red, weak = is_reduced(a).value, is_weakly_integral(a).value
        implications += 1
        if rep.integral and not (red and weak):
            bad.append((item.name, "integral without reduced and weakly integral"))
        probe = irreducibility_probe(a)
        if red and probe.ok:
            implications += 1
            if not weak:
                bad.append((item.name, "reduced and irreducible but not weakly integral"))
    table = {}
    for item in CORPUS:
        if item.monoid.field == PrimeField(2) and item.monoid.dims == (2,):
            a = item.monoid
            table[item.name] = (is_integral(a).integral, is_reduced(a).value, is_weakly_integral(a).value)
            assert brute_force_flags(bridges[id(item)]) == F2_DIM2[item.name]
    ok = not bad and table == F2_DIM2
    record(7, ok, f"no counterexample in {implications} implications; dim-2 F2 table {table}")
    assert ok, bad


# -- 8 ------------------------------------------------------------------------------

def basis_of_ring(E):
    return [E.basis_element(i) for i in range(E.dim)]


def rational_samples(E):
    """Nonzero test elements when the field is infinite: basis, 1 - b, pairwise sums."""
    out, _ = nonzero_elements(E)
    basis = basis_of_ring(E)
    for b, c in combinations(basis, 2):
        s = E.add(b, c)
        if not E.is_zero(s) and s not in out:
            out.append(s)
    return out


def test_criterion_08_function_field(bridges):
    res = CrossCheckResult()
    integral, stable_checks = 0, 0
    for item in CORPUS:
        a = item.monoid
        compare_fraction_field(bridges[id(item)], res, item.name)
        if not is_integral(a).integral:
            continue
        integral += 1
        E = a.end
        samples = nonzero_elements(E)[0] if E.field.characteristic else rational_samples(E)
        ff = function_field(a, samples)
        stable_checks += len(ff.stability)
        res.add("stable-under-every-sample", item.name, None, len(ff.stability), len(samples))
    record(8, res.ok, f"{integral} integral monoids: F(A) = Frac(E(A)) and F(A_t) = F(A) "
                      f"for {stable_checks} nonzero t")
    assert res.ok, res.discrepancies[:5]


# -- 9 ------------------------------------------------------------------------------

def test_criterion_09_closed_subschemes():
    schemes = hand_built_schemes()
    squares, local, bad = 0, 0, []
    for name, x, gens in schemes:
        y = closed_subscheme(x, QCIdealSheaf(x, gens))
        for row in y.base_change:
            squares += 1
            if not (row["ok"] and row["dims"][0] == row["dims"][1]):
                bad.append((name, row))
        if not y.scheme.report.valid:
            bad.append((name, "quotient charts do not glue"))
        lr = local_ring_at(x, y)
        L, res = lr.ring, lr.residue
        # complement of m consists of units, re-checked here on the listed elements
        elems, _ = nonzero_elements(L)
        for v in elems:
            if not res.target.is_zero(res(v)) and not L.is_unit(v):
                bad.append((name, "non-unit outside m", v))
        local += 1
        if not (lr.locality["residue_is_field"] and lr.locality["maximal_nilpotent"]):
            bad.append((name, lr.locality))
    presheaf = any(x.inst.kind == "presheaf" for _, x, _ in schemes)
    ok = not bad and len(schemes) >= 3 and presheaf
    record(9, ok, f"{len(schemes)} glued schemes (one on the Sierpinski space): {squares} base-change squares, "
                  f"{local} local rings verified")
    assert ok, bad


# -- 10 -----------------------------------------------------------------------------

def test_criterion_10_presheaf_global_sections():
    items = presheaf_corpus(24)
    bad = []
    for space, x in items:
        inst = x.inst
        assert len([u for u in inst.opens if u != inst.empty]) <= 3
        hom = inst.hom_space(inst.unit(), x)
        if len(hom) != x.dim(inst.top):
            bad.append((space, x.dims, len(hom)))
    ok = not bad and len(items) >= 20
    record(10, ok, f"dim Hom(1, X) = dim X(top) on {len(items) - len(bad)}/{len(items)} presheaves")
    assert ok, bad


# -- 11 -----------------------------------------------------------------------------

def broken_suite(k):
    def run(*_args, **_kw):
        r = SuiteResult(properties.SUITES[k])
        r.record(False, {"injected": k})
        return r
    return run


def flipped_cover(real):
    def check(a, ts):
        cert = real(a, ts)
        if cert.positive:
            cert = type(cert)(False, cert.elements, proper_ideal=[a.end.one()])
        return cert
    return check


def shifted_localization(real):
    """Localize at ``1`` instead of ``t``: E(A_t) silently becomes E(A)."""
    def loc(a, t, *args, **kw):
        return real(a, a.end.one(), *args, **kw)
    return loc


def dropped_generator(real):
    def quot(a, gens, *args, **kw):
        return real(a, list(gens)[-1:], *args, **kw)
    return quot


NEGATIVE_CONTROLS = [
    (["glue", "Xbad"], "qxq", "verdict: invalid"),
    (["closed-subscheme", "Xbad", "J"], "qxq", "verdict: rejected"),
    (["check-conservative", "A", "first", "R", "R", "t1", "t3"], "qxq", "verdict: rejected"),
    (["check-cover", "A", "t1", "t3"], "qxq", "verdict: not a cover"),
    (["function-field", "D"], "dual", "verdict: rejected"),
    (["closed-subscheme", "X", "Jbad"], "qxq", "verdict: rejected"),
    (["check-monoid", "Dbad"], "dual", "verdict: not a monoid"),
]


def test_criterion_11_severity(monkeypatch, capsys, data_dir):
    codes = {}
    corpus_run = ["corpus-run", "--field", "F2", "--dim-max", "1"]
    cross = ["cross-check", "--field", "F2", "--dim-max", "2"]

    # engine mutations that the oracle comparison must catch
    mutations = [
        ("cover verdicts flipped", crosscheck, "check_cover", flipped_cover(crosscheck.check_cover), cross),
        ("localization at the wrong element", crosscheck, "localize_element",
         shifted_localization(crosscheck.localize_element), cross),
        ("quotient drops a generator", crosscheck, "quotient_ideal",
         dropped_generator(crosscheck.quotient_ideal), cross),
    ]
    for label, mod, attr, fake, argv in mutations:
        with monkeypatch.context() as m:
            m.setattr(mod, attr, fake)
            codes[label] = cli.main(argv)

    # a violation of each criterion's suite surfaces as exit 3
    for k in range(1, 9):
        with monkeypatch.context() as m:
            m.setitem(properties.PER_MONOID, k, broken_suite(k))
            codes[f"suite {k}"] = cli.main(corpus_run)
    with monkeypatch.context() as m:
        m.setattr(cli, "suite_gluing", broken_suite(9))
        codes["suite 9"] = cli.main(corpus_run)
    with monkeypatch.context() as m:
        m.setattr(cli, "suite_presheaf", lambda **kw: broken_suite(10)())
        codes["suite 10"] = cli.main(corpus_run)
    codes["unmutated corpus-run"] = cli.main(corpus_run)
    capsys.readouterr()

    negatives = {}
    for argv, ws, verdict in NEGATIVE_CONTROLS:
        code = cli.main(argv + ["-w", str(data_dir / f"{ws}.json")])
        out, _ = capsys.readouterr()
        negatives[" ".join(argv)] = (code, verdict in out)

    violations_ok = all(c == 3 for label, c in codes.items() if label != "unmutated corpus-run")
    baseline_ok = codes["unmutated corpus-run"] == 0
    negatives_ok = all(code == 0 and seen for code, seen in negatives.values())
    ok = violations_ok and baseline_ok and negatives_ok
    record(11, ok, f"{len(codes) - 1} injected violations exit 3; {len(negatives)} negative controls "
                   f"exit 0 with negative verdicts")
    assert ok, (codes, negatives)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
