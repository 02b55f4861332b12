"""Acceptance gate: one PASS/FAIL line per criterion, at the stated tolerance."""

import logging
import math
import random
import time
from fractions import Fraction

import pytest

from phifern import combinat, curves, dims, generate, phimod
from phifern.exactlinalg import padic_valuation
from phifern.phimod import FilteredPhiModule, Refinement

pytestmark = pytest.mark.acceptance
log = logging.getLogger(__name__)

LABELS = ["17A", "21A", "37B", "39A", "51A", "53A", "69A", "73A", "83A", "91B"]
A2_ROW = [-1, -1, 0, 1, 0, -1, 1, 1, -1, 0]
A5_ROW = [-2, -2, 0, 2, 3, 0, 0, 2, -2, -3]
HK_ROW = [2, 2, 8, 2, 8, 2, 2, 32, 2, 2]
DEG_ROW = [1, 1, 2, 2, 2, 2, 2, 3, 2, 4]


def cycles(n, *cs):
    img = list(range(1, n + 1))
    for c in reversed(cs):
        step = dict(zip(c, c[1:] + c[:1]))
        img = [step.get(x, x) for x in img]
    return tuple(img)


def test_c01_table_reproduction(record_criterion):
    t0 = time.perf_counter()
    spec17 = curves.CurveSpec("17A", (1, -1, 1, -1, 0), 17, 5, -4)
    row17 = (curves.trace_of_frobenius(spec17, 2), curves.trace_of_frobenius(spec17, 5))
    cs = curves.corpus_curves()
    a2 = [curves.trace_of_frobenius(c, 2) for c in cs]
    a5 = [curves.trace_of_frobenius(c, 5) for c in cs]
    elapsed = time.perf_counter() - t0
    ok = [c.label for c in cs] == LABELS and a2 == A2_ROW and a5 == A5_ROW and row17 == (-1, -2) and elapsed < 1
    record_criterion(1, "corpus a_2 / a_5 rows", ok, f"a_2={a2} a_5={a5} in {elapsed * 1e3:.1f} ms")
    assert ok


def test_c02_j_check(record_criterion):
    c = curves.CurveSpec("17A", (1, -1, 1, -1, 0), 17, 5, -4)
    j = curves.j_invariant(c)
    v = padic_valuation(j, 17)
    (verdict,) = curves.check_condition_c(c)
    ok = j == Fraction(3 ** 3 * 11 ** 3, 17) and v == -1 and abs(v) < 5 and verdict.status == curves.PASS \
        and verdict.evidence.get("nonsplit") is True
    record_criterion(2, "17A j-invariant and non-split clause", ok, f"j={j} v_17={v} (c)={verdict.status}")
    assert ok


def test_c03_corpus_verdicts(record_criterion):
    cs = curves.corpus_curves()
    reports = [curves.unobstruction_report(c) for c in cs]
    ok = (all(r.status == curves.CERTIFIED for r in reports)
          and [c.h_Kprime for c in cs] == HK_ROW and [c.modular_degree for c in cs] == DEG_ROW
          and all(c.p == 5 and c.disc_E == -4 for c in cs))
    record_criterion(3, "all ten classes certified", ok,
                     ", ".join(f"{r.label}:{'ok' if r.status == curves.CERTIFIED else r.status}" for r in reports))
    assert ok


def test_c04_nested_counts(record_criterion):
    t0 = time.perf_counter()
    counts = {n: len(combinat.enumerate_nested(n)) for n in range(2, 10)}
    display = {s.perms for s in combinat.enumerate_nested(3)}
    elapsed = time.perf_counter() - t0
    want = {
        ((1, 2, 3), cycles(3, (1, 2, 3)), cycles(3, (2, 3), (1, 2, 3))),
        ((1, 2, 3), cycles(3, (3, 2, 1)), cycles(3, (1, 2), (3, 2, 1))),
    }
    ok = all(c == 2 ** (n - 2) for n, c in counts.items()) and display == want and elapsed < 1
    record_criterion(4, "nested counts 2^(n-2), n = 2..9, and the S_3 display", ok,
                     f"{list(counts.values())} in {elapsed * 1e3:.1f} ms")
    assert ok


def test_c05_selfdual_counts(record_criterion):
    counts = {n: combinat.count_selfdual_regular_orderings(n) for n in (2, 4, 6, 8)}
    ok = all(c == 2 ** (n // 2) * math.factorial(n // 2) for n, c in counts.items())
    record_criterion(5, "self-dual ordering counts 2^k k!", ok, str(counts))
    assert ok


def test_c06_dimension_ledger(record_criterion):
    bad = []
    for n in range(1, 11):
        l = dims.tangent_ledger(n)
        checks = [l.full == n * n + 1, l.trianguline == n * (n + 1) // 2 + 1, l.crystalline == n * (n - 1) // 2 + 1]
        if n >= 2:
            checks += [l.mirabolic == n * n - n + 1,
                       (l.trianguline - l.crystalline) + (l.mirabolic - l.crystalline)
                       == n * (n + 1) // 2 == l.full - l.crystalline]
        if not all(checks):
            bad.append(n)
    ok = not bad
    record_criterion(6, "dimension ledger n = 1..10", ok, f"failures at {bad}" if bad else "all identities hold")
    assert ok


def test_c07_rank3_constructive(record_criterion):
    t0 = time.perf_counter()
    mods, stats = generate.corpus(3, seed=2024, count=200,
                                  accept=lambda d: not phimod.admissible_complementary_pairs(d))
    methods, failures = {}, 0
    for d in mods:
        w = phimod.find_nested_noncritical(d)
        if w is None or not all(phimod.is_noncritical_refinement(d, f) for f in w.refinements):
            failures += 1
            continue
        methods[w.method] = methods.get(w.method, 0) + 1
    elapsed = time.perf_counter() - t0
    ok = len(mods) == 200 and failures == 0 and elapsed < 30
    record_criterion(7, "rank-3 nested non-critical triples", ok,
                     f"{200 - failures}/200 via {methods}, rejections {stats.rejected}, {elapsed:.1f} s")
    assert ok


def test_c08_sym_power(record_criterion):
    rng = random.Random(5)
    accepted, rejected, bad = 0, 0, []
    while accepted < 100:
        a, b = generate.random_flag_line(rng)
        if a == 0 or b == 0:
            rejected += 1
            continue
        accepted += 1
        d2 = FilteredPhiModule.build(5, [1, 2], [0, 1], [[1, 0], [a, b]])
        for n in (2, 3, 4, 5):
            # every subset is a prefix of some refinement, so this is the n! scan
            if not all(phimod.noncritical_table(phimod.sym_power(d2, n)).values()):
                bad.append(((a, b), n))
    log.info("sym-power draws: %d accepted, %d eigenline rejections", accepted, rejected)
    ok = not bad
    record_criterion(8, "Sym^n refinements all non-critical, n = 2..5", ok,
                     f"{accepted - len({x for x, _ in bad})}/{accepted} accepted lines, {rejected} eigenlines rejected")
    assert ok


def test_c09_rank4_witness(record_criterion):
    rng = random.Random(9)
    mu, x = 1, 2
    wanted = {(mu * x ** 3, mu * x, mu, mu * x ** 2),
              (mu * x ** 3, mu * x ** 2, mu * x, mu),
              (mu * x ** 3, mu * x ** 2, mu, mu * x)}
    accepted, rejected, misses = 0, 0, 0
    while accepted < 50:
        flag = generate.random_invertible(4, rng, -9, 9)
        d = FilteredPhiModule(5, tuple(Fraction(v) for v in (1, 2, 4, 8)), (-3, -1, 1, 3), flag)
        if not phimod.is_generic(d):
            rejected += 1
            continue
        accepted += 1
        ok_d, w = phimod.is_weakly_generic_regular(d)
        images = {tuple(int(v) for v in f.values(d)) for f in w.refinements} if ok_d else set()
        if not (ok_d and wanted <= images):
            misses += 1
    ok = misses == 0
    record_criterion(9, "rank-4 (1,2,4,8) weakly generic regular witness", ok,
                     f"{accepted - misses}/{accepted} generic flags, {rejected} non-generic draws rejected")
    assert ok


def _random_instance(rng, i):
    n = 2 + i % 3
    if i % 2 == 0:
        return generate.random_weakly_admissible(n, rng)
    pool = [Fraction(u) * Fraction(5) ** v for u in (1, 2, 3, -1, -4) for v in range(-2, 4)]
    eig = rng.sample(pool, n)
    weights = sorted(rng.sample(range(-4, 6), n))
    return FilteredPhiModule(5, tuple(eig), tuple(weights), generate.random_invertible(n, rng, -1, 1))


def test_c10_duality_twist(record_criterion):
    rng = random.Random(10)
    failures = 0
    for i in range(500):
        d = _random_instance(rng, i)
        f = Refinement(tuple(rng.sample(range(1, d.rank + 1), d.rank)))
        nc = phimod.is_noncritical_refinement(d, f)
        wa = phimod.is_weakly_admissible(d)
        good = phimod.is_noncritical_refinement(phimod.dual(d), f.reversed()) == nc
        for m in range(-3, 4):
            t = phimod.twist(d, m)
            good &= phimod.is_noncritical_refinement(t, f) == nc and phimod.is_weakly_admissible(t) == wa
        failures += not good
    ok = failures == 0
    record_criterion(10, "duality and twist invariance", ok, f"{500 - failures}/500 pairs")
    assert ok


def test_c11_classicality(record_criterion):
    cases = [
        (([0, 1, 2], [1, 5, 25]), False, {"i": True, "ii": True, "iii": False}),
        (([0, 1, 2], [1, 50, 25]), True, {"i": True, "ii": True, "iii": True}),
        (([0, 1, 2], [25, 5, 1]), False, {"ii": False}),
    ]
    results = []
    for (weights, eigs), want, clauses in cases:
        r = dims.classicality_check(weights, eigs, 5)
        got = {c.name: c.holds for c in r.clauses}
        results.append(r.classical == want and all(got[k] == v for k, v in clauses.items()) and len(r.clauses) == 3)
    ok = all(results)
    record_criterion(11, "classicity clause examples", ok, f"{sum(results)}/3")
    assert ok


def test_permutation_helper():
    assert cycles(3, (1, 2, 3)) == (2, 3, 1)
    assert cycles(3, (2, 3), (1, 2, 3)) == (3, 2, 1)
