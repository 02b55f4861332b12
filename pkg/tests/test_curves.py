import random
from fractions import Fraction

import pytest
import sympy

from phifern import curves
from phifern.curves import (
    CERTIFIED,
    FAIL,
    INCONCLUSIVE,
    PASS,
    BadReduction,
    CurveSpec,
    corpus_curves,
    corpus_table,
    check_condition_a,
    check_condition_b,
    check_condition_c,
    count_points,
    count_points_short,
    j_invariant,
    quadratic_character,
    trace_of_frobenius,
    unobstruction_report,
    weierstrass_invariants,
)
from phifern.exactlinalg import padic_valuation


def curve(a, label="test", conductor=11, p=5, disc_E=-4, **kw):
    kw.setdefault("modular_degree", 1)
    kw.setdefault("h_E", 1)
    kw.setdefault("h_Kprime", 2)
    return CurveSpec(label, tuple(a), conductor, p, disc_E, **kw)


E17 = curve([1, -1, 1, -1, 0], "17A", 17)


def naive_count(a, ell):
    a1, a2, a3, a4, a6 = a
    return 1 + sum(1 for x in range(ell) for y in range(ell)
                   if (y * y + a1 * x * y + a3 * y - (x ** 3 + a2 * x * x + a4 * x + a6)) % ell == 0)


def test_17a_counts():
    assert count_points(E17, 2) == 4
    assert count_points(E17, 5) == 8
    assert trace_of_frobenius(E17, 2) == -1
    assert trace_of_frobenius(E17, 5) == -2


def test_small_count():
    assert count_points(curve([0, 0, 0, 0, 1], conductor=36), 5) == 6


def test_bad_reduction():
    with pytest.raises(BadReduction):
        count_points(E17, 17)
    with pytest.raises(ValueError):
        count_points(E17, 9)


def test_j_invariant():
    assert j_invariant(E17) == Fraction(3 ** 3 * 11 ** 3, 17) == Fraction(35937, 17)
    assert j_invariant(curve([0, 0, 0, -1, 0], conductor=32)) == 1728
    assert padic_valuation(j_invariant(E17), 17) == -1


def test_singular_rejected():
    with pytest.raises(ValueError):
        curve([0, 0, 0, 0, 0])


def test_quadratic_character_examples():
    assert quadratic_character(-4, 17) == 1
    assert quadratic_character(-4, 3) == -1
    assert quadratic_character(-4, 13) == 1
    with pytest.raises(ValueError):
        quadratic_character(-4, 2)


def test_quadratic_character_minus_four():
    for ell in sympy.primerange(3, 1000):
        assert quadratic_character(-4, ell) == (1 if ell % 4 == 1 else -1)
        assert quadratic_character(-4, ell) == sympy.jacobi_symbol(-4 % ell, ell)


def test_weierstrass_identity_random():
    rng = random.Random(1)
    checked = 0
    while checked < 200:
        a = [rng.randint(-20, 20) for _ in range(5)]
        inv = weierstrass_invariants(a)
        if inv.discriminant == 0:
            continue
        checked += 1
        assert 1728 * inv.discriminant == inv.c4 ** 3 - inv.c6 ** 2
        assert j_invariant(curve(a)) * inv.discriminant == inv.c4 ** 3


def test_counters_agree_with_naive_and_short():
    rng = random.Random(2)
    for _ in range(60):
        a = [rng.randint(-9, 9) for _ in range(5)]
        disc = weierstrass_invariants(a).discriminant
        if disc == 0:
            continue
        c = curve(a)
        for ell in (2, 3, 5, 7, 11, 13, 29, 31):
            if disc % ell == 0:
                continue
            n = count_points(c, ell)
            assert n == naive_count(a, ell)
            assert (ell + 1 - n) ** 2 <= 4 * ell
            if ell > 3:
                assert n == count_points_short(c, ell)


def test_large_prime_counter_agrees():
    for c in corpus_curves():
        for ell in (521, 1009, 2003):
            if c.discriminant % ell:
                assert count_points(c, ell) == count_points_short(c, ell)


def test_condition_a():
    v = check_condition_a(E17)
    assert v.status == PASS and v.evidence["a_p"] == -2
    # a_7 of 17A
    c7 = curve(E17.a_invariants, "17A", 17, p=7)
    a7 = trace_of_frobenius(c7, 7)
    expect = PASS if a7 % 7 not in (1, 6) else INCONCLUSIVE
    assert check_condition_a(c7).status == expect


def test_condition_a_branches(monkeypatch):
    for ap, status in ((6, INCONCLUSIVE), (4, INCONCLUSIVE), (0, PASS), (5, PASS), (3, PASS)):
        monkeypatch.setattr(curves, "trace_of_frobenius", lambda c, ell, ap=ap: ap)
        assert check_condition_a(E17).status == status


def test_condition_b():
    (v,) = check_condition_b(E17)
    assert v.prime == 2 and v.status == PASS
    assert v.evidence["a_ell"] == -1


def test_condition_b_failures(monkeypatch):
    # ell = 11 is 1 mod 5: fails whatever a_11 is
    c = curve([0, 0, 1, -1, 0], conductor=37, disc_E=-11)
    (v,) = check_condition_b(c)
    assert v.prime == 11 and v.status == FAIL
    # a_3 = 4 = 3 + 1 mod 5
    monkeypatch.setattr(curves, "trace_of_frobenius", lambda c, ell: 4)
    c3 = curve([0, 0, 1, -1, 0], conductor=37, disc_E=-3)
    (v,) = check_condition_b(c3)
    assert v.status == FAIL


def test_condition_c():
    (v,) = check_condition_c(E17)
    assert v.status == PASS
    assert v.evidence["v_ell_j"] == -1
    assert v.evidence["ell_sq_mod_p"] == 4
    assert v.evidence["ell_cubed_eps_mod_p"] == 3


def test_condition_c_21a():
    c = next(c for c in corpus_curves() if c.label == "21A")
    verdicts = {v.prime: v for v in check_condition_c(c)}
    assert verdicts[3].status == PASS and verdicts[7].status == PASS
    assert verdicts[3].evidence["epsilon"] == -1
    assert verdicts[3].evidence["ell_cubed_eps_mod_p"] == 3
    assert verdicts[3].evidence["v_ell_j"] == -2


def test_condition_c_congruence_failure():
    # 11^2 = 1 mod 5; 11a1 has multiplicative reduction at 11
    c = curve([0, -1, 1, -10, -20], conductor=11)
    (v,) = check_condition_c(c)
    assert v.prime == 11 and v.status == FAIL


def test_condition_c_not_semistable():
    c = curve([0, 0, 0, -1, 0], conductor=32)
    (v,) = check_condition_c(c)
    assert v.status == INCONCLUSIVE


def test_report_17a():
    r = unobstruction_report(E17)
    assert r.status == CERTIFIED
    assert r.primes_checked == (2, 5, 17)
    assert r.undecided() == []


def test_report_fails_on_degree():
    r = unobstruction_report(curve(E17.a_invariants, "17A", 17, modular_degree=5))
    assert r.status == "fails" and r.degree.status == FAIL


def test_report_missing_inputs():
    r = unobstruction_report(curve(E17.a_invariants, "17A", 17, h_Kprime=None))
    assert r.status == "inconclusive"
    assert r.class_numbers.status == INCONCLUSIVE and r.class_numbers.clause == "iii"
    r = unobstruction_report(curve(E17.a_invariants, "17A", 17, modular_degree=None))
    assert r.degree.status == INCONCLUSIVE


def test_corpus_matches_table():
    t = corpus_table()
    assert t["computed"]["a_2"] == [-1, -1, 0, 1, 0, -1, 1, 1, -1, 0]
    assert t["computed"]["a_5"] == [-2, -2, 0, 2, 3, 0, 0, 2, -2, -3]
    assert t["labels"] == ["17A", "21A", "37B", "39A", "51A", "53A", "69A", "73A", "83A", "91B"]


def test_corpus_j_values():
    js = {c.label: j_invariant(c) for c in corpus_curves()}
    assert js["17A"] == Fraction(3 ** 3 * 11 ** 3, 17)
    assert js["21A"] == Fraction(47 ** 3, 3 ** 2 * 7)
    assert js["53A"] == Fraction(3 ** 3 * 5 ** 3, 53)


def test_corpus_conductor_primes_are_multiplicative():
    for c in corpus_curves():
        j = j_invariant(c)
        for ell in sympy.primefactors(c.conductor):
            assert c.discriminant % ell == 0
            assert 0 > padic_valuation(j, ell) > -c.p


def test_curvespec_from_dict():
    data = {"label": "x", "a_invariants": [1, -1, 1, -1, 0], "conductor": 17, "p": 5, "disc_E": -4}
    c = CurveSpec.from_dict(data)
    assert c.h_Kprime is None and c.assume_surjective_mod_p
    with pytest.raises(ValueError):
        CurveSpec.from_dict({"label": "x"})
    with pytest.raises(ValueError):
        CurveSpec.from_dict({**data, "a_invariants": [1, 2]})
