"""Elliptic curves over Q: point counts, traces of Frobenius, j-invariants and
the local/global conditions certifying an unobstructed Sym^2 residual
representation.

Class numbers and modular degrees are table inputs, never computed here;
a certified report is certified *given* those inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .exactlinalg import is_prime, padic_valuation, prime_factors

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"
CERTIFIED = "certified-unobstructed-given-inputs"

COUNT_BOUND = 10 ** 6
_BRUTE_LIMIT = 512


class BadReduction(ValueError):
    pass


@dataclass(frozen=True)
class WeierstrassInvariants:
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    discriminant: int


def weierstrass_invariants(a: Sequence[int]) -> WeierstrassInvariants:
    a1, a2, a3, a4, a6 = (int(x) for x in a)
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return WeierstrassInvariants(b2, b4, b6, b8, c4, c6, disc)


@dataclass(frozen=True)
class CurveSpec:
    label: str
    a_invariants: tuple[int, int, int, int, int]
    conductor: int
    p: int
    disc_E: int
    modular_degree: Optional[int] = None
    h_E: Optional[int] = None
    h_Kprime: Optional[int] = None
    assume_surjective_mod_p: bool = True

    def __post_init__(self):
        if len(self.a_invariants) != 5:
            raise ValueError("need five a-invariants")
        if self.discriminant == 0:
            raise ValueError(f"{self.label}: singular Weierstrass equation")
        if self.conductor <= 0:
            raise ValueError("conductor must be positive")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        for name in ("modular_degree", "h_E", "h_Kprime"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def discriminant(self) -> int:
        return weierstrass_invariants(self.a_invariants).discriminant

    @classmethod
    def from_dict(cls, data: dict) -> "CurveSpec":
        required = ("label", "a_invariants", "conductor", "p", "disc_E")
        missing = [k for k in required if k not in data]
        if missing:
            raise ValueError(f"missing fields: {missing}")
        a = data["a_invariants"]
        if not isinstance(a, list) or len(a) != 5 or not all(isinstance(x, int) for x in a):
            raise ValueError("a_invariants must be a list of five integers")
        return cls(
            label=str(data["label"]),
            a_invariants=tuple(a),
            conductor=int(data["conductor"]),
            p=int(data["p"]),
            disc_E=int(data["disc_E"]),
            modular_degree=data.get("modular_degree"),
            h_E=data.get("h_E"),
            h_Kprime=data.get("h_Kprime"),
            assume_surjective_mod_p=bool(data.get("assume_surjective_mod_p", True)),
        )


def _check_good(c: CurveSpec, ell: int):
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if c.discriminant % ell == 0:
        raise BadReduction(f"{c.label} has bad reduction at {ell}")


def count_points(c: CurveSpec, ell: int) -> int:
    """|A(F_ell)| including the point at infinity.

    Small ell: every (x, y) pair is tested.  Larger odd ell: for fixed x the
    substitution z = 2y + a1 x + a3 is a bijection, so the y-count equals the
    number of square roots of the discriminant, read from a table of squares.
    """
    _check_good(c, ell)
    if ell > COUNT_BOUND:
        raise ValueError(f"ell = {ell} exceeds enumeration bound {COUNT_BOUND}")
    a1, a2, a3, a4, a6 = c.a_invariants
    total = 1
    if ell < _BRUTE_LIMIT:
        for x in range(ell):
            rhs = (x * x * x + a2 * x * x + a4 * x + a6) % ell
            lin = (a1 * x + a3) % ell
            for y in range(ell):
                if (y * y + lin * y - rhs) % ell == 0:
                    total += 1
        return total
    roots = [0] * ell
    for z in range(ell):
        roots[z * z % ell] += 1
    for x in range(ell):
        lin = a1 * x + a3
        total += roots[(lin * lin + 4 * (x * x * x + a2 * x * x + a4 * x + a6)) % ell]
    return total


def legendre(a: int, ell: int) -> int:
    """Legendre symbol by Euler's criterion (odd prime ell)."""
    r = pow(a % ell, (ell - 1) // 2, ell)
    return -1 if r == ell - 1 else r


def count_points_short(c: CurveSpec, ell: int) -> int:
    """Independent count through the short model y^2 = x^3 - 27 c4 x - 54 c6 (ell > 3)."""
    _check_good(c, ell)
    if ell <= 3:
        raise ValueError("short Weierstrass model needs ell > 3")
    inv = weierstrass_invariants(c.a_invariants)
    A, B = -27 * inv.c4, -54 * inv.c6
    return ell + 1 + sum(legendre(x ** 3 + A * x + B, ell) for x in range(ell))


def trace_of_frobenius(c: CurveSpec, ell: int) -> int:
    a = ell + 1 - count_points(c, ell)
    if a * a > 4 * ell:
        raise ArithmeticError(f"Hasse bound violated: a_{ell} = {a}")
    return a


def j_invariant(c: CurveSpec) -> Fraction:
    inv = weierstrass_invariants(c.a_invariants)
    return Fraction(inv.c4 ** 3, inv.discriminant)


def quadratic_character(disc: int, ell: int) -> int:
    """Kronecker symbol (disc / ell) for a prime ell not dividing disc."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if disc % ell == 0:
        raise ValueError(f"{ell} divides {disc}")
    if ell == 2:
        return 1 if disc % 8 in (1, 7) else -1
    return legendre(disc, ell)


@dataclass(frozen=True)
class Verdict:
    clause: str
    status: str
    prime: Optional[int] = None
    evidence: dict = field(default_factory=dict)


def check_condition_a(c: CurveSpec) -> Verdict:
    p = c.p
    _check_good(c, p)
    ap = trace_of_frobenius(c, p)
    r = ap % p
    ev = {"a_p": ap, "a_p_mod_p": r}
    if r == 0:
        return Verdict("a", PASS, p, {**ev, "reason": "supersingular at p"})
    if r in (1, p - 1):
        return Verdict("a", INCONCLUSIVE, p,
                       {**ev, "reason": "ordinary with a_p = ±1 mod p; splitness of A[p] at p not computed"})
    return Verdict("a", PASS, p, {**ev, "reason": "a_p not ±1 mod p"})


def check_condition_b(c: CurveSpec) -> list[Verdict]:
    p = c.p
    out = []
    for ell in prime_factors(c.disc_E):
        _check_good(c, ell)
        a = trace_of_frobenius(c, ell)
        forbidden = sorted({(ell + 1) % p, -(ell + 1) % p})
        ok_ell = ell % p != 1
        ok_a = a % p not in forbidden
        out.append(Verdict("b", PASS if ok_ell and ok_a else FAIL, ell, {
            "a_ell": a, "a_ell_mod_p": a % p, "ell_mod_p": ell % p,
            "forbidden_residues": forbidden,
        }))
    return out


def check_condition_c(c: CurveSpec) -> list[Verdict]:
    p = c.p
    j = j_invariant(c)
    out = []
    for ell in prime_factors(c.conductor):
        ev = {"ell_sq_mod_p": ell * ell % p}
        if c.conductor % (ell * ell) == 0:
            out.append(Verdict("c", INCONCLUSIVE, ell, {**ev, "reason": "not semistable at ell"}))
            continue
        v = padic_valuation(j, ell) if j != 0 else float("inf")
        ev["v_ell_j"] = v
        if c.disc_E % ell == 0:
            out.append(Verdict("c", INCONCLUSIVE, ell, {**ev, "reason": "ell divides disc(E)"}))
            continue
        eps = quadratic_character(c.disc_E, ell)
        twist = ell ** 3 * eps % p
        ev.update({"epsilon": eps, "ell_cubed_eps_mod_p": twist})
        congruences = ell * ell % p != 1 and twist != 1
        if not congruences:
            out.append(Verdict("c", FAIL, ell, ev))
        elif not (v < 0 and -v < p):
            reason = "potentially good reduction" if v >= 0 else "|v_ell(j)| >= p; non-split criterion does not apply"
            out.append(Verdict("c", INCONCLUSIVE, ell, {**ev, "reason": reason}))
        else:
            out.append(Verdict("c", PASS, ell, {**ev, "nonsplit": True}))
    return out


@dataclass(frozen=True)
class ObstructionReport:
    label: str
    p: int
    primes_checked: tuple[int, ...]
    setup: tuple[Verdict, ...]
    local: tuple[Verdict, ...]
    degree: Verdict
    class_numbers: Verdict
    status: str

    def undecided(self) -> list[Verdict]:
        return [v for v in self.all_verdicts() if v.status == INCONCLUSIVE]

    def all_verdicts(self) -> list[Verdict]:
        return list(self.setup) + list(self.local) + [self.degree, self.class_numbers]


def _setup_checks(c: CurveSpec) -> list[Verdict]:
    p = c.p
    out = [Verdict("p>=5", PASS if p >= 5 else INCONCLUSIVE, p)]
    good = c.discriminant % p != 0
    out.append(Verdict("good-reduction-at-p", PASS if good else INCONCLUSIVE, p))
    if c.disc_E % p == 0:
        out.append(Verdict("p-splits-in-E", INCONCLUSIVE, p, {"reason": "p ramifies in E"}))
    else:
        eps = quadratic_character(c.disc_E, p)
        out.append(Verdict("p-splits-in-E", PASS if eps == 1 else INCONCLUSIVE, p, {"epsilon_p": eps}))
    coprime = all(c.conductor % ell for ell in prime_factors(c.disc_E))
    out.append(Verdict("gcd(disc(E),cond(A))=1", PASS if coprime else INCONCLUSIVE))
    out.append(Verdict("surjective-mod-p", PASS if c.assume_surjective_mod_p else INCONCLUSIVE,
                       p, {"assumed": True}))
    return out


def unobstruction_report(c: CurveSpec) -> ObstructionReport:
    p = c.p
    setup = _setup_checks(c)
    local: list[Verdict] = []
    if c.discriminant % p:
        local.append(check_condition_a(c))
    bad_b = [ell for ell in prime_factors(c.disc_E) if c.discriminant % ell == 0]
    if bad_b:
        local.append(Verdict("b", INCONCLUSIVE, bad_b[0], {"reason": "bad reduction at a prime of disc(E)"}))
    else:
        local.extend(check_condition_b(c))
    local.extend(check_condition_c(c))

    if c.modular_degree is None:
        degree = Verdict("ii", INCONCLUSIVE, p, {"reason": "modular degree not supplied"})
    else:
        degree = Verdict("ii", FAIL if c.modular_degree % p == 0 else PASS, p,
                         {"modular_degree": c.modular_degree})

    if c.h_E is None or c.h_Kprime is None:
        cls = Verdict("iii", INCONCLUSIVE, p, {"reason": "class number not supplied",
                                               "h_E": c.h_E, "h_Kprime": c.h_Kprime})
    else:
        bad = c.h_E % p == 0 or c.h_Kprime % p == 0
        cls = Verdict("iii", FAIL if bad else PASS, p, {"h_E": c.h_E, "h_Kprime": c.h_Kprime})

    verdicts = setup + local + [degree, cls]
    if any(v.status == FAIL for v in verdicts):
        status = "fails"
    elif any(v.status == INCONCLUSIVE for v in verdicts):
        status = "inconclusive"
    else:
        status = CERTIFIED
    primes = sorted({p} | set(prime_factors(c.disc_E)) | set(prime_factors(c.conductor)))
    return ObstructionReport(c.label, p, tuple(primes), tuple(setup), tuple(local), degree, cls, status)


def load_curve_corpus() -> dict:
    text = resources.files("phifern").joinpath("data/curve_corpus.json").read_text()
    return json.loads(text)


def corpus_curves() -> list[CurveSpec]:
    return [CurveSpec.from_dict(d) for d in load_curve_corpus()["curves"]]


def corpus_table() -> dict:
    """Recompute the a_2, a_5, degree and h_K' rows beside the expected ones."""
    corpus = load_curve_corpus()
    curves = [CurveSpec.from_dict(d) for d in corpus["curves"]]
    computed = {
        "a_2": [trace_of_frobenius(c, 2) for c in curves],
        "a_5": [trace_of_frobenius(c, 5) for c in curves],
        "degree": [c.modular_degree for c in curves],
        "h_Kprime": [c.h_Kprime for c in curves],
    }
    expected = corpus["expected"]
    return {
        "labels": [c.label for c in curves],
        "computed": computed,
        "expected": expected,
        "match": {k: computed[k] == expected[k] for k in expected},
    }
