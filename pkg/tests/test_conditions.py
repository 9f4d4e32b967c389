from fractions import Fraction as F
import math
import random

import pytest

import oracles
from hypb.conditions import (InvalidRange, MismatchBeyondScalar, NuOutOfAllRanges, admissible_ranges,
                             cartesian_period, coeff_sequence, condition_polynomial, disc_closed_form,
                             elliptic_periodicity_condition, find_elliptic_caustics, find_periodic_caustics,
                             g_closed_form, periodicity_condition, proportionality, separable_g3_discriminant,
                             trajectory_causal, verify_discriminant_factorization)
from hypb.minkowski import AT_INFINITY, ConfocalFamily
from hypb.series import RatPoly, poly_discriminant

# oracles.cayley_poly((1, 2, 3), n), frozen (lowest degree first)
G123 = {
    3: [108, -132, 23],
    4: [216, -396, 138, 35],
    5: [-233280, 855360, -1014768, 225504, 407124, -292428, 52487],
    6: [-1679616, 8211456, -13250304, 2426112, 18917280, -26682048, 16087824, -4470736, 439967],
    7: [-15237476352, 111741493248, -302209947648, 235616532480, 683051118336, -2340020855808,
        3506250468096, -3180378463488, 1849371231600, -680571990432, 147651546024, -15704697384,
        441041329],
}


def _normalized(P):
    c = [F(x) for x in P.c]
    return c if c[-1] > 0 else [-x for x in c]


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_frozen_condition_polynomials(n):
    assert _normalized(condition_polynomial(n, (1, 2, 3))) == G123[n]


@pytest.mark.parametrize("abc,n", [((F(1, 2), F(5, 3), F(7, 2)), 4), ((2, -3, 5), 3), ((2, -3, 5), 5),
                                   ((F(3, 4), F(-2, 7), F(9, 5)), 6)])
def test_live_oracle(abc, n):
    ref = oracles.as_int_list(oracles.cayley_poly(abc, n))
    assert _normalized(condition_polynomial(n, abc)) == ref


def test_degrees():
    fam = (1, 2, 3)
    assert [condition_polynomial(n, fam).degree for n in range(3, 8)] == [2, 3, 6, 8, 12]


def test_coeff_sequence_squares_back():
    fam = ConfocalFamily(1, 2, 3)
    y = coeff_sequence("B", fam, F(-6), 8)
    sq = [sum(y.c[i] * y.c[k - i] for i in range(k + 1)) for k in range(9)]
    # (1 - X)(1 - X/2)(1 - X/3)(1 + X/6)
    R = RatPoly([1, -1]) * RatPoly([1, F(-1, 2)]) * RatPoly([1, F(-1, 3)]) * RatPoly([1, F(1, 6)])
    assert sq == [R.coeff(k) for k in range(9)]


def test_symbolic_and_numeric_agree():
    fam = (1, 2, 3)
    P = condition_polynomial(4, fam)
    assert periodicity_condition(4, fam, -6).value == 0
    v = periodicity_condition(4, fam, F(1, 3)).value
    # the determinant equals the polynomial up to a factor free of roots
    assert v != 0 and P(F(1, 3)) != 0
    fv = periodicity_condition(4, fam, -6.000000001).value
    assert abs(fv) < 1e-6


def test_branch_points_rejected():
    with pytest.raises(InvalidRange):
        periodicity_condition(4, (1, 2, 3), 2)
    with pytest.raises(InvalidRange):
        coeff_sequence("B", (1, 2, 3), AT_INFINITY, 5)


def test_light_condition():
    rep = periodicity_condition(4, ("1", "3/2", 3), light=True)
    assert rep.family == "E" and rep.value == 0
    assert periodicity_condition(4, (1, 2, 3), light=True).value != 0
    assert periodicity_condition(5, (1, 2, 3), light=True).note


def test_period_two_note():
    assert "symmetry" in periodicity_condition(2, (1, 2, 3)).note


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_closed_forms_random_triples(n):
    rng = random.Random(n)
    for _ in range(4):
        a = F(rng.randint(1, 9), rng.randint(1, 4))
        b = a + F(rng.randint(1, 9), rng.randint(1, 4))
        c = b + F(rng.randint(1, 9), rng.randint(1, 4))
        for abc in ((a, b, c), (a, -b, a + c)):
            lam = proportionality(condition_polynomial(n, abc), g_closed_form(n, abc))
            assert lam is not None and lam != 0


def test_discriminant_closed_forms():
    triples = [(1, 2, 3), (F(1, 2), F(5, 3), F(7, 2)), (2, -3, 5)]
    for n in range(3, 8):
        rows = verify_discriminant_factorization(n, triples)
        assert all(r["match"] for r in rows)
    assert disc_closed_form(4, ConfocalFamily(1, 2, 3)) == 64 * 6**8 * 4


def test_mismatch_is_reported(monkeypatch):
    import hypb.conditions as C
    real = C.disc_closed_form
    monkeypatch.setattr(C, "disc_closed_form", lambda n, fam: real(n, fam) * 3)
    with pytest.raises(MismatchBeyondScalar):
        C.verify_discriminant_factorization(3, [(1, 2, 3)])


def test_separable_g3():
    for A, C in [(1, 2), (F(2, 3), F(-5, 7)), (3, F(1, 2))]:
        got, expected = separable_g3_discriminant(A, C)
        assert got == expected


def test_ranges_and_causal():
    assert admissible_ranges((1, 2, 3)) == [(-math.inf, 0), (2, 3), (3, math.inf)]
    assert len(admissible_ranges((1, -1, 3))) == 5
    assert trajectory_causal((1, 2, 3), -1).value == "space-like"
    assert trajectory_causal((1, 2, 3), 2.5).value == "time-like"
    assert trajectory_causal((1, -1, 3), AT_INFINITY).value == "light-like"
    assert cartesian_period(3, (1, 2, 3)) == 6 and cartesian_period(3, (1, -1, 3)) == 3


def test_find_periodic_caustics():
    got = find_periodic_caustics(4, (1, 2, 3))
    assert [d["nu"] for d in got] == [-6.0]
    got = find_periodic_caustics(6, (1, 2, 3))
    assert [round(d["nu"], 9) for d in got] == [-0.756791902, 4.750722405]
    assert find_periodic_caustics(3, (1, 2, 3)) == []
    # transverse odd conditions keep period n
    assert find_periodic_caustics(3, (1, -1, 3))


def test_elliptic_parts_n2():
    reps = {r.part: r for r in elliptic_periodicity_condition(2, (1, 2, 3))}
    assert set(reps) == {"a", "b"}
    assert reps["b"].poly.c == [6, 1]
    got = find_elliptic_caustics(2, (1, 2, 3))
    assert {d["part"] for d in got} == {"a", "b"} and all(d["nu"] == -6 for d in got)


def test_elliptic_parts_numeric_range():
    with pytest.raises(NuOutOfAllRanges):
        elliptic_periodicity_condition(3, (1, 2, 3), F(3, 2))
    reps = elliptic_periodicity_condition(3, (1, 2, 3), F(5, 2))
    assert {r.part for r in reps} == {"a", "d"}


def test_to_dict():
    d = periodicity_condition(3, (1, 2, 3)).to_dict()
    assert d["poly"] == ["108", "-132", "23"] and d["valid_nu_ranges"][0] == [None, 0]
    assert poly_discriminant(condition_polynomial(3, (1, 2, 3))) == 132**2 - 4 * 108 * 23
