"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run under pytest (lines are printed even with output capture on) or
directly with ``python tests/test_acceptance.py``.
"""
from fractions import Fraction as F
import math
import random
import time

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate

from hypb.billiard import BilliardTable, gap_after, simulate
from hypb.cli import census_check
from hypb.conditions import (admissible_ranges, condition_polynomial, disc_closed_form,
                             elliptic_periodicity_condition, g_closed_form, in_ranges, periodicity_condition, proportionality,
                             verify_discriminant_factorization)
from hypb.elliptic import complete_K, equioscillation_points, jacobi_sn_cn_dn
from hypb.extremal import (chebyshev_pell, degenerate_caustic_conditions, lightlike_period4_pell,
                           lightlike_table, pell_from_periodicity, zeros_in, zolotarev_m1_residual,
                           zolotarev_transverse_period3)
from hypb.minkowski import AT_INFINITY, ConfocalFamily
from hypb.rotation import quartic_spec, rotation_number
from hypb.series import RatPoly, poly_discriminant, real_roots

FAM = (1, 2, 3)


def _random_triples(seed, count=5):
    """Rational triples alternating between the collared and transverse orderings."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        a = F(rng.randint(1, 9), rng.randint(1, 5))
        gap1 = F(rng.randint(1, 9), rng.randint(1, 5))
        gap2 = F(rng.randint(1, 9), rng.randint(1, 5))
        out.append((a, a + gap1, a + gap1 + gap2) if k % 2 == 0 else (a, -gap1, a + gap2))
    return out


# 1 ------------------------------------------------------------------------

def criterion_1():
    t0 = time.time()
    table = BilliardTable(FAM)
    rng = np.random.default_rng(2024)
    problems, seen = [], []
    for n in (3, 4, 5, 6):
        for root in periodicity_condition(n, FAM).roots:
            if not root["in_range"]:
                continue
            nu = root["nu"]
            for _ in range(5):
                tr = simulate(table, nu, rng, 2 * n + 2)
                if tr is None:
                    problems.append(f"n={n} nu={nu:.6g}: no boundary state")
                    break
                period, gap = tr.closure["n"], gap_after(tr, n)
                seen.append((n, round(nu, 6), period))
                if period != n or gap > 1e-6:
                    problems.append(f"n={n} nu={nu:.6g}: Cartesian period {period}, gap after n {gap:.2g}"
                                    f" (after 2n {gap_after(tr, 2 * n):.1e})")
                    break
    # 20 caustics that solve none of the conditions
    polys = [condition_polynomial(n, FAM) for n in (3, 4, 5, 6)]
    ranges = admissible_ranges(FAM)
    misses = 0
    while misses < 20:
        nu = float(rng.uniform(-12, 12))
        if not in_ranges(nu, ranges) or any(abs(r - nu) < 1e-2 for P in polys for r, _ in real_roots(P)):
            continue
        tr = simulate(table, nu, rng, 7)
        gaps = [gap_after(tr, k) for k in (3, 4, 5, 6)]
        if min(gaps) < 1e-3:
            problems.append(f"non-root nu={nu:.6g} closes (gap {min(gaps):.2g})")
        misses += 1
    elapsed = time.time() - t0
    if elapsed >= 60:
        problems.append(f"runtime {elapsed:.1f}s")
    detail = "; ".join(problems) if problems else f"{len(seen)} runs close with period n, 20 non-roots open"
    return not problems, detail + f" [{elapsed:.1f}s]"


# 2 ------------------------------------------------------------------------

def criterion_2():
    bad = []
    for n in (3, 4, 5, 6):
        for abc in _random_triples(100 + n):
            if proportionality(condition_polynomial(n, abc), g_closed_form(n, abc)) is None:
                bad.append((n, abc))
    degs = {condition_polynomial(7, abc).degree for abc in _random_triples(7)}
    ok = not bad and degs == {12}
    return ok, f"mismatches {bad}; G_7 degrees {sorted(degs)}"


# 3 ------------------------------------------------------------------------

def _mp(x):
    x = F(x)
    return mp.mpf(x.numerator) / x.denominator


def criterion_3():
    triples = _random_triples(33)
    for n in (3, 4, 5, 6):
        rows = verify_discriminant_factorization(n, triples)
        if not all(r["match"] for r in rows):
            return False, f"n={n} exact mismatch"
    worst = 0.0
    with mp.workdps(80):
        for abc, row in zip(triples, verify_discriminant_factorization(7, triples)):
            fam = ConfocalFamily(*abc)
            G = condition_polynomial(7, fam)
            disc = _mp(poly_discriminant(G))
            expected = _mp(F(row["lambda"])) ** (2 * G.degree - 2) * _mp(disc_closed_form(7, fam))
            worst = max(worst, float(abs(disc - expected) / abs(disc)))
    return worst <= 1e-6, f"n=3..6 exact at 5 triples; n=7 worst relative defect {worst:.1e}"


# 4 ------------------------------------------------------------------------

def _printed_quadratics(abc):
    a, b, c = (F(x) for x in abc)
    r = a * b * c
    D2 = RatPoly([3 * r * r, -2 * r * (a * b + b * c + a * c),
                  4 * r * (a + b + c) - (a * b + a * c + b * c) ** 2])
    I2 = RatPoly([r * r, -2 * r * (-b * c + a * b + a * c),
                  a * a * (b - c) ** 2 + 2 * r * (b + c) - 3 * b * b * c * c])
    L2 = RatPoly([r * r, -2 * r * (a * b - a * c + b * c),
                  b * b * c * c + 2 * r * (c - b) + a * a * (b * b + 2 * b * c - 3 * c * c)])
    F1 = RatPoly([r, -a * b - a * c + b * c])
    return {"b": D2, "d": I2, "i": I2, "j": L2, "F1": F1}


def criterion_4():
    notes = []
    parts = {r.part: r for r in elliptic_periodicity_condition(2, FAM)}
    roots_b = [x for x, _ in real_roots(parts["b"].poly)]
    ok = roots_b == [-6.0] and proportionality(parts["b"].poly, _printed_quadratics(FAM)["F1"]) is not None
    rng = np.random.default_rng(4)
    table = BilliardTable(FAM)
    for _ in range(5):
        tr = simulate(table, -6.0, rng, 9)
        if tr.closure["elliptic_n"] != 2 or tr.closure["n"] != 4:
            ok = False
            notes.append(f"closure {tr.closure}")
    for abc in [FAM] + _random_triples(44):
        printed = _printed_quadratics(abc)
        for rep in elliptic_periodicity_condition(3, abc):
            if rep.part in printed and proportionality(rep.poly, printed[rep.part]) is None:
                ok = False
                notes.append(f"part {rep.part} at {abc}")
    return ok, "nu=-6 from part (b), Jacobi period 2 / Cartesian period 4; n=3 quadratics match" \
        if ok else "; ".join(notes)


# 5 ------------------------------------------------------------------------

def criterion_5():
    rational = []
    for n in (3, 4, 5, 6):
        P = condition_polynomial(n, FAM)
        for r, _ in real_roots(P):
            q = F(r).limit_denominator(10**6)
            if in_ranges(r, admissible_ranges(FAM)) and P(q) == 0:
                rational.append((n, q))
    bad = [(n, q) for n, q in rational if not (pell_from_periodicity(n, FAM, q).exact
                                               and pell_from_periodicity(n, FAM, q).verify())]
    T, U, cheb = chebyshev_pell(2)
    ok = bool(rational) and not bad and cheb and T.c == [-1, 0, 2] and U.c == [0, 2]
    return ok, f"rational periodic caustics {[(n, str(q)) for n, q in rational]}; failures {bad}; T_2 base case {cheb}"


# 6 ------------------------------------------------------------------------

def criterion_6():
    rng = np.random.default_rng(6)
    bounds_ok = 0
    for _ in range(100):
        a = rng.uniform(0.2, 3)
        b = a + rng.uniform(0.1, 3)
        c = b + rng.uniform(0.1, 3)
        pick = rng.integers(3)
        nu = -rng.uniform(0.05, 20) if pick == 0 else rng.uniform(b, c) if pick == 1 else c + rng.uniform(0.05, 20)
        rho = rotation_number(quartic_spec((a, b, c), nu), check=False)
        bounds_ok += 0 < rho < 1
    bad = []
    count = 0
    for n in range(3, 9):
        for r, _ in real_roots(condition_polynomial(n, FAM)):
            if not in_ranges(r, admissible_ranges(FAM)):
                continue
            spec = quartic_spec(FAM, r)
            rho = rotation_number(spec)
            n1 = round(rho * n)
            z = zeros_in(pell_from_periodicity(n, FAM, r).p_hat, spec.c0, spec.c1)
            count += 1
            if abs(rho * n - n1) > 1e-6 or z != n1:
                bad.append((n, r, rho * n, z))
    ok = bounds_ok == 100 and not bad and count > 0
    return ok, f"bounds hold on {bounds_ok}/100 random quartics; {count} period-n caustics, mismatches {bad}"


# 7 ------------------------------------------------------------------------

def criterion_7():
    rng = np.random.default_rng(7)
    worst = [0.0, 0.0, 0.0]
    for k in rng.uniform(0, 0.995, 10):
        u, v = rng.uniform(-10, 10, size=(2, 1000))
        sn, cn, dn = jacobi_sn_cn_dn(u, k)
        s2, c2, d2 = jacobi_sn_cn_dn(v, k)
        worst[0] = max(worst[0], np.max(np.abs(k * k * sn ** 2 + dn ** 2 - 1)))
        rhs = (sn * c2 * d2 + s2 * cn * dn) / (1 - k * k * sn ** 2 * s2 ** 2)
        worst[1] = max(worst[1], np.max(np.abs(jacobi_sn_cn_dn(u + v, k)[0] - rhs)))
        worst[2] = max(worst[2], np.max(np.abs(jacobi_sn_cn_dn(complete_K(k) - u, k)[0] - cn / dn)))
    kworst = 0.0
    for k in (0.05, 0.3, 0.6, 0.9, 0.99):
        val, _ = integrate.quad(lambda t: 1 / math.sqrt(1 - k * k * math.sin(t) ** 2), 0, math.pi / 2,
                                epsabs=1e-13, epsrel=1e-13, limit=200)
        kworst = max(kworst, abs(complete_K(k) - val) / val)
    ok = max(worst) <= 1e-10 and kworst <= 1e-10
    return ok, f"10^4 points: identity {worst[0]:.1e}, addition {worst[1]:.1e}, sn(K-z) {worst[2]:.1e}; K {kworst:.1e}"


# 8 ------------------------------------------------------------------------

def criterion_8():
    rng = random.Random(8)
    fams, notes = [], []
    while len(fams) < 5:
        a = F(rng.randint(1, 9), rng.randint(1, 4))
        fams.append((a, -F(rng.randint(1, 9), rng.randint(1, 4)), a + F(rng.randint(1, 9), rng.randint(1, 4))))
    ok = True
    for fam in fams:
        st = zolotarev_transverse_period3(fam)
        k = math.sqrt(st.kappa2)
        sn_err = abs(jacobi_sn_cn_dn(complete_K(k) / 3, k)[0] - st.Y)
        m1 = zolotarev_m1_residual(fam)
        left, right = equioscillation_points(3, 2, k)
        good = st.g3_residual <= 1e-9 and sn_err <= 1e-9 and m1 >= 1e-3 and (len(left), len(right)) == (2, 3)
        ok &= good
        notes.append(f"{tuple(map(str, fam))}: res {st.g3_residual:.0e} sn {sn_err:.0e} m1 {m1:.2g} "
                     f"alt {len(left)}+{len(right)}")
    return ok, "; ".join(notes)


# 9 ------------------------------------------------------------------------

def criterion_9():
    notes, ok = [], True
    for kind, fam in (("collared", lightlike_table("collared", 1, F(3, 2))),
                      ("transverse", lightlike_table("transverse", 1, c=3))):
        pair, _ = lightlike_period4_pell(kind, fam)
        rng = np.random.default_rng(9)
        table = BilliardTable(fam)
        gaps = []
        for _ in range(5):
            tr = simulate(table, AT_INFINITY, rng, 6)
            gaps.append(gap_after(tr, 4) if tr.closure["n"] == 4 else math.inf)
        good = pair.exact and pair.verify() and max(gaps) <= 1e-6
        ok &= good
        notes.append(f"{kind} {(str(fam.a), str(fam.b), str(fam.c))}: Pell exact {pair.verify()}, "
                     f"max gap {max(gaps):.1e}")
    return ok, "; ".join(notes)


# 10 -----------------------------------------------------------------------

def criterion_10():
    notes, ok = [], True
    for fam in (ConfocalFamily(1, 2, 3), ConfocalFamily(1, -1, 3)):
        rows = census_check(fam, count=20)
        agree = sum(r["agree"] for r in rows)
        resonant = [r for r in rows if r["notes"] == "Resonant"]
        if fam.kind == "collared" and (not resonant or not all(r["never_hits"] for r in resonant)):
            ok = False
        ok &= agree == len(rows) == 20
        notes.append(f"{fam.kind}: {agree}/{len(rows)} agree, {len(resonant)} resonant samples")
    return ok, "; ".join(notes)


# 11 -----------------------------------------------------------------------

def criterion_11():
    notes, ok = [], True
    for a, c in ((1, 3), (2, 5), (F(1, 3), F(7, 2))):
        a, c = F(a), F(c)
        b = 2 * a * c / (a + c)
        d = degenerate_caustic_conditions((a, b, c), 2)
        good = d["x0_exact"] == "0" and d["k"] == [1] and d["pell_identity"]
        ok &= good
        notes.append(f"b={b}: x0={d['x0_exact']} k={d['k']} Pell {d['pell_identity']}")
    return ok, "; ".join(notes)


CRITERIA = [
    (1, "Cayley/closure round-trip", criterion_1),
    (2, "condition-polynomial reproduction", criterion_2),
    (3, "discriminant factorization", criterion_3),
    (4, "elliptic periodicity", criterion_4),
    (5, "Pell identities", criterion_5),
    (6, "rotation numbers", criterion_6),
    (7, "elliptic-function suite", criterion_7),
    (8, "Zolotarev period 3", criterion_8),
    (9, "light-like period 4", criterion_9),
    (10, "topology census", criterion_10),
    (11, "degenerate caustic", criterion_11),
]


def _line(k, title, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {k:>2} {title}: {detail}"


@pytest.mark.parametrize("k,title,fn", CRITERIA, ids=[f"criterion_{k}" for k, _, _ in CRITERIA])
def test_criterion(k, title, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(k, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    for k, title, fn in CRITERIA:
        print(_line(k, title, *fn()))
