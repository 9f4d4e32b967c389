import math

import numpy as np
import pytest

import oracles
from hypb.conditions import admissible_ranges, condition_polynomial, in_ranges
from hypb.extremal import pell_from_periodicity, zeros_in
from hypb.rotation import (SCAN_COLUMNS, CoincidentRoots, NotBracketed, NotCollared, NotResonant,
                           NuOutOfRange, QuarticSpec, case_decomposition, find_caustic_for_rotation,
                           homology_check, quartic_spec, rotation_number, rotation_scan, scan_to_csv)
from hypb.series import real_roots


def test_quartic_cases():
    assert quartic_spec((1, 2, 3), -6).case == "i"
    assert quartic_spec((1, 2, 3), -6, outside=True).case == "ii"
    assert quartic_spec((1, 2, 3), 2.5).case == "iii"
    assert quartic_spec((1, 2, 3), 5).case == "i"
    assert quartic_spec((1, -1, 3), 2).case == "transverse"
    assert quartic_spec((1, 2, 3), -6).roots == pytest.approx((-1 / 6, 1 / 3, 1 / 2, 1))
    with pytest.raises(NuOutOfRange):
        quartic_spec((1, 2, 3), 0.5)
    with pytest.raises(NuOutOfRange):
        quartic_spec((1, 2, 3), 2.5, outside=True)
    with pytest.raises(CoincidentRoots):
        QuarticSpec(0, 1, 1, 2)


def test_rho_against_oracle():
    # nu = -6 on (1, 2, 3): a 4-periodic caustic winding twice
    spec = quartic_spec((1, 2, 3), -6)
    ref = oracles.quartic_integral_mp(spec.roots, 1.0, math.inf) / oracles.quartic_integral_mp(spec.roots, 1 / 3, 1 / 2)
    assert rotation_number(spec) == pytest.approx(ref, rel=1e-12)
    assert ref == pytest.approx(0.5, abs=1e-12)


def test_homology():
    for nu in (-6, -0.3, 2.2, 2.9, 7.0):
        d1, d2 = homology_check(quartic_spec((1, 2, 3), nu))
        assert d1 < 1e-12 and d2 < 1e-12


def test_bounds_random():
    rng = np.random.default_rng(4)
    for _ in range(40):
        c0, c1, c2, c3 = np.sort(rng.normal(size=4) * 3)
        rho = rotation_number(QuarticSpec(c0, c1, c2, c3))
        assert 0 < rho < 1


@pytest.mark.parametrize("fam", [(1, 2, 3), (2, 3, 7), ("1/2", "3/4", 5)])
def test_resonance_and_sturm(fam):
    checked = 0
    for n in range(3, 9):
        for r, _ in real_roots(condition_polynomial(n, fam)):
            if not in_ranges(r, admissible_ranges(fam)):
                continue
            spec = quartic_spec(fam, r)
            rho = rotation_number(spec)
            n1 = round(rho * n)
            assert abs(rho * n - n1) <= 1e-9
            pair = pell_from_periodicity(n, fam, r)
            assert zeros_in(pair.p_hat, spec.c0, spec.c1) == n1
            checked += 1
    assert checked >= 6


def test_case_decomposition():
    d = case_decomposition((1, 2, 3), -6, 4)
    assert d["case"] == "i" and d["n1"] == 2 and d["m"] == {"m0": 4, "m1": -2}
    d = case_decomposition((1, 2, 3), -6, 4, outside=True)
    assert d["m"] == {"m2": 4, "m3": 2}
    with pytest.raises(NotResonant):
        case_decomposition((1, 2, 3), -5, 4)
    with pytest.raises(NotCollared):
        case_decomposition((1, -1, 3), -0.5, 4)


def test_monotone_in_each_case():
    ws = np.linspace(-20, 1 / 3 - 1e-3, 30)
    rr = [rotation_number(QuarticSpec(w, 1 / 3, 1 / 2, 1)) for w in ws]
    assert np.all(np.diff(rr) > 0) or np.all(np.diff(rr) < 0)
    ws = np.linspace(1 / 3 + 1e-3, 1 / 2 - 1e-3, 30)
    rr = [rotation_number(QuarticSpec(1 / 3, w, 1 / 2, 1)) for w in ws]
    assert np.all(np.diff(rr) > 0) or np.all(np.diff(rr) < 0)


def test_inverse_problem():
    nu = find_caustic_for_rotation((1, 2, 3), 0.5, "i")
    assert nu == pytest.approx(-6, rel=1e-9)
    nu = find_caustic_for_rotation((2, 3, 7), 0.5, "iii")
    assert nu == pytest.approx(42 / 13, rel=1e-9)
    with pytest.raises(NotBracketed):
        find_caustic_for_rotation((1, 2, 3), 0.5, "iii")
    with pytest.raises(NotBracketed):
        find_caustic_for_rotation((1, 2, 3), 1.5)
    nu = find_caustic_for_rotation((1, 2, 3), 1 / 3, "i")
    assert rotation_number(quartic_spec((1, 2, 3), nu)) == pytest.approx(1 / 3, abs=1e-9)


def test_scan_csv():
    rows = rotation_scan((1, 2, 3), [-6, 0.5, 2.5], n=4)
    assert rows[1]["case"] == "skip"
    assert rows[0]["n1"] == 2 and rows[0]["residual"] < 1e-10
    text = scan_to_csv(rows)
    assert text.splitlines()[0] == ",".join(SCAN_COLUMNS)
    assert len(text.splitlines()) == 4
