import json
import math

import pytest

from hypb.topology import (GLUING, DegenerateLevel, census, classify_level_set, count_components_numeric,
                           signature)
from hypb.billiard import BilliardTable, random_start

COLLARED = [(-5, 2, "Regular"), (0.5, 2, "Resonant"), (1.5, 0, "Empty"), (2.5, 2, "Regular"),
            (7, 2, "Regular"), (math.inf, 2, "Regular")]
TRANSVERSE = [(-3, 1, "Regular"), (-0.5, 2, "Regular"), (0.5, 2, "Regular"), (2, 1, "Regular"),
              (3, 1, "Regular"), (9, 1, "Regular"), (math.inf, 1, "Regular")]


@pytest.mark.parametrize("lam,tori,notes", COLLARED)
def test_classify_collared(lam, tori, notes):
    cl = classify_level_set("collared", lam)
    assert (cl.tori_count, cl.notes) == (tori, notes)


@pytest.mark.parametrize("lam,tori,notes", TRANSVERSE)
def test_classify_transverse(lam, tori, notes):
    cl = classify_level_set("transverse", lam)
    assert (cl.tori_count, cl.notes) == (tori, notes)


def test_singular_levels():
    assert classify_level_set("collared", 3).atom == "C2"
    assert classify_level_set("collared", 1).atom == "A"
    assert classify_level_set("collared", 2).atom_count == 2
    assert classify_level_set("transverse", 0).atom == "A"
    assert classify_level_set("transverse", 0).atom_count == 4
    assert classify_level_set("transverse", -1).atom == "B"
    assert classify_level_set("transverse", 1).notes == "Separatrix"
    with pytest.raises(ValueError):
        classify_level_set("transverse", 0.5, (1, 2, 3))


def test_census_structure():
    c = census("collared")
    json.dumps(c)
    assert c["atom_counts"] == {"A": 4, "C2": 1}
    assert [i["tori"] for i in c["intervals"]] == [2, 2, 0, 2, 2]
    assert c["gluing_matrices"]["A_L"] == [list(r) for r in GLUING["A_L"]]
    t = census("transverse")
    assert t["atom_counts"] == {"A": 4, "B": 2}
    assert [i["tori"] for i in t["intervals"]] == [1, 2, 2, 1, 1]
    assert t["infinity"]["at_infinity"] and t["infinity"]["lam"] is None
    assert len(t["marks"]["edges"]) == 5


@pytest.mark.parametrize("fam,lam", [((1, 2, 3), -5), ((1, 2, 3), 2.5), ((1, 2, 3), 1.5),
                                     ((1, -1, 3), 0.5), ((1, -1, 3), -0.5), ((1, -1, 3), 2),
                                     ((1, -1, 3), -2)])
def test_numeric_count_matches(fam, lam):
    kind = BilliardTable(fam).kind
    assert count_components_numeric(fam, lam, samples=16) == classify_level_set(kind, lam, fam).tori_count


def test_resonant_band_never_hits():
    n, det = count_components_numeric((1, 2, 3), 0.4, samples=12, return_details=True)
    assert det["never_hits"] is True and n == 2


def test_singular_level_rejected():
    with pytest.raises(DegenerateLevel):
        count_components_numeric((1, 2, 3), 2)
    with pytest.raises(DegenerateLevel):
        count_components_numeric((1, -1, 3), 0)


def test_signature_constant_along_orbit():
    import numpy as np
    table = BilliardTable((1, -1, 3))
    rng = np.random.default_rng(1)
    q, v = random_start(table, 0.5, rng)
    s1 = signature(q, v, table, bounces=10)
    s2 = signature(q, v, table, bounces=40)
    assert s1[:2] == s2[:2] and s1[2]


def test_orbit_into_lightlike_tangency():
    # this seed's bounces accumulate at (-1/2, 1/(2 sqrt 2), 3/(2 sqrt 2)),
    # where the boundary tangent is light-like
    import numpy as np
    from hypb.topology import _seeds
    table = BilliardTable((1, -1, 3))
    seeds = _seeds(table, 0.4, 24, np.random.default_rng(0))
    sigs = [signature(q, v, table) for q, v in seeds]
    stopped = [s for s in sigs if not s[3]]
    assert stopped and all(s[0] in ((-1, 0, 1), (1, 0, 1)) for s in stopped)
    assert count_components_numeric((1, -1, 3), 0.4) == 2
