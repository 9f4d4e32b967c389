"""Liouville foliation census: level sets of the caustic parameter lambda.

``classify_level_set`` is a lookup of the Fomenko graph data for both
tables; ``count_components_numeric`` recounts the tori by simulation.
"""
from dataclasses import dataclass, asdict
import math

import numpy as np

from .billiard import (NEVER_HITS, BilliardTable, caustic_directions, next_bounce,
                       project_to_boundary, reflect)
from .minkowski import AT_INFINITY, J, Causal, ConfocalFamily, ip, normalize_dir


class DegenerateLevel(ValueError):
    pass


@dataclass(frozen=True)
class LevelSetClass:
    lam: float
    tori_count: int
    atom: str | None
    notes: str
    atom_count: int = 0

    def to_dict(self):
        d = asdict(self)
        d["lam"] = None if math.isinf(self.lam) else self.lam
        d["at_infinity"] = math.isinf(self.lam)
        return d


def _fam(fam):
    return fam if isinstance(fam, ConfocalFamily) else ConfocalFamily(*fam)


def classify_level_set(kind, lam, fam=None):
    """Level set class of lambda; the table parameters come from ``fam``
    (defaults (1, 2, 3) collared, (1, -1, 3) transverse)."""
    fam = _fam(fam or ((1, 2, 3) if kind == "collared" else (1, -1, 3)))
    if fam.kind != kind:
        raise ValueError(f"family is {fam.kind}")
    a, b, c = fam.abc
    lam = float(lam)
    if math.isinf(lam):
        return LevelSetClass(math.inf, 1 if kind == "transverse" else 2, None, "Regular")
    if kind == "transverse":
        if lam in (a, b):
            return LevelSetClass(lam, 0, "B", "Separatrix", 1)
        if lam == 0:
            # two A atoms close the tori of (b, 0) and two more those of (0, a)
            return LevelSetClass(lam, 0, "A", "Separatrix", 4)
        if b < lam < a:
            return LevelSetClass(lam, 2, None, "Regular")
        # (-inf, b), (a, c), c and (c, inf): one torus; lambda = c changes
        # the caustic type but not the motion
        return LevelSetClass(lam, 1, None, "Regular")
    if lam == c:
        return LevelSetClass(lam, 0, "C2", "Separatrix", 1)
    if lam in (a, b):
        return LevelSetClass(lam, 0, "A", "Separatrix", 2)
    if a < lam < b:
        return LevelSetClass(lam, 0, None, "Empty")
    if 0 <= lam < a:
        return LevelSetClass(lam, 2, None, "Resonant")
    return LevelSetClass(lam, 2, None, "Regular")


GLUING = {"A_L": ((0, 1), (1, 0)), "A_R": ((1, 0), (0, -1))}

MARKS = {
    "transverse": {
        "atoms": ["A", "A", "B", "B", "A", "A"],
        "edges": [
            {"from": "A(0-)", "to": "B(b)", "r": "0", "eps": 1},
            {"from": "A(0-)", "to": "B(b)", "r": "0", "eps": 1},
            {"from": "B(b)", "to": "B(a)", "r": "0", "eps": -1},
            {"from": "B(a)", "to": "A(0+)", "r": "0", "eps": 1},
            {"from": "B(a)", "to": "A(0+)", "r": "0", "eps": 1},
        ],
        "n_marks": {"B(b)": 0, "B(a)": 0},
    },
    "collared": {
        "atoms": ["A", "A", "C2", "A", "A"],
        "edges": [
            {"from": "A(b)", "to": "C2(c)", "r": "0", "eps": 1, "gluing": "A_L"},
            {"from": "A(b)", "to": "C2(c)", "r": "0", "eps": 1, "gluing": "A_L"},
            {"from": "C2(c)", "to": "A(a)", "r": "inf", "eps": 1, "gluing": "A_R"},
            {"from": "C2(c)", "to": "A(a)", "r": "inf", "eps": 1, "gluing": "A_R"},
        ],
        "n_marks": {},
    },
}


def census(kind, fam=None):
    """JSON-ready census of a table: intervals, atoms, gluing data and marks."""
    fam = _fam(fam or ((1, 2, 3) if kind == "collared" else (1, -1, 3)))
    a, b, c = fam.abc
    if kind == "transverse":
        cuts = sorted([b, 0.0, a, c])
    else:
        cuts = [0.0, a, b, c]
    edges = [-math.inf] + cuts + [math.inf]
    intervals = []
    for lo, hi in zip(edges, edges[1:]):
        mid = (2 * hi - 1 if math.isinf(lo) else 2 * lo + 1 if math.isinf(hi) else 0.5 * (lo + hi))
        cl = classify_level_set(kind, mid, fam)
        intervals.append({"lo": None if math.isinf(lo) else lo, "hi": None if math.isinf(hi) else hi,
                          "tori": cl.tori_count, "notes": cl.notes})
    singular = [classify_level_set(kind, x, fam).to_dict() for x in cuts]
    infinity = classify_level_set(kind, math.inf, fam).to_dict()
    atoms = {}
    for s in singular:
        if s["atom"]:
            atoms[s["atom"]] = atoms.get(s["atom"], 0) + s["atom_count"]
    return {"table": kind, "family": list(fam.abc), "intervals": intervals,
            "singular_levels": singular, "infinity": infinity, "atom_counts": atoms,
            "gluing_matrices": {k: [list(r) for r in v] for k, v in GLUING.items()} if kind == "collared" else {},
            "marks": MARKS[kind]}


# numerical recount

LIGHT_TANGENT = 1e-3


def _near_lightlike_tangent(q, table):
    if abs(table.fam.Q0(q)) > 1e-9:
        return False
    t = np.cross(J @ q, table.fam.grad_Q0(q))
    return abs(ip(t, t)) < LIGHT_TANGENT * (t @ t)


def _arc(q, v, t_end, causal, k=24):
    t = np.linspace(0.0, t_end, k)[:, None]
    if causal is Causal.SPACE:
        return q * np.cos(t) + v * np.sin(t)
    if causal is Causal.TIME:
        return q * np.cosh(t) + v * np.sinh(t)
    return q + t * v


def signature(q, v, table, bounces=30):
    """(never-crossed coordinate signs, winding sense, hits boundary, complete).

    Coordinates that change sign somewhere along the trajectory report 0.
    The winding sense is the sign of the x-component of the plane normal
    q x v (constant along each arc), kept only if it never changes and only
    for the collared table, whose annulus has a core to wind around.
    ``complete`` is False when tracing stopped early at a boundary point
    whose tangent is light-like.
    """
    signs = np.sign(q)
    crossed = np.zeros(3, bool)
    wind = set()
    hits = complete = True
    for _ in range(bounces):
        v, causal = normalize_dir(v)
        if _near_lightlike_tangent(q, table):
            # bounces pile up at a boundary point with light-like tangent,
            # where reflection degenerates; the orbit never gets past it
            complete = False
            break
        wind.add(int(np.sign(np.cross(q, v)[0])))
        hit = next_bounce(q, v, table)
        if hit is NEVER_HITS:
            hits = False
            pts = _arc(q, v, 2 * math.pi, causal, 64) if causal is Causal.SPACE else _arc(q, v, 5.0, causal, 64)
        else:
            p, t, vin = hit
            pts = _arc(q, v, t, causal)
        s = np.sign(pts)
        crossed |= np.any(s != signs, axis=0) | np.any(s == 0, axis=0)
        if not hits:
            break
        p, vin = project_to_boundary(p, vin, table)
        v = reflect(p, vin, table)
        q = p
    coords = tuple(0 if crossed[i] else int(signs[i]) for i in range(3))
    w = wind.pop() if len(wind) == 1 and table.kind == "collared" else 0
    return coords, w, hits, complete


def _seeds(table, lam, n, rng, tries=4000):
    out = []
    for _ in range(tries):
        if len(out) >= n:
            break
        q = table.interior_point(rng)
        dirs = caustic_directions(q, lam, table.fam)
        if dirs:
            out.append((q, dirs[rng.integers(len(dirs))]))
    return out


def count_components_numeric(table, lam, samples=24, seed=0, bounces=30, return_details=False):
    """Number of distinct trajectory signatures among ``samples`` seeds on the level set."""
    if not isinstance(table, BilliardTable):
        table = BilliardTable(table)
    a, b, c = table.fam.abc
    lam = AT_INFINITY if lam == AT_INFINITY else float(lam)
    if lam in (a, b, c) or (table.kind == "transverse" and lam == 0):
        raise DegenerateLevel(f"lambda = {lam} is a singular level")
    rng = np.random.default_rng(seed)
    sigs = [signature(q, v, table, bounces) for q, v in _seeds(table, lam, samples, rng)]
    # truncated orbits have not explored their torus; drop them when possible
    used = [s for s in sigs if s[3]] or sigs
    n = len({(s[0], s[1]) for s in used})
    if return_details:
        return n, {"signatures": sigs, "never_hits": all(not s[2] for s in sigs) if sigs else None}
    return n
