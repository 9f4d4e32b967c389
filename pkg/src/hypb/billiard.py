"""Billiard flow inside a collared or transverse H-ellipse.

The boundary form Q0 restricted to a geodesic is a quadratic form in
(cos t, sin t), (cosh t, sinh t) or (1, t), so the next boundary hit is found
from closed-form roots and then polished with Newton steps.
"""
from dataclasses import dataclass, field
import json
import math

import numpy as np

from .minkowski import (AT_INFINITY, J, TAU_H, TAU_LIGHT, Causal, ConfocalFamily,
                        NO_REAL_SOLUTIONS, TangentLineLocus, caustic_of_plane, ip,
                        jacobi_coords, normalize_dir)

TAU_STEP = 1e-9
SIGNS = [np.array([i, j, k], float) for i in (1, -1) for j in (1, -1) for k in (1, -1)]


class NotOnBoundary(ValueError):
    pass


class NotTangentToH(ValueError):
    pass


class _Never:
    def __repr__(self):
        return "NeverHitsBoundary"


NEVER_HITS = _Never()


class BilliardTable:
    """Compact table bounded by C_0: the annulus (collared) or the z>0 disk (transverse)."""

    def __init__(self, fam):
        if not isinstance(fam, ConfocalFamily):
            fam = ConfocalFamily(*fam)
        self.fam = fam
        self.kind = fam.kind
        a, b, c = fam.abc
        self.M = np.diag([-1 / a, 1 / b, 1 / c])

    def __repr__(self):
        return f"BilliardTable({self.fam.a}, {self.fam.b}, {self.fam.c}, {self.kind})"

    def inside(self, p, tol=0.0):
        if self.fam.Q0(p) < -tol:
            return False
        return self.kind == "collared" or p[2] > 0

    def on_boundary(self, p, tol=TAU_H):
        return abs(ip(p, p) - 1) <= tol and abs(self.fam.Q0(p)) <= tol * max(1.0, float(p @ p))

    def boundary_point(self, phi, sheet=1):
        """Point of C_0 cap H.  Collared: sheet picks the sign of x."""
        a, b, c = self.fam.abc
        cp, sp = math.cos(phi), math.sin(phi)
        if self.kind == "collared":
            k = cp * cp / b + sp * sp / c
            rho = 1 / math.sqrt(1 - a * k)
            return np.array([sheet * math.sqrt(a * k) * rho, rho * cp, rho * sp])
        d = -cp * cp + sp * sp + c * (cp * cp / a - sp * sp / b)
        rho = 1 / math.sqrt(d)
        x, y = rho * cp, rho * sp
        return np.array([x, y, math.sqrt(c * (x * x / a - y * y / b))])

    def interior_point(self, rng):
        """Uniform-ish random point strictly inside the table."""
        a, b, c = self.fam.abc
        if self.kind == "collared":
            phi = rng.uniform(0, 2 * math.pi)
            k = math.cos(phi) ** 2 / b + math.sin(phi) ** 2 / c
            xm = math.sqrt(a * k / (1 - a * k))
            x = rng.uniform(-0.98, 0.98) * xm
            r = math.sqrt(1 + x * x)
            return np.array([x, r * math.cos(phi), r * math.sin(phi)])
        pts = np.array([self.boundary_point(t) for t in np.linspace(0, 2 * math.pi, 256)])
        xm, ym = np.abs(pts[:, 0]).max(), np.abs(pts[:, 1]).max()
        while True:
            x, y = rng.uniform(-xm, xm), rng.uniform(-ym, ym)
            z2 = 1 + x * x - y * y
            if z2 <= 0:
                continue
            p = np.array([x, y, math.sqrt(z2)])
            if self.fam.Q0(p) > 1e-6:
                return p


# geometry at a boundary point

def boundary_normal(q, table):
    """Normal to the boundary curve inside T_qH (not normalized)."""
    g = table.fam.grad_Q0(q)
    t = np.cross(g, 2 * (J @ q))
    return J @ np.cross(t, q)


def reflect(q, v_in, table, tol=TAU_LIGHT):
    q = np.asarray(q, float)
    v_in = np.asarray(v_in, float)
    if not table.on_boundary(q, 1e-7):
        raise NotOnBoundary(f"Q0 = {table.fam.Q0(q):.2e}")
    if abs(ip(q, v_in)) > 1e-7 * max(1.0, np.linalg.norm(v_in)):
        raise NotTangentToH(f"<q,v> = {ip(q, v_in):.2e}")
    n = boundary_normal(q, table)
    nn = ip(n, n)
    if abs(nn) < tol * float(n @ n):
        # light-like boundary tangent: come back along the same segment
        return -v_in
    return v_in - 2 * ip(v_in, n) / nn * n


def tangent_basis(q):
    g = J @ q
    e = np.array([1.0, 0, 0]) if abs(g[0]) < 0.9 * np.linalg.norm(g) else np.array([0, 1.0, 0])
    e1 = np.cross(g, e)
    e2 = np.cross(g, e1)
    return e1 / np.linalg.norm(e1), e2 / np.linalg.norm(e2)


def caustic_directions(q, nu, fam):
    """Unit tangent directions at q whose geodesic plane touches C_nu (both orientations)."""
    a, b, c = fam.abc
    e1, e2 = tangent_basis(q)
    w1, w2 = np.cross(q, e1), np.cross(q, e2)
    if nu == AT_INFINITY:
        M = np.diag([1.0, -1.0, -1.0])
    else:
        M = np.diag([nu - a, b - nu, c - nu])
    A, B, C = w1 @ M @ w1, w1 @ M @ w2, w2 @ M @ w2
    sols = []
    if abs(C) > 1e-14 * (abs(A) + abs(B) + abs(C)):
        disc = B * B - A * C
        if disc < 0:
            return []
        r = math.sqrt(disc)
        sols = [e1 + (-B + r) / C * e2, e1 + (-B - r) / C * e2]
    else:
        sols = [e2, C * e1 - 2 * B * e2]
    out = []
    for v in sols:
        v, _ = normalize_dir(v)
        out += [v, -v]
    return out


def inward_directions(q, nu, table):
    g = table.fam.grad_Q0(q)
    return [v for v in caustic_directions(q, nu, table.fam) if g @ v > 1e-12]


# flow to the boundary

def _roots_space(A, B, C):
    # f = (A+C)/2 + (A-C)/2 cos 2t + B sin 2t
    m, h = (A + C) / 2, (A - C) / 2
    R = math.hypot(h, B)
    if R == 0 or abs(m) > R:
        return []
    phi = math.atan2(B, h)
    th = math.acos(max(-1.0, min(1.0, -m / R)))
    out = []
    for s in (th, -th):
        t = ((phi + s) / 2) % math.pi
        out += [t, t + math.pi]
    return out


def _roots_time(A, B, C):
    # 2w f = (m+B) w^2 + (A-C) w + (m-B),  w = exp(2t)
    m = (A + C) / 2
    qa, qb, qc = m + B, A - C, m - B
    ws = []
    if abs(qa) < 1e-300:
        if qb:
            ws = [-qc / qb]
    else:
        d = qb * qb - 4 * qa * qc
        if d < 0:
            return []
        sq = math.sqrt(d)
        qq = -0.5 * (qb + math.copysign(sq, qb))
        ws = [qq / qa] + ([qc / qq] if qq else [])
    return [0.5 * math.log(w) for w in ws if w > 0]


def _roots_light(A, B, C):
    # f = A + 2 B t + C t^2
    if abs(C) < 1e-300:
        return [-A / (2 * B)] if B else []
    d = B * B - A * C
    if d < 0:
        return []
    sq = math.sqrt(d)
    qq = -(B + math.copysign(sq, B))
    return [qq / C] + ([A / qq] if qq else [])


def next_bounce(q, v, table, tstep=TAU_STEP):
    """First exit of the geodesic through (q, v) across C_0.

    Returns (point, time, velocity) or NEVER_HITS.
    """
    q = np.asarray(q, float)
    v, kind = normalize_dir(v)
    M = table.M
    A, B, C = q @ M @ q, q @ M @ v, v @ M @ v
    if kind is Causal.SPACE:
        cands = _roots_space(A, B, C)
        flow = lambda t: (q * math.cos(t) + v * math.sin(t), -q * math.sin(t) + v * math.cos(t))
    elif kind is Causal.TIME:
        cands = _roots_time(A, B, C)
        flow = lambda t: (q * math.cosh(t) + v * math.sinh(t), q * math.sinh(t) + v * math.cosh(t))
    else:
        cands = _roots_light(A, B, C)
        flow = lambda t: (q + t * v, v)
    best = None
    for t in sorted(cands):
        # Newton polish on f(t) = g^T M g
        for _ in range(3):
            g, dg = flow(t)
            df = 2 * (dg @ M @ g)
            if df == 0:
                break
            t -= (g @ M @ g) / df
        if t <= tstep:
            continue
        g, dg = flow(t)
        if dg @ M @ g > 0:
            continue  # entering, not leaving
        if best is None or t < best[1]:
            best = (g, t, dg)
    return NEVER_HITS if best is None else best


def project_to_boundary(q, v, table, steps=3):
    """Gauss-Newton pull of q back onto H cap C_0, then make v tangent to H at q."""
    for _ in range(steps):
        F = np.array([ip(q, q) - 1, table.fam.Q0(q)])
        Jm = np.array([2 * (J @ q), table.fam.grad_Q0(q)])
        q = q - Jm.T @ np.linalg.solve(Jm @ Jm.T, F)
    v = v - ip(q, v) * q
    return q, v


# trajectories

@dataclass
class Trajectory:
    table: BilliardTable
    caustic: float
    causal: Causal
    bounces: list = field(default_factory=list)   # (p, v_in, v_out)
    jacobi_track: list = field(default_factory=list)
    closure: dict = field(default_factory=dict)
    status: str = "ok"
    flags: list = field(default_factory=list)

    @property
    def points(self):
        return np.array([b[0] for b in self.bounces])

    @property
    def outgoing(self):
        return np.array([b[2] for b in self.bounces])

    def segment_caustics(self):
        fam = self.table.fam
        return [caustic_of_plane(np.cross(p, v), fam) for p, _, v in self.bounces]

    def to_dict(self):
        fam = self.table.fam
        cl = self.closure
        return {
            "table": {"a": str(fam.a), "b": str(fam.b), "c": str(fam.c), "kind": self.table.kind},
            "caustic": None if self.caustic == AT_INFINITY else float(self.caustic),
            "causal": self.causal.value,
            "bounces": [{"p": _l(p), "v_in": _l(vi), "v_out": _l(vo)} for p, vi, vo in self.bounces],
            "jacobi": [[_f(j[0]), _f(j[1])] for j in self.jacobi_track],
            "closure": {"n": cl.get("n"), "cartesian_gap": cl.get("cartesian_gap"),
                        "jacobi_gap": cl.get("jacobi_gap"), "elliptic_n": cl.get("elliptic_n")},
            "status": self.status,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _l(v):
    return [float(x) for x in v]


def _f(x):
    return None if x is None or not math.isfinite(x) else float(x)


def _jac(p, fam):
    j = jacobi_coords(p, fam)
    if j is NO_REAL_SOLUTIONS:
        return (math.nan, math.nan)
    if isinstance(j, TangentLineLocus):
        return (float(j), float(j))
    return (j.lambda1, j.lambda2)


def run(q0, v0, table, max_bounces, tol=1e-6):
    """Iterate flow and reflection; fill closure diagnostics."""
    if not isinstance(table, BilliardTable):
        table = BilliardTable(table)
    fam = table.fam
    q = np.asarray(q0, float)
    v, kind = normalize_dir(v0)
    nu = caustic_of_plane(np.cross(q, v), fam)
    tr = Trajectory(table, nu, kind)
    tr.bounces.append((q, v, v))
    tr.jacobi_track.append(_jac(q, fam))
    for _ in range(max_bounces):
        hit = next_bounce(q, v, table)
        if hit is NEVER_HITS:
            tr.status = "NeverHitsBoundary"
            break
        p, _, vin = hit
        p, vin = project_to_boundary(p, vin, table)
        vin, _ = normalize_dir(vin)
        n = boundary_normal(p, table)
        if abs(ip(n, n)) < TAU_LIGHT * float(n @ n) and causal_type_is_light(vin):
            tr.flags.append(len(tr.bounces))
        vout = reflect(p, vin, table)
        vout, _ = normalize_dir(vout)
        tr.bounces.append((p, vin, vout))
        tr.jacobi_track.append(_jac(p, fam))
        q, v = p, vout
    tr.closure = closure(tr, tol)
    return tr


def causal_type_is_light(v):
    return abs(ip(v, v)) <= TAU_LIGHT * float(v @ v)


def _unit(v):
    return v / np.linalg.norm(v)


def closure(tr, tol=1e-6):
    """Cartesian and elliptic (sign-symmetric) return times of the first boundary state."""
    B = tr.bounces
    i0 = 0 if tr.table.on_boundary(B[0][0], 1e-8) else 1
    out = {"n": None, "cartesian_gap": None, "jacobi_gap": None, "elliptic_n": None}
    if len(B) <= i0 + 1:
        return out
    p0, v0 = B[i0][0], _unit(B[i0][2])
    j0 = np.array(tr.jacobi_track[i0])
    best = math.inf
    for k in range(i0 + 1, len(B)):
        p, v = B[k][0], _unit(B[k][2])
        gap = float(np.linalg.norm(p - p0) + np.linalg.norm(v - v0))
        best = min(best, gap)
        if out["n"] is None and gap <= tol:
            out["n"], out["cartesian_gap"] = k - i0, gap
        if out["elliptic_n"] is None:
            for S in SIGNS:
                if np.linalg.norm(p - S * p0) + np.linalg.norm(v - S * v0) <= tol:
                    out["elliptic_n"] = k - i0
                    out["jacobi_gap"] = float(np.nanmax(np.abs(np.array(tr.jacobi_track[k]) - j0)))
                    break
    if out["n"] is None:
        out["cartesian_gap"] = best
    return out


def gap_after(tr, n):
    """Cartesian distance between the first boundary state and the one n bounces later."""
    B = tr.bounces
    i0 = 0 if tr.table.on_boundary(B[0][0], 1e-8) else 1
    if i0 + n >= len(B):
        return math.inf
    p0, v0 = B[i0][0], _unit(B[i0][2])
    p, v = B[i0 + n][0], _unit(B[i0 + n][2])
    return float(np.linalg.norm(p - p0) + np.linalg.norm(v - v0))


def random_start(table, nu, rng, tries=200):
    """Random boundary state with caustic nu, or None when no such state exists."""
    for _ in range(tries):
        phi = rng.uniform(0, 2 * math.pi)
        sheet = rng.choice([1, -1]) if table.kind == "collared" else 1
        q = table.boundary_point(phi, sheet)
        dirs = inward_directions(q, nu, table)
        if dirs:
            return q, dirs[rng.integers(len(dirs))]
    return None


def simulate(table, nu, rng, bounces, tol=1e-6):
    st = random_start(table, nu, rng)
    if st is None:
        return None
    return run(st[0], st[1], table, bounces, tol)
