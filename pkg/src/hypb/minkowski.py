"""Minkowski 3-space, the one-sheeted hyperboloid H and confocal cone families.

Vectors are plain numpy arrays (x, y, z) with the form diag(-1, 1, 1).
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import math

import numpy as np

from .series import to_q

TAU_H = 1e-10
TAU_LIGHT = 1e-10
J = np.diag([-1.0, 1.0, 1.0])
AT_INFINITY = math.inf


class Causal(str, Enum):
    SPACE = "space-like"
    TIME = "time-like"
    LIGHT = "light-like"
    MIXED = "mixed"


class InvalidFamily(ValueError):
    pass


class NotTangent(ValueError):
    pass


def ip(u, v):
    """Minkowski product; broadcasts over leading axes."""
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    return -u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] + u[..., 2] * v[..., 2]


def causal_type(v, tol=TAU_LIGHT):
    v = np.asarray(v, float)
    s = ip(v, v)
    if abs(s) <= tol * float(v @ v):
        return Causal.LIGHT
    return Causal.SPACE if s > 0 else Causal.TIME


def on_H(p, tol=TAU_H):
    return abs(ip(p, p) - 1.0) <= tol


@dataclass(frozen=True)
class ConfocalFamily:
    """Cone -x^2/a + y^2/b + z^2/c = 0 and its confocal family C_lambda.

    a, b, c may be ints, Fractions, 'p/q' strings or floats; exact values are
    kept for the algebraic modules and ``abc`` gives floats for simulation.
    """
    a: object
    b: object
    c: object

    def __post_init__(self):
        a, b, c = (to_q(x) for x in (self.a, self.b, self.c))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if 0 < a < b < c:
            kind = "collared"
        elif b < 0 < a < c:
            kind = "transverse"
        else:
            raise InvalidFamily(f"need 0<a<b<c or b<0<a<c, got {(a, b, c)}")
        object.__setattr__(self, "kind", kind)

    @property
    def abc(self):
        return float(self.a), float(self.b), float(self.c)

    @property
    def exact(self):
        return all(isinstance(x, Fraction) for x in (self.a, self.b, self.c))

    @property
    def pqr(self):
        a, b, c = self.a, self.b, self.c
        return a + b + c, a * b + a * c + b * c, a * b * c

    def Q0(self, p):
        """Boundary form; positive inside the table's cone."""
        a, b, c = self.abc
        p = np.asarray(p, float)
        return -p[..., 0] ** 2 / a + p[..., 1] ** 2 / b + p[..., 2] ** 2 / c

    def grad_Q0(self, p):
        a, b, c = self.abc
        return np.array([-2 * p[0] / a, 2 * p[1] / b, 2 * p[2] / c])

    def cone(self, lam, p):
        """Left side of the C_lambda equation at p."""
        a, b, c = self.abc
        x, y, z = p
        return -x * x / (a - lam) + y * y / (b - lam) + z * z / (c - lam)


@dataclass(frozen=True)
class Geodesic:
    base: np.ndarray
    dir: np.ndarray
    causal: Causal
    plane_normal: np.ndarray

    def __call__(self, t):
        t = np.asarray(t, float)[..., None]
        p, v = self.base, self.dir
        if self.causal is Causal.SPACE:
            return p * np.cos(t) + v * np.sin(t)
        if self.causal is Causal.TIME:
            return p * np.cosh(t) + v * np.sinh(t)
        return p + t * v

    def velocity(self, t):
        p, v = self.base, self.dir
        if self.causal is Causal.SPACE:
            return -p * np.sin(t) + v * np.cos(t)
        if self.causal is Causal.TIME:
            return p * np.sinh(t) + v * np.cosh(t)
        return v.copy()


def normalize_dir(v, tol=TAU_LIGHT):
    v = np.asarray(v, float)
    kind = causal_type(v, tol)
    if kind is Causal.LIGHT:
        return v / np.linalg.norm(v), kind
    return v / math.sqrt(abs(ip(v, v))), kind


def geodesic_at(p, v, tol=TAU_H):
    p = np.asarray(p, float)
    v = np.asarray(v, float)
    if not np.any(v):
        raise NotTangent("zero direction")
    if abs(ip(p, v)) > tol * max(1.0, np.linalg.norm(v)):
        raise NotTangent(f"<p,v> = {ip(p, v):.3e}")
    v, kind = normalize_dir(v)
    return Geodesic(p, v, kind, np.cross(p, v))


# Jacobi coordinates

@dataclass(frozen=True)
class JacobiCoords:
    lambda1: float
    lambda2: float


class TangentLineLocus(float):
    """Double root of the confocal equation: the point sits on a joint light-like tangent."""


class _NoReal:
    def __repr__(self):
        return "NoRealSolutions"


NO_REAL_SOLUTIONS = _NoReal()


def confocal_quadratic(p, fam):
    """Coefficients (A, B, C) of A l^2 + B l + C obtained by clearing the
    denominators of the C_lambda equation at p."""
    a, b, c = fam.abc
    x2, y2, z2 = np.asarray(p, float) ** 2
    A = -x2 + y2 + z2
    B = x2 * (b + c) - y2 * (a + c) - z2 * (a + b)
    C = -x2 * b * c + y2 * a * c + z2 * a * b
    return A, B, C


def jacobi_coords(p, fam, tol=1e-12):
    A, B, C = confocal_quadratic(p, fam)
    scale = abs(B) + abs(C) + 1.0
    if abs(A) < tol * scale:
        # off H: only happens for points on the light cone; linear fallback
        return JacobiCoords(-C / B, math.inf) if B else NO_REAL_SOLUTIONS
    D = B * B - 4 * A * C
    if abs(D) <= 1e-12 * scale * scale:
        return TangentLineLocus(-B / (2 * A))
    if D < 0:
        return NO_REAL_SOLUTIONS
    sq = math.sqrt(D)
    # stable pair of roots
    q = -0.5 * (B + math.copysign(sq, B))
    r1, r2 = q / A, (C / q if q else -B / (2 * A))
    return JacobiCoords(min(r1, r2), max(r1, r2))


# classification of confocal conics

@dataclass(frozen=True)
class ConicClass:
    lam: float
    kind: str
    causal: Causal | None


def classify_conic(lam, fam):
    a, b, c = fam.abc
    if lam == math.inf or lam == -math.inf:
        return ConicClass(math.inf, "AtInfinity", Causal.LIGHT)
    if fam.kind == "collared":
        if lam < a:
            return ConicClass(lam, "CollaredEllipse", Causal.SPACE)
        if lam == a:
            return ConicClass(lam, "DegenerateCircle_a", Causal.SPACE)
        if lam < b:
            return ConicClass(lam, "Empty", None)
        if lam == b:
            return ConicClass(lam, "DegenerateHyperbola_b", Causal.TIME)
        if lam < c:
            return ConicClass(lam, "HyperbolicType", Causal.TIME)
        if lam == c:
            return ConicClass(lam, "DegenerateHyperbola_c", Causal.TIME)
        return ConicClass(lam, "Empty", None)
    # transverse: b < 0 < a < c
    if lam < b:
        return ConicClass(lam, "HyperbolicType", Causal.MIXED)
    if lam == b:
        return ConicClass(lam, "DegenerateHyperbola_b", Causal.TIME)
    if lam < a:
        return ConicClass(lam, "TransverseEllipseXY", Causal.MIXED)
    if lam == a:
        return ConicClass(lam, "DegenerateCircle_a", Causal.SPACE)
    if lam < c:
        return ConicClass(lam, "TransverseEllipseXZ", Causal.MIXED)
    if lam == c:
        return ConicClass(lam, "DegenerateHyperbola_c", Causal.TIME)
    return ConicClass(lam, "HyperbolicType", Causal.MIXED)


def foci(fam):
    """The twelve foci, keyed like 'z++' for F^z_{++}."""
    a, b, c = fam.abc
    rad = {
        "z": ((c - a) / (a - b), (c - b) / (a - b)),
        "y": ((a - b) / (c - a), (c - b) / (c - a)),
        "x": ((a - b) / (c - b), (c - a) / (c - b)),
    }
    for k, (u, w) in rad.items():
        if u <= 0 or w <= 0:
            raise InvalidFamily(f"focus radicand non-positive for F^{k}")
    out = {}
    for s1 in (1, -1):
        for s2 in (1, -1):
            tag = ("+" if s1 > 0 else "-") + ("+" if s2 > 0 else "-")
            u, w = (math.sqrt(r) for r in rad["z"])
            out["z" + tag] = np.array([s1 * u, s2 * w, 0.0])
            u, w = (math.sqrt(r) for r in rad["y"])
            out["y" + tag] = np.array([s1 * u, 0.0, s2 * w])
            u, w = (math.sqrt(r) for r in rad["x"])
            out["x" + tag] = np.array([0.0, s1 * u, s2 * w])
    return out


def caustic_of_plane(w, fam, tol=TAU_LIGHT):
    """Parameter of the confocal cone tangent to the plane with Euclidean normal w.

    Tangency of w.x = 0 to C_nu is linear in nu; a vanishing denominator
    (light-like geodesic) gives AT_INFINITY.
    """
    a, b, c = fam.abc
    w = np.asarray(w, float)
    den = w[0] ** 2 - w[1] ** 2 - w[2] ** 2
    if abs(den) <= tol * float(w @ w):
        return AT_INFINITY
    return (a * w[0] ** 2 - b * w[1] ** 2 - c * w[2] ** 2) / den


def tangency_residual(w, nu, fam):
    """Quadratic form whose vanishing means the plane w touches C_nu."""
    a, b, c = fam.abc
    w = np.asarray(w, float)
    if nu == AT_INFINITY:
        return (w[0] ** 2 - w[1] ** 2 - w[2] ** 2) / float(w @ w)
    return (-(a - nu) * w[0] ** 2 + (b - nu) * w[1] ** 2 + (c - nu) * w[2] ** 2) / float(w @ w)
