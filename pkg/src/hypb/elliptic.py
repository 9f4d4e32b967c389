"""Jacobi elliptic functions, theta functions and the Akhiezer polynomials.

The modulus is ``kappa`` (so the parameter is kappa**2).  Theta functions
take the argument in the sn-scaling: ``theta(u)`` means the classical
series evaluated at ``pi*u/(2K)``, with K recovered from the nome.
"""
from dataclasses import dataclass
import math

import numpy as np
from numpy.polynomial import Chebyshev
from numpy.polynomial.legendre import leggauss


class ModulusOutOfRange(ValueError):
    pass


class NomeOutOfRange(ValueError):
    pass


class ParameterOutOfRange(ValueError):
    pass


class CoincidentRoots(ValueError):
    pass


def _check_kappa(kappa):
    if not 0.0 <= kappa < 1.0:
        raise ModulusOutOfRange(f"kappa={kappa} not in [0,1)")


def agm(a, b, tol=1e-15):
    for _ in range(64):
        if abs(a - b) <= tol * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_K(kappa):
    _check_kappa(kappa)
    return math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - kappa * kappa)))


def nome(kappa):
    """q = exp(-pi K'/K)."""
    _check_kappa(kappa)
    if kappa == 0:
        return 0.0
    # K' = K(sqrt(1 - kappa^2)) straight from agm(1, kappa): no cancellation for small kappa
    Kp = math.pi / (2.0 * agm(1.0, kappa))
    return math.exp(-math.pi * Kp / complete_K(kappa))


def jacobi_sn_cn_dn(u, kappa):
    """sn, cn, dn by the descending Landen (AGM) scheme.  ``u`` may be an array."""
    _check_kappa(kappa)
    u = np.asarray(u, float)
    if kappa == 0:
        return np.sin(u), np.cos(u), np.ones_like(u)
    a, b = [1.0], [math.sqrt(1 - kappa * kappa)]
    c = [kappa]
    while abs(c[-1]) > 1e-17 and len(a) < 40:
        an, bn = a[-1], b[-1]
        a.append(0.5 * (an + bn))
        b.append(math.sqrt(an * bn))
        c.append(0.5 * (an - bn))
    N = len(a) - 1
    phi = (2.0 ** N) * a[N] * u
    phis = [phi]
    for k in range(N, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c[k] / a[k] * np.sin(phi)))
        phis.append(phi)
    phi0 = phis[-1]
    phi1 = phis[-2] if N >= 1 else phi0
    sn, cn = np.sin(phi0), np.cos(phi0)
    den = np.cos(phi1 - phi0)
    with np.errstate(divide="ignore", invalid="ignore"):
        dn = np.where(np.abs(cn) > 1e-3, cn / den, np.sqrt(np.maximum(0.0, 1 - kappa * kappa * sn * sn)))
    if np.ndim(sn) == 0:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn


def _theta_z(z, q, want_deriv=True):
    """Classical theta_1..theta_4 at z and their z-derivatives."""
    z = np.asarray(z, float)
    t1 = np.zeros_like(z); t2 = np.zeros_like(z)
    t3 = np.ones_like(z); t4 = np.ones_like(z)
    d1 = np.zeros_like(z); d2 = np.zeros_like(z)
    d3 = np.zeros_like(z); d4 = np.zeros_like(z)
    n = 0
    while True:
        half = q ** ((n + 0.5) ** 2)
        full = q ** ((n + 1) ** 2)
        if half < 1e-17 and full < 1e-17:
            break
        sgn = -1.0 if n % 2 else 1.0
        k = 2 * n + 1
        t1 += 2 * sgn * half * np.sin(k * z)
        t2 += 2 * half * np.cos(k * z)
        d1 += 2 * sgn * half * k * np.cos(k * z)
        d2 -= 2 * half * k * np.sin(k * z)
        j = n + 1
        s4 = -1.0 if j % 2 else 1.0
        t3 += 2 * full * np.cos(2 * j * z)
        t4 += 2 * s4 * full * np.cos(2 * j * z)
        d3 -= 4 * j * full * np.sin(2 * j * z)
        d4 -= 4 * j * s4 * full * np.sin(2 * j * z)
        n += 1
    return (t1, t2, t3, t4), (d1, d2, d3, d4)


@dataclass(frozen=True)
class Thetas:
    """Values theta0..theta3 at u (theta0 is the classical theta_4) and
    their logarithmic u-derivatives."""
    values: tuple
    log_derivs: tuple
    K: float


def theta_functions(u, q):
    if not 0.0 <= q < 1.0:
        raise NomeOutOfRange(f"q={q}")
    (_, _, t3_0, _), _ = _theta_z(0.0, q)
    K = 0.5 * math.pi * float(t3_0) ** 2
    scale = math.pi / (2 * K)
    (t1, t2, t3, t4), (d1, d2, d3, d4) = _theta_z(scale * np.asarray(u, float), q)
    vals = (t4, t1, t2, t3)
    ders = (d4, d1, d2, d3)
    with np.errstate(divide="ignore", invalid="ignore"):
        logd = tuple(scale * d / v for d, v in zip(ders, vals))
    if np.ndim(u) == 0:
        vals = tuple(float(v) for v in vals)
        logd = tuple(float(v) for v in logd)
    return Thetas(vals, logd, K)


# Akhiezer polynomials on [-1, alpha] U [beta, 1]

@dataclass(frozen=True)
class AkhiezerParams:
    n: int
    m: int
    kappa: float
    K: float
    q: float
    alpha: float
    beta: float
    L: float
    kappa_nm: float
    tau1: float
    c_nm: float

    @property
    def shift(self):
        return self.m * self.K / self.n


def akhiezer_params(n, m, kappa):
    if not (isinstance(n, int) and isinstance(m, int) and 0 < m < n):
        raise ParameterOutOfRange(f"need 0<m<n, got n={n}, m={m}")
    if not 0.0 < kappa < 1.0:
        raise ParameterOutOfRange(f"kappa={kappa}")
    K = complete_K(kappa)
    q = nome(kappa)
    s = m * K / n
    sn, cn, dn = jacobi_sn_cn_dn(s, kappa)
    sn2s = jacobi_sn_cn_dn(2 * s, kappa)[0]
    alpha = 1 - 2 * sn * sn
    beta = 2 * jacobi_sn_cn_dn((n - m) * K / n, kappa)[0] ** 2 - 1
    th0 = theta_functions(0.0, q).values
    ths = theta_functions(s, q)
    L = (th0[0] * th0[3] / (ths.values[0] * ths.values[3])) ** (2 * n) / 2 ** (n - 1)
    k2 = 2 * (beta - alpha) / ((1 - alpha) * (1 + beta))
    # the log-derivative here is the one of theta0 (classical theta_4); the
    # theta_1 reading misplaces the exterior critical point
    tau1 = -1 + 2 * sn * cn / dn * (1 / sn2s - ths.log_derivs[0])
    return AkhiezerParams(n, m, kappa, K, q, alpha, beta, L, math.sqrt(k2),
                          tau1, 0.5 * (alpha + beta) - tau1)


def _x_and_v(u, P):
    """x(u) and v(u) on the real branch 0<u<K, u != shift, where |x| >= 1."""
    s = P.shift
    snu, cnu, _ = jacobi_sn_cn_dn(u, P.kappa)
    sns, cns, _ = jacobi_sn_cn_dn(s, P.kappa)
    x = (snu ** 2 * cns ** 2 + cnu ** 2 * sns ** 2) / (snu ** 2 - sns ** 2)
    th_m = theta_functions(np.asarray(u) - s, P.q).values[1]
    th_p = theta_functions(np.asarray(u) + s, P.q).values[1]
    return x, th_m / th_p


_TA_CACHE = {}


def akhiezer_poly(n, m, kappa):
    """TA_n as a numpy Chebyshev series, recovered from exterior samples.

    On the real u-branch v is real, so (L/2)(v^n + v^-n) is computed without
    any branch ambiguity there; the degree-n fit then continues it to E.
    """
    key = (n, m, float(kappa))
    if key in _TA_CACHE:
        return _TA_CACHE[key]
    P = akhiezer_params(n, m, kappa)
    s = P.shift
    # keep |x| moderate: u close to 0 or K gives |x| close to 1
    lo = np.linspace(0.02, 0.75, 6 * n + 6) * s
    hi = s + (P.K - s) * np.linspace(0.25, 0.98, 6 * n + 6)
    u = np.concatenate([lo, hi])
    x, v = _x_and_v(u, P)
    y = 0.5 * P.L * (v ** n + v ** (-float(n)))
    span = max(1.0, float(np.max(np.abs(x))))
    poly = Chebyshev.fit(x, y, n, domain=[-span, span])
    _TA_CACHE[key] = (poly, P)
    return poly, P


def akhiezer_TA(n, m, kappa, x):
    poly, _ = akhiezer_poly(n, m, kappa)
    return poly(np.asarray(x, float))


def exterior_critical_point(n, m, kappa):
    """Zero of TA_n' lying in (alpha, beta)."""
    poly, P = akhiezer_poly(n, m, kappa)
    r = poly.deriv().roots()
    r = r[np.abs(r.imag) < 1e-9].real
    r = r[(r > P.alpha) & (r < P.beta)]
    if len(r) != 1:
        raise ParameterOutOfRange(f"expected one critical point in the gap, got {r}")
    return float(r[0])


def equioscillation_points(n, m, kappa, rtol=1e-7):
    """Points of [-1, alpha] and [beta, 1] where |TA_n| = L, with the values' signs."""
    poly, P = akhiezer_poly(n, m, kappa)
    crit = poly.deriv().roots()
    crit = crit[np.abs(crit.imag) < 1e-9].real
    out = []
    for lo, hi in ((-1.0, P.alpha), (P.beta, 1.0)):
        cand = [lo, hi] + [float(c) for c in crit if lo < c < hi]
        pts = sorted(x for x in cand if abs(abs(poly(x)) - P.L) <= rtol * P.L)
        # merge near duplicates (a critical point sitting on an endpoint)
        merged = []
        for x in pts:
            if not merged or x - merged[-1] > 1e-6:
                merged.append(x)
        out.append([(x, int(np.sign(poly(x)))) for x in merged])
    return tuple(out)


# quartic integrals

INTERVALS = ("-inf,c0", "c0,c1", "c1,c2", "c2,c3", "c3,inf")


def _panels(a, b, levels=48):
    """Breakpoints of [a, b] refined geometrically towards both ends."""
    h = 0.5 * (b - a)
    left = [a + h * 2.0 ** -k for k in range(levels, 0, -1)]
    right = [b - h * 2.0 ** -k for k in range(1, levels + 1)]
    return np.array([a] + left + [a + h] + right + [b])


def _gl(f, a, b, tol=1e-14):
    """Composite Gauss-Legendre on geometrically graded panels.

    A root of T lying just outside the interval leaves a peak of width
    ~sqrt(gap) at an end; the graded mesh always has a panel of that size.
    The node count per panel doubles until the value is stable.
    """
    edges = _panels(a, b)
    lo, hi = edges[:-1, None], edges[1:, None]
    prev = None
    for n in (12, 24, 48):
        x, w = leggauss(n)
        pts = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        val = float(np.sum(0.5 * (hi - lo) * f(pts) * w))
        if prev is not None and abs(val - prev) <= tol * abs(val):
            return val
        prev = val
    return val


def quartic_integral(roots, interval="c1,c2"):
    """Integral of ds/sqrt|T(s)|, T = prod(s - c_i), over a root interval.

    Finite intervals use s = mid + half*sin(theta); the tail [c3, inf) uses
    s = c3 + u^2, u = tan(theta); (-inf, c0] is mirrored onto it.
    """
    c = sorted(float(r) for r in roots)
    if len(c) != 4:
        raise ValueError("need four roots")
    span = max(1.0, max(abs(x) for x in c))
    if min(c[i + 1] - c[i] for i in range(3)) <= 1e-12 * span:
        raise CoincidentRoots(f"roots {c}")
    if interval not in INTERVALS:
        raise ValueError(f"interval must be one of {INTERVALS}")
    if interval == "-inf,c0":
        return quartic_integral([-x for x in c], "c3,inf")
    if interval == "c3,inf":
        c0, c1, c2, c3 = c

        def f(th):
            u = np.tan(th)
            u2 = u * u
            sec2 = 1 + u2
            return 2 * sec2 / np.sqrt((u2 + c3 - c0) * (u2 + c3 - c1) * (u2 + c3 - c2))
        return _gl(f, 0.0, 0.5 * math.pi)
    i = INTERVALS.index(interval) - 1
    lo, hi = c[i], c[i + 1]
    others = [x for k, x in enumerate(c) if k not in (i, i + 1)]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)

    def g(th):
        # distances to the outside roots via s - lo and hi - s, both formed
        # without cancellation, so a nearby outside root keeps full precision
        ph = 0.5 * th + 0.25 * math.pi
        d_lo, d_hi = 2 * half * np.sin(ph) ** 2, 2 * half * np.cos(ph) ** 2
        prod = 1.0
        for o in others:
            prod = prod * ((lo - o) + d_lo if o < lo else (o - hi) + d_hi)
        return 1.0 / np.sqrt(prod)
    return _gl(g, -0.5 * math.pi, 0.5 * math.pi)
