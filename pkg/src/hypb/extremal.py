"""Polynomial Pell equations, Chebyshev/Akhiezer polynomials and the closed
forms for light-like, degenerate and transverse period-3 caustics.

Quartics are written as T(s) = prod (s - 1/r) over r in (a, b, c, nu); with
four factors this equals prod (1/r - s).  For light-like motion 1/nu = 0.
"""
from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from . import elliptic
from .conditions import _as_family, _coerce_nu, coeff_sequence
from .minkowski import AT_INFINITY
from .series import RatPoly, count_roots, real_roots


class NotPeriodic(ValueError):
    pass


class NormalizationFailure(ArithmeticError):
    pass


class AlphaOutOfRange(ValueError):
    pass


class ConstraintViolated(ValueError):
    pass


class NoAdmissibleRoot(ValueError):
    pass


class NotCollared(ValueError):
    pass


S = "s"


# Chebyshev

def chebyshev_T(m, x):
    if m < 0:
        raise ValueError("m >= 0")
    t0, t1 = 1.0 + 0 * x, x
    if m == 0:
        return t0
    for _ in range(m - 1):
        t0, t1 = t1, 2 * x * t1 - t0
    return t1


def _recur(m, first, var):
    x = RatPoly([0, 1], var)
    p0, p1 = RatPoly([1], var), first
    if m == 0:
        return p0
    for _ in range(m - 1):
        p0, p1 = p1, x * p1 * 2 - p0
    return p1


def chebyshev_T_poly(m, var="x"):
    return _recur(m, RatPoly([0, 1], var), var)


def chebyshev_U_poly(m, var="x"):
    """U_m, with U_{-1} = 0."""
    if m < 0:
        return RatPoly([], var)
    return _recur(m, RatPoly([0, 2], var), var)


def chebyshev_pell(m, var="x"):
    """(T_m, U_{m-1}) and the exact check T_m^2 - (x^2-1) U_{m-1}^2 == 1."""
    T, U = chebyshev_T_poly(m, var), chebyshev_U_poly(m - 1, var)
    lhs = T * T - RatPoly([-1, 0, 1], var) * U * U
    return T, U, lhs == RatPoly([1], var)


def akhiezer_even(m, alpha, x):
    """A_{2m}(x; alpha) on [-1, -alpha] U [alpha, 1], from T_m by x -> x^2."""
    if not 0 < alpha < 1:
        raise AlphaOutOfRange(f"alpha={alpha}")
    w = 1 - alpha * alpha
    return w ** m / 2 ** (2 * m - 1) * chebyshev_T(m, (2 * np.asarray(x, float) ** 2 - 1 - alpha * alpha) / w)


def proportional(p, q, tol=0):
    """p == lambda*q for a scalar lambda, via the leading-coefficient ratio."""
    if p.degree != q.degree or p.is_zero():
        return False
    lam = p.lc() / q.lc()
    for x, y in zip(p.c, q.c):
        d = x - lam * y
        if (tol == 0 and d != 0) or (tol and abs(d) > tol * max(1.0, abs(x))):
            return False
    return True


# Pell pairs from the periodicity conditions

@dataclass
class PellPair:
    p_hat: RatPoly
    q_hat: RatPoly
    quartic: RatPoly
    roots: tuple
    exact: bool
    residual: float

    def verify(self, tol=1e-8):
        if self.exact:
            return self.p_hat * self.p_hat - self.quartic * self.q_hat * self.q_hat == RatPoly([1], S)
        return self.residual <= tol

    def to_dict(self):
        enc = str if self.exact else float
        return {"p_hat": [enc(x) for x in self.p_hat.c], "q_hat": [enc(x) for x in self.q_hat.c],
                "quartic": [enc(x) for x in self.quartic.c],
                "roots": [enc(x) for x in self.roots], "exact": self.exact,
                "residual": self.residual, "verified": self.verify()}


def _nullspace_exact(rows, ncols):
    A = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][col]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][fcol]
        basis.append(v)
    return basis


def _nullspace_float(rows, rtol=1e-9):
    M = np.array(rows, float)
    _, sv, Vt = np.linalg.svd(M)
    # square systems: compare the smallest singular value with the largest
    if sv[-1] > rtol * sv[0]:
        return [], sv
    tie = len(sv) > 1 and sv[-2] <= rtol * sv[0]
    return [Vt[-1]] + ([Vt[-2]] if tie else []), sv


def _pell_system(y, dp, dq, N):
    """Rows of p*(X) - q*(X) y(X) = O(X^N) in the unknowns (p_0..p_dp, q_0..q_dq)."""
    rows = []
    for k in range(N):
        row = [(1 if i == k else 0) for i in range(dp + 1)]
        row += [-(y[k - j] if k - j >= 0 else 0) for j in range(dq + 1)]
        rows.append(row)
    return rows


def _reciprocal_roots(fam, nu):
    vals = [fam.a, fam.b, fam.c]
    exact = fam.exact and (nu == AT_INFINITY or isinstance(nu, Fraction))
    if exact:
        inv = [1 / v for v in vals] + [Fraction(0) if nu == AT_INFINITY else 1 / nu]
    else:
        inv = [1 / float(v) for v in vals] + [0.0 if nu == AT_INFINITY else 1 / float(nu)]
    return inv, exact


def _linear_factors(inv, exact):
    one = Fraction(1) if exact else 1.0
    return [RatPoly([-r, one], S) for r in inv]


def _poly_residual(p):
    return max((abs(float(x)) for x in p.c), default=0.0)


def pell_from_periodicity(n, fam, nu):
    """Pell pair p_hat^2 - T q_hat^2 = 1 for an n-periodic caustic nu.

    p*(X), q*(X) come from the vanishing order of p* - q* y(X) at X = 0,
    y the normalized square root used in the Cayley conditions; X = 1/s then
    turns p*^2 - q*^2 y^2 = k X^n into a polynomial identity in s.
    nu = AT_INFINITY gives the light-like version (even n only).
    """
    fam = _as_family(fam)
    nu = AT_INFINITY if nu == AT_INFINITY else _coerce_nu(nu)
    if n < 2:
        raise NotPeriodic("n >= 2")
    inv, exact = _reciprocal_roots(fam, nu)
    light = nu == AT_INFINITY
    if light and n % 2:
        raise NotPeriodic("light-like periods are even")
    m = n // 2
    if n % 2 == 0:
        tag, dp, dq = ("E" if light else "B"), m, m - 2
    else:
        tag, dp, dq = "D", m, m - 1
    num_nu = None if light else (nu if exact else float(nu))
    if not exact and fam.exact:
        fam = _as_family(fam.abc)
    y = coeff_sequence(tag, fam, num_nu, n).c
    if dq < 0:
        # n = 2: only p* of degree 1; the condition is y_1 = p_1 and y_2 = 0
        raise NotPeriodic("period 2 is not covered by a Pell pair of this shape")
    rows = _pell_system(y, dp, dq, n)
    ncols = dp + dq + 2
    if exact:
        basis = _nullspace_exact(rows, ncols)
    else:
        basis, _ = _nullspace_float(rows)
    if not basis:
        raise NotPeriodic(f"nu = {nu} does not satisfy the period-{n} condition")
    if len(basis) > 1:
        raise NormalizationFailure("nullspace of dimension > 1")
    vec = basis[0]
    ps = list(vec[: dp + 1])
    qs = list(vec[dp + 1:])
    if not exact:
        ps, qs = [float(x) for x in ps], [float(x) for x in qs]
    # X = 1/s: P(s) = s^dp p*(1/s), Q(s) = s^dq q*(1/s)
    P = RatPoly(list(reversed(ps)), S)
    Q = RatPoly(list(reversed(qs)), S)
    lin = _linear_factors(inv, exact)
    U = lin[0] * lin[1] * lin[2]
    T = U * lin[3]
    if n % 2 == 0:
        A = RatPoly([Fraction(1) if exact else 1.0], S)
        U = T
    else:
        A = lin[3]
    K = A * P * P - U * Q * Q
    k = K.coeff(0)
    if exact:
        if K.degree > 0:
            raise NormalizationFailure(f"A P^2 - U Q^2 is not constant: {K}")
    if k == 0 or (not exact and abs(k) <= 1e-14 * max(1.0, _poly_residual(A * P * P))):
        raise NormalizationFailure("k = 0")
    ak = abs(k)
    p_hat = (A * P * P * 2 - RatPoly([k], S)) / ak
    q_hat = P * Q * 2 / ak
    if exact:
        res = 0.0
    else:
        # normalize so the largest coefficient of p_hat is the unit of the residual
        scale = max(1.0, _poly_residual(p_hat))
        res = _poly_residual(p_hat * p_hat - T * q_hat * q_hat - RatPoly([1.0], S)) / scale ** 2
    pair = PellPair(p_hat, q_hat, T, tuple(sorted(inv, key=float)), exact, res)
    if not pair.verify():
        raise NormalizationFailure(f"Pell identity fails, residual {res}")
    return pair


def zeros_in(poly, lo, hi):
    """Number of distinct real zeros of poly in (lo, hi), by Sturm sequences.

    Floating coefficients are converted to exact binary rationals first.
    """
    P = poly.map(lambda x: Fraction(x) if not isinstance(x, Fraction) else x)
    lo, hi = Fraction(lo), Fraction(hi)
    n = count_roots(P, lo, hi)
    if P(hi) == 0:
        n -= 1
    return n


# light-like period 4

def lightlike_table(kind, a, b=None, c=None):
    """Complete a table so that light-like period-4 trajectories exist.

    Collared needs (a, b) with a < b < 2a and sets c = ab/(b-a); transverse
    needs (a, c) with 0 < a < c and sets b = ac/(a-c).
    """
    a = Fraction(a)
    if kind == "collared":
        b = Fraction(b)
        if not 0 < a < b < 2 * a:
            raise ConstraintViolated(f"need a < b < 2a, got a={a}, b={b}")
        return _as_family((a, b, a * b / (b - a)))
    if kind == "transverse":
        c = Fraction(c)
        if not 0 < a < c:
            raise ConstraintViolated(f"need 0 < a < c, got a={a}, c={c}")
        return _as_family((a, a * c / (a - c), c))
    raise ValueError(kind)


def lightlike_period4_pell(kind, fam):
    """Closed-form p_hat_4 = T_2(y(s)) for a light-like period-4 table.

    The returned identity is p_hat^2 - s (s-1/a)(s-1/b)(s-1/c) q_hat^2 = 1.
    """
    if isinstance(fam, tuple) and len(fam) == 2:
        fam = lightlike_table(kind, *fam) if kind == "collared" else lightlike_table(kind, fam[0], c=fam[1])
    fam = _as_family(fam)
    if fam.kind != kind:
        raise ConstraintViolated(f"family is {fam.kind}, not {kind}")
    a, b, c = fam.a, fam.b, fam.c
    if kind == "collared":
        if not (b < 2 * a and c == a * b / (b - a)):
            raise ConstraintViolated("need c = ab/(b-a) with a < b < 2a")
        y = RatPoly([b - a, -2 * b * b, 2 * a * b * b], S) / (b - a)
        lam = 4 * a * b * b / (b - a)
        text = "T2((2ab^2 s^2 - 2b^2 s + b - a)/(b - a))"
    else:
        if b != a * c / (a - c):
            raise ConstraintViolated("need b = ac/(a-c)")
        y = RatPoly([-(c - a), -2 * a * a, 2 * a * a * c], S) / (c - a)
        lam = 4 * a * a * c / (c - a)
        text = "T2((2a^2c s^2 - 2a^2 s - (c - a))/(c - a))"
    p_hat = chebyshev_T_poly(2, S).compose(y)
    q_hat = y * lam
    T = RatPoly([0, 1], S) * RatPoly([-1 / a, 1], S) * RatPoly([-1 / b, 1], S) * RatPoly([-1 / c, 1], S)
    ok = p_hat * p_hat - T * q_hat * q_hat == RatPoly([1], S)
    return PellPair(p_hat, q_hat, T, tuple(sorted((0, 1 / a, 1 / b, 1 / c))), True, 0.0 if ok else math.inf), text


# transverse period 3 via Zolotarev polynomials

def _g3(fam, nu):
    a, b, c = fam.abc
    p, q = a * b * c, a * b + b * c + a * c
    terms = (3 * p * p, -2 * p * q * nu, (4 * p * (a + b + c) - q * q) * nu * nu)
    return sum(terms) / sum(abs(t) for t in terms)


def _real_roots_quadratic(A, B, C):
    if A == 0:
        return [-C / B] if B else []
    D = B * B - 4 * A * C
    if D < 0:
        return []
    sq = math.sqrt(D)
    q = -0.5 * (B + math.copysign(sq, B))
    return sorted([q / A, C / q] if q else [-B / (2 * A)])


@dataclass
class ZolotarevSolveState:
    Y: float
    kappa2: float
    l_hat: float
    m_hat: float
    nu: float
    alpha: float
    beta: float
    g3_residual: float
    sn_check: float

    def h(self, x):
        return self.l_hat * x + self.m_hat

    def to_dict(self):
        return dict(self.__dict__)


def zolotarev_transverse_period3(fam):
    """Y = sn(K/3), kappa^2, the affine map h and nu for the m = 2 Zolotarev
    polynomial that describes transverse 3-periodic caustics b < nu < 0."""
    fam = _as_family(fam)
    if fam.kind != "transverse":
        raise NoAdmissibleRoot("transverse family required")
    a, b, c = fam.abc
    # h maps -1, beta, 1 to 1/nu, 1/c, 1/a with beta = 2Y^2 - 1 and
    # alpha = 1 - 4Y + 2Y^2 sent to 1/b; eliminating h gives this quadratic
    cands = []
    for Y in _real_roots_quadratic(a * (b - c), 2 * b * (c - a), (a - b) * c):
        if not 0.5 < Y < 1:
            continue
        k2 = (2 * Y - 1) / (Y ** 3 * (2 - Y))
        if not 0 < k2 < 1:
            continue
        nu = a * c * (1 - Y * Y) / (a - c * Y * Y)
        if not b < nu < 0:
            continue
        K = elliptic.complete_K(math.sqrt(k2))
        sn = elliptic.jacobi_sn_cn_dn(K / 3, math.sqrt(k2))[0]
        cands.append((abs(sn - Y), Y, k2, nu))
    if not cands:
        raise NoAdmissibleRoot(f"no Y in (1/2, 1) for {fam.abc}")
    err, Y, k2, nu = min(cands)
    den = 2 * a * c * (1 - Y * Y)
    return ZolotarevSolveState(Y, k2, (c - a) / den, (a + c - 2 * c * Y * Y) / den, nu,
                               1 - 4 * Y + 2 * Y * Y, 2 * Y * Y - 1, abs(_g3(fam, nu)), err)


def zolotarev_m1_residual(fam):
    """Smallest normalized G_3 residual over real solutions of the m = 1
    branch equations (a-b)c - 2(a-b)cY + (bc+ac-ab)Y^2 = 0, nu = abY^2/(a-b+bY^2).

    Returns inf when the quadratic has no real root.
    """
    fam = _as_family(fam)
    a, b, c = fam.abc
    best = math.inf
    for Y in _real_roots_quadratic(b * c + a * c - a * b, -2 * (a - b) * c, (a - b) * c):
        den = a - b + b * Y * Y
        if den == 0:
            continue
        best = min(best, abs(_g3(fam, a * b * Y * Y / den)))
    return best


def zolotarev_pell_match(fam, state=None):
    """Max deviation between p_hat_3 and -+TA_3((s - m_hat)/l_hat)/L on the
    support intervals of p_hat_3."""
    fam = _as_family(fam)
    st = state or zolotarev_transverse_period3(fam)
    pair = pell_from_periodicity(3, fam.abc, st.nu)
    poly, P = elliptic.akhiezer_poly(3, 2, math.sqrt(st.kappa2))
    xs = np.concatenate([np.linspace(-1, P.alpha, 200), np.linspace(P.beta, 1, 200)])
    s = st.h(xs)
    ph = np.polyval(np.array([float(x) for x in pair.p_hat.c[::-1]]), s)
    ta = poly(xs) / P.L
    return min(np.max(np.abs(ph - ta)), np.max(np.abs(ph + ta)))


# degenerate caustic nu = b in the collared table

def degenerate_caustic_conditions(fam, m):
    """Chebyshev conditions for caustic nu = b with a < b < c.

    p_hat_m(s) = T_m(x(s)), x(s) = (2ac s - (a + c))/(c - a), solves the
    one-interval Pell equation on [1/c, 1/a]; the period condition is that
    x0 = x(1/b) is one of cos(k pi/m), i.e. U_{m-1}(x0) = 0.
    """
    fam = _as_family(fam)
    if fam.kind != "collared":
        raise NotCollared("collared family required")
    a, b, c = (fam.a, fam.b, fam.c) if fam.exact else fam.abc
    x = RatPoly([-(a + c) / (c - a), 2 * a * c / (c - a)], S)
    T = chebyshev_T_poly(m).compose(x)
    U = chebyshev_U_poly(m - 1).compose(x) * (2 * a * c / (c - a))
    quad = RatPoly([-1 / a, 1], S) * RatPoly([-1 / c, 1], S)
    diff = T * T - quad * U * U - RatPoly([1], S)
    pell_ok = diff.is_zero() if fam.exact else _poly_residual(diff) <= 1e-9
    x0 = (2 * a * c - b * (a + c)) / (b * (c - a))
    hits = [k for k in range(1, m) if abs(float(x0) - math.cos(k * math.pi / m)) <= 1e-10]
    q_at = U(1 / b)
    return {"m": m, "x0": float(x0), "x0_exact": str(x0) if fam.exact else None,
            "k": hits, "holds": bool(hits), "q_hat_at_1_over_b": float(q_at),
            "q_hat_vanishes_exactly": (q_at == 0) if fam.exact else None,
            "pell_identity": bool(pell_ok),
            "p_hat": [str(v) if fam.exact else float(v) for v in T.c],
            "q_hat": [str(v) if fam.exact else float(v) for v in U.c]}
