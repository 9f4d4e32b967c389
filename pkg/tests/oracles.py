"""Independent reference computations used by the tests.

Nothing here imports hypb: the Cayley determinants are redone with sympy
series, elliptic quantities with mpmath at 30 digits.
"""
import sympy as sp
import mpmath as mp

X, NU = sp.symbols("X nu")


def _coeffs(expr, N):
    s = sp.series(expr, X, 0, N + 1).removeO()
    return [sp.expand(s.coeff(X, i)) for i in range(N + 1)]


def cayley_poly(abc, n):
    """Numerator of the n-th Hankel condition as a primitive sympy Poly in nu
    with positive leading coefficient."""
    a, b, c = (sp.Rational(x) for x in abc)
    m = n // 2
    if n % 2 == 0:
        R = (1 - X / a) * (1 - X / b) * (1 - X / c) * (1 - X / NU)
        B = _coeffs(sp.sqrt(R), 2 * m)
        M = sp.Matrix(m - 1, m - 1, lambda i, j: B[i + j + 3])
    else:
        R = (1 - X / a) * (1 - X / b) * (1 - X / c) / (1 - X / NU)
        D = _coeffs(sp.sqrt(R), 2 * m + 1)
        M = sp.Matrix(m, m, lambda i, j: D[i + j + 2])
    num, _ = sp.fraction(sp.factor(sp.together(M.det())))
    P = sp.Poly(num, NU)
    P = P.primitive()[1]
    return -P if P.LC() < 0 else P


def as_int_list(P):
    """Coefficients lowest degree first."""
    return [int(x) for x in P.all_coeffs()[::-1]]


def quartic_integral_mp(roots, lo, hi, dps=30):
    """Integral of 1/sqrt|T| over (lo, hi); hi/lo may be +-inf."""
    with mp.workdps(dps):
        r = [mp.mpf(x) for x in roots]
        f = lambda s: 1 / mp.sqrt(abs((s - r[0]) * (s - r[1]) * (s - r[2]) * (s - r[3])))
        pts = [lo] + [x for x in r if lo < x < hi] + [hi]
        return float(mp.quad(f, pts))


def ellipfun(u, k):
    with mp.workdps(30):
        m = mp.mpf(k) ** 2
        return tuple(float(mp.ellipfun(w, u, m=m)) for w in ("sn", "cn", "dn"))


def ellipk(k):
    with mp.workdps(30):
        return float(mp.ellipk(mp.mpf(k) ** 2))


def nome(k):
    with mp.workdps(30):
        return float(mp.qfrom(m=mp.mpf(k) ** 2))
