"""Cayley-type determinant conditions for periodic and elliptic-periodic billiards.

Every condition is a Hankel determinant built from the Taylor coefficients at
X = 0 of a square root sqrt(R(X)) where R is a signed product of factors
(X - a), (X - b), (X - c), (X - nu) to the powers +1 or -1.  We expand
sqrt(R(X) / R(0)) instead: all factors become (1 - X/r)^(+-1), coefficients
stay rational, and the determinant only changes by a nonzero constant power.

With nu symbolic, 1 - X/nu = 1 - tX with t = 1/nu, so coefficients are
polynomials in t and no rational functions appear.  The condition polynomial
in nu is the reversal of the determinant in t.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import math

from .minkowski import AT_INFINITY, ConfocalFamily, Causal
from .series import (RatPoly, TruncSeries, det, poly_discriminant, real_roots,
                     series_inv, series_mul, series_sqrt)

SYMBOLIC = "nu"

# tag -> (numerator factors, denominator factors, sign convention)
FAMILIES = {
    "B": (("a", "b", "c", "nu"), (), "sign(b*nu)"),
    "D": (("a", "b", "c"), ("nu",), "sign(b*nu)"),
    "E": (("a", "b", "c"), (), "sign(b)"),
    "F": (("b", "c"), ("a", "nu"), "sign(b*nu)"),
    "G": (("b", "nu"), ("a", "c"), "sign(b*nu)"),
    "H": (("a", "b", "nu"), ("c",), "sign(b*nu)"),
    "I": (("b", "c", "nu"), ("a",), "sign(b*nu)"),
    "J": (("c", "nu"), ("a", "b"), "sign(b*nu)"),
    "K": (("a", "c"), ("b", "nu"), "sign(b*nu)"),
    "L": (("a", "c", "nu"), ("b",), "sign(b*nu)"),
}

INF = math.inf


class InvalidRange(ValueError):
    pass


class NuOutOfAllRanges(ValueError):
    pass


class MismatchBeyondScalar(AssertionError):
    pass


def radicand(tag):
    num, den, eps = FAMILIES[tag]
    s = "*".join(f"(X-{r})" for r in num)
    if den:
        s += "/(" + "*".join(f"(X-{r})" for r in den) + ")"
    return f"{eps} * {s}"


def _as_family(fam):
    return fam if isinstance(fam, ConfocalFamily) else ConfocalFamily(*fam)


def _coerce_nu(nu):
    if nu is None or (isinstance(nu, str) and nu == SYMBOLIC):
        return SYMBOLIC
    if isinstance(nu, (int, str)):
        return Fraction(nu)
    return nu


def coeff_sequence(tag, fam, nu, order):
    """Coefficients 0..order of sqrt(R(X)/R(0)) for family `tag`.

    nu may be a Fraction (exact), a float or mpmath number (numeric) or
    SYMBOLIC, in which case coefficients are RatPoly in t = 1/nu.
    """
    fam = _as_family(fam)
    nu = _coerce_nu(nu)
    num, den, _ = FAMILIES[tag]
    vals = {"a": fam.a, "b": fam.b, "c": fam.c}
    if "nu" not in num + den:
        nu = Fraction(1) if fam.exact else 1.0
        inv = {k: -1 / (v if fam.exact else float(v)) for k, v in vals.items()}
        one = nu
    elif nu is SYMBOLIC:
        t = RatPoly([0, 1], "t")
        inv = {k: RatPoly([Fraction(-1) / v], "t") for k, v in vals.items()}
        inv["nu"] = -t
        one = RatPoly([1], "t")
    else:
        if nu == AT_INFINITY:
            raise InvalidRange("nu at infinity: use the light-like family E")
        if any(nu == v for v in (0, fam.a, fam.b, fam.c)):
            raise InvalidRange(f"nu = {nu} is a branch point")
        if isinstance(nu, Fraction) and fam.exact:
            inv = {k: -1 / v for k, v in vals.items()}
            one = Fraction(1)
        else:
            conv = type(nu) if not isinstance(nu, Fraction) else float
            inv = {k: -1 / conv(v) for k, v in vals.items()}
            nu = conv(nu)
            one = conv(1)
        inv["nu"] = -1 / nu
    u = TruncSeries([one], order)
    for r in num:
        u = series_mul(u, TruncSeries([one, inv[r]], order))
    for r in den:
        u = series_mul(u, series_inv(TruncSeries([one, inv[r]], order)))
    return series_sqrt(u)


def hankel(seq, first, size):
    return [[seq[first + i + j] for j in range(size)] for i in range(size)]


# shapes: (family tag, first index, size)

def periodic_shape(n, light=False):
    if n < 3:
        return None
    m = n // 2
    if light:
        return ("E", 3, m - 1) if n % 2 == 0 and n >= 4 else None
    if n % 2 == 0:
        return ("B", 3, m - 1)
    return ("D", 2, m)


# elliptic-periodicity parts: part -> (table kind, ranges as open intervals, rule)
def _collared_ranges(fam):
    a, b, c = fam.abc
    return {
        "a": [(-INF, 0), (b, c), (c, INF)],
        "b": [(-INF, 0), (c, INF)],
        "c": [(b, c)],
        "d": [(-INF, 0), (b, c), (c, INF)],
    }


def _transverse_ranges(fam):
    a, b, c = fam.abc
    return {
        "e": [(-INF, b), (b, 0), (0, a), (a, c), (c, INF)],
        "f": [(-INF, b), (a, c), (c, INF)],
        "g": [(b, 0)],
        "h": [(0, a)],
        "i": [(-INF, b), (b, 0), (a, c), (c, INF)],
        "j": [(-INF, b), (0, a), (a, c), (c, INF)],
    }


def part_shape(part, n):
    """Family and Hankel shape used by an elliptic-periodicity part, or None."""
    m, odd = n // 2, n % 2
    if part in ("a", "e"):
        return ("B", 3, n - 1) if n >= 2 else None
    if part == "b":
        if not odd and n >= 2:
            return ("F", 1, m)
        return ("D", 2, m) if odd and n >= 3 else None
    if part == "c":
        if not odd and n >= 4:
            return ("G", 1, m)
        return ("H", 2, m) if odd and n >= 5 else None
    if part in ("d", "i"):
        return ("I", 2, m) if odd and n >= 3 else None
    if part == "f":
        return ("J", 1, m) if not odd and n >= 2 else None
    if part == "g":
        return ("F", 1, m) if not odd and n >= 2 else None
    if part == "h":
        return ("K", 1, m) if not odd and n >= 4 else None
    if part == "j":
        return ("L", 2, m) if odd and n >= 3 else None
    raise KeyError(part)


def part_ranges(fam):
    fam = _as_family(fam)
    return _collared_ranges(fam) if fam.kind == "collared" else _transverse_ranges(fam)


def admissible_ranges(fam):
    """Caustic parameters whose trajectories actually bounce inside the table."""
    fam = _as_family(fam)
    a, b, c = fam.abc
    if fam.kind == "collared":
        # (0, a) never reaches the boundary, (a, b) carries no conics
        return [(-INF, 0), (b, c), (c, INF)]
    return [(-INF, b), (b, 0), (0, a), (a, c), (c, INF)]


def in_ranges(x, ranges):
    return any(lo < x < hi for lo, hi in ranges)


def trajectory_causal(fam, nu):
    """Causal type shared by all trajectories with caustic nu."""
    fam = _as_family(fam)
    if nu == AT_INFINITY:
        return Causal.LIGHT
    a, b, c = fam.abc
    if fam.kind == "collared":
        return Causal.SPACE if nu < a else Causal.TIME
    return Causal.SPACE if nu > 0 else Causal.TIME


@dataclass
class ConditionReport:
    family: str
    n: int
    table: str
    part: str | None = None
    value: object = None          # determinant (numeric nu)
    poly: RatPoly | None = None   # condition polynomial (symbolic nu)
    valid_nu_ranges: list = field(default_factory=list)
    roots: list = field(default_factory=list)
    note: str = ""

    def to_dict(self):
        return {
            "family": self.family, "n": self.n, "table": self.table, "part": self.part,
            "value": None if self.value is None else str(self.value),
            "poly": None if self.poly is None else [str(x) for x in self.poly.c],
            "valid_nu_ranges": [[_j(lo), _j(hi)] for lo, hi in self.valid_nu_ranges],
            "roots": self.roots, "note": self.note,
        }


def _j(x):
    return None if math.isinf(x) else x


def _evaluate(shape, fam, nu):
    tag, first, size = shape
    seq = coeff_sequence(tag, fam, nu, first + 2 * (size - 1))
    return det(hankel(seq.c, first, size))


def _poly_in_nu(shape, fam):
    D = _evaluate(shape, fam, SYMBOLIC)
    if not isinstance(D, RatPoly):
        D = RatPoly([D], "t")
    G = D.reverse()
    return RatPoly(G.c, "nu").primitive()


def periodicity_condition(n, fam, nu=SYMBOLIC, light=False):
    fam = _as_family(fam)
    if n == 2:
        return ConditionReport("-", 2, fam.kind, note="2-periodic trajectories lie in the symmetry planes")
    light = light or nu == AT_INFINITY
    shape = periodic_shape(n, light)
    if shape is None:
        return ConditionReport("E" if light else "-", n, fam.kind,
                               note="no condition of this shape (light-like periods are even and >= 4)")
    rep = ConditionReport(shape[0], n, fam.kind, valid_nu_ranges=admissible_ranges(fam))
    if light:
        # the light-like condition does not involve nu
        seq = coeff_sequence("E", fam, None, 2 * n)
        rep.value = det(hankel(seq.c, shape[1], shape[2]))
        return rep
    nu = _coerce_nu(nu)
    if nu is SYMBOLIC:
        rep.poly = _poly_in_nu(shape, fam)
        rep.roots = _root_table(rep.poly, fam, admissible_ranges(fam))
    else:
        rep.value = _evaluate(shape, fam, nu)
    return rep


def elliptic_periodicity_condition(n, fam, nu=SYMBOLIC):
    """Reports for every part whose n-shape applies (and whose range holds nu, if numeric)."""
    fam = _as_family(fam)
    nu = _coerce_nu(nu)
    out = []
    for part, ranges in part_ranges(fam).items():
        shape = part_shape(part, n)
        if shape is None:
            continue
        if nu is not SYMBOLIC and not in_ranges(float(nu), ranges):
            continue
        rep = ConditionReport(shape[0], n, fam.kind, part=part, valid_nu_ranges=ranges)
        if nu is SYMBOLIC:
            rep.poly = _poly_in_nu(shape, fam)
            rep.roots = _root_table(rep.poly, fam, ranges)
        else:
            rep.value = _evaluate(shape, fam, nu)
        out.append(rep)
    if not out and nu is not SYMBOLIC:
        raise NuOutOfAllRanges(f"nu = {nu} is outside every part range for n = {n}")
    return out


def condition_polynomial(n, fam, part=None):
    """Content-normalized polynomial in nu; part=None means plain periodicity."""
    fam = _as_family(fam)
    shape = periodic_shape(n) if part is None else part_shape(part, n)
    if shape is None:
        raise ValueError(f"no condition for n={n}, part={part}")
    return _poly_in_nu(shape, fam)


def _root_table(P, fam, ranges):
    out = []
    for r, mult in real_roots(P):
        out.append({"nu": r, "multiplicity": mult, "in_range": in_ranges(r, ranges),
                    "causal": trajectory_causal(fam, r).value})
    return out


def cartesian_period(n, fam):
    """Cartesian period of trajectories whose caustic solves the n-th periodicity condition.

    Inside the collared table the odd conditions close in the elliptic
    coordinates after n bounces but return to the starting state after 2n.
    """
    fam = _as_family(fam)
    return 2 * n if fam.kind == "collared" and n % 2 else n


def find_periodic_caustics(n, fam):
    """Caustics in the admissible ranges whose trajectories have Cartesian period n.

    Returns dicts with nu, the family used, the causal type and the periods.
    Roots shared with a condition of smaller Cartesian period are dropped.
    """
    fam = _as_family(fam)
    out = []
    for k in _condition_indices(n, fam):
        P = condition_polynomial(k, fam)
        for r, mult in real_roots(P):
            if not in_ranges(r, admissible_ranges(fam)) or not _exact_period(r, n, fam, k):
                continue
            if any(abs(r - o["nu"]) < 1e-9 for o in out):
                continue
            out.append({"nu": r, "family": periodic_shape(k)[0], "condition_n": k,
                        "causal": trajectory_causal(fam, r).value,
                        "cartesian_period": cartesian_period(k, fam), "elliptic_period": k,
                        "multiplicity": mult})
    return sorted(out, key=lambda d: d["nu"])


def _condition_indices(n, fam):
    ks = [n] if n >= 3 else []
    if fam.kind == "collared" and n % 2 == 0 and n // 2 >= 3 and (n // 2) % 2:
        ks.append(n // 2)
    return ks


def _exact_period(r, n, fam, k):
    if cartesian_period(k, fam) != n:
        return False
    for d in range(3, n):
        if cartesian_period(d, fam) < n and n % cartesian_period(d, fam) == 0:
            P = condition_polynomial(d, fam)
            if abs(float(P(r))) <= 1e-9 * sum(abs(float(x)) * max(1, abs(r)) ** i for i, x in enumerate(P.c)):
                return False
    return True


def find_elliptic_caustics(n, fam):
    """Roots of the elliptic-periodicity parts inside their ranges, excluding
    caustics that already satisfy the periodicity condition of the same n."""
    fam = _as_family(fam)
    per = condition_polynomial(n, fam) if n >= 3 else None
    out = []
    for rep in elliptic_periodicity_condition(n, fam):
        for root in rep.roots:
            r = root["nu"]
            if not root["in_range"]:
                continue
            if per is not None and abs(float(per(r))) <= 1e-9 * _scale(per, r):
                continue
            out.append({"nu": r, "part": rep.part, "family": rep.family,
                        "causal": root["causal"]})
    return sorted(out, key=lambda d: (d["nu"], d["part"]))


def _scale(P, r):
    return sum(abs(float(x)) * max(1.0, abs(r)) ** i for i, x in enumerate(P.c))


# closed forms for the condition polynomials and their discriminants

def g_closed_form(n, fam):
    """Closed-form condition polynomial in nu for n = 3..6 (None otherwise)."""
    fam = _as_family(fam)
    a, b, c = fam.a, fam.b, fam.c
    p, q, r = fam.pqr
    nu = RatPoly([0, 1], "nu")
    one = RatPoly([1], "nu")
    if n == 3:
        return RatPoly([3 * r * r, -2 * q * r, 4 * p * r - q * q], "nu")
    if n == 4:
        return ((-a * b + a * c + b * c) * nu - a * b * c) * ((a * b + a * c - b * c) * nu - a * b * c) \
            * ((a * b - a * c + b * c) * nu - a * b * c)
    if n == 5:
        co = [5 * r**6, -10 * q * r**5, r**4 * (52 * p * r - 9 * q * q),
              4 * r**3 * (-36 * p * q * r + 9 * q**3 + 56 * r * r),
              r * r * (-16 * r * r * (p * p + 14 * q) + 120 * p * q * q * r - 29 * q**4),
              2 * r * (16 * q * r * r * (q - p * p) - 8 * p * q**3 * r + 64 * p * r**3 + 3 * q**5),
              48 * p * p * q * q * r * r - 64 * r**3 * (p**3 + 4 * r) - 12 * p * q**4 * r
              + 128 * p * q * r**3 - 32 * q**3 * r * r + q**6]
        return RatPoly(co, "nu")
    if n == 6:
        A = RatPoly([r * r, 2 * r * (a * b - a * c - b * c),
                     -3 * a * a * b * b + c * c * (a - b) ** 2 + 2 * r * (a + b)], "nu")
        B = RatPoly([3 * r * r, -2 * r * q,
                     -a * a * (b - c) ** 2 + 2 * r * (b + c) - b * b * c * c], "nu")
        C = RatPoly([r * r, 2 * r * (-a * b - a * c + b * c),
                     a * a * (b - c) ** 2 + 2 * r * (b + c) - 3 * b * b * c * c], "nu")
        D = RatPoly([r * r, 2 * r * (-a * b + a * c - b * c),
                     a * a * (b - c) * (b + 3 * c) + 2 * r * (c - b) + b * b * c * c], "nu")
        return A * B * C * D * one
    return None


def _cubic_disc(p, q, r):
    return p * p * q * q - 4 * p**3 * r + 18 * p * q * r - 4 * q**3 - 27 * r * r


def disc_closed_form(n, fam):
    """Closed-form discriminant in nu of the n-th condition polynomial, n = 3..7."""
    fam = _as_family(fam)
    p, q, r = fam.pqr
    D = _cubic_disc(p, q, r)
    if n == 3:
        return 2**4 * r * r * (q * q - 3 * p * r)
    if n == 4:
        a, b, c = fam.a, fam.b, fam.c
        return 2**6 * r**8 * (a - b) ** 2 * (a - c) ** 2 * (b - c) ** 2
    if n == 5:
        return 2**44 * 5 * r**38 * D**4 * (
            -889 * p * p * q * q * r * r + r**3 * (1369 * p**3 + 4320 * r) + 243 * p * q**4 * r
            - 2880 * p * q * r**3 + 640 * q**3 * r * r - 27 * q**6)
    if n == 6:
        return 2**88 * r**74 * (q * q - 3 * p * r) * (-D) ** 9
    if n == 7:
        br = (13884993 * p**2 * q**8 * r**2 - 4 * q**6 * r**3 * (19497321 * p**3 + 36960632 * r)
              - 633232064 * p**2 * q**5 * r**4 + p * q**4 * r**4 * (254629897 * p**3 + 1330582752 * r)
              + 64 * q**3 * r**5 * (17805509 * p**3 - 16979328 * r)
              - 2 * p**2 * q**2 * r**5 * (209755567 * p**3 + 1588370256 * r)
              - 576 * p * q * r**6 * (846895 * p**3 - 8489664 * r)
              + r**6 * (731717280 * p**3 * r + 250406527 * p**6 - 3667534848 * r**2)
              + 134695872 * p * q**7 * r**3 - 1518750 * p * q**10 * r - 9977472 * q**9 * r**2
              + 84375 * q**12)
        return -(2**184) * 7**2 * r**172 * D**20 * br
    raise ValueError("closed form known for n = 3..7")


def proportionality(P, Q):
    """lambda with P == lambda * Q, or None."""
    if P.degree != Q.degree or Q.is_zero():
        return None
    lam = Fraction(P.lc()) / Fraction(Q.lc())
    return lam if all(Fraction(x) == lam * Fraction(y) for x, y in zip(P.c, Q.c)) else None


def _perfect_power(x, k):
    """Rational y > 0 with y**k == |x|, or None."""
    x = abs(Fraction(x))

    def iroot(n):
        lo, hi = 0, 1 << (n.bit_length() // k + 2)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if mid**k <= n:
                lo = mid
            else:
                hi = mid - 1
        return lo if lo**k == n else None

    a, b = iroot(x.numerator), iroot(x.denominator)
    return None if a is None or b is None else Fraction(a, b)


def verify_discriminant_factorization(n, triples):
    """Compare disc_nu of our condition polynomial with the closed form.

    For n <= 6 the scalar lambda comes from proportionality with the closed-form
    polynomial; for n = 7 it is fixed by the constant term 7 r^12, and in
    addition the raw ratio is checked to be a perfect (2d-2)-th power.
    """
    rows = []
    for abc in triples:
        fam = _as_family(abc)
        G = condition_polynomial(n, fam)
        d = G.degree
        disc = poly_discriminant(G)
        rhs = disc_closed_form(n, fam)
        ref = g_closed_form(n, fam)
        if ref is not None:
            lam = proportionality(G, ref)
            if lam is None:
                raise MismatchBeyondScalar(f"G_{n} not proportional to closed form at {abc}")
        else:
            lam = Fraction(G.c[0]) / (7 * fam.pqr[2] ** 12)
        expected = lam ** (2 * d - 2) * rhs
        ratio = Fraction(disc) / Fraction(rhs) if rhs else None
        root = _perfect_power(ratio, 2 * d - 2) if ratio is not None and ratio > 0 else None
        ok = disc == expected
        rows.append({"abc": [str(x) for x in (fam.a, fam.b, fam.c)], "degree": d,
                     "lambda": str(lam), "match": ok, "ratio_is_power": root is not None})
        if not ok:
            raise MismatchBeyondScalar(f"discriminant mismatch for n={n} at {abc}: ratio {ratio}")
    return rows


def separable_g3_discriminant(A, C):
    """disc_nu G_3 after (p,q,r) -> (AB, A+B, 1), B = CA; expected 16 A^2 (1 - C + C^2)."""
    A, C = Fraction(A), Fraction(C)
    B = C * A
    p, q, r = A * B, A + B, Fraction(1)
    G = RatPoly([3 * r * r, -2 * q * r, 4 * p * r - q * q], "nu")
    return poly_discriminant(G), 16 * A * A * (1 - C + C * C)
