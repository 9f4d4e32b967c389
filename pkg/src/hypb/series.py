"""Exact polynomials, rational functions and truncated power series.

Coefficients are usually ``fractions.Fraction`` but nothing here insists on
it: floats, mpmath numbers and even ``RatPoly`` objects (polynomials in a
second variable) work as long as they support ring arithmetic.  Division is
only needed by ``divmod``, ``series_inv`` with a non-unit constant term and
the root isolation helpers.
"""
from fractions import Fraction
from math import gcd, lcm, inf


def to_q(x):
    """Coerce ints, decimal strings and 'p/q' strings to Fraction.  Floats pass through."""
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    return x


def _is_zero(c):
    if isinstance(c, RatPoly):
        return c.is_zero()
    return c == 0


class ZeroConstantTerm(ZeroDivisionError):
    pass


class NotNormalized(ValueError):
    pass


class RatPoly:
    """Dense univariate polynomial, lowest degree first."""

    __slots__ = ("c", "var")

    def __init__(self, coeffs=(), var="x"):
        c = list(coeffs)
        while c and _is_zero(c[-1]):
            c.pop()
        self.c = c
        self.var = var

    # construction helpers
    @classmethod
    def const(cls, k, var="x"):
        return cls([k], var)

    @classmethod
    def x(cls, var="x"):
        return cls([0, 1], var)

    @classmethod
    def from_roots(cls, roots, lead=1, var="x"):
        p = cls([lead], var)
        for r in roots:
            p = p * cls([-r, 1], var)
        return p

    # basic queries
    @property
    def degree(self):
        return len(self.c) - 1 if self.c else -inf

    def is_zero(self):
        return not self.c

    def lc(self):
        return self.c[-1] if self.c else 0

    def coeff(self, i):
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __len__(self):
        return len(self.c)

    def __iter__(self):
        return iter(self.c)

    def __eq__(self, other):
        if not isinstance(other, RatPoly):
            other = RatPoly([other], self.var)
        return self.c == other.c

    def __hash__(self):
        return hash(tuple(self.c))

    def _wrap(self, other):
        return other if isinstance(other, RatPoly) else RatPoly([other], self.var)

    # ring operations
    def __add__(self, other):
        o = self._wrap(other)
        n = max(len(self.c), len(o.c))
        return RatPoly([self.coeff(i) + o.coeff(i) for i in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return RatPoly([-x for x in self.c], self.var)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, RatPoly):
            return RatPoly([x * other for x in self.c], self.var)
        if not self.c or not other.c:
            return RatPoly([], self.var)
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if _is_zero(x):
                continue
            for j, y in enumerate(other.c):
                out[i + j] = out[i + j] + x * y
        return RatPoly(out, self.var)

    __rmul__ = __mul__

    def __truediv__(self, k):
        if isinstance(k, RatPoly):
            q, r = divmod(self, k)
            if not r.is_zero():
                raise ArithmeticError("inexact polynomial division")
            return q
        if isinstance(k, int):
            k = Fraction(k)
        return RatPoly([x / k for x in self.c], self.var)

    def __pow__(self, e):
        out = RatPoly([1], self.var)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        other = self._wrap(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        dq = len(r) - len(other.c)
        if dq < 0:
            return RatPoly([], self.var), RatPoly(r, self.var)
        q = [0] * (dq + 1)
        lead = other.c[-1]
        for k in range(dq, -1, -1):
            t = r[k + len(other.c) - 1]
            if isinstance(t, int) and isinstance(lead, int):
                t = Fraction(t)
            t = t / lead
            q[k] = t
            if _is_zero(t):
                continue
            for j, y in enumerate(other.c):
                r[k + j] = r[k + j] - t * y
        return RatPoly(q, self.var), RatPoly(r[: len(other.c) - 1], self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def deriv(self):
        return RatPoly([i * a for i, a in enumerate(self.c)][1:], self.var)

    def compose(self, inner):
        """self(inner(x))."""
        acc = RatPoly([], inner.var)
        for a in reversed(self.c):
            acc = acc * inner + a
        return acc

    def reverse(self, n=None):
        """x^n * self(1/x); n defaults to the degree."""
        n = len(self.c) - 1 if n is None else n
        if len(self.c) - 1 > n:
            raise ValueError("reversal degree below polynomial degree")
        c = list(self.c) + [0] * (n + 1 - len(self.c))
        return RatPoly(c[::-1], self.var)

    def monic(self):
        return self / self.lc()

    def primitive(self):
        """Integer polynomial with unit content and positive leading coefficient."""
        if not self.c:
            return self
        qs = [Fraction(x) for x in self.c]
        den = lcm(*[x.denominator for x in qs])
        ints = [int(x * den) for x in qs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        s = 1 if ints[-1] > 0 else -1
        return RatPoly([Fraction(s * v // g) for v in ints], self.var)

    def map(self, f):
        return RatPoly([f(x) for x in self.c], self.var)

    def to_float(self):
        return [float(x) for x in self.c]

    def __repr__(self):
        return f"RatPoly({self.c!r}, var={self.var!r})"

    def __str__(self):
        if not self.c:
            return "0"
        terms = []
        for i, a in enumerate(self.c):
            if _is_zero(a):
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if mono and a == 1:
                terms.append(mono)
            elif mono and a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}" + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ")


def poly_gcd(p, q):
    """Monic gcd over a field."""
    while not q.is_zero():
        p, q = q, p % q
    return p.monic() if not p.is_zero() else p


def squarefree_part(p):
    g = poly_gcd(p, p.deriv())
    return p // g if g.degree > 0 else p.monic()


def poly_sqrt(p):
    """Exact square root of a polynomial, or None if it is not a square."""
    if p.is_zero():
        return p
    d = p.degree
    if d % 2:
        return None
    # leading-coefficient square root must be rational
    lead = Fraction(p.lc())
    rn, rd = _isqrt_exact(lead.numerator), _isqrt_exact(lead.denominator)
    if rn is None or rd is None:
        return None
    rev = p.reverse()
    # series sqrt of rev / lead, then undo
    u = TruncSeries([x / lead for x in rev.c], d)
    s = series_sqrt(u)
    root = RatPoly(s.c[: d // 2 + 1], p.var).reverse(d // 2) * Fraction(rn, rd)
    return root if root * root == p else None


def _isqrt_exact(n):
    if n < 0:
        return None
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else None


class RatFunc:
    """Quotient of polynomials in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = RatPoly([1], num.var)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den) if not num.is_zero() else den
        num, den = num // g, den // g
        lead = den.lc()
        self.num = num / lead
        self.den = den / lead

    def __add__(self, o):
        o = _rf(o, self.num.var)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, o):
        return self + (-_rf(o, self.num.var))

    def __rsub__(self, o):
        return _rf(o, self.num.var) - self

    def __mul__(self, o):
        o = _rf(o, self.num.var)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _rf(o, self.num.var)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __eq__(self, o):
        o = _rf(o, self.num.var)
        return self.num == o.num and self.den == o.den

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __repr__(self):
        return f"RatFunc(({self.num}) / ({self.den}))"


def _rf(o, var):
    if isinstance(o, RatFunc):
        return o
    if isinstance(o, RatPoly):
        return RatFunc(o)
    return RatFunc(RatPoly([o], var))


class TruncSeries:
    """Power series c_0 + c_1 X + ... + c_N X^N, exact through order N."""

    __slots__ = ("c", "order")

    def __init__(self, coeffs, order):
        c = list(coeffs)[: order + 1]
        c += [0] * (order + 1 - len(c))
        self.c = c
        self.order = order

    @classmethod
    def from_poly(cls, p, order):
        return cls(p.c if isinstance(p, RatPoly) else p, order)

    def __getitem__(self, i):
        return self.c[i]

    def __len__(self):
        return len(self.c)

    def __add__(self, o):
        n = min(self.order, o.order)
        return TruncSeries([self.c[i] + o.c[i] for i in range(n + 1)], n)

    def __sub__(self, o):
        n = min(self.order, o.order)
        return TruncSeries([self.c[i] - o.c[i] for i in range(n + 1)], n)

    def __mul__(self, o):
        if not isinstance(o, TruncSeries):
            return TruncSeries([x * o for x in self.c], self.order)
        return series_mul(self, o)

    __rmul__ = __mul__

    def __eq__(self, o):
        return self.order == o.order and all(
            _is_zero(x - y) for x, y in zip(self.c, o.c))

    def __repr__(self):
        return f"TruncSeries({self.c!r}, order={self.order})"


def series_add(u, v):
    return u + v


def series_mul(u, v):
    n = min(u.order, v.order)
    out = []
    for k in range(n + 1):
        acc = 0
        for i in range(k + 1):
            x = u.c[i]
            if _is_zero(x):
                continue
            acc = acc + x * v.c[k - i]
        out.append(acc)
    return TruncSeries(out, n)


def series_inv(u):
    c0 = u.c[0]
    if _is_zero(c0):
        raise ZeroConstantTerm("series has zero constant term")
    unit = (c0 == 1) if not isinstance(c0, RatPoly) else c0 == RatPoly([1], c0.var)
    if not unit:
        inv0 = 1 / Fraction(c0) if isinstance(c0, int) else 1 / c0
    out = [1 if unit else inv0]
    for k in range(1, u.order + 1):
        acc = 0
        for i in range(1, k + 1):
            acc = acc + u.c[i] * out[k - i]
        out.append(-acc if unit else -acc * inv0)
    return TruncSeries(out, u.order)


def series_sqrt(u):
    """Square root of a series with constant term 1."""
    if not (u.c[0] == 1 or (isinstance(u.c[0], RatPoly) and u.c[0] == RatPoly([1]))):
        raise NotNormalized("constant term must be 1")
    half = Fraction(1, 2)
    s = [u.c[0] if not isinstance(u.c[0], int) else Fraction(1)]
    for k in range(1, u.order + 1):
        acc = u.c[k]
        for i in range(1, k):
            acc = acc - s[i] * s[k - i]
        s.append(acc * half if isinstance(acc, (Fraction, int, RatPoly)) else acc / 2)
    return TruncSeries(s, u.order)


# determinants, resultants, discriminants

def det(M):
    """Determinant of a square matrix given as nested lists.

    Polynomial entries use fraction-free Bareiss elimination; field entries
    use elimination with pivoting on the largest magnitude when that makes sense.
    """
    n = len(M)
    if n == 0:
        return Fraction(1)
    A = [list(r) for r in M]
    if any(isinstance(x, RatPoly) for r in A for x in r):
        return _bareiss(A)
    sign = 1
    numeric = any(isinstance(x, float) for r in A for x in r)
    A = [[Fraction(x) if isinstance(x, int) else x for x in r] for r in A]
    for k in range(n):
        if numeric:
            piv = max(range(k, n), key=lambda i: abs(A[i][k]))
        else:
            piv = next((i for i in range(k, n) if A[i][k] != 0), None)
            if piv is None:
                return Fraction(0)
        if A[piv][k] == 0:
            return A[piv][k] * 0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            if f == 0:
                continue
            for j in range(k, n):
                A[i][j] = A[i][j] - f * A[k][j]
    d = sign
    for k in range(n):
        d = d * A[k][k]
    return d


def _bareiss(A):
    n = len(A)
    var = next(x.var for r in A for x in r if isinstance(x, RatPoly))
    A = [[x if isinstance(x, RatPoly) else RatPoly([x], var) for x in r] for r in A]
    sign = 1
    prev = RatPoly([1], var)
    for k in range(n - 1):
        if A[k][k].is_zero():
            sw = next((i for i in range(k + 1, n) if not A[i][k].is_zero()), None)
            if sw is None:
                return RatPoly([], var)
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
        prev = A[k][k]
    return A[n - 1][n - 1] * sign


def resultant(P, Q):
    """Sylvester-matrix resultant."""
    m, n = P.degree, Q.degree
    p = P.c[::-1]
    q = Q.c[::-1]
    N = m + n
    S = []
    for i in range(n):
        S.append([0] * i + p + [0] * (N - m - 1 - i))
    for i in range(m):
        S.append([0] * i + q + [0] * (N - n - 1 - i))
    return det(S)


def poly_discriminant(P):
    """(-1)^(d(d-1)/2) Res(P, P') / lc(P)."""
    d = P.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    if d == 1:
        return Fraction(1)
    s = -1 if (d * (d - 1) // 2) % 2 else 1
    lc = P.lc()
    return s * resultant(P, P.deriv()) / (Fraction(lc) if isinstance(lc, int) else lc)


# real root isolation

def sturm_sequence(P):
    seq = [P, P.deriv()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r)
    return seq


def _sign_changes(seq, x):
    signs = []
    for p in seq:
        v = p(x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_roots(P, lo, hi, seq=None):
    """Number of distinct real roots in (lo, hi] of a squarefree P."""
    seq = seq or sturm_sequence(P)
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def root_bound(P):
    lc = Fraction(P.lc())
    return 1 + max(abs(Fraction(x) / lc) for x in P.c[:-1]) if P.degree > 0 else Fraction(1)


def isolate_real_roots(P, tol=Fraction(1, 10**12)):
    """Disjoint intervals (lo, hi] each holding exactly one distinct real root,
    refined by exact bisection until narrower than tol."""
    P = RatPoly([Fraction(x) for x in P.c], P.var)
    if P.degree < 1:
        return []
    S = squarefree_part(P)
    seq = sturm_sequence(S)
    B = root_bound(S)
    # dyadic bound keeps denominators small
    e = 1
    while e < B:
        e *= 2
    stack = [(Fraction(-e), Fraction(e))]
    found = []
    while stack:
        lo, hi = stack.pop()
        k = count_roots(S, lo, hi, seq)
        if k == 0:
            continue
        if k == 1:
            found.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack += [(lo, mid), (mid, hi)]
    out = []
    for lo, hi in sorted(found):
        while hi - lo > tol:
            if S(hi) == 0:
                lo = hi
                break
            mid = (lo + hi) / 2
            if count_roots(S, lo, mid, seq):
                hi = mid
            else:
                lo = mid
        out.append((lo, hi))
    return out


def multiplicity(P, r_lo, r_hi):
    """Multiplicity of the unique root of P inside (r_lo, r_hi]."""
    Q = RatPoly([Fraction(x) for x in P.c], P.var)
    k = 1
    while True:
        Q = poly_gcd(Q, Q.deriv())
        if Q.degree < 1:
            return k
        if r_lo == r_hi:
            if Q(r_lo) != 0:
                return k
        elif count_roots(squarefree_part(Q), r_lo, r_hi) == 0:
            return k
        k += 1


def real_roots(P, tol=Fraction(1, 10**12)):
    """Sorted list of (root as float, multiplicity)."""
    out = []
    for lo, hi in isolate_real_roots(P, tol):
        out.append((float((lo + hi) / 2) if lo != hi else float(lo), multiplicity(P, lo, hi)))
    return out
