"""Rotation numbers rho = n1/n from quartic period integrals.

With T(s) = (s-c0)(s-c1)(s-c2)(s-c3) the rotation number is
I[c3, inf) / I[c1, c2].  In the collared table the roots are the reciprocals
of the cone parameters, ordered by the type of caustic:

* case "i"   nu < 0, billiard inside:  (1/nu, 1/c, 1/b, 1/a)
* case "ii"  nu < 0, billiard outside: same roots, rho = 1 - m3/m2
* case "iii" b < nu < c:               (1/c, 1/nu, 1/b, 1/a)

nu > c gives 0 < 1/nu < 1/c and therefore the ordering of case "i"; as nu
passes through infinity 1/nu crosses 0, so both pieces form one family.
"""
from dataclasses import dataclass, field
import csv
import io
import math

from .conditions import _as_family
from .elliptic import CoincidentRoots, quartic_integral

__all__ = ["QuarticSpec", "quartic_spec", "rotation_number", "case_decomposition",
           "find_caustic_for_rotation", "homology_check", "rotation_scan", "scan_to_csv",
           "NotCollared", "NuOutOfRange", "NotResonant", "NotBracketed", "CoincidentRoots"]


class NotCollared(ValueError):
    pass


class NuOutOfRange(ValueError):
    pass


class NotResonant(ValueError):
    pass


class NotBracketed(ValueError):
    pass


class RhoOutOfBounds(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuarticSpec:
    c0: float
    c1: float
    c2: float
    c3: float
    case: str = ""
    source: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.c0 < self.c1 < self.c2 < self.c3:
            raise CoincidentRoots(f"roots not strictly increasing: {self.roots}")

    @property
    def roots(self):
        return (self.c0, self.c1, self.c2, self.c3)

    def T(self, s):
        return (s - self.c0) * (s - self.c1) * (s - self.c2) * (s - self.c3)


def _case(fam, nu, outside):
    a, b, c = fam.abc
    if fam.kind != "collared":
        return "transverse"
    if nu < 0:
        return "ii" if outside else "i"
    if outside:
        raise NuOutOfRange("the outside billiard needs nu < 0")
    if b < nu < c:
        return "iii"
    if nu > c:
        return "i"
    raise NuOutOfRange(f"nu = {nu} is not a caustic with four distinct reciprocal roots")


def quartic_spec(fam, nu, outside=False):
    fam = _as_family(fam)
    nu = float(nu)
    if nu == 0 or math.isinf(nu):
        raise NuOutOfRange(f"nu = {nu}")
    case = _case(fam, nu, outside)
    a, b, c = fam.abc
    roots = sorted((1 / a, 1 / b, 1 / c, 1 / nu))
    if len(set(roots)) < 4:
        raise CoincidentRoots(f"nu = {nu} coincides with a cone parameter")
    note = {"fam": fam.abc, "nu": nu}
    if case == "transverse":
        note["note"] = "derived analogue: sorted reciprocal roots"
    return QuarticSpec(*roots, case=case, source=note)


def rotation_number(spec, check=True):
    r = spec.roots
    rho = quartic_integral(r, "c3,inf") / quartic_integral(r, "c1,c2")
    if check and not 0 < rho < 1:
        raise RhoOutOfBounds(f"rho = {rho} outside (0, 1)")
    return rho


def homology_check(spec):
    """Relative defects of I(-inf,c0] + I[c3,inf) = I[c1,c2] and I[c0,c1] = I[c2,c3]."""
    r = spec.roots
    I = {k: quartic_integral(r, k) for k in ("-inf,c0", "c0,c1", "c1,c2", "c2,c3", "c3,inf")}
    d1 = abs(I["-inf,c0"] + I["c3,inf"] - I["c1,c2"]) / I["c1,c2"]
    d2 = abs(I["c0,c1"] - I["c2,c3"]) / I["c2,c3"]
    return d1, d2


def case_decomposition(fam, nu, n, outside=False, tol=1e-6):
    """Winding data of an n-periodic caustic in the collared table."""
    fam = _as_family(fam)
    if fam.kind != "collared":
        raise NotCollared("the case analysis covers the collared table")
    spec = quartic_spec(fam, nu, outside)
    rho = rotation_number(spec)
    n1 = round(rho * n)
    resid = abs(rho * n - n1)
    if resid > tol or not 0 < n1 < n:
        raise NotResonant(f"rho*n = {rho * n} is not an integer in (0, {n})")
    if spec.case == "i":
        m = {"m0": n, "m1": -n1}
    elif spec.case == "ii":
        m = {"m2": n, "m3": n - n1}
    else:
        m = {"m4": n, "m5": -n1}
    return {"case": spec.case, "m": m, "n1": n1, "n": n, "rho": rho, "residual": resid,
            "roots": list(spec.roots)}


def _rho_at_w(fam, w, case):
    a, b, c = fam.abc
    if case in ("i", "ii"):
        roots = (w, 1 / c, 1 / b, 1 / a)
    else:
        roots = (1 / c, w, 1 / b, 1 / a)
    return rotation_number(QuarticSpec(*roots, case=case), check=False)


def find_caustic_for_rotation(fam, target, case="i", tol=1e-12):
    """nu with rotation number ``target``, by bisection in w = 1/nu.

    Case "i" runs w over (-inf, 1/c), i.e. nu in (c, inf) U (-inf, 0);
    case "iii" runs w over (1/c, 1/b).  Case "ii" reuses case "i" and
    converts target via rho_ii = 1 - m3/m2 = rho_i.
    """
    fam = _as_family(fam)
    if fam.kind != "collared":
        raise NotCollared("collared family required")
    if not 0 < target < 1:
        raise NotBracketed(f"target {target} outside (0, 1)")
    a, b, c = fam.abc
    eps = 1e-7
    if case in ("i", "ii"):
        lo, hi = -1e4 * (1 / a), 1 / c - eps * (1 / b - 1 / c)
    elif case == "iii":
        lo, hi = 1 / c + eps * (1 / b - 1 / c), 1 / b - eps * (1 / b - 1 / c)
    else:
        raise ValueError(case)
    flo, fhi = _rho_at_w(fam, lo, case) - target, _rho_at_w(fam, hi, case) - target
    if flo * fhi > 0:
        raise NotBracketed(f"target {target} not attained in case {case}: "
                           f"rho ranges over ({flo + target:.6g}, {fhi + target:.6g})")
    while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        fm = _rho_at_w(fam, mid, case) - target
        if fm == 0:
            lo = hi = mid
            break
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    w = 0.5 * (lo + hi)
    return math.inf if w == 0 else 1 / w


def rotation_scan(fam, nus, n=None, outside=False):
    """Rows (nu, case, rho, n1, n, residual); n1 and residual need n."""
    fam = _as_family(fam)
    rows = []
    for nu in nus:
        try:
            spec = quartic_spec(fam, nu, outside)
            rho = rotation_number(spec)
        except (NuOutOfRange, CoincidentRoots) as e:
            rows.append({"nu": nu, "case": "skip", "rho": None, "n1": None, "n": n,
                         "residual": None, "note": str(e)})
            continue
        row = {"nu": nu, "case": spec.case, "rho": rho, "n1": None, "n": n, "residual": None}
        if n:
            row["n1"] = round(rho * n)
            row["residual"] = abs(rho * n - row["n1"])
        rows.append(row)
    return rows


SCAN_COLUMNS = ("nu", "case", "rho", "n1", "n", "residual")


def scan_to_csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, SCAN_COLUMNS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r.get(k) is None else (repr(r[k]) if isinstance(r[k], float) else r[k]))
                    for k in SCAN_COLUMNS})
    return buf.getvalue()
