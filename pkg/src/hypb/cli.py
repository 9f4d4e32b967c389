"""Command line front end: ``hypb simulate|check|scan|rotation|pell|census``.

Exit codes: 0 ok, 2 bad configuration, 3 runtime failure, 4 a verification
that came back negative.  HYPB_THREADS caps the worker pool of grid scans.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
from fractions import Fraction
import io
import json
import math
import os
import sys

import numpy as np

from . import conditions as cond
from . import extremal, rotation, topology
from .billiard import (NEVER_HITS, BilliardTable, inward_directions, next_bounce, random_start,
                       run)
from .elliptic import CoincidentRoots
from .minkowski import AT_INFINITY, Causal, ConfocalFamily, InvalidFamily, caustic_of_plane, normalize_dir

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_VERIFY = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


class VerificationFailed(AssertionError):
    pass


CONFIG_ERRORS = (ConfigError, InvalidFamily, cond.InvalidRange, cond.NuOutOfAllRanges,
                 extremal.ConstraintViolated, extremal.NotCollared, extremal.AlphaOutOfRange,
                 rotation.NotCollared, rotation.NuOutOfRange)
VERIFY_ERRORS = (VerificationFailed, cond.MismatchBeyondScalar, extremal.NotPeriodic,
                 extremal.NormalizationFailure)


def parse_number(s):
    """'p/q' and integers stay exact; decimals become floats; 'inf' is the caustic at infinity."""
    if s is None:
        return None
    t = str(s).strip().lower()
    if t in ("inf", "infinity", "+inf", "oo"):
        return AT_INFINITY
    try:
        if "/" in t or t.lstrip("+-").isdigit():
            return Fraction(t)
        return float(t)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"not a number: {s!r}") from e


def parse_vector(s):
    try:
        v = [float(x) for x in s.split(",")]
    except ValueError as e:
        raise ConfigError(f"bad vector {s!r}") from e
    if len(v) != 3:
        raise ConfigError(f"need three components, got {s!r}")
    return np.array(v)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def effective_config(args):
    skip = {"func"}
    return {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in skip}


def family_from(args, required=True):
    if args.a is None or args.b is None or args.c is None:
        if required:
            raise ConfigError("--a, --b and --c are required")
        return None
    vals = [parse_number(x) for x in (args.a, args.b, args.c)]
    if any(v == AT_INFINITY for v in vals):
        raise ConfigError("table parameters must be finite")
    fam = ConfocalFamily(*vals)
    if getattr(args, "table", None) and args.table != fam.kind:
        raise ConfigError(f"parameters give a {fam.kind} table, not {args.table}")
    return fam


def emit(args, payload=None, rows=None, columns=None):
    """Write JSON (payload) or CSV (rows) to --out or stdout, echoing the config."""
    cfg = effective_config(args)
    if args.format == "csv" and rows is not None:
        buf = io.StringIO()
        buf.write("# config: " + json.dumps(cfg, sort_keys=True) + "\n")
        w = csv.DictWriter(buf, columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _csv_cell(r.get(k)) for k in columns})
        text = buf.getvalue()
    else:
        body = dict(payload or {})
        if rows is not None and "rows" not in body:
            body["rows"] = rows
        text = json.dumps({"config": cfg, **body}, indent=2, sort_keys=True, default=_default) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_cell(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return x


def _default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, Causal):
        return o.value
    return str(o)


def _tol(args, default):
    return args.tolerance if args.tolerance is not None else default


# simulate

def polyline(tr, k=16):
    """Points sampled along every arc of a trajectory, as rows (segment, x, y, z)."""
    rows = []
    B = tr.bounces
    for i in range(len(B) - 1):
        q, v = B[i][0], B[i][2]
        hit = next_bounce(q, v, tr.table)
        if hit is NEVER_HITS:
            break
        t_end = hit[1]
        v, kind = normalize_dir(v)
        for t in np.linspace(0, t_end, k):
            if kind is Causal.SPACE:
                p = q * math.cos(t) + v * math.sin(t)
            elif kind is Causal.TIME:
                p = q * math.cosh(t) + v * math.sinh(t)
            else:
                p = q + t * v
            rows.append({"segment": i, "x": float(p[0]), "y": float(p[1]), "z": float(p[2])})
    return rows


def cmd_simulate(args):
    fam = family_from(args)
    table = BilliardTable(fam)
    rng = np.random.default_rng(args.seed)
    nu = parse_number(args.nu)
    if args.direction is not None:
        v = parse_vector(args.direction)
        if args.start is not None:
            q = parse_vector(args.start)
        else:
            q = table.boundary_point(rng.uniform(0, 2 * math.pi))
        v = v - (-q[0] * v[0] + q[1] * v[1] + q[2] * v[2]) * q
        auto = caustic_of_plane(np.cross(q, v), fam)
        if nu is None:
            nu = auto
    else:
        if nu is None:
            raise ConfigError("give --nu or --direction")
        if args.start is not None:
            q = parse_vector(args.start)
            dirs = inward_directions(q, float(nu), table)
            if not dirs:
                raise ConfigError("no inward direction at --start touches this caustic")
            v = dirs[0]
        else:
            st = random_start(table, float(nu), rng)
            if st is None:
                raise RuntimeError(f"no boundary state has caustic nu = {nu}: "
                                   "these trajectories never reach the boundary")
            q, v = st
    tr = run(q, v, table, args.bounces, _tol(args, 1e-6))
    out = tr.to_dict()
    emit(args, {"trajectory": out, "requested_nu": _jsonable(nu)})
    if args.plot_data:
        with open(args.plot_data, "w", newline="") as fh:
            w = csv.DictWriter(fh, ["segment", "x", "y", "z"], lineterminator="\n")
            w.writeheader()
            for r in polyline(tr):
                w.writerow({k: _csv_cell(x) for k, x in r.items()})
    return EXIT_OK


# check

DEFAULT_TRIPLES = [(1, 2, 3), (2, 3, 7), (1, -1, 3), (Fraction(1, 2), 5, 6), (3, -2, 5)]


def cmd_check(args):
    if args.discriminants:
        triples = [tuple(parse_number(x) for x in (args.a, args.b, args.c))] if args.a else DEFAULT_TRIPLES
        try:
            rows = cond.verify_discriminant_factorization(args.n, triples)
            ok = all(r["match"] for r in rows)
        except cond.MismatchBeyondScalar as e:
            rows, ok = [{"error": str(e)}], False
        emit(args, {"discriminants": rows, "result": "PASS" if ok else "FAIL"})
        return EXIT_OK if ok else EXIT_VERIFY
    fam = family_from(args)
    nu = cond.SYMBOLIC if args.symbolic or args.nu is None else parse_number(args.nu)
    if args.elliptic:
        reps = cond.elliptic_periodicity_condition(args.n, fam, nu)
        emit(args, {"reports": [r.to_dict() for r in reps]})
        return EXIT_OK
    if args.light:
        rep = cond.periodicity_condition(args.n, fam, AT_INFINITY, light=True)
    else:
        rep = cond.periodicity_condition(args.n, fam, nu)
    d = rep.to_dict()
    if rep.poly is not None:
        d["poly_text"] = str(rep.poly)
        d["caustics"] = cond.find_periodic_caustics(args.n, fam)
    emit(args, {"report": d})
    return EXIT_OK


# scan and rotation

def _workers():
    env = os.environ.get("HYPB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as e:
            raise ConfigError(f"HYPB_THREADS={env!r}") from e
        if n < 1:
            raise ConfigError("HYPB_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def _grid(args):
    lo, hi = parse_number(args.nu_min), parse_number(args.nu_max)
    if lo is None or hi is None:
        raise ConfigError("--nu-min and --nu-max are required")
    if args.steps < 1:
        raise ConfigError("--steps >= 1")
    return [float(x) for x in np.linspace(float(lo), float(hi), args.steps)]


def _scan_cell(job):
    abc, nu, n, outside = job
    fam = ConfocalFamily(*abc)
    row = {"nu": nu, "case": "skip", "rho": None, "n1": None, "n": n, "residual": None,
           "condition": None}
    try:
        if n and n >= 3:
            row["condition"] = float(cond.periodicity_condition(n, fam, nu).value)
        spec = rotation.quartic_spec(fam, nu, outside)
        rho = rotation.rotation_number(spec)
        row.update(case=spec.case, rho=rho)
        if n:
            row["n1"] = round(rho * n)
            row["residual"] = abs(rho * n - row["n1"])
    except (cond.InvalidRange, rotation.NuOutOfRange, CoincidentRoots) as e:
        row["note"] = str(e)
    return row


def _map(jobs):
    w = min(_workers(), len(jobs))
    if w <= 1:
        return [_scan_cell(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=w) as ex:
        return list(ex.map(_scan_cell, jobs, chunksize=max(1, len(jobs) // (4 * w))))


SCAN_COLUMNS = ["nu", "case", "rho", "n1", "n", "residual", "condition"]


def cmd_scan(args):
    fam = family_from(args)
    abc = (fam.a, fam.b, fam.c)
    rows = _map([(abc, nu, args.n, args.outside) for nu in _grid(args)])
    emit(args, rows=rows, columns=SCAN_COLUMNS)
    return EXIT_OK


def cmd_rotation(args):
    fam = family_from(args)
    tol = _tol(args, 1e-6)
    if args.target is not None:
        target = float(parse_number(args.target))
        nu = rotation.find_caustic_for_rotation(fam, target, args.case)
        emit(args, {"target": target, "case": args.case, "nu": _jsonable(nu)})
        return EXIT_OK
    if args.nu is not None:
        nu = float(parse_number(args.nu))
        spec = rotation.quartic_spec(fam, nu, args.outside)
        rho = rotation.rotation_number(spec)
        payload = {"nu": nu, "case": spec.case, "rho": rho, "roots": list(spec.roots),
                   "source": spec.source}
        if args.n:
            n1 = round(rho * args.n)
            payload.update(n=args.n, n1=n1, residual=abs(rho * args.n - n1),
                           resonant=abs(rho * args.n - n1) <= tol)
        else:
            # report the best small-denominator match
            best = min(((abs(rho * k - round(rho * k)), k) for k in range(2, 13)))
            payload["nearest"] = {"n": best[1], "n1": round(rho * best[1]), "residual": best[0]}
        emit(args, payload)
        return EXIT_OK
    abc = (fam.a, fam.b, fam.c)
    rows = _map([(abc, nu, args.n, args.outside) for nu in _grid(args)])
    emit(args, rows=rows, columns=list(rotation.SCAN_COLUMNS))
    return EXIT_OK


# pell

def cmd_pell(args):
    if args.light_closed_form:
        kind = args.table
        if kind is None:
            raise ConfigError("--table is required with --light-closed-form")
        a = parse_number(args.a)
        if kind == "collared":
            fam = extremal.lightlike_table(kind, a, parse_number(args.b))
        else:
            fam = extremal.lightlike_table(kind, a, c=parse_number(args.c))
        pair, text = extremal.lightlike_period4_pell(kind, fam)
        ok = pair.verify()
        emit(args, {"family": [str(x) for x in (fam.a, fam.b, fam.c)], "p_hat4": text,
                    "pell": pair.to_dict(), "result": "PASS" if ok else "FAIL"})
        return EXIT_OK if ok else EXIT_VERIFY
    fam = family_from(args)
    if args.degenerate:
        rep = extremal.degenerate_caustic_conditions(fam, args.degenerate)
        emit(args, {"degenerate": rep, "result": "PASS" if rep["pell_identity"] else "FAIL"})
        return EXIT_OK if rep["pell_identity"] else EXIT_VERIFY
    if args.zolotarev:
        st = extremal.zolotarev_transverse_period3(fam)
        m1 = extremal.zolotarev_m1_residual(fam)
        tol = _tol(args, 1e-9)
        ok = st.g3_residual <= tol and st.sn_check <= tol
        emit(args, {"zolotarev": st.to_dict(), "m1_branch_residual": m1,
                    "result": "PASS" if ok else "FAIL"})
        return EXIT_OK if ok else EXIT_VERIFY
    if args.n is None or args.nu is None:
        raise ConfigError("--n and --nu are required")
    nu = parse_number(args.nu)
    pair = extremal.pell_from_periodicity(args.n, fam, nu)
    ok = pair.verify(_tol(args, 1e-8))
    emit(args, {"pell": pair.to_dict(), "result": "PASS" if ok else "FAIL"})
    return EXIT_OK if ok else EXIT_VERIFY


# census

def _census_samples(fam, count):
    a, b, c = fam.abc
    if fam.kind == "collared":
        cuts = [0.0, a, b, c]
    else:
        cuts = sorted([b, 0.0, a, c])
    edges = [cuts[0] - 10.0] + cuts + [cuts[-1] + 10.0]
    lams = []
    per = max(1, count // (len(edges) - 1))
    for lo, hi in zip(edges, edges[1:]):
        lams += [lo + (hi - lo) * (k + 1) / (per + 1) for k in range(per)]
    return lams[:count - 1] + [AT_INFINITY]


def census_check(fam, count=20, samples=24, seed=0):
    rows = []
    for lam in _census_samples(fam, count):
        cl = topology.classify_level_set(fam.kind, lam, fam)
        n, det = topology.count_components_numeric(fam.abc, lam, samples, seed, return_details=True)
        rows.append({"lambda": _jsonable(lam), "expected": cl.tori_count, "numeric": n,
                     "notes": cl.notes, "never_hits": det["never_hits"],
                     "agree": n == cl.tori_count and (cl.notes != "Resonant" or det["never_hits"] is True)})
    return rows


def cmd_census(args):
    kind = args.table
    fam = family_from(args, required=False)
    if fam is None:
        if kind is None:
            raise ConfigError("give --table or --a/--b/--c")
        fam = ConfocalFamily(*((1, 2, 3) if kind == "collared" else (1, -1, 3)))
    kind = fam.kind
    out = topology.census(kind, fam)
    code = EXIT_OK
    if args.verify:
        rows = census_check(fam, args.samples_lambda, seed=args.seed)
        out["verification"] = rows
        ok = all(r["agree"] for r in rows)
        out["result"] = "PASS" if ok else "FAIL"
        code = EXIT_OK if ok else EXIT_VERIFY
    emit(args, {"census": out})
    return code


# parser

def build_parser():
    p = argparse.ArgumentParser(prog="hypb", description="Billiards in confocal conics on the hyperboloid H.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, table=True):
        sp.add_argument("--a")
        sp.add_argument("--b")
        sp.add_argument("--c")
        if table:
            sp.add_argument("--table", choices=["collared", "transverse"])
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--tolerance", type=float)
        sp.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("simulate", help="run a billiard trajectory")
    common(s)
    s.add_argument("--nu", help="caustic: p/q, decimal or inf")
    s.add_argument("--bounces", type=int, default=12)
    s.add_argument("--start", help="x,y,z on the boundary")
    s.add_argument("--direction", help="x,y,z tangent direction; the caustic follows from it")
    s.add_argument("--plot-data", help="CSV file of points along the arcs")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("check", help="periodicity conditions")
    common(s)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--nu")
    s.add_argument("--symbolic", action="store_true")
    s.add_argument("--elliptic", action="store_true")
    s.add_argument("--light", action="store_true")
    s.add_argument("--discriminants", action="store_true")
    s.set_defaults(func=cmd_check)

    for name, fn, helptext in (("scan", cmd_scan, "grid scan of condition values and rotation numbers"),
                               ("rotation", cmd_rotation, "rotation numbers")):
        s = sub.add_parser(name, help=helptext)
        common(s)
        s.add_argument("--n", type=int)
        s.add_argument("--nu-min")
        s.add_argument("--nu-max")
        s.add_argument("--steps", type=int, default=50)
        s.add_argument("--outside", action="store_true", help="billiard outside the table (nu < 0)")
        if name == "rotation":
            s.add_argument("--nu")
            s.add_argument("--target", help="rotation number to invert, e.g. 1/3")
            s.add_argument("--case", choices=["i", "ii", "iii"], default="i")
        s.set_defaults(func=fn)

    s = sub.add_parser("pell", help="Pell equations and extremal polynomials")
    common(s)
    s.add_argument("--n", type=int)
    s.add_argument("--nu")
    s.add_argument("--light-closed-form", action="store_true")
    s.add_argument("--degenerate", type=int, metavar="M")
    s.add_argument("--zolotarev", action="store_true")
    s.set_defaults(func=cmd_pell)

    s = sub.add_parser("census", help="Fomenko census of the level sets")
    common(s)
    s.add_argument("--verify", action="store_true", help="recount tori numerically")
    s.add_argument("--samples-lambda", type=int, default=20)
    s.set_defaults(func=cmd_census)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CONFIG_ERRORS as e:
        print(f"hypb: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except VERIFY_ERRORS as e:
        print(f"hypb: verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except (RuntimeError, ArithmeticError, CoincidentRoots, rotation.NotBracketed,
            rotation.NotResonant, extremal.NoAdmissibleRoot, topology.DegenerateLevel) as e:
        print(f"hypb: runtime error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as e:
        print(f"hypb: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
