"""Command-line entry point.

Every subcommand produces a structured payload rendered as json (default),
csv or text.  Exit codes: 0 success, 1 a check found infeasibility or a
violated inequality, 2 bad flags or arguments outside their domain.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import casesearch, kernel, powersum, repulsion, weights
from .errors import DomainError, NoFeasiblePoint, TheoremViolation

TEXT_DIGITS = 10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class CommandResult:
    exit_code: int
    payload: dict


# ----------------------------------------------------------------- rendering

def _clean(obj):
    """Plain-python, json-safe copy of ``obj``; non-finite floats become None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    return obj


def to_json(payload):
    # repr-based float output round-trips exactly (at most 17 significant digits)
    return json.dumps(_clean(payload), indent=2, allow_nan=False, ensure_ascii=False)


def _records(payload):
    for value in payload.values():
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            return value
    return [{k: v for k, v in payload.items() if not isinstance(v, (dict, list))}]


def to_csv(payload):
    rows = [_clean(r) for r in _records(payload)]
    header = []
    for r in rows:
        for k in r:
            if k not in header:
                header.append(k)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: _fmt_cell(r.get(k)) for k in header})
    return buf.getvalue()


def _fmt_cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return json.dumps(v)
    return "" if v is None else v


def _fmt_text(v):
    if isinstance(v, float):
        return f"{v:.{TEXT_DIGITS}g}"
    if v is None:
        return "-"
    return str(v)


def to_text(payload):
    payload = _clean(payload)
    lines = []
    for k, v in payload.items():
        if isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            lines.append(f"{k}:")
            for rec in v:
                lines.append("  " + "  ".join(f"{rk}={_fmt_text(rv)}" for rk, rv in rec.items()))
        elif isinstance(v, list):
            lines.append(f"{k}: " + ", ".join(_fmt_text(x) for x in v))
        else:
            lines.append(f"{k}: {_fmt_text(v)}")
    return "\n".join(lines) + "\n"


RENDERERS = {"json": lambda p: to_json(p) + "\n", "csv": to_csv, "text": to_text}


# ------------------------------------------------------------- subcommands

def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _levels(text):
    out = []
    for item in text.split(","):
        T, C = item.split(":")
        out.append((float(T), float(C)))
    return tuple(out)


def cmd_dh_constant(args):
    p = repulsion.RepulsionParams(args.c, args.eta, args.T, args.eps)
    if p.T < 1.0:
        raise DomainError("T must be ≥ 1")
    dq = repulsion.derive(p)
    return CommandResult(0, {"c": p.c, "eta": p.eta, "T": p.T, "eps": p.eps, **dq.to_dict()})


def cmd_dh_constant_real(args):
    C_prime = repulsion.dh_constant_real(args.c, args.eta, args.eps)
    d, A_cal = repulsion.derived_geometry(args.c, args.eta)
    return CommandResult(0, {
        "c": args.c, "eta": args.eta, "eps": args.eps, "d": d, "A_cal": A_cal,
        "a_prime": repulsion.coefficient_a_prime(args.c, args.eta), "C_prime": C_prime,
    })


def cmd_optimize_c(args):
    if args.real:
        c_star, C_star = repulsion.optimize_c_real(args.eta, args.eps, args.c_lo, args.c_hi)
    else:
        c_star, C_star = repulsion.optimize_c(args.eta, args.T, args.eps, args.c_lo, args.c_hi,
                                              n_grid=args.grid)
    return CommandResult(0, {"eta": args.eta, "T": None if args.real else args.T, "eps": args.eps,
                             "real_zeros": args.real, "c_star": c_star, "C_star": C_star})


def cmd_zero_sum_bound(args):
    prof = repulsion.FieldProfile(args.r1, args.r2, args.L)
    return CommandResult(0, {
        "alpha": args.alpha, "t": args.t, "r1": args.r1, "r2": args.r2, "L": args.L,
        "bound": repulsion.zero_sum_bound(args.alpha, args.t, prof),
        "odlyzko_lhs": repulsion.odlyzko_lhs(args.r1, args.r2),
        "odlyzko_holds": prof.odlyzko_holds(),
    })


def cmd_verify_kernel(args):
    records = []
    ok = True
    for J in range(1, args.J_max + 1):
        h = kernel.harnack_margin(J, args.grid, args.theta_steps)
        b = kernel.boundary_margin(J, args.theta_steps)
        lmo = kernel.lmo_margin(J, args.grid, args.theta_steps)
        passed = h >= -1e-9 and b >= -1e-12 and lmo >= -1e-9
        ok &= passed
        records.append({"J": J, "harnack_margin": h, "boundary_margin": b, "lmo_margin": lmo,
                        "pass": passed})
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.samples):
        J = int(rng.integers(1, args.J_max + 1))
        theta = float(rng.uniform(1e-6, 2.0 * math.pi - 1e-6))
        worst = max(worst, kernel.fejer_residual(J, theta))
    ok &= worst <= 1e-10
    return CommandResult(0 if ok else 1, {"ok": ok, "fejer_residual_max": worst,
                                          "fejer_samples": args.samples, "records": records})


def cmd_powersum_test(args):
    records = []
    ok = True
    for eps in args.eps:
        failures = 0
        worst_ratio = 0.0
        for k in range(args.count):
            inst = powersum.random_instance(args.seed + k, args.max_terms, eps,
                                            unit_weights=not args.real_weights)
            try:
                cert = powersum.find_witness(inst)
            except TheoremViolation:
                failures += 1
                continue
            worst_ratio = max(worst_ratio, cert.j / max(cert.J_max, 1))
            for lam in args.scales:
                if powersum.find_witness(inst.scaled(lam)).j != cert.j:
                    failures += 1
        ok &= failures == 0
        records.append({"eps": eps, "instances": args.count, "failures": failures,
                        "max_j_over_Jmax": worst_ratio})
    return CommandResult(0 if ok else 1, {"ok": ok, "seed": args.seed, "records": records})


def cmd_weights_eval(args):
    p = weights.WeightParams(args.ell, args.A, args.B)
    z = complex(args.z_re, args.z_im)
    out = {"ell": p.ell, "A": p.A, "B": p.B, "z": z, "F": weights.laplace_F(p, z)}
    if args.sigma is not None:
        ev = weights.evaluate(p, args.sigma, args.t, args.L)
        out.update({"sigma": ev.sigma, "t": ev.t, "L": ev.Lcal, "F_at_1_minus_s": ev.F,
                    "abs_F_at_1_minus_s": abs(ev.F), "bound": ev.bound, "alpha": ev.alpha})
    return CommandResult(0, out)


def cmd_weights_check(args):
    rng = np.random.default_rng(args.seed)
    records = []
    ok = True
    for _ in range(args.count):
        ell = int(rng.integers(1, 6))
        A = float(rng.uniform(0.05, 1.0))
        B = 2 * A * ell + float(rng.uniform(0.0, 3.0))
        z = complex(rng.uniform(-1.0, 4.0), rng.uniform(-6.0, 6.0))
        res = weights.quadrature_residual(weights.WeightParams(ell, A, B), z)
        passed = res <= 1e-8
        ok &= passed
        records.append({"ell": ell, "A": A, "B": B, "z": z, "residual": res, "pass": passed})
    violations = 0
    for _ in range(args.bound_samples):
        ell = int(rng.integers(1, 120))
        A = float(rng.uniform(1e-3, 1.0))
        p = weights.WeightParams(ell, A, 2 * A * ell + float(rng.uniform(0.0, 5.0)))
        sigma = 1.0 - float(rng.uniform(1e-3, 3.0)) / 10.0
        t = float(rng.uniform(-5.0, 5.0))
        L = float(rng.uniform(1.0, 50.0))
        ev = weights.evaluate(p, sigma, t, L)
        if abs(ev.F) > ev.bound * (1.0 + 1e-12):
            violations += 1
    ok &= violations == 0
    return CommandResult(0 if ok else 1, {"ok": ok, "seed": args.seed,
                                          "bound_samples": args.bound_samples,
                                          "bound_violations": violations, "records": records})


def _case_config(args):
    if args.config:
        cfg = casesearch.load_config(args.case, args.config)
    elif args.case == "very-small":
        cfg = casesearch.REFERENCE_VERY_SMALL
    else:
        cfg = casesearch.REFERENCE_EXTREMELY_SMALL
    overrides = {}
    keys = ("ell", "A", "B", "C") if args.case == "very-small" else ("u", "v", "B", "C0")
    for key in keys:
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    if args.case == "extremely-small" and args.levels:
        overrides["levels"] = _levels(args.levels)
    return replace(cfg, **overrides) if overrides else cfg


def cmd_case_check(args):
    cfg = _case_config(args)
    if args.case == "very-small":
        report = casesearch.check_very_small(cfg)
    else:
        report = casesearch.check_extremely_small(cfg)
    payload = {"config": cfg.to_dict(), **report.to_dict()}
    return CommandResult(0 if report.feasible else 1, payload)


def cmd_case_search(args):
    cfg = _case_config(args)
    grid = {"B": tuple(args.B_range)}
    if args.case == "extremely-small":
        if args.u_range:
            grid["u"] = tuple(args.u_range)
        if args.v_range:
            grid["v"] = tuple(args.v_range)
        if args.optimize_levels:
            cfg = replace(cfg, levels=casesearch.levels_from_optimizer(_floats(args.optimize_levels)))
    else:
        if args.A_inv_range:
            grid["A_inv"] = tuple(args.A_inv_range)
    try:
        best, report = casesearch.minimize_B(cfg, grid)
    except NoFeasiblePoint as exc:
        return CommandResult(1, {"feasible": False, "message": str(exc), "config": cfg.to_dict()})
    return CommandResult(0, {"config": best.to_dict(), **report.to_dict()})


def cmd_envelopes(args):
    p = weights.WeightParams(args.ell, args.A, args.B)
    R = _floats(args.R)
    T = _floats(args.T) if args.T else [args.Tstar] * len(R)
    s = casesearch.Scenario(args.L, args.lambda1, p, args.Tstar, tuple(R), tuple(T))
    names = ("lnE1", "lnE2", "lnE3", "lnE4", "lnE5", "lnE6")
    values = casesearch.error_envelopes(s)
    return CommandResult(0, {
        "L": args.L, "ell": p.ell, "A": p.A, "B": p.B, "Tstar": args.Tstar,
        "case": casesearch.classify_lambda1(args.lambda1, args.L) if args.lambda1 > 0 else None,
        **dict(zip(names, values)),
        "note": "implied constants set to 1; null means -inf",
    })


def cmd_table(args):
    rows = [{"case": c, "description": d, "B_previous": old, "B": new}
            for c, d, old, new in casesearch.CASE_TABLE]
    return CommandResult(0, {"rows": rows})


# ------------------------------------------------------------------ parser

def build_parser():
    parser = _Parser(prog="leastprime", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=sorted(RENDERERS), default="json")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=sorted(RENDERERS), default=argparse.SUPPRESS)
        return sp

    sp = add("dh-constant", cmd_dh_constant, "repulsion constant C(c, eta, T, eps)")
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--eta", type=float, required=True)
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--eps", type=float, default=repulsion.DEFAULT_EPS)

    sp = add("dh-constant-real", cmd_dh_constant_real, "real-zero constant C'(c, eta, eps)")
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--eta", type=float, required=True)
    sp.add_argument("--eps", type=float, default=repulsion.DEFAULT_EPS)

    sp = add("optimize-c", cmd_optimize_c, "minimize C over c")
    sp.add_argument("--eta", type=float, required=True)
    sp.add_argument("--T", type=float, default=1.0)
    sp.add_argument("--eps", type=float, default=repulsion.DEFAULT_EPS)
    sp.add_argument("--c-lo", type=float, default=2.0)
    sp.add_argument("--c-hi", type=float, default=12.0)
    sp.add_argument("--grid", type=int, default=101)
    sp.add_argument("--real", action="store_true", help="optimize C' instead of C")

    sp = add("zero-sum-bound", cmd_zero_sum_bound, "explicit bound for the zero sum")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--t", type=float, default=0.0)
    sp.add_argument("--r1", type=int, required=True)
    sp.add_argument("--r2", type=int, required=True)
    sp.add_argument("--L", type=float, required=True)

    sp = add("verify-kernel", cmd_verify_kernel, "grid certificates for the kernel bounds")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--J-max", type=int, default=64)
    sp.add_argument("--grid", type=int, default=kernel.DEFAULT_R_STEPS)
    sp.add_argument("--theta-steps", type=int, default=kernel.DEFAULT_THETA_STEPS)
    sp.add_argument("--samples", type=int, default=10_000)

    sp = add("powersum-test", cmd_powersum_test, "witness search on random instances")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--eps", type=_floats, default=[0.01, 0.1, 0.5, 0.99])
    sp.add_argument("--max-terms", type=int, default=256)
    sp.add_argument("--scales", type=_floats, default=[])
    sp.add_argument("--real-weights", action="store_true")

    sp = add("weights-eval", cmd_weights_eval, "evaluate F and its bound")
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--A", type=float, required=True)
    sp.add_argument("--B", type=float, required=True)
    sp.add_argument("--z-re", type=float, default=0.0)
    sp.add_argument("--z-im", type=float, default=0.0)
    sp.add_argument("--sigma", type=float)
    sp.add_argument("--t", type=float, default=0.0)
    sp.add_argument("--L", type=float, default=1.0)

    sp = add("weights-check", cmd_weights_check, "quadrature and bound checks on random weights")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, default=50)
    sp.add_argument("--bound-samples", type=int, default=500)

    for name, func, help_ in (("case-check", cmd_case_check, "check a case configuration"),
                              ("case-search", cmd_case_search, "grid search for minimal B")):
        sp = add(name, func, help_)
        sp.add_argument("case", choices=["very-small", "extremely-small"])
        sp.add_argument("--config")
        sp.add_argument("--ell", type=int)
        sp.add_argument("--A", type=float)
        sp.add_argument("--B", type=float)
        sp.add_argument("--C", type=float)
        sp.add_argument("--u", type=float)
        sp.add_argument("--v", type=float)
        sp.add_argument("--C0", type=float)
        sp.add_argument("--levels", help="T:C pairs, e.g. 4.6:14.58,10:15.5")
        if name == "case-search":
            sp.add_argument("--B-range", type=float, nargs=3, required=True,
                            metavar=("LO", "HI", "STEP"))
            sp.add_argument("--u-range", type=float, nargs=3, metavar=("LO", "HI", "STEP"))
            sp.add_argument("--v-range", type=float, nargs=3, metavar=("LO", "HI", "STEP"))
            sp.add_argument("--A-inv-range", type=float, nargs=3, metavar=("LO", "HI", "STEP"))
            sp.add_argument("--optimize-levels", help="comma-separated T_j; C_j from optimize-c")

    sp = add("envelopes", cmd_envelopes, "log-scale error envelopes")
    sp.add_argument("--L", type=float, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--A", type=float, required=True)
    sp.add_argument("--B", type=float, required=True)
    sp.add_argument("--Tstar", type=float, default=1.0)
    sp.add_argument("--R", required=True, help="comma-separated R_j")
    sp.add_argument("--T", help="comma-separated T_j (last must equal T*)")
    sp.add_argument("--lambda1", type=float, default=0.0)

    add("table", cmd_table, "case table of admissible B")
    return parser


def run(argv):
    """Parse and dispatch; returns (CommandResult, format) or raises UsageError/DomainError."""
    args = build_parser().parse_args(argv)
    return args.func(args), args.format


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        result, fmt = run(argv)
    except (UsageError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(RENDERERS[fmt](result.payload))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
