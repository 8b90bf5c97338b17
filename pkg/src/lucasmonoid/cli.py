"""Command-line front door.

Exit codes: 0 success, 2 invalid parameters or malformed input, 3 resource
cap exceeded, 4 numerical tolerance violated in a verify command.

Every flag can be supplied through the environment with the LUCASMONOID_
prefix (e.g. LUCASMONOID_P=2 LUCASMONOID_Q=-1); explicit flags win.
Report commands write a PNG figure next to their delimited output: an
explicit --figure path wins, otherwise the --output path with a .png suffix
is used, and writing to stdout produces no figure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np
from mpmath import mp

from . import plotting
from .analytic import Precision, constants_bundle
from .dirichlet import EvalConfig, c_of_u_numeric, mellin_perron_integral, saddle_r
from .errors import DomainError, ResourceCapError, ToleranceError
from .monoid import Omega, count_upto, enumerate_upto, factorize_element, omega, weighted_sum
from .oeis import BFileParseError, compare_by_index, compare_prefix, parse_bfile
from .params import DEFAULT_PRECISION_BITS, LucasParams, PRESETS, from_preset
from .sequence import build_generator_set, closed_form_value, has_primitive_divisor, primitive_divisor
from .stats import (
    LimitLawConfig,
    Omega_summary,
    omega_summary,
    sample_limit_law,
)

ENV_PREFIX = "LUCASMONOID_"


def _env(name: str):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))


def _env_int(name: str, fallback):
    raw = _env(name)
    return int(raw) if raw is not None else fallback


def _env_float(name: str, fallback):
    raw = _env(name)
    return float(raw) if raw is not None else fallback


def _env_str(name: str, fallback):
    raw = _env(name)
    return raw if raw is not None else fallback


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=int, default=_env_int("P", None), help="P = phi + phibar")
    p.add_argument("--q", type=int, default=_env_int("Q", None), help="Q = phi * phibar")
    p.add_argument(
        "--preset",
        choices=sorted(PRESETS),
        default=_env_str("PRESET", None),
        help="named parameter pair (default: fibonacci)",
    )
    p.add_argument(
        "--precision-bits",
        type=int,
        default=_env_int("PRECISION_BITS", DEFAULT_PRECISION_BITS),
        help="working binary precision for real/complex values",
    )


def _resolve_params(args) -> LucasParams:
    if args.p is not None or args.q is not None:
        if args.p is None or args.q is None:
            raise DomainError("--p and --q must be given together")
        return LucasParams(args.p, args.q, args.precision_bits)
    return from_preset(args.preset or "fibonacci", args.precision_bits)


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _figure_path(args) -> str | None:
    fig = getattr(args, "figure", None)
    if fig:
        return fig
    out = getattr(args, "output", None)
    if out and out != "-":
        return str(Path(out).with_suffix(".png"))
    return None


def _csv_text(header: list[str], rows: list[tuple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_terms(args) -> int:
    params = _resolve_params(args)
    if args.n_max < 1:
        raise DomainError("--n-max must be >= 1")
    gens = build_generator_set(params)
    rows = []
    for n in range(1, args.n_max + 1):
        value = gens.term_value(n)
        witness = primitive_divisor(params, n) if has_primitive_divisor(params, n) else None
        rows.append((n, str(value), str(witness) if witness is not None else "-"))
    _write_text(args.output, _csv_text(["n", "value", "primitive_divisor"], rows))
    return 0


def cmd_enumerate(args) -> int:
    params = _resolve_params(args)
    gens = build_generator_set(params)
    elements = enumerate_upto(gens, args.x, cap=args.cap)
    if args.format == "json":
        payload = {
            "P": params.p_sum,
            "Q": params.q_prod,
            "x": args.x,
            "elements": [
                {
                    "value": str(e.value),
                    "omega": omega(e.factorization),
                    "Omega": Omega(e.factorization),
                    "factorization": list(e.factorization.indices),
                }
                for e in elements
            ],
        }
        _write_text(args.output, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        rows = [
            (
                str(e.value),
                omega(e.factorization),
                Omega(e.factorization),
                " ".join(str(i) for i in e.factorization.indices),
            )
            for e in elements
        ]
        _write_text(args.output, _csv_text(["value", "omega", "Omega", "factorization"], rows))
    return 0


def cmd_count(args) -> int:
    params = _resolve_params(args)
    gens = build_generator_set(params)
    n = count_upto(gens, args.x, cap=args.cap, threads=args.threads)
    _write_text(args.output, f"{n}\n")
    return 0


def cmd_factor(args) -> int:
    params = _resolve_params(args)
    gens = build_generator_set(params)
    f = factorize_element(gens, args.n)
    if not f.indices:
        _write_text(args.output, f"{args.n} = (empty product)\n")
    else:
        parts = "·".join(f"F[{gens.generator(i).value}]" for i in f.indices)
        _write_text(args.output, f"{args.n} = {parts}\n")
    return 0


def cmd_constants(args) -> int:
    params = _resolve_params(args)
    gens = build_generator_set(params)
    precision = Precision(target_rel_err=args.target_rel_err)
    bundle = constants_bundle(gens, precision)
    ratio = abs(float(params.phibar / params.phi))
    truncation_l = 13 + int(math.log(precision.target_rel_err) / math.log(ratio)) + 1
    payload = {
        "P": params.p_sum,
        "Q": params.q_prod,
        "log_phi": float(bundle.log_phi),
        "A": float(bundle.A),
        "b": float(bundle.b),
        "k1": float(bundle.k1),
        "kappa1": float(bundle.kappa1),
        "a1": float(bundle.a1),
        "a2": float(bundle.a2),
        "b1_statement": float(bundle.b1_statement),
        "b1_proof": float(bundle.b1_proof),
        "b2": float(bundle.b2),
        "precision_bits": params.precision_bits,
        "truncation_L": truncation_l,
    }
    _write_text(args.output, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_verify_mellin(args) -> int:
    params = _resolve_params(args)
    gens = build_generator_set(params)
    xs = args.x or [100, 1000]
    us = args.u or [0.8, 1.0, 1.2]
    cfg = EvalConfig(integral_height=args.height)
    rows = []
    worst = 0.0
    for x in xs:
        for u in us:
            r = float(saddle_r(gens, x, u))
            integral = mellin_perron_integral(gens, x, u, r=r, cfg=cfg)
            smoothed = float(weighted_sum(gens, int(x), u, "omega", "smoothed"))
            rel = abs(integral - smoothed) / smoothed
            worst = max(worst, rel)
            rows.append((x, u, f"{r:.6f}", f"{integral:.10g}", f"{smoothed:.10g}", f"{rel:.3e}"))
    text = _csv_text(["x", "u", "r", "integral", "smoothed_sum", "rel_err"], rows)
    text += f"# tolerance,{args.tolerance:.1e}\n"
    _write_text(args.output, text)
    fig = _figure_path(args)
    if fig:
        plotting.save_mellin_figure(
            [(x, u, float(r), float(i), float(s), float(e)) for x, u, r, i, s, e in rows], fig
        )
    if worst > args.tolerance:
        print(f"FAIL: max relative error {worst:.3e} > {args.tolerance:.1e}", file=sys.stderr)
        return 4
    return 0


def cmd_verify_dirichlet(args) -> int:
    params = _resolve_params(args)
    gens = build_generator_set(params)
    r_grid = sorted(args.r_grid, reverse=True)
    estimate, value_rows = c_of_u_numeric(gens, args.u_value, r_grid)
    from .analytic import c_of_u

    c_ref = c_of_u(gens, args.u_value)
    rows = [(r, args.u_value, float(val - c_ref)) for r, val in value_rows]
    text = _csv_text(["r", "u", "residual"], [(r, u, f"{v:.8f}") for r, u, v in rows])
    text += f"# analytic_c,{float(c_ref):.10f}\n# extrapolated_c,{float(estimate):.10f}\n"
    text += f"# max_residual_at_min_r,{args.max_residual}\n"
    _write_text(args.output, text)
    fig = _figure_path(args)
    if fig:
        plotting.save_dirichlet_figure(rows, fig)
    resids = [abs(v) for _, _, v in rows]
    monotone = all(a > b for a, b in zip(resids, resids[1:]))
    if not monotone or resids[-1] > args.max_residual:
        print(
            f"FAIL: residuals {['%.4f' % v for v in resids]} not monotone "
            f"or min-r residual above {args.max_residual}",
            file=sys.stderr,
        )
        return 4
    return 0


def cmd_stats(args) -> int:
    params = _resolve_params(args)
    gens = build_generator_set(params)
    bundle = constants_bundle(gens)
    if args.kind == "omega":
        summary = omega_summary(gens, args.x, bundle, cap=args.cap)
        from .stats import normalized_omega

        values = normalized_omega(gens, args.x, bundle, cap=args.cap)
        reference = None
    else:
        sample = sample_limit_law(
            gens, LimitLawConfig(n_samples=args.samples, rng_seed=args.seed)
        )
        summary = Omega_summary(gens, args.x, sample.draws, bundle, cap=args.cap)
        from .stats import normalized_Omega

        values = normalized_Omega(gens, args.x, bundle, cap=args.cap)
        reference = sample.draws
    payload = summary.to_json_dict()
    payload.update({"P": params.p_sum, "Q": params.q_prod})
    _write_text(args.output, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if args.values_csv:
        _write_text(args.values_csv, _csv_text(["z"], [(f"{v:.9g}",) for v in values]))
    fig = _figure_path(args)
    if fig:
        plotting.save_stats_figure(values, args.kind, fig, reference)
    return 0


def cmd_simulate_limit(args) -> int:
    params = _resolve_params(args)
    gens = build_generator_set(params)
    cfg = LimitLawConfig(
        truncation_M=args.truncation,
        n_samples=args.samples,
        rng_seed=args.seed,
    )
    sample = sample_limit_law(gens, cfg)
    header = (
        f"# seed,{cfg.rng_seed}\n"
        f"# truncation_M,{sample.truncation_M}\n"
        f"# n_samples,{cfg.n_samples}\n"
        f"# truncated_variance,{sample.truncated_variance:.8f}\n"
    )
    body = _csv_text(["draw"], [(f"{v:.9g}",) for v in sample.draws])
    _write_text(args.output, header + body)
    fig = _figure_path(args)
    if fig:
        plotting.save_limit_law_figure(sample.draws, fig)
    return 0


def cmd_oeis_check(args) -> int:
    params = _resolve_params(args)
    entries = parse_bfile(args.bfile)
    if args.sequence == "terms":
        report = compare_by_index(lambda k: closed_form_value(params, k), entries, min_index=1)
    else:
        gens = build_generator_set(params)
        ours = [e.value for e in enumerate_upto(gens, args.x, cap=args.cap)]
        report = compare_prefix(ours, entries)
    if report.agrees:
        _write_text(args.output, f"agreement over {report.agreement_length} terms\n")
        return 0
    k, ours_v, theirs_v = report.first_mismatch
    _write_text(
        args.output,
        f"first mismatch at b-file index {k}: ours={ours_v} bfile={theirs_v} "
        f"(agreement length {report.agreement_length})\n",
    )
    return 4


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lucasmonoid",
        description="Free factorization monoid of a Lucas sequence: "
        "enumeration, constants, verification, and limit-law statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        _add_param_flags(p)
        p.add_argument("--output", default=_env_str("OUTPUT", None),
                       help="output file (default: stdout)")
        p.set_defaults(func=func)
        return p

    p = add("terms", cmd_terms, "sequence terms with primitive divisors")
    p.add_argument("--n-max", type=int, default=_env_int("N_MAX", 12))

    p = add("enumerate", cmd_enumerate, "monoid elements up to a bound")
    p.add_argument("--x", type=int, required=_env("X") is None,
                   default=_env_int("X", None))
    p.add_argument("--format", choices=["csv", "json"],
                   default=_env_str("FORMAT", "csv"))
    p.add_argument("--cap", type=int, default=_env_int("CAP", 10**8))

    p = add("count", cmd_count, "count monoid elements up to a bound")
    p.add_argument("--x", type=int, required=_env("X") is None,
                   default=_env_int("X", None))
    p.add_argument("--cap", type=int, default=_env_int("CAP", 10**8))
    p.add_argument("--threads", type=int, default=_env_int("THREADS", 1))

    p = add("factor", cmd_factor, "factor a monoid element over the generators")
    p.add_argument("--n", type=int, required=_env("N") is None,
                   default=_env_int("N", None))

    p = add("constants", cmd_constants, "theorem constants as JSON")
    p.add_argument("--target-rel-err", type=float,
                   default=_env_float("TARGET_REL_ERR", 1e-30))

    p = add("verify-mellin", cmd_verify_mellin,
            "smoothed sums vs the vertical-line integral")
    p.add_argument("--x", type=float, action="append")
    p.add_argument("--u", type=float, action="append")
    p.add_argument("--tolerance", type=float, default=_env_float("TOLERANCE", 1e-3))
    p.add_argument("--height", type=float, default=_env_float("HEIGHT", None),
                   help="integration half-height T (default: adaptive)")
    p.add_argument("--figure", default=_env_str("FIGURE", None))

    p = add("verify-dirichlet", cmd_verify_dirichlet,
            "central-estimate residuals over an r grid")
    p.add_argument("--u-value", type=float, default=_env_float("U_VALUE", 1.0))
    p.add_argument("--r-grid", type=lambda s: [float(t) for t in s.split(",")],
                   default=[0.2, 0.1, 0.05])
    p.add_argument("--max-residual", type=float,
                   default=_env_float("MAX_RESIDUAL", 0.2))
    p.add_argument("--figure", default=_env_str("FIGURE", None))

    p = add("stats", cmd_stats, "normalized factor-count statistics")
    p.add_argument("--x", type=int, required=_env("X") is None,
                   default=_env_int("X", None))
    p.add_argument("--kind", choices=["omega", "Omega"],
                   default=_env_str("KIND", "omega"))
    p.add_argument("--seed", type=int, default=_env_int("SEED", 20260810))
    p.add_argument("--samples", type=int, default=_env_int("SAMPLES", 100_000))
    p.add_argument("--cap", type=int, default=_env_int("CAP", 10**8))
    p.add_argument("--values-csv", default=_env_str("VALUES_CSV", None))
    p.add_argument("--figure", default=_env_str("FIGURE", None))

    p = add("simulate-limit", cmd_simulate_limit, "Monte Carlo limit-law draws")
    p.add_argument("--samples", type=int, default=_env_int("SAMPLES", 100_000))
    p.add_argument("--seed", type=int, default=_env_int("SEED", 20260810))
    p.add_argument("--truncation", type=int, default=_env_int("TRUNCATION", None))
    p.add_argument("--figure", default=_env_str("FIGURE", None))

    p = add("oeis-check", cmd_oeis_check, "compare against an OEIS b-file")
    p.add_argument("bfile", help="path to the b-file")
    p.add_argument("--x", type=int, default=_env_int("X", 10**4))
    p.add_argument("--sequence", choices=["monoid", "terms"],
                   default=_env_str("SEQUENCE", "monoid"))
    p.add_argument("--cap", type=int, default=_env_int("CAP", 10**8))

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BFileParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ToleranceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
