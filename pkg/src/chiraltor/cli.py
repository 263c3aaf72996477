"""Command-line interface producing torsion reports.

Subcommands: validate, cohomology, tau, tauhat, rho, cm, gen, sweep,
oracle.  Reports are JSON on stdout (or ``--out``).  Exit codes: 0
success / all checks pass, 1 validation failure, 2 numerical failure
(threshold on the spectrum, non-acyclic input to an acyclic operation),
64 usage error, 65 parse error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io, models, oracle, torsion
from .cochain import cohomology, validate
from .detline import DetHCoordinate
from .errors import (
    BNotInvertible,
    ChiraltorError,
    NotAcyclic,
    ThresholdOnSpectrum,
    UnrealizableSpec,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERIC = 2
EXIT_USAGE = 64
EXIT_PARSE = 65


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> _Parser:
    p = _Parser(prog="chiraltor", description=__doc__)
    p.add_argument("--out", help="write the report to this path instead of stdout")
    p.add_argument("--tol", type=float, default=1e-10, help="relative rank threshold")
    p.add_argument("--gap-tol", type=float, default=None,
                   help="spectral gap tolerance (default: scaled to the spectrum)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized paths")
    sub = p.add_subparsers(dest="command", required=True)

    for name in ("validate", "cohomology", "tauhat", "rho"):
        sp = sub.add_parser(name)
        sp.add_argument("file")

    sp = sub.add_parser("tau")
    sp.add_argument("file")
    sp.add_argument("--coord", nargs=2, type=float, default=(1.0, 0.0),
                    metavar=("RE", "IM"))
    sp.add_argument("--lambda", dest="lam", type=float, default=None)

    sp = sub.add_parser("cm")
    sp.add_argument("file")
    sp.add_argument("--lambda", dest="lam", type=float, default=None)

    sp = sub.add_parser("oracle")
    sp.add_argument("file")
    sp.add_argument("--trials", type=int, default=20,
                    help="chain choices for the invariance sweep")

    sp = sub.add_parser("gen")
    sp.add_argument("--kind", choices=("random", "circle"), required=True)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--half-dims", default=None,
                    help="comma-separated dims for degrees below the middle")
    sp.add_argument("--betti", default=None, help="comma-separated betti targets")
    sp.add_argument("--mu", nargs=2, type=float, default=(2.0, 0.0),
                    metavar=("RE", "IM"))
    sp.add_argument("--n", type=int, default=1)

    sp = sub.add_parser("sweep")
    sp.add_argument("--seeds", type=int, default=10)
    sp.add_argument("--d", type=int, default=3)
    return p


def _load(path: str) -> io.Instance:
    try:
        with open(path, "rb") as fh:
            return io.parse_instance(fh.read())
    except OSError as exc:
        raise io.ParseError(f"cannot read {path}: {exc}") from exc


def _require_valid(inst: io.Instance):
    report = validate(inst.complex, inst.chirality)
    if not report.ok:
        return {
            "operation": "validate",
            "input": inst.digest,
            "ok": False,
            "failures": [
                {"code": i.code, "degree": i.degree, "residual": i.residual}
                for i in report.issues
            ],
        }
    return None


def _frame_for(inst: io.Instance, tol: float):
    return inst.frame if inst.frame is not None else cohomology(inst.complex, tol)


def _emit(report: dict, out_path: str | None) -> None:
    text = json.dumps(report, indent=2)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _sweep_one(seed: int, d: int) -> dict:
    """Full invariant suite on one generated instance."""
    spec = models.random_spec(seed, d)
    c, g = models.gen_random(spec)
    frame = cohomology(c)
    x = DetHCoordinate(frame, 1.0)
    rng = np.random.default_rng(seed)

    direct = torsion.tau_evaluate(c, g, x).tau_value
    halved = torsion.tau_evaluate_halved(c, g, x).tau_value
    rho = torsion.rho_refined(c, g, frame)
    tau_rho = torsion.tau_evaluate(c, g, rho.value).tau_value
    cm = torsion.cappell_miller(c, g, frame)
    z = complex(rng.standard_normal(), rng.standard_normal())
    quad = torsion.tau_evaluate(c, g, x.scaled(z)).tau_value

    checks = {
        "tau_rho_is_one": abs(tau_rho - 1) <= 1e-8,
        "halved_equals_direct": abs(halved - direct) <= 1e-8 * abs(direct),
        "duality": abs(direct * cm.coord - 1) <= 1e-8,
        "quadraticity": abs(quad - z**2 * direct) <= 1e-8 * abs(z**2 * direct),
    }
    thresholds = torsion.spectral_gap_thresholds(c, g)
    lam = thresholds[len(thresholds) // 2]
    mu = thresholds[-1]
    spectral = torsion.tau_via_spectral(c, g, lam, x).tau_value
    lhs, rhs = torsion.graded_det_multiplicativity(c, g, lam, mu)
    checks["spectral_equals_direct"] = abs(spectral - direct) <= 1e-6 * abs(direct)
    checks["multiplicativity"] = abs(lhs - rhs) <= 1e-8 * abs(lhs)
    return {"seed": seed, "ok": all(checks.values()), "checks": checks}


def run_command(argv) -> tuple[int, dict | None]:
    """Execute the CLI; returns (exit code, report)."""
    args = build_parser().parse_args(argv)
    cmd = args.command

    if cmd == "gen":
        if args.kind == "circle":
            spec = models.ModelSpec(kind="circle", mu=complex(*args.mu), n=args.n,
                                    seed=args.seed)
        else:
            if args.half_dims is None or args.betti is None:
                raise _UsageError("gen --kind random needs --half-dims and --betti")
            spec = models.ModelSpec(
                kind="random",
                d=args.d,
                half_dims=tuple(int(x) for x in args.half_dims.split(",")),
                betti=tuple(int(x) for x in args.betti.split(",")),
                seed=args.seed,
            )
        c, g = models.generate(spec)
        text = io.instance_to_json(c, g, model=spec)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return EXIT_OK, None

    if cmd == "sweep":
        results = [_sweep_one(seed, args.d) for seed in range(args.seeds)]
        ok = all(r["ok"] for r in results)
        report = {
            "operation": "sweep",
            "seeds": args.seeds,
            "d": args.d,
            "ok": ok,
            "failures": [r for r in results if not r["ok"]],
        }
        _emit(report, args.out)
        return (EXIT_OK if ok else EXIT_INVALID), report

    inst = _load(args.file)

    if cmd == "validate":
        failure = _require_valid(inst)
        if failure is not None:
            _emit(failure, args.out)
            return EXIT_INVALID, failure
        report = {"operation": "validate", "input": inst.digest, "ok": True}
        _emit(report, args.out)
        return EXIT_OK, report

    failure = _require_valid(inst)
    if failure is not None:
        _emit(failure, args.out)
        return EXIT_INVALID, failure

    c, g = inst.complex, inst.chirality

    if cmd == "cohomology":
        frame = cohomology(c, args.tol)
        report = {
            "operation": "cohomology",
            "input": inst.digest,
            "betti": list(frame.betti),
        }
        _emit(report, args.out)
        return EXIT_OK, report

    if cmd == "oracle":
        if not inst.exact:
            raise io.ParseError(
                "the exact path requires every entry in rational form "
                '({"num": [p_re, q_re, p_im, q_im]})'
            )
        ec, eg = inst.exact_complex, inst.exact_chirality
        if not oracle.exact_validate(ec, eg):
            report = {"operation": "oracle", "input": inst.digest, "ok": False,
                      "failures": ["exact structural invariants violated"]}
            _emit(report, args.out)
            return EXIT_INVALID, report
        frame = oracle.exact_cohomology(ec)
        sweep = oracle.oracle_choice_sweep(ec, eg, args.trials, args.seed)
        report = {
            "operation": "oracle",
            "input": inst.digest,
            "betti": list(frame.betti),
            "tau_value": io.complex_pair(sweep["tau"].to_complex()),
            "rho_coord": io.complex_pair(sweep["rho"].to_complex()),
            "T_coord": io.complex_pair((sweep["rho"] ** 2).to_complex()),
            "trials": sweep["trials"],
            "tau_invariant": sweep["tau_invariant"],
            "rho_invariant": sweep["rho_invariant"],
            "ok": sweep["tau_invariant"] and sweep["rho_invariant"],
        }
        _emit(report, args.out)
        return (EXIT_OK if report["ok"] else EXIT_INVALID), report

    frame = _frame_for(inst, args.tol)

    if cmd == "tau":
        x = DetHCoordinate(frame, complex(*args.coord))
        if args.lam is None:
            rep = torsion.tau_evaluate(c, g, x)
        else:
            rep = torsion.tau_via_spectral(c, g, args.lam, x, args.gap_tol)
        report = {
            "operation": "tau",
            "input": inst.digest,
            "tau_value": io.complex_pair(rep.tau_value),
            "path": rep.path,
            "graded_det_factor": io.complex_pair(rep.graded_det_factor),
            "residuals": rep.residuals,
        }
        _emit(report, args.out)
        return EXIT_OK, report

    if cmd == "tauhat":
        value = torsion.tau_hat_acyclic(c, g)
        report = {
            "operation": "tauhat",
            "input": inst.digest,
            "tau_value": io.complex_pair(value),
            "path": "direct",
        }
        _emit(report, args.out)
        return EXIT_OK, report

    if cmd == "rho":
        rho = torsion.rho_refined(c, g, frame)
        report = {
            "operation": "rho",
            "input": inst.digest,
            "rho_coord": io.complex_pair(rho.value.coord),
            "r_sign": rho.r_sign,
        }
        _emit(report, args.out)
        return EXIT_OK, report

    if cmd == "cm":
        if args.lam is None:
            cm = torsion.cappell_miller(c, g, frame)
            path = "direct"
        else:
            cm = torsion.cappell_miller_truncated(c, g, args.lam, frame, args.gap_tol)
            path = f"spectral({args.lam})"
        report = {
            "operation": "cm",
            "input": inst.digest,
            "T_coord": io.complex_pair(cm.coord),
            "path": path,
        }
        _emit(report, args.out)
        return EXIT_OK, report

    raise _UsageError(f"unknown command {cmd!r}")  # pragma: no cover


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        code, _ = run_command(argv)
        return code
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ThresholdOnSpectrum as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (NotAcyclic, BNotInvertible, UnrealizableSpec) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ChiraltorError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def entry() -> None:  # console-script hook
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
