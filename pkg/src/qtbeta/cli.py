"""Command-line driver: ``qt <command> <action> [options]``.

Exit codes: 0 success, 2 tolerance failure, 3 truncation budget failure,
4 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import scalars
from .bigqjacobi import (Quadruple, big_q_jacobi, binomial_qts, pi, pi_symmetry_defect, rho, sigma,
                         stability_check)
from .ensembles import (Configuration, MeasureSpec, TruncationError, convergence_probe, partition_function,
                        sample, unnormalized_weight, verify_orthogonality, z1_check)
from .partitions import Partition, partitions_up_to
from .polyfamilies import interpolation, macdonald, macdonald_gram_schmidt_oracle, schur_jacobi_trudi
from .qspecial import DomainError, Tolerance

EXIT_OK, EXIT_TOL, EXIT_TRUNC, EXIT_CONFIG = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


# -- parsing helpers -------------------------------------------------------

def _partition(text: str) -> Partition:
    text = (text or "").strip()
    if not text:
        return Partition()
    return Partition(int(v) for v in text.split(","))


def _signature(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def _ints(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(v) for v in text.split(",")]


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",")]


def _load(path: str | None) -> dict:
    if path is None:
        raise ConfigError("this command needs --params (or --quad)")
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _quad(obj: dict) -> Quadruple:
    return Quadruple.from_dict(obj.get("quad", obj))


def measure_spec(obj: dict, tol: Tolerance) -> MeasureSpec:
    """MeasureSpec from a parameter file: q, t, quad, N and optional zeta_plus, zeta_minus, tail_budget."""
    get = lambda k, d=None: scalars.from_json(obj[k]) if k in obj else d
    window = tuple(obj["window"]) if "window" in obj else None
    return MeasureSpec(get("q"), get("t"), _quad(obj), int(obj.get("N", 1)), get("zeta_plus", Fraction(1)),
                       get("zeta_minus", Fraction(-1)), tol, window, float(obj.get("tail_budget", 1e-10)))


def _complex(v) -> complex:
    return complex(*v) if isinstance(v, (list, tuple)) else complex(str(v).replace("i", "j"))


def zw_params(obj: dict):
    from .degenerations import ZwParams

    if "zp" in obj:
        p = ZwParams.from_dict(obj)
        p.validate()
        return p
    return ZwParams.principal(float(obj["tau"]), _complex(obj["z"]), _complex(obj["w"]))


def s_params(obj: dict):
    from .degenerations import SParams

    return SParams(_complex(obj["s"]), float(obj["tau"]))


def _tol(args) -> Tolerance:
    kw = {}
    if args.match_tol is not None:
        kw["match_tol"] = args.match_tol
    if args.tail_bound is not None:
        kw["tail_bound"] = args.tail_bound
    return Tolerance(**kw)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (int, float, np.floating)):
        return float(x) if not isinstance(x, int) else x
    return scalars.to_json(x)


# -- commands --------------------------------------------------------------

def cmd_poly(args, tol) -> dict:
    nu, n = _partition(args.nu), args.N
    q, t = scalars.parse_scalar(args.q), scalars.parse_scalar(args.t)
    kind = args.action
    if kind == "macdonald":
        p = macdonald(nu, n, q, t)
    elif kind == "gram-schmidt":
        p = macdonald_gram_schmidt_oracle(nu, n, q, t)
    elif kind == "schur":
        p = schur_jacobi_trudi(nu, n)
    elif kind == "interpolation":
        p = interpolation(nu, n, q, t)
    else:
        p = big_q_jacobi(nu, n, q, t, _quad(_load(args.quad)))
    return {"results": {"polynomial": p.to_dict()}, "ok": True}


def cmd_coeff(args, tol) -> dict:
    lam, mu = _partition(args.lam), _partition(args.mu)
    q, t = scalars.parse_scalar(args.q), scalars.parse_scalar(args.t)
    if args.action == "sigma":
        v = sigma(lam, mu, q, t)
    elif args.action == "binomial":
        if args.s is None:
            raise ConfigError("binomial needs --s")
        v = binomial_qts(lam, mu, q, t, scalars.parse_scalar(args.s), args.N)
    else:
        quad = _quad(_load(args.quad))
        v = (rho if args.action == "rho" else pi)(lam, mu, q, t, quad)
    return {"results": {"value": scalars.to_json(v), "lambda": list(lam), "mu": list(mu)}, "ok": True}


def cmd_ensemble(args, tol) -> dict:
    spec = measure_spec(_load(args.params), tol)
    if args.action == "partition":
        z = partition_function(spec)
        return {"results": {"Z": z.value, "log_Z": z.log_value, "window": z.window},
                "budgets": {"tail": z.tail, "tail_budget": spec.tail_budget}, "ok": True}
    if args.config is None:
        raise ConfigError("ensemble weight needs --config")
    X = Configuration.from_json(args.config)
    z = partition_function(spec)
    w = unnormalized_weight(X, spec)
    import mpmath

    return {"results": {"unnormalized": float(w), "probability": float(w / mpmath.e ** z.log_value)},
            "budgets": {"tail": z.tail}, "ok": True}


def cmd_verify(args, tol) -> dict:
    a = args.action
    if a in ("stability", "symmetry"):
        q, t = scalars.parse_scalar(args.q), scalars.parse_scalar(args.t)
        quad = _quad(_load(args.quad))
        if a == "stability":
            cases = []
            for lam in partitions_up_to(args.max_size):
                n = max(1, len(lam))
                cases.append({"lambda": list(lam), "N": n, "ok": stability_check(lam, n, q, t, quad, tol.match_tol)})
            return {"results": {"cases": cases}, "ok": all(c["ok"] for c in cases)}
        d = pi_symmetry_defect(args.max_size, q, t, quad)
        return {"results": {"max_defect": d}, "residuals": {"symmetry": d}, "ok": d <= tol.match_tol}
    spec = measure_spec(_load(args.params), tol)
    if a == "z1":
        r = z1_check(spec)
        return {"results": r.to_dict(), "residuals": {"z1": r.error}, "budgets": {"tail": r.tail},
                "ok": r.error <= tol.match_tol}
    r = verify_orthogonality(spec, args.degree)
    return {"results": r.to_dict(), "residuals": {"offdiag": r.max_offdiag}, "budgets": {"tail": r.tail},
            "ok": r.ok(tol.match_tol)}


def cmd_degenerate(args, tol) -> dict:
    from . import degenerations as dg

    a = args.action
    if a == "link-rows":
        rng = np.random.default_rng(args.seed)
        tau = scalars.parse_scalar(args.tau)
        tau = int(tau) if isinstance(tau, Fraction) and tau.denominator == 1 else float(tau)
        worst, rows = 0.0, []
        for n in range(2, args.N + 1):
            for _ in range(args.trials):
                nu = tuple(sorted(rng.integers(-5, 6, size=n).tolist(), reverse=True))
                err = abs(float(dg.link_row_sum(nu, tau)) - 1)
                rows.append({"nu": list(nu), "abs_error": err})
                worst = max(worst, err)
        return {"results": {"rows": rows}, "residuals": {"row_sum": worst}, "ok": worst <= 1e-12}
    if a == "da-kernel":
        tau = float(scalars.parse_scalar(args.tau))
        u = np.sort(np.random.default_rng(args.seed).normal(size=args.N))[::-1]
        err = abs(dg.dixon_anderson_integral(u, tau) - 1)
        return {"results": {"u": u.tolist(), "integral_error": err}, "residuals": {"integral": err}, "ok": err <= 1e-6}
    obj = _load(args.params)
    if a == "discrete-coherency":
        try:
            r = dg.verify_discrete_coherency(zw_params(obj), args.N, args.window, threads=args.threads)
        except dg.WindowError as exc:
            raise TruncationError(str(exc)) from exc
        return {"results": r.to_dict(), "residuals": {"coherency": r.residual}, "budgets": {"tail": r.tail},
                "ok": r.residual < 1e-6 and (r.control_residual or 1) > 1e-2}
    q_seq = _floats(args.q_seq)
    if a == "limit-discrete":
        r = dg.check_degeneration_discrete(q_seq, zw_params(obj), _signature(args.nu))
        return {"results": r.to_dict(), "series": {"q": r.q, "abs_error": r.abs_error}, "ok": r.decreasing}
    r = dg.check_degeneration_continuous(q_seq, s_params(obj))
    scalar = dg.scalar_limit(Fraction(1, 3), 2, 0, q_seq)
    return {"results": {**r.to_dict(), "scalar_limit": scalar}, "series": {"q": r.q, "abs_error": r.abs_error},
            "ok": r.decreasing}


def cmd_sample(args, tol) -> dict:
    spec = measure_spec(_load(args.params), tol)
    xs = sample(spec, args.seed, args.count)
    return {"results": {"samples": [x.to_dict() for x in xs]}, "ok": True}


def cmd_probe(args, tol) -> dict:
    obj = _load(args.params)
    specs = [measure_spec({**obj, "N": n}, tol) for n in _ints(args.ns)]
    r = convergence_probe(specs, args.statistic, args.eps)
    return {"results": r.to_dict(), "series": {"N": r.ns[1:], "tv_distance": r.tv},
            "ok": bool(r.tv) and int(np.argmin(r.tv)) == len(r.tv) - 1}


COMMANDS = {"poly": cmd_poly, "coeff": cmd_coeff, "ensemble": cmd_ensemble, "verify": cmd_verify,
            "degenerate": cmd_degenerate, "sample": cmd_sample, "probe": cmd_probe}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", choices=("json", "csv"), default="json", help="output format")
    common.add_argument("--output", help="write to this path instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="worker cap for parallel sweeps")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--match-tol", type=float, default=None)
    common.add_argument("--tail-bound", type=float, default=None)

    p = _Parser(prog="qt", description="(q,t) hypergeometric ensembles: polynomials, coefficients, measures.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("poly", parents=[common], help="symmetric polynomial families")
    sp.add_argument("action", choices=("macdonald", "gram-schmidt", "schur", "interpolation", "big-q-jacobi"))
    sp.add_argument("--nu", required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--q", default="1/2")
    sp.add_argument("--t", default="1/3")
    sp.add_argument("--quad")

    sp = sub.add_parser("coeff", parents=[common], help="expansion coefficients sigma, rho, pi, binomial")
    sp.add_argument("action", choices=("sigma", "rho", "pi", "binomial"))
    sp.add_argument("--lam", required=True)
    sp.add_argument("--mu", default="")
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--q", default="1/2")
    sp.add_argument("--t", default="1/3")
    sp.add_argument("--s", default=None)
    sp.add_argument("--quad")

    sp = sub.add_parser("ensemble", parents=[common], help="lattice measure weights and normalization")
    sp.add_argument("action", choices=("partition", "weight"))
    sp.add_argument("--params", required=True)
    sp.add_argument("--config", help='configuration JSON, e.g. {"plus":[1,2],"minus":[]}')

    sp = sub.add_parser("verify", parents=[common], help="identity checks")
    sp.add_argument("action", choices=("stability", "orthogonality", "z1", "symmetry"))
    sp.add_argument("--params")
    sp.add_argument("--quad")
    sp.add_argument("--max-size", type=int, default=3)
    sp.add_argument("--degree", type=int, default=3)
    sp.add_argument("--q", default="1/2")
    sp.add_argument("--t", default="1/3")

    sp = sub.add_parser("degenerate", parents=[common], help="q -> 1 limits and beta ensembles")
    sp.add_argument("action", choices=("discrete-coherency", "link-rows", "da-kernel", "limit-discrete",
                                       "limit-continuous"))
    sp.add_argument("--params")
    sp.add_argument("--N", type=int, default=2)
    sp.add_argument("--window", type=int, default=40)
    sp.add_argument("--tau", default="1")
    sp.add_argument("--trials", type=int, default=5)
    sp.add_argument("--nu", default="1,0")
    sp.add_argument("--q-seq", default="0.9,0.99,0.995")

    sp = sub.add_parser("sample", parents=[common], help="exact samples from the truncated measure")
    sp.add_argument("--params", required=True)
    sp.add_argument("--count", type=int, default=10)

    sp = sub.add_parser("probe", parents=[common], help="large-N consistency probe")
    sp.add_argument("--params", required=True)
    sp.add_argument("--ns", default="2..8")
    sp.add_argument("--statistic", choices=("largest", "outside"), default="largest")
    sp.add_argument("--eps", type=float, default=0.1)
    return p


def emit_plot_data(report: dict, path=None) -> str:
    """CSV of the sequence-valued part of a report, one row per case."""
    series = report.get("series")
    if not series:
        raise ConfigError("report has no sequence-valued results")
    cols = list(series)
    n = len(series[cols[0]])
    if any(len(series[c]) != n for c in cols):
        raise ConfigError("series columns have different lengths")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for i in range(n):
        w.writerow([repr(float(series[c][i])) if isinstance(series[c][i], float) else series[c][i] for c in cols])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def run(argv: list[str] | None = None) -> tuple[dict, int]:
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        tol = _tol(args)
        body = COMMANDS[args.command](args, tol)
        code = EXIT_OK if body.get("ok", True) else EXIT_TOL
    except ConfigError as exc:
        return {"error": str(exc), "kind": "config"}, EXIT_CONFIG
    except TruncationError as exc:
        return {"error": str(exc), "kind": "truncation"}, EXIT_TRUNC
    except (ValueError, KeyError, DomainError, TypeError) as exc:
        return {"error": f"{type(exc).__name__}: {exc}", "kind": "config"}, EXIT_CONFIG
    report = {"command": [args.command] + ([args.action] if hasattr(args, "action") else []),
              "params": {k: v for k, v in vars(args).items() if k not in ("command", "action")},
              **body, "wall_time": time.perf_counter() - start}
    return report, code


def main(argv: list[str] | None = None) -> int:
    report, code = run(argv)
    args_out = "json"
    argv = sys.argv[1:] if argv is None else argv
    if "--out" in argv:
        args_out = argv[argv.index("--out") + 1]
    path = argv[argv.index("--output") + 1] if "--output" in argv else None
    if args_out == "csv" and code in (EXIT_OK, EXIT_TOL):
        try:
            text = emit_plot_data(report, path)
        except ConfigError as exc:
            print(json.dumps({"error": str(exc), "kind": "config"}), file=sys.stderr)
            return EXIT_CONFIG
        if path is None:
            sys.stdout.write(text)
        return code
    text = json.dumps(_jsonable(report), indent=2)
    if "error" in report:
        print(text, file=sys.stderr)
    elif path is not None:
        Path(path).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
