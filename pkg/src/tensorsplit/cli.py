"""Command-line entry point.

Every subcommand reads a JSON config, writes one artifact file (CSV for
tabular results, JSON for reports), and exits 0 on success or with the
error's stable exit code otherwise.  Outputs are byte-identical across
repeated runs of the same config: all summation and iteration orders are
fixed, floats are printed with 17 significant digits, and nothing here
consults a clock or an unseeded generator.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import functions as functions_mod
from .decomp import decompose, weighted_norm
from .epsdim import (
    DEFAULT_CAP,
    dims_from_json,
    eps_dimension,
    eps_dimension_restricted,
    stabilization_dim,
)
from .equivalence import certify_equivalence
from .errors import ConfigInvalid, NoCertificate, TensorsplitError
from .functions import function_from_json
from .gammas import gamma_from_json
from .indexing import IndexVector
from .regress import AnchoredKernel, SampleSet, fit, fit_map, predict
from .sensitivity import sobol_indices, truncate_order, truncation_bound, l2_error
from .weights import orthogonalized_weight, weights_from_json

log = logging.getLogger("tensorsplit")

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING,
               "info": logging.INFO, "debug": logging.DEBUG}


def _fmt(x) -> str:
    """17-significant-digit decimal rendering, round-trip faithful."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    xf = float(x)
    if math.isinf(xf):
        return "inf" if xf > 0 else "-inf"
    if math.isnan(xf):
        return "nan"
    return format(xf, ".17g")


def _json_render(obj, indent=0) -> str:
    """Deterministic JSON with floats printed via _fmt."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [
            f'{inner}{json.dumps(str(k))}: {_json_render(v, indent + 1)}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{inner}{_json_render(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isinf(f) or math.isnan(f):
            return json.dumps(_fmt(f))
        return _fmt(f)
    return json.dumps(obj)


def _write_text(path: str, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _write_csv(path: str, header: list[str], rows: list[list]):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else _fmt(v) for v in row])
    _write_text(path, buf.getvalue())


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigInvalid(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or not obj:
        raise ConfigInvalid("config must be a nonempty JSON object")
    return obj


def _check_keys(cfg: dict, allowed: set, where: str = "config"):
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigInvalid(f"unknown keys {sorted(unknown)} in {where}")


def _index_json(j: IndexVector) -> str:
    return json.dumps(j.to_json_obj(), separators=(",", ":"), sort_keys=True)


def _omega_json(omega) -> str:
    return json.dumps(list(omega), separators=(",", ":"))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_epsdim(cfg: dict, args) -> list[tuple[str, str]]:
    _check_keys(cfg, {"a", "b", "dims", "eps", "d"})
    a = weights_from_json(cfg["a"])
    b = weights_from_json(cfg["b"])
    dims = dims_from_json(cfg.get("dims", "all_one"))
    eps_list = [float(e) for e in cfg["eps"]]
    d_list = [int(d) for d in cfg.get("d", [])]
    rows = []
    for eps in eps_list:
        full = eps_dimension(a, b, eps, dims, cap=args.cap, on_cap="truncate")
        d0 = stabilization_dim(a, b, eps, dims, cap=args.cap)
        rows.append([eps, "", full.n, len(full.index_set), d0, full.truncated])
        for d in d_list:
            res = eps_dimension_restricted(a, b, eps, dims, d, cap=args.cap, on_cap="truncate")
            rows.append([eps, str(d), res.n, len(res.index_set), d0, res.truncated])
    return [("csv", (["eps", "d", "n", "set_size", "d0", "truncated"], rows))]


def _cmd_transform(cfg: dict, args) -> list[tuple[str, str]]:
    _check_keys(cfg, {"a", "indices"})
    a = weights_from_json(cfg["a"])
    indices = [IndexVector.from_json_obj(obj) for obj in cfg["indices"]]
    oracle = a.tail_oracle()
    rows = []
    for j in sorted(indices, key=IndexVector.canonical_key):
        w = a.weight(j)
        w_hat = orthogonalized_weight(a, j, oracle)
        rows.append([_index_json(j), w, w_hat, w_hat / w if w > 0 else math.inf])
    return [("csv", (["index", "weight", "orthogonalized", "ratio"], rows))]


def _cmd_decomp(cfg: dict, args, mode: str) -> list[tuple[str, str]]:
    _check_keys(cfg, {"function", "gamma"})
    f = function_from_json(cfg["function"])
    gamma = gamma_from_json(cfg["gamma"])
    rows = []
    for term in decompose(f, mode, args.anchor):
        gv = gamma.value(term.omega)
        if gv > 0.0:
            contribution = term.mixed_norm_sq / gv
        else:
            contribution = 0.0 if term.mixed_norm_sq == 0.0 else math.inf
        rows.append([
            _omega_json(term.omega),
            math.sqrt(max(0.0, term.mixed_norm_sq)),
            contribution,
        ])
    return [("csv", (["omega", "term_norm", "weighted_contribution"], rows))]


def _cmd_equiv(cfg: dict, args) -> list[tuple[str, str]]:
    _check_keys(cfg, {"gamma", "q_tilde"})
    gamma = gamma_from_json(cfg["gamma"])
    q_tilde = float(cfg.get("q_tilde", 1.0))
    cert = certify_equivalence(gamma, anchor=args.anchor, q_tilde=q_tilde)
    if cert is None:
        report = {
            "certified": False,
            "reason": "a domination supremum diverges for these weights",
            "anchor": args.anchor,
            "q_tilde": q_tilde,
        }
        return [("json_error", (report, NoCertificate("no equivalence certificate")))]
    report = {
        "certified": True,
        "c_prime": cert.c_prime,
        "c_dprime": cert.c_dprime,
        "c": cert.c,
        "q": cert.q,
        "alpha": cert.alpha_spec,
        "anchor": args.anchor,
    }
    return [("json", report)]


def _cmd_sobol(cfg: dict, args) -> list[tuple[str, str]]:
    _check_keys(cfg, {"function", "gamma", "mode", "include_empty"})
    f = function_from_json(cfg["function"])
    gamma = gamma_from_json(cfg["gamma"])
    mode = cfg.get("mode", "anova")
    include_empty = bool(cfg.get("include_empty", False)) or args.include_empty
    table = sobol_indices(
        f, gamma, mode, anchor=args.anchor, include_empty=include_empty
    )
    rows = []
    for omega in sorted(table.per_omega, key=lambda w: (len(w), w.coords)):
        rows.append([_omega_json(omega), table.per_omega[omega], table.total(omega)])
    return [("csv", (["omega", "index", "total"], rows))]


def _cmd_truncate(cfg: dict, args) -> list[tuple[str, str]]:
    _check_keys(cfg, {"function", "gamma", "mode", "m"})
    f = function_from_json(cfg["function"])
    gamma = gamma_from_json(cfg["gamma"])
    mode = cfg.get("mode", "anchored")
    m_list = [int(m) for m in cfg.get("m", range(f.dim + 1))]
    norm = weighted_norm(f, gamma, mode, anchor=args.anchor)
    rows = []
    for m in m_list:
        s_m = truncate_order(f, m, mode, anchor=args.anchor)
        err = l2_error(f, s_m)
        bound = truncation_bound(gamma, m, mode, anchor=args.anchor) * norm
        rows.append([m, err, bound, err / bound if bound > 0 else 0.0])
    return [("csv", (["m", "error", "bound", "bound_ratio"], rows))]


def _cmd_regress(cfg: dict, args, config_dir: Path) -> list[tuple[str, str]]:
    _check_keys(cfg, {"samples", "kernel", "lambda", "holdout"})
    X, Y = _load_samples(cfg["samples"], config_dir)
    samples = SampleSet(X, Y)
    kernel = _kernel_from_json(cfg.get("kernel", {"type": "anchored"}),
                               X.shape[1], args.anchor)
    lam = cfg["lambda"]
    if samples.outputs.ndim == 1:
        model = fit(samples, kernel, float(lam))
        coeffs = [float(c) for c in model.coefficients]
    else:
        model = fit_map(samples, kernel, lam)
        coeffs = [[float(c) for c in row] for row in model.coefficients]
    pred = predict(model, samples.inputs)
    rmse_train = float(np.sqrt(np.mean((pred - samples.outputs) ** 2)))
    report = {
        "n": samples.n,
        "outputs": samples.n_outputs,
        "lambda": lam,
        "coefficients": coeffs,
        "residual": model.residual,
        "jitter": model.jitter,
        "rmse_train": rmse_train,
    }
    if "holdout" in cfg:
        Xh, Yh = _load_samples(cfg["holdout"], config_dir)
        pred_h = predict(model, Xh)
        report["rmse_holdout"] = float(np.sqrt(np.mean((pred_h - Yh) ** 2)))
    return [("json", report)]


def _load_samples(spec, config_dir: Path):
    if isinstance(spec, str):
        path = Path(spec)
        if not path.is_absolute():
            path = config_dir / path
        try:
            with open(path, "r", encoding="utf-8") as fh:
                reader = csv.reader(fh)
                header = next(reader)
                rows = [[float(v) for v in row] for row in reader if row]
        except (OSError, StopIteration, ValueError) as exc:
            raise ConfigInvalid(f"cannot read sample CSV {path}: {exc}") from exc
        x_cols = [i for i, name in enumerate(header) if name.startswith("x")]
        y_cols = [i for i, name in enumerate(header) if name.startswith("y")]
        if not x_cols or not y_cols:
            raise ConfigInvalid("sample CSV needs x... and y... columns")
        X = np.array([[row[i] for i in x_cols] for row in rows])
        Y = np.array([[row[i] for i in y_cols] for row in rows])
        if Y.shape[1] == 1:
            Y = Y[:, 0]
        return X, Y
    if isinstance(spec, dict):
        _check_keys(spec, {"inputs", "outputs"}, "samples")
        return np.asarray(spec["inputs"], dtype=float), np.asarray(spec["outputs"], dtype=float)
    raise ConfigInvalid("samples must be a CSV path or an inline object")


def _kernel_from_json(obj, dim: int, anchor: float):
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigInvalid("kernel spec must be an object with 'type'")
    if obj["type"] == "anchored":
        _check_keys(obj, {"type", "scales", "anchor"}, "kernel spec")
        return AnchoredKernel(dim, anchor=float(obj.get("anchor", anchor)),
                              scales=obj.get("scales"))
    raise ConfigInvalid(f"unknown kernel type {obj['type']!r}")


# ---------------------------------------------------------------------------
# driver


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tensorsplit",
        description="Weighted tensor-product space computations",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("epsdim", "exact eps-dimension over an eps grid"),
        ("transform", "orthogonalizing weight transform"),
        ("anova", "mean-projection decomposition table"),
        ("anchored", "anchor-projection decomposition table"),
        ("equiv", "norm-equivalence certificate"),
        ("sobol", "weighted sensitivity indices"),
        ("truncate", "m-variate truncation errors and bounds"),
        ("regress", "kernel least-squares fit"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", required=True, help="output artifact path")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                       help="worker cap (reserved; execution is sequential)")
        p.add_argument("--quad-order", type=int, default=32,
                       help="quadrature order for non-polynomial factors")
        p.add_argument("--anchor", type=float, default=0.5,
                       help="anchor point in [0, 1]")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP,
                       help="enumeration size cap")
        if name == "sobol":
            p.add_argument("--include-empty", action="store_true",
                           help="keep the constant component in the quotient")
    return parser


def run(args) -> int:
    if args.threads < 1:
        raise ConfigInvalid("--threads must be at least 1")
    if not 1 <= args.quad_order <= 64:
        raise ConfigInvalid("--quad-order must lie in [1, 64]")
    if not 0.0 <= args.anchor <= 1.0:
        raise ConfigInvalid("--anchor must lie in [0, 1]")
    if args.cap < 1:
        raise ConfigInvalid("--cap must be positive")
    functions_mod.DEFAULT_MEAN_ORDER = args.quad_order

    cfg = _load_config(args.config)
    config_dir = Path(args.config).resolve().parent

    if args.command == "epsdim":
        outputs = _cmd_epsdim(cfg, args)
    elif args.command == "transform":
        outputs = _cmd_transform(cfg, args)
    elif args.command == "anova":
        outputs = _cmd_decomp(cfg, args, "anova")
    elif args.command == "anchored":
        outputs = _cmd_decomp(cfg, args, "anchored")
    elif args.command == "equiv":
        outputs = _cmd_equiv(cfg, args)
    elif args.command == "sobol":
        outputs = _cmd_sobol(cfg, args)
    elif args.command == "truncate":
        outputs = _cmd_truncate(cfg, args)
    elif args.command == "regress":
        outputs = _cmd_regress(cfg, args, config_dir)
    else:  # pragma: no cover - argparse enforces the choices
        raise ConfigInvalid(f"unknown command {args.command!r}")

    status = 0
    for kind, payload in outputs:
        if kind == "csv":
            header, rows = payload
            _write_csv(args.out, header, rows)
        elif kind == "json":
            _write_text(args.out, _json_render(payload) + "\n")
        elif kind == "json_error":
            report, err = payload
            _write_text(args.out, _json_render(report) + "\n")
            log.error(str(err))
            status = err.exit_code
    return status


def main(argv=None) -> int:
    level = _LOG_LEVELS.get(os.environ.get("TENSORSPLIT_LOG", "warn"), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except TensorsplitError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
