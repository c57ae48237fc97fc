"""Command-line front end.

Subcommands::

    wave       wave parameters (json) or sampled profile (csv)
    index      closed-form index, mu* and threshold speed
    threshold  kappa_T and c_T for a period, or c* and T* for a modulus
    spectrum   kernel check and numerical index
    pencil     growth verdict at one speed, or a scan over speeds
    figures    figure data and claim verdicts
    validate   one closed-vs-numeric comparison, or every acceptance criterion

A wave is selected by exactly one parameter pair: ``--kappa`` with ``--w``
or ``--period`` with ``--c``. Exit status is 0 on success, 2 when a
checked claim fails and 1 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import acceptance, indices, pencil, spectral
from .errors import WaveStabError
from .figures import FIGURE_IDS, figure_scan
from .waves import (
    Model,
    WaveParams,
    build_wave,
    build_wave_from_period,
    format_number,
    parse_model,
    sample_profile,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CLAIM = 2


class UsageError(Exception):
    """Bad flags or parameter combination."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D401
        raise UsageError(message)


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------

_FLOAT_TAG = re.compile(r'"@@f(.*?)@@"')


def _tag_floats(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _tag_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_tag_floats(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return None if not math.isfinite(v) else f"@@f{format_number(v)}@@"
    return obj


def to_json(obj: Any) -> str:
    """JSON text with floats at 17 significant digits and inf/nan as null."""
    text = json.dumps(_tag_floats(obj), indent=2, ensure_ascii=False)
    return _FLOAT_TAG.sub(r"\1", text) + "\n"


def _rows_csv(header: Sequence[str], rows) -> str:
    out = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, (bool, np.bool_)):
                cells.append("true" if v else "false")
            elif isinstance(v, (float, np.floating)):
                cells.append(format_number(v))
            else:
                cells.append(str(v))
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def _dict_csv(d: dict) -> str:
    flat = {k: v for k, v in d.items() if not isinstance(v, (dict, list, tuple))}
    return _rows_csv(list(flat), [list(flat.values())])


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# Parameter handling
# --------------------------------------------------------------------------


def admissible_ranges(model: Model) -> str:
    """Human-readable admissible parameter ranges for ``model``."""
    if model is Model.KGZ:
        per = "sqrt(2) pi sqrt(w) < T"
    elif model is Model.BOUSSINESQ2:
        per = "T > 2 pi / sqrt(w)"
    else:
        per = "T > sqrt(2) pi / sqrt(w)"
    return (
        f"admissible ranges for {model}: 0 < kappa < 1, 0 < w <= 1, |c| < 1 "
        f"with w = 1 - c^2, {per}"
    )


def _require_model(args) -> Model:
    if args.model is None:
        raise UsageError("--model is required")
    try:
        return parse_model(args.model)
    except (ValueError, WaveStabError) as exc:
        raise UsageError(str(exc)) from exc


def _wave_from_args(args, model: Model) -> WaveParams:
    by_kw = args.kappa is not None or args.w is not None
    by_tc = args.period is not None or args.c is not None
    if by_kw and by_tc:
        raise UsageError("mixed parameter pairs: give either --kappa/--w or --period/--c")
    if args.kappa is not None and args.w is not None:
        return build_wave(model, args.kappa, args.w)
    if args.period is not None and args.c is not None:
        return build_wave_from_period(model, args.period, args.c)
    raise UsageError("a wave needs exactly one complete pair: --kappa with --w, or --period with --c")


def _params_dict(p: WaveParams) -> dict:
    c = p.c if p.c is not None else (math.sqrt(1.0 - p.w) if p.w <= 1.0 else None)
    return {
        "model": str(p.model),
        "kappa": p.kappa,
        "w": p.w,
        "c": c,
        "T": p.T,
        "alpha": p.alpha,
        "phi0": p.phi0,
        "phi1": p.phi1,
        "b": p.b,
        "a": p.a,
    }


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def _cmd_wave(args) -> tuple[str, int]:
    model = _require_model(args)
    p = _wave_from_args(args, model)
    if args.format == "csv":
        return sample_profile(p, args.grid_n).to_csv(), EXIT_OK
    return to_json(_params_dict(p)), EXIT_OK


def _cmd_index(args) -> tuple[str, int]:
    model = _require_model(args)
    p = _wave_from_args(args, model)
    rep = indices.index_report(model, p.kappa, p.w, args.c1_form).as_dict()
    return (_dict_csv(rep) if args.format == "csv" else to_json(rep)), EXIT_OK


def _cmd_threshold(args) -> tuple[str, int]:
    model = _require_model(args)
    if args.c is not None or args.w is not None:
        raise UsageError("threshold takes --period alone or --kappa alone")
    if (args.period is None) == (args.kappa is None):
        raise UsageError("threshold takes exactly one of --period or --kappa")
    if args.period is not None:
        k_T, c_T = indices.kappa_star_for_period(model, args.period, args.c1_form)
        out = {"model": str(model), "T": args.period, "kappa_T": k_T, "c_T": c_T}
    else:
        c_s = indices.threshold_speed(model, args.kappa, args.c1_form)
        T_s = indices.threshold_period_map(model, args.kappa, args.c1_form)
        out = {"model": str(model), "kappa": args.kappa, "c_star": c_s, "T_star": T_s}
    return (_dict_csv(out) if args.format == "csv" else to_json(out)), EXIT_OK


def _cmd_spectrum(args) -> tuple[str, int]:
    model = _require_model(args)
    p = _wave_from_args(args, model)
    n = args.grid_n
    bundle = spectral.build_bundle(model, p, n)
    rep = spectral.verify_kernel(model, p, n, bundle=bundle)
    num = spectral.index_numeric(model, p, n, bundle=bundle)
    out = {
        "model": str(model),
        "kappa": p.kappa,
        "w": p.w,
        "n": rep.n,
        "lowest_eigenvalue": rep.lowest_eigenvalue,
        "n_negative": rep.n_negative,
        "n_zero": rep.n_zero,
        "kernel_residual": rep.kernel_residual,
        "kernel_residual_rel": rep.kernel_residual_rel,
        "spectral_gap": rep.spectral_gap_sigma,
        "op_norm": rep.op_norm,
        "index_numeric": num,
        "index_closed": indices.index_closed(model, p.kappa, p.w, args.c1_form),
        "verified": rep.verified,
    }
    text = _dict_csv(out) if args.format == "csv" else to_json(out)
    return text, EXIT_OK if rep.verified else EXIT_CLAIM


def _cmd_pencil(args) -> tuple[str, int]:
    model = _require_model(args)
    if args.period is None or args.kappa is not None or args.w is not None:
        raise UsageError("pencil takes --period, plus --c for a single speed")
    n = args.grid_n if args.grid_n_given else 128
    tol = args.tol if args.tol is not None else pencil.GROWTH_TOL
    if args.c is not None:
        v = pencil.classify_stability(model, args.period, args.c, n, tol)
        out = {
            "model": str(model),
            "T": v.T,
            "c": v.c,
            "kappa": v.kappa,
            "max_growth": v.max_growth,
            "tolerance": v.tolerance,
            "stable": v.stable,
            "c_T": v.threshold_prediction,
            "predicted_stable": v.predicted_stable,
        }
        return (_dict_csv(out) if args.format == "csv" else to_json(out)), EXIT_OK
    scan = pencil.stability_scan(model, args.period, n=n, growth_tol=tol)
    if args.plot:
        from .plotting import plot_stability_scan

        plot_stability_scan(scan, args.plot)
    if args.format == "csv":
        return _rows_csv(("c", "max_growth", "stable"), scan.rows), EXIT_OK
    out = scan.summary()
    out["grid_step"] = scan.grid_step
    out["monotone"] = scan.monotone
    out["rows"] = [{"c": c, "max_growth": g, "stable": s} for c, g, s in scan.rows]
    return to_json(out), EXIT_OK


def _cmd_figures(args) -> tuple[str, int]:
    if args.id is None:
        raise UsageError(f"figures needs --id in {FIGURE_IDS[0]}..{FIGURE_IDS[-1]}")
    if args.id not in FIGURE_IDS:
        raise UsageError(f"--id must be in {FIGURE_IDS[0]}..{FIGURE_IDS[-1]}, got {args.id}")
    scan = figure_scan(args.id)
    if args.plot:
        from .plotting import plot_figure_scan

        plot_figure_scan(scan, args.plot)
    code = EXIT_OK if scan.holds else EXIT_CLAIM
    if args.format == "csv":
        return scan.to_csv(), code
    out = {
        "figure": scan.figure,
        "label": scan.label,
        "claims": [c.as_dict() for c in scan.claims],
        "kappa": list(scan.kappas),
        "value": list(scan.values),
    }
    return to_json(out), code


def _cmd_validate(args) -> tuple[str, int]:
    if args.model is not None:
        model = _require_model(args)
        p = _wave_from_args(args, model)
        n = args.grid_n if args.grid_n_given else spectral.default_grid_n(p.kappa)
        rep = spectral.validation_report(model, p.kappa, p.w, n)
        tol = args.tol if args.tol is not None else 1e-4
        rep["tol"] = tol
        rep["passed"] = rep["rel_err"] <= tol and rep["n_negative"] == 1
        text = _dict_csv(rep) if args.format == "csv" else to_json(rep)
        return text, EXIT_OK if rep["passed"] else EXIT_CLAIM
    results = acceptance.run_all()
    ok = all(r.passed for r in results)
    if args.format == "csv":
        text = _rows_csv(
            ("number", "name", "passed", "runtime", "detail"),
            [(r.number, r.name, r.passed, r.runtime, json.dumps(r.detail)) for r in results],
        )
    else:
        text = to_json({"passed": ok, "criteria": [r.as_dict() for r in results]})
    return text, EXIT_OK if ok else EXIT_CLAIM


_COMMANDS = {
    "wave": (_cmd_wave, "wave parameters or sampled profile", "json"),
    "index": (_cmd_index, "closed-form stability index", "json"),
    "threshold": (_cmd_threshold, "threshold modulus and speed", "json"),
    "spectrum": (_cmd_spectrum, "kernel check and numerical index", "json"),
    "pencil": (_cmd_pencil, "quadratic pencil growth verdicts", "csv"),
    "figures": (_cmd_figures, "figure data and claim verdicts", "csv"),
    "validate": (_cmd_validate, "closed-vs-numeric checks and acceptance criteria", "json"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--model", help="boussinesq2 | boussinesq3 | kgz")
    common.add_argument("--kappa", type=float, help="elliptic modulus in (0, 1)")
    common.add_argument("--w", type=float, help="w = 1 - c^2")
    common.add_argument("--c", type=float, help="wave speed, |c| < 1")
    common.add_argument("--period", type=float, help="wave period T")
    common.add_argument("--grid-n", type=int, default=None, help="grid size (even, default 256)")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--id", type=int, default=None, help="figure number 1..10")
    common.add_argument("--plot", default=None, metavar="PATH", help="also render a PNG")
    common.add_argument(
        "--c1-form", choices=("derivative", "reduced"), default="derivative",
        help="KGZ c1 expression",
    )
    parser = _Parser(prog="wavestab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, (_, help_, _) in _COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return the exit status."""
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(_COMMANDS))
        func, _, default_fmt = _COMMANDS[args.command]
        args.format = args.format or default_fmt
        args.grid_n_given = args.grid_n is not None
        if args.grid_n is None:
            args.grid_n = 256
        if args.grid_n % 2:
            raise UsageError(f"--grid-n must be even, got {args.grid_n}")
        text, code = func(args)
    except UsageError as exc:
        _usage_message(str(exc), args)
        return EXIT_USAGE
    except (WaveStabError, ValueError) as exc:
        _usage_message(f"{type(exc).__name__}: {exc}", args)
        return EXIT_USAGE
    _emit(text, args.out)
    return code


def _usage_message(msg: str, args) -> None:
    sys.stderr.write(f"wavestab: error: {msg}\n")
    model = getattr(args, "model", None) if args is not None else None
    try:
        models = [parse_model(model)] if model else list(Model)
    except (ValueError, WaveStabError):
        models = list(Model)
    for m in models:
        sys.stderr.write(admissible_ranges(m) + "\n")


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
