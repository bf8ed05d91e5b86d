"""Command-line front end.

    python -m barrier_resonances poles --a 2 --b 3 --v0 10 --count 3
    python -m barrier_resonances state --pole-index 0 --order 9 --out psi.csv
    python -m barrier_resonances survival --pole-index 0 --nt 2000
    python -m barrier_resonances bound | gram | verify

Settings come from defaults, then an optional JSON ``--config`` file, then
flags.  Every output embeds the resolved configuration.  Exit codes: 0 on
success, 1 when a computation (or a verification) fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .barrier import BarrierParams
from .errors import IndexOutOfRange, ResonanceError
from .evolution import background_bound, default_tgrid, survival_amplitude
from .polefinder import ResonanceSet, lowest_poles
from .quadrature import QuadratureSpec
from .resonance import approximate_state, default_xgrid, gram_matrix, spatial_state
from . import verify as verify_mod

COMMANDS = ("poles", "state", "survival", "bound", "gram", "verify")
DEFAULT_FORMAT = {"poles": "json", "state": "csv", "survival": "csv",
                  "bound": "json", "gram": "json", "verify": "json"}
DEFAULTS = {"a": 2.0, "b": 3.0, "v0": 10.0, "count": 10, "pole_index": 0, "order": 0,
            "tmax": None, "nt": 2000, "xmax": None, "nx": 600, "rel_tol": 1e-9,
            "e_max": 50.0, "out": "-", "format": None}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    barrier: BarrierParams
    quadrature: QuadratureSpec
    count: int = 10
    pole_index: int = 0
    order: int = 0
    tmax: float | None = None
    nt: int = 2000
    xmax: float | None = None
    nx: int = 600
    out: str = "-"
    format: str = "json"

    def as_dict(self) -> dict:
        return asdict(self)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model and numerics")
    g.add_argument("--a", type=float, help="inner barrier edge (default 2)")
    g.add_argument("--b", type=float, help="outer barrier edge (default 3)")
    g.add_argument("--v0", type=float, help="barrier height (default 10)")
    g.add_argument("--count", type=int, help="number of lowest poles to find (default 10)")
    g.add_argument("--rel-tol", dest="rel_tol", type=float, help="quadrature relative tolerance")
    g.add_argument("--e-max", dest="e_max", type=float, help="adaptive energy range before the tail")
    g.add_argument("--config", help="JSON file with any of the above settings")
    g.add_argument("--out", help="output path, '-' for stdout")
    g.add_argument("--format", choices=("csv", "json"))

    parser = argparse.ArgumentParser(prog="barrier-resonances",
                                     description="Square-barrier resonances and decay.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("poles", parents=[common], help="lowest resonance poles")
    p = sub.add_parser("state", parents=[common], help="sampled approximate resonance state")
    p.add_argument("--pole-index", dest="pole_index", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--xmax", type=float, help="grid end (default 3b)")
    p.add_argument("--nx", type=int)
    p = sub.add_parser("survival", parents=[common], help="survival amplitude and background")
    p.add_argument("--pole-index", dest="pole_index", type=int)
    p.add_argument("--tmax", type=float, help="final time (default 5/Gamma)")
    p.add_argument("--nt", type=int)
    sub.add_parser("bound", parents=[common], help="background-term bound of every pole")
    sub.add_parser("gram", parents=[common], help="Gram matrix of the pole set")
    sub.add_parser("verify", parents=[common], help="run the property checks")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = dict(DEFAULTS)
    explicit = {k: v for k, v in vars(args).items() if v is not None and k in DEFAULTS}
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        loaded = {k.replace("-", "_"): v for k, v in loaded.items()}
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    values.update(explicit)
    if values["format"] not in (None, "csv", "json"):
        raise UsageError(f"bad format {values['format']!r}")
    for key in ("count", "nt", "nx", "pole_index", "order"):
        if not isinstance(values[key], int) or values[key] < 0:
            raise UsageError(f"{key} must be a non-negative integer")
    if values["nt"] < 1 or values["nx"] < 2:
        raise UsageError("need nt >= 1 and nx >= 2")
    try:
        barrier = BarrierParams(float(values["a"]), float(values["b"]), float(values["v0"]))
        spec = QuadratureSpec(rel_tol=float(values["rel_tol"]), e_max=float(values["e_max"]))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    for key in ("tmax", "xmax"):
        if values[key] is not None and not values[key] > 0:
            raise UsageError(f"{key} must be positive")
    return RunConfig(command=args.command, barrier=barrier, quadrature=spec,
                     count=values["count"], pole_index=values["pole_index"],
                     order=values["order"], tmax=values["tmax"], nt=values["nt"],
                     xmax=values["xmax"], nx=values["nx"], out=values["out"],
                     format=values["format"] or DEFAULT_FORMAT[args.command])


# ---- output helpers

def _fmt(v) -> str:
    return "%.17g" % v


def _csv_text(cfg: RunConfig, header, rows) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(cfg.as_dict(), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _json_text(cfg: RunConfig, payload) -> str:
    return json.dumps({"config": cfg.as_dict(), "result": payload},
                      indent=2, sort_keys=True, allow_nan=True) + "\n"


def _emit(cfg: RunConfig, text: str):
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)


def _table(cfg: RunConfig, header, rows):
    if cfg.format == "csv":
        return _csv_text(cfg, header, rows)
    cols = {h: [float(r[i]) if isinstance(r[i], (float, np.floating)) else r[i] for r in rows]
            for i, h in enumerate(header)}
    return _json_text(cfg, cols)


# ---- commands

def _poles(cfg: RunConfig) -> ResonanceSet:
    return lowest_poles(cfg.barrier, cfg.count)


def _select(cfg: RunConfig, found: ResonanceSet):
    if cfg.pole_index >= len(found):
        raise IndexOutOfRange(f"pole index {cfg.pole_index} but only {len(found)} poles found")
    return found[cfg.pole_index]


def pole_records(found: ResonanceSet) -> list[dict]:
    return [{"e_r": p.e_r, "gamma": p.gamma, "mu_re": p.mu.real, "mu_im": p.mu.imag,
             "k_re": p.k.real, "k_im": p.k.imag, "residual": p.residual} for p in found]


def cmd_poles(cfg: RunConfig) -> str:
    recs = pole_records(_poles(cfg))
    if cfg.format == "json":
        return _json_text(cfg, recs)
    header = ["e_r", "gamma", "mu_re", "mu_im", "k_re", "k_im", "residual"]
    return _csv_text(cfg, header, [[r[h] for h in header] for r in recs])


def cmd_state(cfg: RunConfig) -> str:
    found = _poles(cfg)
    _select(cfg, found)
    state = approximate_state(found, cfg.pole_index, cfg.order)
    x = default_xgrid(cfg.barrier, cfg.nx, cfg.xmax)
    s = spatial_state(state.j, state.poles, x, cfg.barrier, cfg.quadrature)
    rows = [[float(xv), float(p.real), float(p.imag), float(abs(p) ** 2)]
            for xv, p in zip(s.x, s.psi)]
    return _table(cfg, ["x", "re_psi", "im_psi", "density"], rows)


def cmd_survival(cfg: RunConfig) -> str:
    pole = _select(cfg, _poles(cfg))
    if cfg.tmax is None:
        t = default_tgrid(pole, n=cfg.nt)
    else:
        t = np.linspace(0.0, cfg.tmax, cfg.nt)
    c = survival_amplitude(pole, t, cfg.quadrature)
    rows = [[float(tv), float(abs(a) ** 2), float(a.real), float(a.imag), float(abs(r)), c.bound]
            for tv, a, r in zip(c.tgrid, c.a_t, c.r_t)]
    return _table(cfg, ["t", "abs_a_sq", "re_a", "im_a", "abs_r", "bound"], rows)


def cmd_bound(cfg: RunConfig) -> str:
    found = _poles(cfg)
    rows = [[i, p.mu.real, p.mu.imag, background_bound(p)] for i, p in enumerate(found)]
    return _table(cfg, ["pole_index", "mu_re", "mu_im", "bound"], rows)


def cmd_gram(cfg: RunConfig) -> str:
    found = _poles(cfg)
    G = gram_matrix(found, cfg.quadrature)
    n = len(found)
    if cfg.format == "csv":
        rows = [[j, k, float(G.entries[j, k].real), float(G.entries[j, k].imag)]
                for j in range(n) for k in range(n)]
        return _csv_text(cfg, ["j", "k", "re", "im"], rows)
    return _json_text(cfg, {"re": G.entries.real.tolist(), "im": G.entries.imag.tolist(),
                            "hermitian_error": G.hermitian_error,
                            "min_eigenvalue": G.min_eigenvalue, "trace": G.trace})


def cmd_verify(cfg: RunConfig) -> tuple[str, bool]:
    report = verify_mod.run_all(cfg.barrier, cfg.count, cfg.quadrature)
    ok = all(r["status"] != "fail" for r in report)
    if cfg.format == "csv":
        rows = [[r["name"], r["status"], float(r["measured"]), float(r["threshold"])] for r in report]
        return _csv_text(cfg, ["property", "status", "measured", "threshold"], rows), ok
    return _json_text(cfg, {"passed": ok, "properties": report}), ok


HANDLERS = {"poles": cmd_poles, "state": cmd_state, "survival": cmd_survival,
            "bound": cmd_bound, "gram": cmd_gram}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        if cfg.command == "verify":
            text, ok = cmd_verify(cfg)
        else:
            text, ok = HANDLERS[cfg.command](cfg), True
        _emit(cfg, text)
    except (UsageError, IndexOutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ResonanceError, ArithmeticError, ValueError) as exc:
        print(f"computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if ok else 1
