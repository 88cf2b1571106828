"""Command-line surface: configs in, CSV/JSON/SVG artifacts out.

Exit codes: 0 success, 1 pipeline failure, 2 invalid configuration,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .cut_select import scan_directions, scan_to_csv
from .disks import build_disks_field, disks_cut_length, harmonic_number
from .field_core import (Grid2D, build_field, field_to_csv, fmt,
                         parse_descriptor, DEFAULT_SEED)
from .levelset import curves_to_csv, curves_to_svg, extract_norm_level, extract_sign_level
from .radical import Decision, classify_monodromy, construct_radical
from .roots1d import build_coeff_curve, match_continuous, sobolev_check, track_to_csv
from .roots2d import build_root_field, cut_edges_to_csv, sheet_to_csv
from .variation import variation_decompose
from .verify import case_names, run_cases

__all__ = ["main", "ExperimentConfig", "ConfigError"]


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass
class ExperimentConfig:
    domain: tuple = (-1.0, 1.0, -1.0, 1.0)
    resolution: tuple = (256, 256)
    function: dict = dc_field(default_factory=lambda: {"kind": "builtin", "name": "z"})
    r: float = 2.0
    candidates: int = 64
    p: tuple = (2.0,)
    seed: int = DEFAULT_SEED
    out: str | None = None
    levels: dict = dc_field(default_factory=dict)
    curve: dict | None = None
    coeff_fields: tuple | None = None
    N: int = 16

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        cfg = cls()
        try:
            if "domain" in raw:
                dom = [float(v) for v in raw["domain"]]
                if len(dom) != 4:
                    raise ConfigError("domain must be [xmin, xmax, ymin, ymax]")
                cfg.domain = tuple(dom)
            if "resolution" in raw:
                res = raw["resolution"]
                if isinstance(res, (int, float)):
                    cfg.resolution = (int(res), int(res))
                else:
                    cfg.resolution = (int(res[0]), int(res[1]))
            if "function" in raw:
                cfg.function = parse_descriptor(raw["function"])
            if "r" in raw:
                cfg.r = float(raw["r"])
            if "candidates" in raw:
                cfg.candidates = int(raw["candidates"])
            if "p" in raw:
                p = raw["p"]
                cfg.p = tuple(float(v) for v in (p if isinstance(p, list) else [p]))
            if "seed" in raw:
                cfg.seed = int(raw["seed"])
            if "out" in raw:
                cfg.out = str(raw["out"])
            if "levels" in raw:
                cfg.levels = dict(raw["levels"])
            if "curve" in raw:
                cfg.curve = dict(raw["curve"])
            if "coeff_fields" in raw:
                cfg.coeff_fields = tuple(parse_descriptor(d)
                                         for d in raw["coeff_fields"])
            if "N" in raw:
                cfg.N = int(raw["N"])
        except ConfigError:
            raise
        except (TypeError, ValueError, KeyError) as exc:
            raise ConfigError(f"malformed config: {exc}") from exc
        cfg.validate()
        return cfg

    def validate(self):
        xmin, xmax, ymin, ymax = self.domain
        if not (xmin < xmax and ymin < ymax):
            raise ConfigError("domain extents must be increasing")
        if min(self.resolution) < 32:
            raise ConfigError("resolution must be at least 32")
        if self.candidates < 8:
            raise ConfigError("candidates must be at least 8")
        if self.r <= 0:
            raise ConfigError("r must be positive")
        if any(p < 1.0 for p in self.p):
            raise ConfigError("every p must be at least 1")
        if self.N < 1:
            raise ConfigError("N must be at least 1")

    def grid(self) -> Grid2D:
        xmin, xmax, ymin, ymax = self.domain
        return Grid2D(xmin, xmax, ymin, ymax, self.resolution[0], self.resolution[1])


def _json_dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write(outdir: Path, name: str, text: str):
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / name).write_text(text, encoding="utf-8", newline="\n")


def _lambda_csv(sbv) -> str:
    grid = sbv.grid
    X, Y = grid.mesh()
    lam = sbv.lam.values
    on_cut = np.zeros(lam.shape, dtype=int)
    h, v = sbv.cut_h_edges, sbv.cut_v_edges
    on_cut[:-1, :] |= h.astype(int)
    on_cut[1:, :] |= h.astype(int)
    on_cut[:, :-1] |= v.astype(int)
    on_cut[:, 1:] |= v.astype(int)
    lines = ["x,y,re,im,on_cut,on_zero"]
    for xi, yi, val, oc, oz in zip(X.ravel(), Y.ravel(), lam.ravel(),
                                   on_cut.ravel(), sbv.zero_mask.ravel()):
        lines.append(f"{fmt(xi)},{fmt(yi)},{fmt(val.real)},{fmt(val.imag)},"
                     f"{oc},{int(oz)}")
    return "\n".join(lines) + "\n"


def _cmd_radical(cfg: ExperimentConfig, outdir: Path) -> int:
    field = build_field(cfg.function, cfg.grid())
    mono = classify_monodromy(field, cfg.r)
    cut = None
    scan = None
    if mono.decision is Decision.CUT_REQUIRED:
        scan = scan_directions(field, cfg.r, cfg.candidates)
        cut = scan.best
    sbv = construct_radical(field, cfg.r, cut)
    reports = {f"p={p!r}": variation_decompose(sbv, p).as_dict() for p in cfg.p}
    payload = {
        "monodromy": {"windings": mono.winding_numbers,
                      "decision": mono.decision.value,
                      "rationality": mono.rationality.label()},
        "cut": None if cut is None else {
            "direction": [cut.direction.real, cut.direction.imag],
            "jump_functional": cut.jump_functional,
            "length": cut.curve.total_length},
        "variation": reports,
        "r": cfg.r,
        "seed": cfg.seed,
    }
    _write(outdir, "field.csv", field_to_csv(field))
    _write(outdir, "lambda.csv", _lambda_csv(sbv))
    _write(outdir, "cuts.csv", curves_to_csv(cut.curve) if cut is not None
           else "x0,y0,x1,y1,len\n")
    if scan is not None:
        _write(outdir, "scan.csv", scan_to_csv(scan))
    _write(outdir, "report.json", _json_dumps(payload))
    _write(outdir, "plot.svg",
           curves_to_svg(field, [cut.curve] if cut is not None else []))
    return 0


def _cmd_monodromy(cfg: ExperimentConfig, outdir: Path) -> int:
    field = build_field(cfg.function, cfg.grid())
    mono = classify_monodromy(field, cfg.r)
    payload = {"windings": mono.winding_numbers,
               "decision": mono.decision.value,
               "rationality": mono.rationality.label(),
               "r": cfg.r}
    _write(outdir, "report.json", _json_dumps(payload))
    return 0


def _cmd_levelset(cfg: ExperimentConfig, outdir: Path) -> int:
    field = build_field(cfg.function, cfg.grid())
    curves = []
    rows = []
    for entry in cfg.levels.get("sign", []):
        y = complex(entry[0], entry[1]) if isinstance(entry, list) else complex(entry)
        c = extract_sign_level(field, y)
        curves.append(c)
        rows.append({"kind": "sign", "level": [y.real, y.imag],
                     "length": c.total_length, "segments": int(c.segments.shape[0])})
    for y in cfg.levels.get("norm", []):
        c = extract_norm_level(field, float(y))
        curves.append(c)
        rows.append({"kind": "norm", "level": float(y),
                     "length": c.total_length, "degenerate": c.degenerate,
                     "segments": int(c.segments.shape[0])})
    if not rows:
        raise ConfigError("levelset command needs a 'levels' entry with "
                          "'sign' and/or 'norm' lists")
    all_rows = ["x0,y0,x1,y1,len"]
    for c in curves:
        all_rows.extend(curves_to_csv(c).splitlines()[1:])
    _write(outdir, "field.csv", field_to_csv(field))
    _write(outdir, "cuts.csv", "\n".join(all_rows) + "\n")
    _write(outdir, "report.json", _json_dumps({"levels": rows}))
    _write(outdir, "plot.svg", curves_to_svg(field, curves))
    return 0


def _cmd_roots1d(cfg: ExperimentConfig, outdir: Path) -> int:
    if cfg.curve is None:
        raise ConfigError("roots1d command needs a 'curve' descriptor")
    curve = build_coeff_curve(cfg.curve)
    track = match_continuous(curve)
    reports = {}
    for p in cfg.p:
        rep = sobolev_check(track, p, seed=cfg.seed)
        reports[f"p={p!r}"] = {"lp_norm": [float(v) for v in rep.lp_norm],
                               "lp_power": [float(v) for v in rep.lp_power],
                               "rhs_core": rep.rhs_core,
                               "ratio": rep.ratio,
                               "out_of_range": rep.out_of_range}
    payload = {"n": curve.n, "samples": int(curve.t.size),
               "max_step_jump": track.max_step_jump, "sobolev": reports,
               "seed": cfg.seed}
    _write(outdir, "lambda.csv", track_to_csv(track))
    _write(outdir, "report.json", _json_dumps(payload))
    return 0


def _cmd_roots2d(cfg: ExperimentConfig, outdir: Path) -> int:
    if not cfg.coeff_fields:
        raise ConfigError("roots2d command needs a 'coeff_fields' list")
    grid = cfg.grid()
    fields = [build_field(d, grid) for d in cfg.coeff_fields]
    rf = build_root_field(fields, K=cfg.candidates, p=cfg.p[0])
    payload = {
        "n": rf.n,
        "holonomy": {"cycles": rf.holonomy.cycle_strings(),
                     "nontrivial": rf.holonomy.nontrivial},
        "cut": None if rf.cut is None else {
            "direction": [rf.cut.direction.real, rf.cut.direction.imag],
            "jump_functional": rf.cut.jump_functional,
            "length": rf.cut.curve.total_length},
        "variation": [v.as_dict() for v in rf.variation],
        "seed": cfg.seed,
    }
    _write(outdir, "lambda.csv", sheet_to_csv(rf))
    _write(outdir, "cuts.csv", cut_edges_to_csv(rf))
    _write(outdir, "report.json", _json_dumps(payload))
    disc_curves = [rf.cut.curve] if rf.cut is not None else []
    _write(outdir, "plot.svg", curves_to_svg(fields[-1], disc_curves))
    return 0


def _cmd_example(cfg: ExperimentConfig, outdir: Path, what: str) -> int:
    if what != "disks":
        raise ConfigError(f"unknown example {what!r} (available: disks)")
    N = cfg.N
    grid = Grid2D(0.0, 4.0, 0.0, 2.0, 16 * N + 1, 8 * N + 1)
    field = build_disks_field(N, grid)
    rep = disks_cut_length(N, field)
    lines = ["N,cut_length,lower_bound"]
    marks = []
    nprime = 1
    while nprime <= N:
        marks.append(nprime)
        nprime *= 2
    if marks[-1] != N:
        marks.append(N)
    for m in marks:
        cut = float(sum(rep.per_disk[:m]))
        lines.append(f"{m},{fmt(cut)},{fmt(harmonic_number(m) / 2.0)}")
    _write(outdir, "field.csv", field_to_csv(field))
    _write(outdir, "growth.csv", "\n".join(lines) + "\n")
    _write(outdir, "report.json", _json_dumps(
        {"N": N, "total_cut_length": rep.total,
         "lower_bound": rep.lower_bound,
         "per_disk": [float(v) for v in rep.per_disk]}))
    _write(outdir, "plot.svg", curves_to_svg(field, rep.curves))
    return 0


def _cmd_verify(names, seed: int, outdir: Path | None) -> int:
    report = run_cases(names, seed=seed)
    for case in report["cases"]:
        print(("PASS" if case["passed"] else "FAIL") + f" {case['name']}")
    if outdir is not None:
        _write(outdir, "report.json", _json_dumps(report))
    else:
        sys.stdout.write(_json_dumps(report))
    return 0 if report["passed"] else 3


def _load_config(args) -> ExperimentConfig:
    raw = {}
    if args.config is not None:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    cfg = ExperimentConfig.from_dict(raw)
    if getattr(args, "r", None) is not None:
        cfg.r = args.r
    if getattr(args, "candidates", None) is not None:
        cfg.candidates = args.candidates
    if getattr(args, "N", None) is not None:
        cfg.N = args.N
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "out", None) is not None:
        cfg.out = args.out
    cfg.validate()
    return cfg


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bvroots",
        description="Bounded-variation radicals and polynomial root fields "
                    "on sampled 2D domains.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON experiment config")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--seed", type=int, help="seed for the pair samplers")

    for name in ("radical", "monodromy", "levelset", "roots1d", "roots2d"):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--r", type=float, help="radical exponent")
        sp.add_argument("--candidates", type=int, help="number of scan directions")

    sp = sub.add_parser("example")
    sp.add_argument("what", choices=["disks"])
    common(sp)
    sp.add_argument("--N", type=int, help="number of disks")

    sp = sub.add_parser("verify")
    sp.add_argument("--case", action="append", dest="cases",
                    choices=case_names(), help="run only the named case "
                    "(repeatable); default all")
    sp.add_argument("--out", help="directory for report.json")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            outdir = Path(args.out) if args.out else None
            return _cmd_verify(args.cases, args.seed, outdir)
        cfg = _load_config(args)
        outdir = Path(cfg.out) if cfg.out else Path(".")
        if args.command == "radical":
            return _cmd_radical(cfg, outdir)
        if args.command == "monodromy":
            return _cmd_monodromy(cfg, outdir)
        if args.command == "levelset":
            return _cmd_levelset(cfg, outdir)
        if args.command == "roots1d":
            return _cmd_roots1d(cfg, outdir)
        if args.command == "roots2d":
            return _cmd_roots2d(cfg, outdir)
        if args.command == "example":
            return _cmd_example(cfg, outdir, args.what)
        parser.error(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
