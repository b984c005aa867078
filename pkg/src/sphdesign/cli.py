"""Command-line entry point: construct / solve / scan / verify / analyze / compare.

Results go to standard output (JSON with --json), progress to standard
error.  Exit codes: 0 success or pass, 1 verification failure, 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import designio, families, scan, structure, verify
from .core import (
    DESIGN_ZERO_FACTOR,
    Configuration,
    DesignProblem,
    Mode,
    bessel_residual,
)
from .optimize import SolverOptions, multi_start

CONFIG_ENV_VAR = "SPHDESIGN_CONFIG"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


@dataclass
class CliConfig:
    """Defaults shared by all subcommands; file values < flag values."""

    restarts: int = 20
    seed: int = 0
    max_iterations: int = 2000
    gradient_tolerance: float = 1e-10
    zero_threshold: float | None = None
    trust_radius_factor: float = 0.1
    tolerance: float = DESIGN_ZERO_FACTOR
    threads: int = 1

    _CASTS = {
        "restarts": int,
        "seed": int,
        "max_iterations": int,
        "gradient_tolerance": float,
        "zero_threshold": float,
        "trust_radius_factor": float,
        "tolerance": float,
        "threads": int,
    }

    @classmethod
    def from_file(cls, path) -> "CliConfig":
        cfg = cls()
        try:
            text = open(path).read()
        except OSError as exc:
            raise ValueError(f"cannot read config file {path}: {exc}") from exc
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in cls._CASTS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                setattr(cfg, key, cls._CASTS[key](value))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
        cfg.validate()
        return cfg

    def validate(self):
        SolverOptions(
            max_iterations=self.max_iterations,
            gradient_tolerance=self.gradient_tolerance,
            zero_threshold=self.zero_threshold,
            initial_trust_radius_factor=self.trust_radius_factor,
            seed=self.seed,
        )
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")

    def solver_options(self, seed=None) -> SolverOptions:
        return SolverOptions(
            max_iterations=self.max_iterations,
            gradient_tolerance=self.gradient_tolerance,
            zero_threshold=self.zero_threshold,
            initial_trust_radius_factor=self.trust_radius_factor,
            seed=self.seed if seed is None else seed,
        )


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(payload: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")


def _mode(name: str) -> Mode:
    try:
        return Mode(name)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"mode must be 'equal_norm' or 'weighted', got {name!r}"
        )


def _angles(text: str):
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("need four comma-separated angles")
    return parts


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_construct(args, cfg: CliConfig) -> int:
    name = args.name
    t = None
    if name == "equally_spaced_lines":
        if args.t is None:
            _info("construct equally_spaced_lines requires --t")
            return EXIT_USAGE
        config, t = families.equally_spaced_lines(args.t), args.t
    elif name == "mercedes_benz":
        config = Configuration(families.mercedes_benz(args.theta or 0.0), Mode.EQUAL_NORM)
        t = 2
    elif name == "twelve_point_design":
        if args.angles is not None:
            thetas = args.angles
        else:
            thetas = np.random.default_rng(args.seed if args.seed is not None else cfg.seed).uniform(
                0.0, 2.0 * np.pi, 4
            )
        config, t = families.twelve_point_design(thetas), 2
    elif name == "three_mubs_r4":
        config, t = families.three_mubs_r4(), 2
    elif name == "reznick_11pt":
        config, t = families.reznick_11pt(), 3
    elif name == "new_11pt_d5":
        config, t = families.new_11pt_d5(), 3
    elif name == "stroud_design":
        if args.d is None:
            _info("construct stroud_design requires --d (4, 5 or 6)")
            return EXIT_USAGE
        config, t = families.stroud_design(args.d, args.sign), 2
    elif name == "kempner_24pt":
        config, t = families.kempner_24pt(), 3
    else:
        _info(f"unknown construction {name!r}")
        return EXIT_USAGE
    doc = designio.design_document(config, t=t)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(doc)
        _info(f"wrote {args.out}")
    else:
        sys.stdout.write(doc)
    return EXIT_OK


def _cmd_solve(args, cfg: CliConfig) -> int:
    problem = DesignProblem(args.t, args.d, args.n, args.mode)
    restarts = args.restarts if args.restarts is not None else cfg.restarts
    options = cfg.solver_options(seed=args.seed if args.seed is not None else None)
    _info(
        f"solving t={args.t} d={args.d} n={args.n} mode={args.mode.value} "
        f"with {restarts} restarts (seed {options.seed})"
    )
    best, _ = multi_start(problem, restarts, options, workers=args.threads or cfg.threads)
    ok, f_value = verify.is_design(best.config, args.t, cfg.tolerance)
    meta = {
        "f_value": best.f_value,
        "iterations": best.iterations,
        "converged": best.converged.value,
        "seed": best.seed,
    }
    if args.out:
        designio.save_design(args.out, best.config, t=args.t, meta=meta)
        _info(f"wrote {args.out}")
    payload = {"is_design": ok, **meta}
    _emit(payload, args.json)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_scan(args, cfg: CliConfig) -> int:
    restarts = args.restarts if args.restarts is not None else cfg.restarts
    options = cfg.solver_options(seed=args.seed if args.seed is not None else None)
    workers = args.threads or cfg.threads

    def progress(rec):
        _info(
            f"n={rec.n}: best_f={rec.best_f:.6e} zero={rec.is_zero} "
            f"({rec.restarts_used} restarts, {rec.wall_seconds:.1f}s)"
        )

    if args.bisect:
        jump, table = scan.bisect_jump(
            args.t, args.d, args.mode, args.n_from, args.n_to, restarts, options,
            workers=workers,
        )
    else:
        table = scan.scan_n_range(
            args.t, args.d, args.mode, args.n_from, args.n_to, restarts, options,
            workers=workers, progress=progress,
        )
        jump = scan.detect_jump(table)
    scan.save_table(table, args.out)
    _info(f"wrote {args.out}")
    special = scan.detect_special(table)
    payload = {
        "jump": jump,
        "special": special,
        "rows": {r.n: r.best_f for r in table.records},
    }
    _emit(payload, args.json)
    return EXIT_OK


_ORACLES = ("potential", "cubature", "bessel")


def _cmd_verify(args, cfg: CliConfig) -> int:
    config, t_file, _ = designio.load_design(args.design)
    t = args.t if args.t is not None else t_file
    if t is None:
        _info("no strength: pass --t or store t in the design file")
        return EXIT_USAGE
    selected = list(_ORACLES) if args.oracle == "all" else [args.oracle]
    if config.mode == Mode.WEIGHTED and "cubature" in selected:
        if args.oracle == "cubature":
            _info("the cubature oracle applies to equal-norm designs only")
            return EXIT_USAGE
        selected.remove("cubature")
        _info("skipping cubature oracle (weighted design)")
    results = {}
    passed = True
    for oracle in selected:
        if oracle == "potential":
            ok, value = verify.is_design(config, t, cfg.tolerance)
        elif oracle == "cubature":
            value = verify.cubature_residual(config, t)
            ok = value <= 1e-10
        else:
            value = bessel_residual(config, t)
            ok = value <= 1e-10
        results[oracle] = {"pass": bool(ok), "value": value}
        passed = passed and ok
    payload = {"t": t, "pass": passed, "oracles": results}
    _emit(payload, args.json)
    return EXIT_OK if passed else EXIT_FAIL


def _cmd_analyze(args, cfg: CliConfig) -> int:
    config, t_file, _ = designio.load_design(args.design)
    show_all = not (args.angles or args.norms or args.fingerprint or args.match_family)
    payload = {"d": config.d, "n": config.n, "mode": config.mode.value}
    if args.angles or show_all:
        profile = structure.angle_profile(config)
        payload["angle_clusters"] = [
            {"squared_angle": rep, "count": cnt} for rep, cnt in profile.clusters
        ]
    if args.norms or show_all:
        payload["norm_clusters"] = [
            {"norm": rep, "count": cnt} for rep, cnt in structure.norm_profile(config)
        ]
    if args.fingerprint:
        fp = structure.m_product_fingerprint(config, args.fingerprint)
        payload["fingerprint"] = {
            "m": fp.m,
            "values": [float(v) for v in fp.values],
        }
    if args.match_family:
        angles = structure.match_to_family(config)
        payload["family_angles"] = None if angles is None else list(angles.theta)
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"design: d={config.d} n={config.n} mode={config.mode.value}")
        if "angle_clusters" in payload:
            print("squared-angle clusters (value x count):")
            for c in payload["angle_clusters"]:
                print(f"  {c['squared_angle']:.12g} x {c['count']}")
        if "norm_clusters" in payload:
            print("norm clusters (value x count):")
            for c in payload["norm_clusters"]:
                print(f"  {c['norm']:.12g} x {c['count']}")
        if "fingerprint" in payload:
            vals = payload["fingerprint"]["values"]
            print(f"{args.fingerprint}-product fingerprint ({len(vals)} values):")
            print("  " + ", ".join(f"{v:.8g}" for v in vals))
        if "family_angles" in payload:
            if payload["family_angles"] is None:
                print("family match: none")
            else:
                print(
                    "family match: theta = "
                    + ", ".join(f"{a:.12g}" for a in payload["family_angles"])
                )
    return EXIT_OK


def _cmd_compare(args, cfg: CliConfig) -> int:
    a, _, _ = designio.load_design(args.design_a)
    b, _, _ = designio.load_design(args.design_b)
    m = args.fingerprint
    fa = structure.m_product_fingerprint(a, m)
    fb = structure.m_product_fingerprint(b, m)
    equal = fa.matches(fb)
    _emit({"m": m, "equal": equal}, args.json)
    return EXIT_OK if equal else EXIT_FAIL


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphdesign",
        description="Construct, search, verify and analyze projective spherical designs.",
    )
    parser.add_argument("--config", help="key=value config file (or set $" + CONFIG_ENV_VAR + ")")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="emit a closed-form design as JSON")
    p.add_argument("name")
    p.add_argument("--t", type=int, help="strength for equally_spaced_lines")
    p.add_argument("--d", type=int, help="dimension for stroud_design")
    p.add_argument("--sign", type=int, default=1, choices=(1, -1))
    p.add_argument("--theta", type=float, help="rotation for mercedes_benz")
    p.add_argument("--angles", type=_angles, help="four angles for twelve_point_design")
    p.add_argument("--seed", type=int, help="random angles seed for twelve_point_design")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("solve", help="multi-restart search for a design")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", type=_mode, default=Mode.EQUAL_NORM)
    p.add_argument("--restarts", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("scan", help="sweep n and locate the jump to zero")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mode", type=_mode, default=Mode.EQUAL_NORM)
    p.add_argument("--n-from", type=int, required=True, dest="n_from")
    p.add_argument("--n-to", type=int, required=True, dest="n_to")
    p.add_argument("--restarts", type=int)
    p.add_argument("--bisect", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("verify", help="certify a design file")
    p.add_argument("design")
    p.add_argument("--t", type=int)
    p.add_argument("--oracle", choices=_ORACLES + ("all",), default="all")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("analyze", help="angle/norm structure and fingerprints")
    p.add_argument("design")
    p.add_argument("--angles", action="store_true")
    p.add_argument("--norms", action="store_true")
    p.add_argument("--fingerprint", type=int, choices=(2, 3))
    p.add_argument("--match-family", action="store_true", dest="match_family")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("compare", help="fingerprint two design files")
    p.add_argument("design_a")
    p.add_argument("design_b")
    p.add_argument("--fingerprint", type=int, choices=(2, 3), default=2)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    config_path = args.config or os.environ.get(CONFIG_ENV_VAR)
    try:
        cfg = CliConfig.from_file(config_path) if config_path else CliConfig()
    except ValueError as exc:
        _info(str(exc))
        return EXIT_USAGE
    try:
        return args.func(args, cfg)
    except ValueError as exc:
        _info(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
