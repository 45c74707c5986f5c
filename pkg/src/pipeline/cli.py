"""
cli.py

Command-line front end for the polarization-optics gate simulator.

Commands:
- ns            NS gate on |m_V, n_H> (simulated and closed form)
- cs            CS gate on a dual-rail input, every intermediate state reported
- solve         reflectivities equalizing the CS diagonal
- sweep         (R_V, R_H) fidelity landscape, JSON or CSV
- angles        reflectivities <-> composite-splitter plate angles
- composite-bs  transfer matrix of the two-PBS / four-HWP splitter
- verify        full acceptance pass with a pass/fail table

Usage:
    python -m src.pipeline.cli cs --a 0.5 --b 0.5 --c 0.5 --d 0.5 --magic
"""

from __future__ import annotations

import argparse
import copy
import math
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.optics.analysis import (
    SWEEP_COLUMNS,
    angles_to_reflectivity,
    reflectivity_to_angles,
    solve_magic_reflectivities,
    sweep,
    sweep_grid,
    sweep_to_frame,
    write_sweep_csv,
)
from src.optics.elements import composite_pol_bs, pol_beam_splitter
from src.optics.fock import DomainError, ModeRegistry, OpticsError, QubitAmplitudes, state_to_json
from src.optics.gates import (
    MAGIC_R_H,
    MAGIC_R_V,
    NsConfig,
    cs_gate,
    cs_report_to_json,
    ns_closed_form,
    ns_gate,
    ns_input_state,
    ns_sign_regime,
)
from src.pipeline.run_pipeline import (
    DEFAULT_CONFIG,
    default_ns_config,
    dumps,
    load_config,
    plate_conventions_from_config,
    write_payload,
)
from src.pipeline.run_summary import checks_table, sanitize_payload

COMMANDS = ("ns", "cs", "solve", "sweep", "angles", "composite-bs", "verify")
FORMATS = ("json", "csv")


@dataclass(frozen=True)
class RunConfig:
    command: str
    config_name: str = DEFAULT_CONFIG
    r_v: Optional[float] = None
    r_h: Optional[float] = None
    magic: bool = False
    m: int = 0
    n: int = 1
    amplitudes: Tuple[float, float, float, float] = (0.5, 0.5, 0.5, 0.5)
    alpha_deg: Optional[float] = None
    beta_deg: Optional[float] = None
    phi_rad: float = 0.0
    grid_steps: Optional[int] = None
    seed: Optional[int] = None
    output_path: Optional[str] = None
    format: str = "json"

    def validate(self) -> None:
        """Parameter checks run before any computation."""
        if self.command not in COMMANDS:
            raise DomainError(f"Unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise DomainError(f"Unknown format {self.format!r}")
        if self.format == "csv" and self.command != "sweep":
            raise DomainError("CSV output is only available for sweep")
        if self.magic and (self.r_v is not None or self.r_h is not None):
            raise DomainError("--magic cannot be combined with --r-v / --r-h")
        for name, value in (("--r-v", self.r_v), ("--r-h", self.r_h)):
            if value is not None and not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {value}")
        if self.m < 0 or self.n < 0:
            raise DomainError(f"Photon counts must be non-negative, got m={self.m}, n={self.n}")
        if self.grid_steps is not None and self.grid_steps < 2:
            raise DomainError(f"--grid-steps must be at least 2, got {self.grid_steps}")
        for name, value in (("--alpha-deg", self.alpha_deg), ("--beta-deg", self.beta_deg)):
            if value is not None and not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
        if not math.isfinite(self.phi_rad):
            raise DomainError(f"--phi-rad must be finite, got {self.phi_rad}")
        for name, value in zip("abcd", self.amplitudes):
            if not math.isfinite(value):
                raise DomainError(f"--{name} must be finite, got {value}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=DEFAULT_CONFIG,
                        help="YAML file in config/ (or a path)")
    common.add_argument("--out", default=None, help="Write the report here instead of stdout")
    common.add_argument("--format", choices=FORMATS, default="json")

    refl = argparse.ArgumentParser(add_help=False)
    refl.add_argument("--r-v", type=float, default=None, help="Vertical reflectivity R_V")
    refl.add_argument("--r-h", type=float, default=None, help="Horizontal reflectivity R_H")
    refl.add_argument("--magic", action="store_true",
                      help="Use the reflectivities that equalize the CS diagonal")

    plates = argparse.ArgumentParser(add_help=False)
    plates.add_argument("--alpha-deg", type=float, default=None, help="V-arm plate angle (degrees)")
    plates.add_argument("--beta-deg", type=float, default=None, help="H-arm plate angle (degrees)")

    p = argparse.ArgumentParser(
        prog="python -m src.pipeline.cli",
        description="Polarization-optics NS / CS gate simulator.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    ns = sub.add_parser("ns", parents=[common, refl], help="NS gate on |m_V, n_H>")
    ns.add_argument("--m", type=int, default=0, help="Vertically polarized photons")
    ns.add_argument("--n", type=int, default=1, help="Horizontally polarized photons")

    cs = sub.add_parser("cs", parents=[common, refl], help="CS gate on a dual-rail input")
    for name in "abcd":
        cs.add_argument(f"--{name}", type=float, default=0.5,
                        help=f"Amplitude {name} (used as given)")

    sub.add_parser("solve", parents=[common], help="Solve for the magic reflectivities")

    sw = sub.add_parser("sweep", parents=[common], help="Fidelity landscape over (R_V, R_H)")
    sw.add_argument("--grid-steps", type=int, default=None, help="Points per axis")
    sw.add_argument("--magic", action="store_true", help="Append the magic point to the grid")

    sub.add_parser("angles", parents=[common, refl, plates],
                   help="Convert between reflectivities and plate angles")

    cb = sub.add_parser("composite-bs", parents=[common, refl, plates],
                        help="Transfer matrix of the composite splitter")
    cb.add_argument("--phi-rad", type=float, default=0.0, help="Inter-arm phase (radians)")

    vf = sub.add_parser("verify", parents=[common], help="Run the full acceptance pass")
    vf.add_argument("--seed", type=int, default=None, help="Override the verify seed")
    return p


def parse_run_config(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(list(argv))
    cfg = RunConfig(
        command=args.command,
        config_name=args.config,
        r_v=getattr(args, "r_v", None),
        r_h=getattr(args, "r_h", None),
        magic=getattr(args, "magic", False),
        m=getattr(args, "m", 0),
        n=getattr(args, "n", 1),
        amplitudes=tuple(getattr(args, name, 0.5) for name in "abcd"),
        alpha_deg=getattr(args, "alpha_deg", None),
        beta_deg=getattr(args, "beta_deg", None),
        phi_rad=getattr(args, "phi_rad", 0.0),
        grid_steps=getattr(args, "grid_steps", None),
        seed=getattr(args, "seed", None),
        output_path=args.out,
        format=args.format,
    )
    cfg.validate()
    return cfg


def _complex(z: complex) -> Dict[str, float]:
    return {"re": float(z.real), "im": float(z.imag)}


def _reflectivities(run: RunConfig, config: Dict[str, Any]) -> NsConfig:
    if run.magic:
        return NsConfig.magic()
    base = default_ns_config(config)
    return NsConfig(
        base.r_v if run.r_v is None else run.r_v,
        base.r_h if run.r_h is None else run.r_h,
    )


# ---- Commands ----

def _cmd_ns(run: RunConfig, config: Dict[str, Any]) -> Dict[str, Any]:
    cfg = _reflectivities(run, config)
    outcome = ns_gate(ns_input_state(run.m, run.n), cfg)
    return {
        "command": "ns",
        "r_v": cfg.r_v,
        "r_h": cfg.r_h,
        "m": run.m,
        "n": run.n,
        "amplitude": _complex(outcome.state.amplitude((run.m, run.n))),
        "closed_form": _complex(ns_closed_form(run.m, run.n, cfg)),
        "success_probability": outcome.success_probability,
        "sign_regime": ns_sign_regime(run.n, cfg.r_h),
        "state": state_to_json(outcome.state),
    }


def _cmd_cs(run: RunConfig, config: Dict[str, Any]) -> Dict[str, Any]:
    cfg = _reflectivities(run, config)
    report = cs_gate(QubitAmplitudes(*run.amplitudes), cfg, plate_conventions_from_config(config))
    return cs_report_to_json(report)


def _cmd_solve(run: RunConfig, config: Dict[str, Any]) -> Dict[str, Any]:
    r_v, r_h = solve_magic_reflectivities()
    return {"r_v": r_v, "r_h": r_h}


def _sweep_rows(run: RunConfig, config: Dict[str, Any]):
    steps = run.grid_steps or int(config.get("sweep", {}).get("grid_steps", 21))
    grid = sweep_grid(steps)
    if run.magic:
        grid.append((MAGIC_R_V, MAGIC_R_H))
    return sweep(grid)


def _cmd_angles(run: RunConfig, config: Dict[str, Any]) -> Dict[str, Any]:
    if run.alpha_deg is not None or run.beta_deg is not None:
        if run.alpha_deg is None or run.beta_deg is None:
            raise DomainError("angles needs both --alpha-deg and --beta-deg")
        if run.magic:
            raise DomainError("--magic cannot be combined with --alpha-deg / --beta-deg")
        r_v, r_h = angles_to_reflectivity(math.radians(run.alpha_deg), math.radians(run.beta_deg))
        return {"alpha_deg": run.alpha_deg, "beta_deg": run.beta_deg, "r_v": r_v, "r_h": r_h}

    cfg = _reflectivities(run, config)
    alpha, beta = reflectivity_to_angles(cfg.r_v, cfg.r_h)
    return {
        "r_v": cfg.r_v,
        "r_h": cfg.r_h,
        "alpha_deg": math.degrees(alpha),
        "beta_deg": math.degrees(beta),
    }


def _cmd_composite(run: RunConfig, config: Dict[str, Any]) -> Dict[str, Any]:
    if run.alpha_deg is not None and run.beta_deg is not None:
        if run.magic:
            raise DomainError("--magic cannot be combined with --alpha-deg / --beta-deg")
        alpha, beta = math.radians(run.alpha_deg), math.radians(run.beta_deg)
    elif run.alpha_deg is None and run.beta_deg is None:
        cfg = _reflectivities(run, config)
        alpha, beta = reflectivity_to_angles(cfg.r_v, cfg.r_h)
    else:
        raise DomainError("composite-bs needs both --alpha-deg and --beta-deg")

    registry = ModeRegistry.from_spatial(["1", "2"])
    built = composite_pol_bs(alpha, beta, run.phi_rad, "1", "2", registry)
    r_v, r_h = angles_to_reflectivity(alpha, beta)
    target = pol_beam_splitter(r_v, r_h, "1", "2", registry)
    return {
        "alpha_deg": math.degrees(alpha),
        "beta_deg": math.degrees(beta),
        "phi_rad": run.phi_rad,
        "modes": registry.labels(),
        "matrix": [[_complex(z) for z in row] for row in built.matrix],
        "equivalent_r_v": r_v,
        "equivalent_r_h": r_h,
        "deviation_from_pol_beam_splitter": built.deviation(target),
    }


def _cmd_verify(run: RunConfig, config: Dict[str, Any]) -> Tuple[int, Dict[str, Any]]:
    # imported lazily: the agents pull in every check module
    from src.agents.coordinator_agent import CoordinatorAgent
    from src.agents.run_summary_agent import generate_verification_report

    config = copy.deepcopy(config)
    if run.seed is not None:
        config.setdefault("verify", {})["seed"] = run.seed

    if run.output_path is not None:
        summary = generate_verification_report(config, out_path=run.output_path)["summary"]
    else:
        summary = CoordinatorAgent().run(config_override=config)["summary"]

    table = checks_table(summary)
    print("\n=== Verification Checks ===", file=sys.stderr)
    print(table.to_string(index=False), file=sys.stderr)

    payload = {k: v for k, v in summary.items() if k != "metadata"}
    return (0 if summary.get("overall_passed") else 1), payload


HANDLERS = {
    "ns": _cmd_ns,
    "cs": _cmd_cs,
    "solve": _cmd_solve,
    "angles": _cmd_angles,
    "composite-bs": _cmd_composite,
}


def _execute(run: RunConfig) -> Tuple[int, str]:
    config = load_config(run.config_name)

    if run.command == "verify":
        code, payload = _cmd_verify(run, config)
        # the summary file was already written by the report agent
        return code, "" if run.output_path else dumps(sanitize_payload(payload))

    if run.command == "sweep":
        rows = _sweep_rows(run, config)
        if run.format == "csv":
            text = write_sweep_csv(rows)
        else:
            records = sweep_to_frame(rows).to_dict(orient="records")
            text = dumps(sanitize_payload({"columns": SWEEP_COLUMNS, "rows": records}))
    else:
        text = dumps(sanitize_payload(HANDLERS[run.command](run, config)))

    if write_payload(text, run.output_path) is not None:
        return 0, ""
    return 0, text


def run(argv: Sequence[str]) -> Tuple[int, str]:
    """
    Dispatch one command.

    Returns (exit code, stdout text). Exit 0 on success, 2 on a usage or
    validation error, 1 on a failed acceptance check or internal assertion.
    """
    try:
        run_cfg = parse_run_config(argv)
        return _execute(run_cfg)
    except SystemExit as exc:
        # argparse has already written usage / help to the right stream
        code = exc.code if isinstance(exc.code, int) else 2
        return code, ""
    except (OpticsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, ""
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1, ""


def main(argv: Optional[List[str]] = None) -> None:
    code, text = run(sys.argv[1:] if argv is None else argv)
    if text:
        sys.stdout.write(text)
    sys.exit(code)


if __name__ == "__main__":
    main()
