"""
analysis_checks.py

Acceptance checks on the magic-point solver, the angle conversion, the
composite splitter and the fidelity landscape.
"""

import math
from typing import Any, Dict, List

import numpy as np

from src.optics.analysis import (
    magic_point_residuals,
    magic_root_candidates,
    phase_sensitivity,
    reflectivity_to_angles,
    solve_magic_reflectivities,
    sweep,
    sweep_grid,
)
from src.optics.elements import composite_pol_bs, pol_beam_splitter
from src.optics.fock import ModeRegistry
from src.optics.gates import MAGIC_R_H, MAGIC_R_V
from src.pipeline.run_summary import family_result, make_check, print_check_family

SOLVER_TOL = 1e-10
RESIDUAL_TOL = 1e-12
ANGLE_TARGETS_DEG = (29.5, 61.6)
ANGLE_TOL_DEG = 0.05
SPLITTER_TOL = 1e-9
DEPHASED_MIN_DEVIATION = 0.1
HALF_SPLIT_FIDELITY = 0.36765
HALF_SPLIT_TOL = 1e-3


def _solver_checks() -> List[Dict[str, Any]]:
    r_v, r_h = solve_magic_reflectivities()
    gap = max(abs(r_v - MAGIC_R_V), abs(r_h - MAGIC_R_H))
    residual = max(abs(x) for x in magic_point_residuals(r_v, r_h))

    candidates = magic_root_candidates()
    rejected = [c for c in candidates if not c["admissible"]]
    admissible = [c for c in candidates if c["admissible"]]
    return [
        make_check("magic_solver", gap <= SOLVER_TOL and residual < RESIDUAL_TOL,
                   metric=gap, threshold=SOLVER_TOL, residual=residual),
        make_check("spurious_root_rejected", len(admissible) == 1 and len(rejected) >= 1,
                   metric=len(rejected), candidates=candidates),
    ]


def _angle_check() -> Dict[str, Any]:
    alpha, beta = reflectivity_to_angles(MAGIC_R_V, MAGIC_R_H)
    degrees = (math.degrees(alpha), math.degrees(beta))
    gap = max(abs(d - t) for d, t in zip(degrees, ANGLE_TARGETS_DEG))
    return make_check("magic_angles", gap <= ANGLE_TOL_DEG, metric=gap, threshold=ANGLE_TOL_DEG,
                      alpha_deg=degrees[0], beta_deg=degrees[1])


def _composite_checks(cfg: Dict[str, Any], rng: np.random.Generator) -> List[Dict[str, Any]]:
    registry = ModeRegistry.from_spatial(["1", "2"])
    angle_pairs = [reflectivity_to_angles(MAGIC_R_V, MAGIC_R_H)]
    angle_pairs += [tuple(rng.uniform(0.0, math.pi / 2, size=2)) for _ in range(3)]

    worst_aligned = 0.0
    for alpha, beta in angle_pairs:
        target = pol_beam_splitter(math.cos(alpha) ** 2, math.cos(beta) ** 2, "1", "2", registry)
        built = composite_pol_bs(float(alpha), float(beta), 0.0, "1", "2", registry)
        worst_aligned = max(worst_aligned, built.deviation(target))

    alpha, beta = angle_pairs[0]
    dephased = phase_sensitivity(alpha, beta, [math.pi])[0][1]
    samples = np.linspace(0.0, 2.0 * math.pi, int(cfg.get("phase_samples", 16)))
    profile = phase_sensitivity(alpha, beta, samples)
    period_gap = abs(profile[-1][1] - profile[0][1])

    return [
        make_check("composite_splitter_aligned", worst_aligned <= SPLITTER_TOL,
                   metric=worst_aligned, threshold=SPLITTER_TOL),
        make_check("composite_splitter_phase", dephased > DEPHASED_MIN_DEVIATION and period_gap <= SPLITTER_TOL,
                   metric=dephased, threshold=DEPHASED_MIN_DEVIATION, period_gap=period_gap),
    ]


def _landscape_check(config: Dict[str, Any]) -> Dict[str, Any]:
    steps = int(config.get("sweep", {}).get("grid_steps", 21))
    rows = sweep(sweep_grid(steps) + [(MAGIC_R_V, MAGIC_R_H)])
    magic_row = rows[-1]
    by_point = {(row.r_v, row.r_h): row for row in rows[:-1]}

    corners = [by_point[(r_v, r_h)].process_fidelity for r_v in (0.0, 1.0) for r_h in (0.0, 1.0)]
    half = by_point[(0.5, 0.5)].process_fidelity if (0.5, 0.5) in by_point else None
    bounded = all(0.0 <= row.process_fidelity <= 1.0 for row in rows)

    passed = (
        magic_row.process_fidelity >= 1.0 - SPLITTER_TOL
        and all(f < magic_row.process_fidelity for f in corners)
        and bounded
        and (half is None or abs(half - HALF_SPLIT_FIDELITY) <= HALF_SPLIT_TOL)
    )
    return make_check(
        "fidelity_landscape",
        passed,
        metric=magic_row.process_fidelity,
        threshold=1.0 - SPLITTER_TOL,
        corner_fidelities=corners,
        half_split_fidelity=half,
        grid_points=len(rows) - 1,
    )


def validate_analysis(config: Dict[str, Any]) -> Dict[str, Any]:
    cfg = config.get("verify", {})
    rng = np.random.default_rng(int(cfg.get("seed", 0)) + 2)

    checks = _solver_checks()
    checks.append(_angle_check())
    checks.extend(_composite_checks(cfg, rng))
    checks.append(_landscape_check(config))
    return family_result(checks)


def print_analysis_results(results: Dict[str, Any], file=None) -> None:
    print_check_family("Analysis Checks", results, file=file)


__all__ = ["validate_analysis", "print_analysis_results"]
