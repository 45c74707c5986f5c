"""
analysis.py

Landscape tools around the CS gate:
- solving for the reflectivities that equalize the gate diagonal
- reflectivity <-> wave-plate angle conversion
- process fidelity of a diagonal gate against diag(1, 1, 1, -1)
- (R_V, R_H) sweeps with CSV output
- phase sensitivity of the composite polarization-sensitive beam splitter
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from src.optics.elements import composite_pol_bs
from src.optics.fock import DomainError, ModeRegistry, OpticsError, QubitAmplitudes
from src.optics.gates import NsConfig, cs_closed_form

CS_TARGET = (1.0, 1.0, 1.0, -1.0)
UNIFORM_INPUT = QubitAmplitudes(0.5, 0.5, 0.5, 0.5)
SWEEP_COLUMNS = [
    "r_v", "r_h",
    "amp00_re", "amp00_im", "amp01_re", "amp01_im",
    "amp10_re", "amp10_im", "amp11_re", "amp11_im",
    "success_prob", "fidelity",
]


class SolverError(OpticsError):
    """No admissible root of the magic-reflectivity equations."""


# ---- Magic reflectivities ----

def _r_v_from_r_h(r_h: float) -> float:
    # R_H = R_H R_V (2 - 3 R_H)  =>  R_V = 1 / (2 - 3 R_H)
    return 1.0 / (2.0 - 3.0 * r_h)


def _reduced_equation(r_h: float) -> float:
    # R_H = sqrt(R_V R_H)(1 - 2 R_H), squared, with R_V eliminated
    return _r_v_from_r_h(r_h) * (1.0 - 2.0 * r_h) ** 2 - r_h


def magic_point_residuals(r_v: float, r_h: float) -> Tuple[float, float]:
    """Residuals of the two equalities of the diagonal magnitudes."""
    k = math.sqrt(r_v * r_h) * (1.0 - 2.0 * r_h)
    l = r_h * r_v * (2.0 - 3.0 * r_h)
    return (k - r_h, l - r_h)


def magic_root_candidates(tol: float = 1e-15, scan_points: int = 400) -> List[Dict[str, float]]:
    """
    Every root of the reduced equation on (0, 2/3), with its R_V and whether it
    satisfies the original (unsquared) constraints inside the unit square.
    """
    pole = 2.0 / 3.0
    grid = np.linspace(1e-9, pole - 1e-9, scan_points)
    values = [_reduced_equation(x) for x in grid]

    candidates: List[Dict[str, float]] = []
    for lo, hi, f_lo, f_hi in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if f_lo == 0.0:
            r_h = float(lo)
        elif f_lo * f_hi < 0.0:
            r_h = float(brentq(_reduced_equation, lo, hi, xtol=tol))
        else:
            continue
        r_v = _r_v_from_r_h(r_h)
        res = magic_point_residuals(r_v, r_h) if r_v >= 0.0 else (math.inf, math.inf)
        admissible = 0.0 < r_v < 1.0 and 0.0 < r_h < 1.0 and max(abs(x) for x in res) < 1e-9
        candidates.append({"r_h": r_h, "r_v": r_v, "admissible": admissible})
    return candidates


def solve_magic_reflectivities(tol: float = 1e-15) -> Tuple[float, float]:
    """
    (R_V, R_H) making |R_H|, |sqrt(R_V R_H)(1-2R_H)| and |R_H R_V (2-3R_H)| equal.
    """
    if not tol > 0.0:
        raise DomainError(f"Solver tolerance must be positive, got {tol}")
    admissible = [c for c in magic_root_candidates(tol) if c["admissible"]]
    if not admissible:
        raise SolverError("No root of the magic-reflectivity equations inside (0, 1)^2")
    best = admissible[0]
    return best["r_v"], best["r_h"]


# ---- Angles ----

def reflectivity_to_angles(r_v: float, r_h: float) -> Tuple[float, float]:
    """R_V = cos^2 alpha, R_H = cos^2 beta; principal branch, radians."""
    for name, value in (("R_V", r_v), ("R_H", r_h)):
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1], got {value}")
    return math.acos(math.sqrt(r_v)), math.acos(math.sqrt(r_h))


def angles_to_reflectivity(alpha: float, beta: float) -> Tuple[float, float]:
    return math.cos(alpha) ** 2, math.cos(beta) ** 2


# ---- Fidelity ----

def process_fidelity(diag: Sequence[complex]) -> float:
    """
    |sum conj(d_i) z_i|^2 / (4 sum |d_i|^2) with z = (1, 1, 1, -1).
    Equals 1 iff diag is proportional to z.
    """
    d = np.asarray(diag, dtype=complex)
    if d.shape != (4,):
        raise DomainError(f"Gate diagonal must have 4 entries, got {d.shape}")
    norm_sq = float(np.sum(np.abs(d) ** 2))
    if not norm_sq > 0.0:
        raise DomainError("Process fidelity is undefined for an all-zero diagonal")
    overlap = np.sum(np.conj(d) * np.asarray(CS_TARGET))
    return min(1.0, float(abs(overlap) ** 2 / (4.0 * norm_sq)))


def closed_form_diagonal(cfg: NsConfig) -> Tuple[complex, ...]:
    return cs_closed_form(QubitAmplitudes(1.0, 1.0, 1.0, 1.0), cfg).as_tuple()


# ---- Sweep ----

@dataclass(frozen=True)
class SweepRow:
    r_v: float
    r_h: float
    amp_00: complex
    amp_01: complex
    amp_10: complex
    amp_11: complex
    success_probability: float
    process_fidelity: float


def sweep_grid(steps: int) -> List[Tuple[float, float]]:
    if steps < 2:
        raise DomainError(f"Sweep needs at least 2 grid steps, got {steps}")
    axis = np.linspace(0.0, 1.0, steps)
    return [(float(r_v), float(r_h)) for r_v in axis for r_h in axis]


def _sweep_row(r_v: float, r_h: float, amps: QubitAmplitudes) -> SweepRow:
    cfg = NsConfig(r_v, r_h)
    out = cs_closed_form(amps, cfg).as_tuple()
    diag = closed_form_diagonal(cfg)
    # a vanishing diagonal (R_H = 0) never implements the gate
    fidelity = process_fidelity(diag) if any(abs(x) > 0.0 for x in diag) else 0.0
    return SweepRow(
        r_v=r_v,
        r_h=r_h,
        amp_00=out[0],
        amp_01=out[1],
        amp_10=out[2],
        amp_11=out[3],
        success_probability=float(sum(abs(x) ** 2 for x in out)),
        process_fidelity=fidelity,
    )


def sweep(
    grid: Sequence[Tuple[float, float]],
    amps: QubitAmplitudes = UNIFORM_INPUT,
) -> List[SweepRow]:
    """One row per (R_V, R_H), in input order."""
    return [_sweep_row(float(r_v), float(r_h), amps) for r_v, r_h in grid]


def sweep_to_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    records = []
    for row in rows:
        # "+ 0.0" folds -0.0 into 0.0
        record = {"r_v": row.r_v + 0.0, "r_h": row.r_h + 0.0}
        for key, z in (("00", row.amp_00), ("01", row.amp_01), ("10", row.amp_10), ("11", row.amp_11)):
            record[f"amp{key}_re"] = float(z.real) + 0.0
            record[f"amp{key}_im"] = float(z.imag) + 0.0
        record["success_prob"] = row.success_probability + 0.0
        record["fidelity"] = row.process_fidelity + 0.0
        records.append(record)
    return pd.DataFrame.from_records(records, columns=SWEEP_COLUMNS)


def write_sweep_csv(rows: Sequence[SweepRow], path: Optional[Union[str, Path]] = None) -> str:
    """Write the sweep as CSV; returns the CSV text."""
    text = sweep_to_frame(rows).to_csv(index=False, float_format="%.12g", lineterminator="\n")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# ---- Phase sensitivity ----

def phase_sensitivity(
    alpha: float,
    beta: float,
    phi_samples: Sequence[float],
) -> List[Tuple[float, float]]:
    """Max-entry distance of the composite splitter at each phi from its phi = 0 form."""
    registry = ModeRegistry.from_spatial(["1", "2"])
    aligned = composite_pol_bs(alpha, beta, 0.0, "1", "2", registry)
    return [
        (float(phi), composite_pol_bs(alpha, beta, float(phi), "1", "2", registry).deviation(aligned))
        for phi in phi_samples
    ]
