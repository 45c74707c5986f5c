"""
gate_checks.py

Acceptance checks on the NS and CS gates.

Checks implemented:
- Simulated NS amplitudes vs the closed form over a reflectivity grid
- Vanishing NS amplitude at the critical reflectivity R = n / (n + 1)
- CS intermediate states vs their closed forms on random inputs
- Equal-magnitude diagonal and success probability at the magic point
- Simulated CS output vs the closed form
- No leakage out of the computational basis
- Linearity of the conditional map
- Completeness of the unconditioned ancilla statistics
"""

import math
from typing import Any, Dict, List

import numpy as np

from src.optics.engine import all_outcome_probabilities, post_select
from src.optics.fock import QubitAmplitudes, leakage, squared_norm, states_close
from src.optics.gates import (
    MAGIC_R_H,
    NsConfig,
    PlateConventions,
    ancilla_success_pattern,
    cs_closed_form,
    cs_gate,
    cs_intermediate_closed_form,
    cs_unconditioned_state,
    gate_diagonal,
    ns_closed_form,
    ns_closed_form_single,
    ns_gate,
    ns_input_state,
    ns_sign_regime,
)
from src.pipeline.run_pipeline import plate_conventions_from_config
from src.pipeline.run_summary import family_result, make_check, print_check_family

CRITICAL_PHOTON_NUMBERS = (1, 2, 3)


def random_amplitudes(rng: np.random.Generator) -> QubitAmplitudes:
    z = rng.normal(size=4) + 1j * rng.normal(size=4)
    z = z / np.linalg.norm(z)
    return QubitAmplitudes(*(complex(x) for x in z))


def random_ns_config(rng: np.random.Generator) -> NsConfig:
    r_v, r_h = rng.uniform(0.05, 0.95, size=2)
    return NsConfig(float(r_v), float(r_h))


def _amplitude_gap(x: QubitAmplitudes, y: QubitAmplitudes) -> float:
    return max(abs(p - q) for p, q in zip(x.as_tuple(), y.as_tuple()))


def _ns_grid_check(cfg: Dict[str, Any], tol: float) -> Dict[str, Any]:
    grid = [float(r) for r in cfg["ns_grid"]]
    max_n = int(cfg["ns_max_photons"])
    worst = 0.0
    for r_v in grid:
        for r_h in grid:
            ns_cfg = NsConfig(r_v, r_h)
            for m in range(max_n + 1):
                for n in range(max_n + 1):
                    out = ns_gate(ns_input_state(m, n), ns_cfg).state
                    expected = ns_closed_form(m, n, ns_cfg)
                    worst = max(worst, abs(out.amplitude((m, n)) - expected))
                    # the success branch keeps the photon numbers of the input
                    stray = sum(abs(amp) ** 2 for occ, amp in out.items() if occ != (m, n))
                    worst = max(worst, math.sqrt(stray))
    return make_check("ns_closed_form", worst <= tol, metric=worst, threshold=tol)


def _critical_check(tol: float) -> Dict[str, Any]:
    worst = 0.0
    regimes_ok = True
    for n in CRITICAL_PHOTON_NUMBERS:
        R = n / (n + 1.0)
        worst = max(worst, abs(ns_closed_form_single(n, R)))
        simulated = ns_gate(ns_input_state(0, n), NsConfig(R, R)).state
        worst = max(worst, math.sqrt(squared_norm(simulated)))
        regimes_ok = regimes_ok and ns_sign_regime(n, R) == "critical"
    return make_check("ns_critical_zero", worst <= tol and regimes_ok, metric=worst, threshold=tol)


def _cs_random_checks(
    cfg: Dict[str, Any],
    plates: PlateConventions,
    rng: np.random.Generator,
    tol: float,
) -> List[Dict[str, Any]]:
    worst_stage = 0.0
    worst_output = 0.0
    stages_ok = True

    for _ in range(int(cfg["random_cfgs"])):
        ns_cfg = random_ns_config(rng)
        for _ in range(int(cfg["random_states"])):
            amps = random_amplitudes(rng)
            report = cs_gate(amps, ns_cfg, plates)
            expected = cs_intermediate_closed_form(amps, ns_cfg)
            for name, closed in expected.items():
                simulated = getattr(report, name)
                stages_ok = stages_ok and states_close(simulated, closed, tol)
                keys = set(simulated.terms) | set(closed.terms)
                worst_stage = max(
                    [worst_stage] + [abs(simulated.amplitude(k) - closed.amplitude(k)) for k in keys]
                )
            worst_output = max(worst_output, _amplitude_gap(report.output, cs_closed_form(amps, ns_cfg)))

    return [
        make_check("cs_intermediate_states", stages_ok, metric=worst_stage, threshold=tol),
        make_check("cs_closed_form", worst_output <= tol, metric=worst_output, threshold=tol),
    ]


def _magic_checks(plates: PlateConventions, rng: np.random.Generator, tol: float) -> List[Dict[str, Any]]:
    magic = NsConfig.magic()
    diag = gate_diagonal(magic, plates)
    target = (MAGIC_R_H, MAGIC_R_H, MAGIC_R_H, -MAGIC_R_H)
    diag_gap = max(abs(d - t) for d, t in zip(diag, target))

    expected_p = (3.0 - math.sqrt(2.0)) ** 2 / 49.0
    p_gap = abs(cs_gate(random_amplitudes(rng), magic, plates).success_probability - expected_p)
    return [
        make_check("magic_diagonal", diag_gap <= tol, metric=diag_gap, threshold=tol),
        make_check("magic_success_probability", p_gap <= tol, metric=p_gap, threshold=tol,
                   expected=expected_p),
    ]


def _diagonality_check(cfg: Dict[str, Any], plates: PlateConventions, rng: np.random.Generator, tol: float) -> Dict[str, Any]:
    worst = 0.0
    configs = [NsConfig.magic()] + [random_ns_config(rng) for _ in range(int(cfg["random_cfgs"]))]
    for ns_cfg in configs:
        for k in range(4):
            report = cs_gate(QubitAmplitudes.basis(k), ns_cfg, plates)
            off_diagonal = [z for i, z in enumerate(report.output.as_tuple()) if i != k]
            worst = max([worst, leakage(report.psi4)] + [abs(z) for z in off_diagonal])
    return make_check("diagonal_no_leakage", worst <= tol, metric=worst, threshold=tol)


def _linearity_check(cfg: Dict[str, Any], plates: PlateConventions, rng: np.random.Generator, tol: float) -> Dict[str, Any]:
    worst = 0.0
    for _ in range(int(cfg["linearity_trials"])):
        ns_cfg = random_ns_config(rng)
        x, y = random_amplitudes(rng), random_amplitudes(rng)
        alpha, beta = (complex(z) for z in rng.normal(size=2) + 1j * rng.normal(size=2))
        mixed = QubitAmplitudes(*(alpha * p + beta * q for p, q in zip(x.as_tuple(), y.as_tuple())))

        out_x = cs_gate(x, ns_cfg, plates).output.as_tuple()
        out_y = cs_gate(y, ns_cfg, plates).output.as_tuple()
        out_mixed = cs_gate(mixed, ns_cfg, plates).output.as_tuple()
        worst = max(
            [worst] + [abs(m - (alpha * p + beta * q)) for m, p, q in zip(out_mixed, out_x, out_y)]
        )
    return make_check("linearity", worst <= tol, metric=worst, threshold=tol)


def _completeness_check(cfg: Dict[str, Any], plates: PlateConventions, rng: np.random.Generator, tol: float) -> Dict[str, Any]:
    worst = 0.0
    branch_ok = True
    for _ in range(int(cfg["random_cfgs"])):
        ns_cfg = random_ns_config(rng)
        amps = random_amplitudes(rng)
        state, detectors = cs_unconditioned_state(amps, ns_cfg, plates)
        total = sum(all_outcome_probabilities(state, detectors).values())
        worst = max(worst, abs(total - 1.0))

        branch = post_select(state, ancilla_success_pattern()).state
        branch_ok = branch_ok and states_close(branch, cs_gate(amps, ns_cfg, plates).psi4, tol)
    return make_check("ancilla_completeness", worst <= tol and branch_ok, metric=worst, threshold=tol)


def validate_gates(config: Dict[str, Any]) -> Dict[str, Any]:
    cfg = config["verify"]
    tolerances = config.get("tolerances", {})
    exact = float(tolerances.get("exact", 1e-12))
    oracle = float(tolerances.get("oracle", 1e-10))
    plates = plate_conventions_from_config(config)
    rng = np.random.default_rng(int(cfg["seed"]) + 1)

    checks = [_ns_grid_check(cfg, exact), _critical_check(exact)]
    checks.extend(_cs_random_checks(cfg, plates, rng, exact))
    checks.extend(_magic_checks(plates, rng, exact))
    checks.append(_diagonality_check(cfg, plates, rng, exact))
    checks.append(_linearity_check(cfg, plates, rng, exact))
    checks.append(_completeness_check(cfg, plates, rng, oracle))
    return family_result(checks)


def print_gate_results(results: Dict[str, Any], file=None) -> None:
    print_check_family("Gate Checks", results, file=file)


__all__ = ["random_amplitudes", "random_ns_config", "validate_gates", "print_gate_results"]
