"""
engine_checks.py

Acceptance checks on the Fock-space engine, driven by the `verify` section of
the simulation config.

Checks implemented:
- Multinomial expansion against the permanent oracle on random unitaries
- Norm preservation under random unitaries
- Photon-number conservation
- Sequential application vs the composed transform
- Hong-Ou-Mandel interference on a 50/50 splitter
- Completeness of the detection outcome distribution
"""

import time
from itertools import combinations_with_replacement
from typing import Any, Dict, List, Sequence

import numpy as np
from scipy.stats import unitary_group

from src.optics.elements import beam_splitter
from src.optics.engine import (
    Transform,
    all_outcome_probabilities,
    apply,
    photon_number_preserved,
    transition_amplitude,
)
from src.optics.fock import (
    FockState,
    ModeId,
    ModeRegistry,
    Occupation,
    make_state,
    occupation_from_counts,
    squared_norm,
    states_close,
)
from src.pipeline.run_summary import family_result, make_check, print_check_family

ORACLE_TIME_LIMIT_S = 30.0


def occupations_with_total(size: int, total: int) -> List[Occupation]:
    """All occupation vectors over `size` modes holding exactly `total` photons."""
    result = []
    for combo in combinations_with_replacement(range(size), total):
        occ = [0] * size
        for j in combo:
            occ[j] += 1
        result.append(tuple(occ))
    return sorted(result)


def line_registry(size: int) -> ModeRegistry:
    """`size` horizontally polarized modes m0, m1, ..."""
    return ModeRegistry(tuple(ModeId(f"m{i}", "H") for i in range(size)))


def random_transform(registry: ModeRegistry, rng: np.random.Generator) -> Transform:
    return Transform(registry, unitary_group.rvs(len(registry), random_state=rng))


def random_state(
    registry: ModeRegistry,
    rng: np.random.Generator,
    max_photons: int,
    n_terms: int = 3,
) -> FockState:
    """Normalized superposition of a few random occupations (mixed photon numbers allowed)."""
    size = len(registry)
    pool = [occ for n in range(max_photons + 1) for occ in occupations_with_total(size, n)]
    picks = rng.choice(len(pool), size=min(n_terms, len(pool)), replace=False)
    amps = rng.normal(size=len(picks)) + 1j * rng.normal(size=len(picks))
    amps = amps / np.linalg.norm(amps)
    return make_state(registry, [(pool[int(i)], complex(a)) for i, a in zip(picks, amps)])


def _oracle_check(cfg: Dict[str, Any], rng: np.random.Generator, tol: float) -> Dict[str, Any]:
    sizes = list(range(2, int(cfg["max_modes"]) + 1))
    max_photons = int(cfg["max_photons"])
    worst = 0.0
    compared = 0

    start = time.perf_counter()
    for trial in range(int(cfg["random_unitaries"])):
        registry = line_registry(sizes[trial % len(sizes)])
        t = random_transform(registry, rng)
        for total in range(max_photons + 1):
            outputs = occupations_with_total(len(registry), total)
            for in_occ in outputs:
                evolved = apply(make_state(registry, [(in_occ, 1.0)]), t)
                for out_occ in outputs:
                    diff = abs(evolved.amplitude(out_occ) - transition_amplitude(t, in_occ, out_occ))
                    worst = max(worst, diff)
                    compared += 1
    elapsed = time.perf_counter() - start

    return make_check(
        "oracle_equivalence",
        worst <= tol and elapsed < ORACLE_TIME_LIMIT_S,
        metric=worst,
        threshold=tol,
        amplitudes_compared=compared,
        time_limit_s=ORACLE_TIME_LIMIT_S,
    )


def _norm_and_conservation_checks(
    cfg: Dict[str, Any],
    rng: np.random.Generator,
    tol: float,
) -> List[Dict[str, Any]]:
    sizes = list(range(2, int(cfg["max_modes"]) + 1))
    max_photons = int(cfg["max_photons"])
    worst_norm = 0.0
    worst_compose = 0.0
    conserved = True
    composed_ok = True

    for trial in range(int(cfg["random_states"])):
        registry = line_registry(sizes[trial % len(sizes)])
        state = random_state(registry, rng, max_photons)
        t1 = random_transform(registry, rng)
        t2 = random_transform(registry, rng)

        once = apply(state, t1)
        worst_norm = max(worst_norm, abs(squared_norm(once) - squared_norm(state)))
        conserved = conserved and photon_number_preserved(state, t1)

        sequential = apply(once, t2)
        composed = apply(state, t1.then(t2))
        composed_ok = composed_ok and states_close(sequential, composed, tol)
        keys = set(sequential.terms) | set(composed.terms)
        worst_compose = max(
            [worst_compose] + [abs(sequential.amplitude(k) - composed.amplitude(k)) for k in keys]
        )

    return [
        make_check("unitarity_preservation", worst_norm <= tol, metric=worst_norm, threshold=tol),
        make_check("photon_conservation", conserved),
        make_check("composition", composed_ok, metric=worst_compose, threshold=tol),
    ]


def _hom_check(tol: float) -> Dict[str, Any]:
    registry = ModeRegistry.from_spatial(["1", "2"])
    h1, h2 = ModeId("1", "H"), ModeId("2", "H")
    state = make_state(registry, [(occupation_from_counts(registry, {h1: 1, h2: 1}), 1.0)])
    out = apply(state, beam_splitter(0.5, h1, h2, registry))

    coincidence = abs(out.amplitude(occupation_from_counts(registry, {h1: 1, h2: 1}))) ** 2
    bunched = [
        abs(out.amplitude(occupation_from_counts(registry, {h1: 2}))) ** 2,
        abs(out.amplitude(occupation_from_counts(registry, {h2: 2}))) ** 2,
    ]
    error = max([coincidence] + [abs(p - 0.5) for p in bunched])
    return make_check("hong_ou_mandel", error <= tol, metric=error, threshold=tol)


def _completeness_check(
    cfg: Dict[str, Any],
    rng: np.random.Generator,
    tol: float,
) -> Dict[str, Any]:
    size = int(cfg["max_modes"])
    registry = line_registry(size)
    detectors: Sequence[ModeId] = registry.modes[: max(1, size - 1)]
    worst = 0.0
    for _ in range(int(cfg["random_states"])):
        state = apply(random_state(registry, rng, int(cfg["max_photons"])), random_transform(registry, rng))
        total = sum(all_outcome_probabilities(state, detectors).values())
        worst = max(worst, abs(total - squared_norm(state)))
    return make_check("post_selection_completeness", worst <= tol, metric=worst, threshold=tol)


def validate_engine(config: Dict[str, Any]) -> Dict[str, Any]:
    cfg = config["verify"]
    tol = float(config.get("tolerances", {}).get("oracle", 1e-10))
    rng = np.random.default_rng(int(cfg["seed"]))

    checks = [_oracle_check(cfg, rng, tol)]
    checks.extend(_norm_and_conservation_checks(cfg, rng, tol))
    checks.append(_hom_check(tol))
    checks.append(_completeness_check(cfg, rng, tol))
    return family_result(checks)


def print_engine_results(results: Dict[str, Any], file=None) -> None:
    print_check_family("Engine Checks", results, file=file)


__all__ = [
    "occupations_with_total",
    "line_registry",
    "random_state",
    "random_transform",
    "validate_engine",
    "print_engine_results",
]
