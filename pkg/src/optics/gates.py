"""
gates.py

Post-selected gates built from polarization-sensitive beam splitters:
- NS (nonlinear sign-shift) gate: closed form and full simulation
- CS (conditional sign-flip) gate: the combine / NS / exchange / NS / split
  pipeline on modes A and B, with every intermediate state recorded

The two input spatial modes are combined into mode A (the PBS keeps H photons
in their port and sends V photons across), so the "combined mode" of the
intermediate states is the A port.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.optics.elements import (
    H45,
    R45,
    RM90,
    JonesMatrix,
    hwp,
    jones_preset,
    pbs,
    pol_beam_splitter,
)
from src.optics.engine import (
    ConditionalOutcome,
    DetectionPattern,
    Transform,
    apply,
    apply_all,
    post_select,
)
from src.optics.fock import (
    DomainError,
    FockState,
    ModeId,
    ModeRegistry,
    QubitAmplitudes,
    StructuralError,
    make_state,
    occupation_from_counts,
    qubit_state,
    read_qubit_amplitudes,
    state_to_json,
)

MAGIC_R_V = 5.0 - 3.0 * math.sqrt(2.0)
MAGIC_R_H = (3.0 - math.sqrt(2.0)) / 7.0

CS_SPATIAL = ("A", "B")
COMBINED = "A"
ANCILLAS = ("N1", "N2")


@dataclass(frozen=True)
class NsConfig:
    r_v: float
    r_h: float

    def __post_init__(self) -> None:
        for name, value in (("R_V", self.r_v), ("R_H", self.r_h)):
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {value}")

    @classmethod
    def magic(cls) -> "NsConfig":
        return cls(MAGIC_R_V, MAGIC_R_H)


# ---- NS gate ----

def ns_closed_form(m: int, n: int, cfg: NsConfig) -> complex:
    """
    Success-branch amplitude multiplying |m_V; n_H>:
    (sqrt R_V)^m (sqrt R_H)^(n-1) [R_H - n (1 - R_H)].
    """
    if m < 0 or n < 0:
        raise DomainError(f"Photon counts must be non-negative, got m={m}, n={n}")
    v_factor = math.sqrt(cfg.r_v) ** m
    if n == 0:
        # (sqrt R_H)^-1 * R_H, including the R_H = 0 corner
        return complex(v_factor * math.sqrt(cfg.r_h))
    bracket = cfg.r_h - n * (1.0 - cfg.r_h)
    return complex(v_factor * math.sqrt(cfg.r_h) ** (n - 1) * bracket)


def ns_closed_form_single(n: int, R: float) -> complex:
    """Non-polarizing NS gate of reflectivity R acting on |n>."""
    return ns_closed_form(0, n, NsConfig(R, R))


def ns_sign_regime(n: int, R: float, tol: float = 1e-12) -> str:
    """'unchanged' for n < R/(1-R), 'critical' at equality, 'flipped' above."""
    excess = n * (1.0 - R) - R
    if abs(excess) <= tol:
        return "critical"
    return "flipped" if excess > 0 else "unchanged"


def _single_spatial(state: FockState, spatial: Optional[str]) -> str:
    labels = state.registry.spatial_labels()
    if spatial is None:
        if len(labels) != 1:
            raise StructuralError(
                f"NS input must live on one spatial mode, got {labels}; pass spatial="
            )
        spatial = labels[0]
    if spatial not in labels:
        raise StructuralError(f"Spatial mode {spatial!r} not in registry {labels}")
    for pol in ("V", "H"):
        if ModeId(spatial, pol) not in state.registry:
            raise StructuralError(f"Spatial mode {spatial!r} is missing its {pol} sub-mode")
    return spatial


def ns_gate(
    state: FockState,
    cfg: NsConfig,
    spatial: Optional[str] = None,
    ancilla: str = "N",
) -> ConditionalOutcome:
    """
    Polarization NS gate on one spatial mode.

    Adjoins an ancilla mode holding |1_H>, mixes it with the signal on a
    splitter of reflectivities (R_V, R_H), and keeps the branch with exactly
    one H photon and no V photon at the ancilla output. Other modes of the
    registry are left untouched.
    """
    spatial = _single_spatial(state, spatial)
    registry = state.registry
    if ancilla in registry.spatial_labels():
        raise StructuralError(f"Ancilla label {ancilla!r} already used in the registry")

    extended = registry.extend([ancilla])
    lifted = make_state(extended, [(occ + (0, 1), amp) for occ, amp in state.items()])
    mixed = apply(lifted, pol_beam_splitter(cfg.r_v, cfg.r_h, spatial, ancilla, extended))
    pattern = DetectionPattern({ModeId(ancilla, "V"): 0, ModeId(ancilla, "H"): 1})
    return post_select(mixed, pattern)


def ns_input_state(m: int, n: int, spatial: str = "C") -> FockState:
    registry = ModeRegistry.from_spatial([spatial])
    return make_state(registry, [((m, n), 1.0)])


# ---- CS gate ----

@dataclass(frozen=True)
class PlateConventions:
    """Jones matrices of the five wave plates of the CS gate."""

    combine: JonesMatrix = RM90
    first_mix: JonesMatrix = H45
    exchange: JonesMatrix = RM90
    second_mix: JonesMatrix = R45
    split: JonesMatrix = RM90

    @classmethod
    def from_names(cls, names: Dict[str, str]) -> "PlateConventions":
        return cls(**{key: jones_preset(value) for key, value in names.items()})


@dataclass(frozen=True)
class CsReport:
    """
    psi1..psi4 live on the A/B registry. The combined mode that the NS
    gates act on is the A port, so "A:*" in the JSON is that mode.
    """

    input: QubitAmplitudes
    psi1: FockState
    psi2: FockState
    psi3: FockState
    psi4: FockState
    output: QubitAmplitudes
    success_probability: float
    gate_diagonal: Tuple[complex, complex, complex, complex]
    ns_probabilities: Tuple[float, float] = field(default=(0.0, 0.0))


def cs_registry() -> ModeRegistry:
    return ModeRegistry.from_spatial(CS_SPATIAL)


def _combine_stages(registry: ModeRegistry, plates: PlateConventions) -> List[Transform]:
    return [
        hwp(plates.combine, "B", registry),
        pbs("A", "B", registry),
        hwp(plates.first_mix, COMBINED, registry),
    ]


def _split_stages(registry: ModeRegistry, plates: PlateConventions) -> List[Transform]:
    return [
        hwp(plates.second_mix, COMBINED, registry),
        pbs("A", "B", registry),
        hwp(plates.split, "B", registry),
    ]


def _run_pipeline(
    amps: QubitAmplitudes,
    cfg: NsConfig,
    plates: PlateConventions,
) -> Dict[str, Any]:
    registry = cs_registry()
    psi1 = apply_all(qubit_state(registry, amps), _combine_stages(registry, plates))

    first = ns_gate(psi1, cfg, spatial=COMBINED, ancilla=ANCILLAS[0])
    psi2 = first.state

    exchanged = apply(psi2, hwp(plates.exchange, COMBINED, registry))
    second = ns_gate(exchanged, cfg, spatial=COMBINED, ancilla=ANCILLAS[1])
    psi3 = second.state

    psi4 = apply_all(psi3, _split_stages(registry, plates))

    return {
        "psi1": psi1,
        "psi2": psi2,
        "psi3": psi3,
        "psi4": psi4,
        "ns_probabilities": (first.success_probability, second.success_probability),
    }


def gate_diagonal(cfg: NsConfig, plates: PlateConventions = PlateConventions()) -> Tuple[complex, ...]:
    """Raw (unnormalized) output amplitude of each computational basis input."""
    diag = []
    for k in range(4):
        psi4 = _run_pipeline(QubitAmplitudes.basis(k), cfg, plates)["psi4"]
        diag.append(read_qubit_amplitudes(psi4).as_tuple()[k])
    return tuple(diag)


def cs_gate(
    amps: QubitAmplitudes,
    cfg: NsConfig,
    plates: PlateConventions = PlateConventions(),
) -> CsReport:
    stages = _run_pipeline(amps, cfg, plates)
    p_first, p_joint = stages["ns_probabilities"]
    return CsReport(
        input=amps,
        psi1=stages["psi1"],
        psi2=stages["psi2"],
        psi3=stages["psi3"],
        psi4=stages["psi4"],
        output=read_qubit_amplitudes(stages["psi4"]),
        # the second NS outcome is conditioned on the first, so its norm is the joint probability
        success_probability=p_joint,
        gate_diagonal=gate_diagonal(cfg, plates),
        ns_probabilities=(p_first, p_joint),
    )


def cs_closed_form(amps: QubitAmplitudes, cfg: NsConfig) -> QubitAmplitudes:
    r_v, r_h = cfg.r_v, cfg.r_h
    k = math.sqrt(r_v * r_h) * (1.0 - 2.0 * r_h)
    return QubitAmplitudes(
        r_h * amps.a,
        k * amps.b,
        k * amps.c,
        -r_h * r_v * (2.0 - 3.0 * r_h) * amps.d,
    )


def cs_intermediate_closed_form(amps: QubitAmplitudes, cfg: NsConfig) -> Dict[str, FockState]:
    """Transcribed closed forms of psi1..psi4 on the A/B registry."""
    registry = cs_registry()
    a, b, c, d = amps.as_tuple()
    r_v, r_h = cfg.r_v, cfg.r_h
    s2 = math.sqrt(2.0)
    k = math.sqrt(r_v * r_h) * (1.0 - 2.0 * r_h)
    l = r_h * r_v * (2.0 - 3.0 * r_h)

    def comb(v: int, h: int) -> Tuple[int, ...]:
        return occupation_from_counts(
            registry, {ModeId(COMBINED, "V"): v, ModeId(COMBINED, "H"): h}
        )

    def split(n_a: int, n_b: int) -> Tuple[int, ...]:
        return occupation_from_counts(registry, {ModeId("A", "H"): n_a, ModeId("B", "H"): n_b})

    psi1 = make_state(registry, [
        (comb(0, 0), a),
        (comb(0, 1), (b - c) / s2),
        (comb(1, 0), (b + c) / s2),
        (comb(0, 2), -d / s2),
        (comb(2, 0), d / s2),
    ])
    psi2 = make_state(registry, [
        (comb(0, 0), math.sqrt(r_h) * a),
        (comb(0, 1), -(1.0 - 2.0 * r_h) * (b - c) / s2),
        (comb(1, 0), math.sqrt(r_v * r_h) * (b + c) / s2),
        (comb(0, 2), math.sqrt(r_h) * (2.0 - 3.0 * r_h) * d / s2),
        (comb(2, 0), r_v * math.sqrt(r_h) * d / s2),
    ])
    psi3 = make_state(registry, [
        (comb(0, 0), r_h * a),
        (comb(0, 1), k * (b + c) / s2),
        (comb(1, 0), -k * (b - c) / s2),
        (comb(0, 2), -l * d / s2),
        (comb(2, 0), l * d / s2),
    ])
    psi4 = make_state(registry, [
        (split(0, 0), r_h * a),
        (split(0, 1), k * b),
        (split(1, 0), k * c),
        (split(1, 1), -l * d),
    ])
    return {"psi1": psi1, "psi2": psi2, "psi3": psi3, "psi4": psi4}


def cs_unconditioned_state(
    amps: QubitAmplitudes,
    cfg: NsConfig,
    plates: PlateConventions = PlateConventions(),
) -> Tuple[FockState, List[ModeId]]:
    """
    Full pre-measurement state over A, B and both ancilla modes, plus the
    ancilla detector modes. No branch is discarded.
    """
    registry = ModeRegistry.from_spatial(CS_SPATIAL + ANCILLAS)
    ancilla_h = {ModeId(label, "H"): 1 for label in ANCILLAS}
    base = cs_registry()
    signal = qubit_state(base, amps)
    state = make_state(registry, [
        (occ + occupation_from_counts(ModeRegistry.from_spatial(ANCILLAS), ancilla_h), amp)
        for occ, amp in signal.items()
    ])

    stages: List[Transform] = [t.embed(registry) for t in _combine_stages(base, plates)]
    stages.append(pol_beam_splitter(cfg.r_v, cfg.r_h, COMBINED, ANCILLAS[0], registry))
    stages.append(hwp(plates.exchange, COMBINED, registry))
    stages.append(pol_beam_splitter(cfg.r_v, cfg.r_h, COMBINED, ANCILLAS[1], registry))
    stages.extend(t.embed(registry) for t in _split_stages(base, plates))
    state = apply_all(state, stages)

    detectors = [ModeId(label, pol) for label in ANCILLAS for pol in ("V", "H")]
    return state, detectors


def ancilla_success_pattern() -> DetectionPattern:
    return DetectionPattern({
        ModeId(label, pol): (1 if pol == "H" else 0)
        for label in ANCILLAS
        for pol in ("V", "H")
    })


# ---- JSON ----

def _complex_json(z: complex) -> Dict[str, float]:
    return {"re": float(z.real), "im": float(z.imag)}


def amplitudes_to_json(amps: QubitAmplitudes) -> Dict[str, Dict[str, float]]:
    return {name: _complex_json(z) for name, z in zip("abcd", amps.as_tuple())}


def cs_report_to_json(report: CsReport) -> Dict[str, Any]:
    return {
        "input": amplitudes_to_json(report.input),
        "psi1": state_to_json(report.psi1),
        "psi2": state_to_json(report.psi2),
        "psi3": state_to_json(report.psi3),
        "psi4": state_to_json(report.psi4),
        "output": amplitudes_to_json(report.output),
        "success_probability": float(report.success_probability),
        "gate_diagonal": [_complex_json(z) for z in report.gate_diagonal],
    }
