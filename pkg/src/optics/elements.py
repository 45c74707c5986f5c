"""
elements.py

Transforms for the optical elements of the gate:
- beam splitters and polarization-sensitive beam splitters
- half-wave plates (Jones matrices on one spatial mode)
- polarizing beam splitters
- phase shifters
- the composite polarization-sensitive beam splitter (two PBS + four HWP)

Every constructor takes the registry the resulting Transform acts on and is the
identity on every mode it does not touch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from src.optics.engine import UNITARITY_TOL, Transform, compose, unitarity_defect
from src.optics.fock import DomainError, ModeId, ModeRegistry


@dataclass(frozen=True, eq=False)
class JonesMatrix:
    """
    2x2 action on the (V, H) creation operators of one spatial mode.
    Column 0 is the image of V, column 1 the image of H.
    """

    matrix: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise DomainError(f"Jones matrix must be 2x2, got shape {m.shape}")
        defect = unitarity_defect(m)
        if defect > UNITARITY_TOL:
            raise DomainError(f"Jones matrix {self.name or ''} is not unitary (defect {defect:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def rotation(cls, theta: float, name: str = "") -> "JonesMatrix":
        """V -> cos V + sin H, H -> -sin V + cos H (determinant +1)."""
        c, s = math.cos(theta), math.sin(theta)
        return cls(np.array([[c, -s], [s, c]]), name or f"ROT({math.degrees(theta):g})")

    @classmethod
    def reflection(cls, theta: float, name: str = "") -> "JonesMatrix":
        """V -> cos V + sin H, H -> sin V - cos H (determinant -1, a physical HWP)."""
        c, s = math.cos(theta), math.sin(theta)
        return cls(np.array([[c, s], [s, -c]]), name or f"REFL({math.degrees(theta):g})")

    def then(self, after: "JonesMatrix") -> "JonesMatrix":
        return JonesMatrix(after.matrix @ self.matrix)

    def scaled(self, phase: complex, name: str = "") -> "JonesMatrix":
        return JonesMatrix(phase * self.matrix, name)

    def close_to(self, other: "JonesMatrix", tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.matrix - other.matrix)) <= tol)


H45 = JonesMatrix.reflection(math.pi / 4, "H45")
R45 = JonesMatrix.rotation(math.pi / 4, "R45")
RM90 = JonesMatrix.rotation(-math.pi / 2, "RM90")
RP90 = JonesMatrix.rotation(math.pi / 2, "RP90")

JONES_PRESETS = {j.name: j for j in (H45, R45, RM90, RP90)}


def jones_preset(name: str) -> JonesMatrix:
    try:
        return JONES_PRESETS[name]
    except KeyError:
        raise DomainError(f"Unknown Jones preset {name!r}; known: {sorted(JONES_PRESETS)}") from None


def _check_probability(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value}")
    return float(value)


def _place(registry: ModeRegistry, blocks: Sequence[tuple]) -> np.ndarray:
    """Identity on the registry with 2x2 blocks written over (mode1, mode2) pairs."""
    matrix = np.eye(len(registry), dtype=complex)
    for mode1, mode2, block in blocks:
        i, j = registry.index(mode1), registry.index(mode2)
        matrix[np.ix_([i, j], [i, j])] = block
    return matrix


def _splitter_block(R: float) -> np.ndarray:
    # a1 -> sqrt(R) a3 + sqrt(1-R) a4,  a2 -> -sqrt(1-R) a3 + sqrt(R) a4
    r, t = math.sqrt(R), math.sqrt(1.0 - R)
    return np.array([[r, -t], [t, r]])


def beam_splitter(R: float, mode_in1: ModeId, mode_in2: ModeId, registry: ModeRegistry) -> Transform:
    _check_probability("R", R)
    return Transform(registry, _place(registry, [(mode_in1, mode_in2, _splitter_block(R))]))


def pol_beam_splitter(
    R_V: float,
    R_H: float,
    spatial_in1: str,
    spatial_in2: str,
    registry: ModeRegistry,
) -> Transform:
    """Independent splitters on the V and H sub-modes, same sign convention."""
    _check_probability("R_V", R_V)
    _check_probability("R_H", R_H)
    blocks = [
        (ModeId(spatial_in1, "V"), ModeId(spatial_in2, "V"), _splitter_block(R_V)),
        (ModeId(spatial_in1, "H"), ModeId(spatial_in2, "H"), _splitter_block(R_H)),
    ]
    return Transform(registry, _place(registry, blocks))


def hwp(j: Union[JonesMatrix, np.ndarray], spatial_mode: str, registry: ModeRegistry) -> Transform:
    if not isinstance(j, JonesMatrix):
        j = JonesMatrix(j)
    block = (ModeId(spatial_mode, "V"), ModeId(spatial_mode, "H"), j.matrix)
    return Transform(registry, _place(registry, [block]))


def pbs(spatial_in1: str, spatial_in2: str, registry: ModeRegistry) -> Transform:
    """H transmitted (label kept), V reflected (labels swapped); all entries +1."""
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    block = (ModeId(spatial_in1, "V"), ModeId(spatial_in2, "V"), swap)
    return Transform(registry, _place(registry, [block]))


def phase_shifter(phi: float, mode: ModeId, registry: ModeRegistry) -> Transform:
    matrix = np.eye(len(registry), dtype=complex)
    i = registry.index(mode)
    matrix[i, i] = np.exp(1j * phi)
    return Transform(registry, matrix)


# ---- Composite polarization-sensitive beam splitter ----

def v_arm_plate(alpha: float) -> JonesMatrix:
    return JonesMatrix.reflection(alpha, f"V-arm({math.degrees(alpha):g})")


def h_arm_plate(beta: float) -> JonesMatrix:
    # REFL(beta) with an extra pi retardation: places the aligned point at phi = 0
    return JonesMatrix.reflection(beta).scaled(-1.0, f"H-arm({math.degrees(beta):g})")


def composite_network_stages(
    alpha: float,
    beta: float,
    phi: float,
    spatial_in1: str,
    spatial_in2: str,
    registry: ModeRegistry,
) -> List[Transform]:
    """
    The two-PBS / four-HWP network in order of application.

    After the first plate and PBS, port 1 carries the H input photons of both
    ports and port 2 carries the V input photons; the alpha plate therefore
    sits in port 2 and the beta plate in port 1. The inter-arm phase phi is put
    on the V arm.
    """
    return [
        hwp(RM90, spatial_in2, registry),
        pbs(spatial_in1, spatial_in2, registry),
        hwp(v_arm_plate(alpha), spatial_in2, registry),
        hwp(h_arm_plate(beta), spatial_in1, registry),
        phase_shifter(phi, ModeId(spatial_in2, "V"), registry),
        phase_shifter(phi, ModeId(spatial_in2, "H"), registry),
        pbs(spatial_in1, spatial_in2, registry),
        hwp(RM90, spatial_in2, registry),
    ]


def composite_pol_bs(
    alpha: float,
    beta: float,
    phi: float,
    spatial_in1: str,
    spatial_in2: str,
    registry: ModeRegistry,
) -> Transform:
    """At phi = 0 equals pol_beam_splitter(cos^2 alpha, cos^2 beta) for alpha, beta in [0, pi/2]."""
    return compose(composite_network_stages(alpha, beta, phi, spatial_in1, spatial_in2, registry))
