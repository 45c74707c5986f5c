"""
fock.py

Modes, occupation vectors and sparse Fock-state values.

This module provides:
- ModeId / ModeRegistry: polarization-resolved optical modes in a fixed order
- FockState: sparse map occupation vector -> complex amplitude
- QubitAmplitudes: the (a, b, c, d) amplitudes of a two-qubit dual-rail input
- JSON (de)serialization of states
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

PRUNE_TOL = 1e-12
COMPARE_TOL = 1e-9
POLARIZATIONS = ("V", "H")

Occupation = Tuple[int, ...]


class OpticsError(ValueError):
    """Base class for every error raised by the optics package."""


class StructuralError(OpticsError):
    """Registry or shape mismatch between values that must agree."""


class DomainError(OpticsError):
    """A parameter lies outside the range the operation is defined on."""


@dataclass(frozen=True, order=True)
class ModeId:
    spatial: str
    polarization: str

    def __post_init__(self) -> None:
        if self.polarization not in POLARIZATIONS:
            raise StructuralError(
                f"Polarization must be one of {POLARIZATIONS}, got {self.polarization!r}"
            )
        if not self.spatial or ":" in self.spatial:
            raise StructuralError(f"Invalid spatial label {self.spatial!r}")

    @property
    def label(self) -> str:
        return f"{self.spatial}:{self.polarization}"

    @classmethod
    def parse(cls, label: str) -> "ModeId":
        """'C:V' -> ModeId('C', 'V')"""
        spatial, sep, pol = label.rpartition(":")
        if not sep:
            raise StructuralError(f"Mode label must look like 'A:H', got {label!r}")
        return cls(spatial, pol)

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class ModeRegistry:
    modes: Tuple[ModeId, ...]
    _index: Dict[ModeId, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        modes = tuple(self.modes)
        object.__setattr__(self, "modes", modes)
        index = {mode: i for i, mode in enumerate(modes)}
        if len(index) != len(modes):
            dupes = sorted({m.label for m in modes if modes.count(m) > 1})
            raise StructuralError(f"Duplicate modes in registry: {dupes}")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_spatial(cls, labels: Iterable[str]) -> "ModeRegistry":
        """One (V, H) pair per spatial label, V first."""
        return cls(tuple(ModeId(s, p) for s in labels for p in POLARIZATIONS))

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "ModeRegistry":
        return cls(tuple(ModeId.parse(label) for label in labels))

    def __len__(self) -> int:
        return len(self.modes)

    def __iter__(self) -> Iterator[ModeId]:
        return iter(self.modes)

    def __contains__(self, mode: object) -> bool:
        return mode in self._index

    def index(self, mode: ModeId) -> int:
        try:
            return self._index[mode]
        except KeyError:
            raise StructuralError(f"Mode {mode} is not registered") from None

    def labels(self) -> List[str]:
        return [m.label for m in self.modes]

    def spatial_labels(self) -> List[str]:
        seen: List[str] = []
        for m in self.modes:
            if m.spatial not in seen:
                seen.append(m.spatial)
        return seen

    def extend(self, spatial_labels: Iterable[str]) -> "ModeRegistry":
        """Append (V, H) pairs for new spatial labels at the end."""
        return ModeRegistry(self.modes + ModeRegistry.from_spatial(spatial_labels).modes)

    def drop(self, modes: Iterable[ModeId]) -> "ModeRegistry":
        removed = set(modes)
        for m in removed:
            self.index(m)
        return ModeRegistry(tuple(m for m in self.modes if m not in removed))


def make_occupation(registry: ModeRegistry, counts: Sequence[int]) -> Occupation:
    occ = tuple(int(c) for c in counts)
    if len(occ) != len(registry):
        raise StructuralError(
            f"Occupation vector has {len(occ)} entries, registry has {len(registry)} modes"
        )
    if any(c < 0 for c in occ):
        raise DomainError(f"Photon counts must be non-negative, got {occ}")
    return occ


def occupation_from_counts(registry: ModeRegistry, counts: Mapping[ModeId, int]) -> Occupation:
    """Build an occupation vector from a sparse {mode: count} map."""
    occ = [0] * len(registry)
    for mode, n in counts.items():
        occ[registry.index(mode)] = int(n)
    return make_occupation(registry, occ)


@dataclass(frozen=True)
class FockState:
    """
    Sparse superposition of Fock basis states over one registry.

    Terms are kept canonical: sorted by occupation vector, no amplitude with
    modulus below the prune tolerance. States derived from post-selection are
    deliberately left unnormalized.
    """

    registry: ModeRegistry
    terms: Mapping[Occupation, complex]

    def items(self) -> Iterator[Tuple[Occupation, complex]]:
        return iter(self.terms.items())

    def amplitude(self, occ: Sequence[int]) -> complex:
        return self.terms.get(tuple(occ), 0j)

    def __len__(self) -> int:
        return len(self.terms)

    def scale(self, factor: complex) -> "FockState":
        return make_state(self.registry, [(occ, factor * amp) for occ, amp in self.items()])

    def add(self, other: "FockState") -> "FockState":
        _require_same_registry(self, other)
        return make_state(self.registry, list(self.items()) + list(other.items()))

    def photon_number_sectors(self) -> List[int]:
        return sorted({sum(occ) for occ in self.terms})

    def project(self, modes: Mapping[ModeId, int]) -> "FockState":
        """Keep the terms whose counts on the given modes match, without stripping them."""
        idx = {self.registry.index(m): n for m, n in modes.items()}
        kept = [
            (occ, amp) for occ, amp in self.items()
            if all(occ[i] == n for i, n in idx.items())
        ]
        return make_state(self.registry, kept)


def _require_same_registry(s1: FockState, s2: FockState) -> None:
    if s1.registry != s2.registry:
        raise StructuralError(
            f"Registry mismatch: {s1.registry.labels()} vs {s2.registry.labels()}"
        )


def canonicalize(state: FockState, tol: float = PRUNE_TOL) -> FockState:
    terms = {
        occ: complex(amp)
        for occ, amp in sorted(state.terms.items())
        if abs(amp) >= tol
    }
    return FockState(state.registry, terms)


def make_state(
    registry: ModeRegistry,
    terms: Iterable[Tuple[Sequence[int], complex]],
    tol: float = PRUNE_TOL,
) -> FockState:
    """
    Build a canonical FockState. Duplicate occupation vectors have their
    amplitudes summed before pruning.
    """
    acc: Dict[Occupation, complex] = {}
    for counts, amp in terms:
        occ = make_occupation(registry, counts)
        acc[occ] = acc.get(occ, 0j) + complex(amp)
    return canonicalize(FockState(registry, acc), tol)


def vacuum(registry: ModeRegistry) -> FockState:
    return make_state(registry, [((0,) * len(registry), 1.0)])


def squared_norm(state: FockState) -> float:
    return float(sum(abs(amp) ** 2 for amp in state.terms.values()))


def states_close(
    s1: FockState,
    s2: FockState,
    tol: float = COMPARE_TOL,
    up_to_global_phase: bool = False,
) -> bool:
    """
    Term-wise comparison of two states after canonicalization.

    With up_to_global_phase the second state is first rotated by the phase
    of its overlap with the first.
    """
    _require_same_registry(s1, s2)
    a = canonicalize(s1)
    b = canonicalize(s2)

    phase = 1.0 + 0j
    if up_to_global_phase:
        overlap = sum(np.conj(amp) * b.amplitude(occ) for occ, amp in a.items())
        if abs(overlap) > 0.0:
            phase = np.conj(overlap) / abs(overlap)

    keys = set(a.terms) | set(b.terms)
    return all(abs(a.amplitude(k) - phase * b.amplitude(k)) <= tol for k in keys)


@dataclass(frozen=True)
class QubitAmplitudes:
    """Amplitudes of |00>, |01>, |10>, |11> (first digit: mode A, second: mode B)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def as_tuple(self) -> Tuple[complex, complex, complex, complex]:
        return (complex(self.a), complex(self.b), complex(self.c), complex(self.d))

    def squared_norm(self) -> float:
        return float(sum(abs(x) ** 2 for x in self.as_tuple()))

    def is_normalized(self, tol: float = COMPARE_TOL) -> bool:
        return abs(self.squared_norm() - 1.0) <= tol

    def normalized(self) -> "QubitAmplitudes":
        norm = math.sqrt(self.squared_norm())
        if norm == 0.0:
            raise DomainError("Cannot normalize all-zero qubit amplitudes")
        return QubitAmplitudes(*(x / norm for x in self.as_tuple()))

    @classmethod
    def basis(cls, index: int) -> "QubitAmplitudes":
        values = [0j] * 4
        values[index] = 1.0 + 0j
        return cls(*values)


# (photons in A, photons in B) for a, b, c, d
QUBIT_BASIS: Tuple[Tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))


def qubit_state(
    registry: ModeRegistry,
    amps: QubitAmplitudes,
    spatial_a: str = "A",
    spatial_b: str = "B",
) -> FockState:
    """Dual-rail two-qubit input: every photon horizontally polarized."""
    mode_a = ModeId(spatial_a, "H")
    mode_b = ModeId(spatial_b, "H")
    terms = []
    for (n_a, n_b), amp in zip(QUBIT_BASIS, amps.as_tuple()):
        terms.append((occupation_from_counts(registry, {mode_a: n_a, mode_b: n_b}), amp))
    return make_state(registry, terms)


def read_qubit_amplitudes(
    state: FockState,
    spatial_a: str = "A",
    spatial_b: str = "B",
) -> QubitAmplitudes:
    """Read the computational-basis amplitudes back off a state."""
    mode_a = ModeId(spatial_a, "H")
    mode_b = ModeId(spatial_b, "H")
    values = [
        state.amplitude(occupation_from_counts(state.registry, {mode_a: n_a, mode_b: n_b}))
        for n_a, n_b in QUBIT_BASIS
    ]
    return QubitAmplitudes(*values)


def leakage(state: FockState, spatial_a: str = "A", spatial_b: str = "B") -> float:
    """Squared norm carried by terms outside the computational basis."""
    registry = state.registry
    mode_a = ModeId(spatial_a, "H")
    mode_b = ModeId(spatial_b, "H")
    logical = {
        occupation_from_counts(registry, {mode_a: n_a, mode_b: n_b})
        for n_a, n_b in QUBIT_BASIS
    }
    return float(sum(abs(amp) ** 2 for occ, amp in state.items() if occ not in logical))


# ---- JSON ----

def state_to_json(state: FockState) -> Dict[str, Any]:
    return {
        "modes": state.registry.labels(),
        "terms": [
            {"occ": list(occ), "re": float(amp.real), "im": float(amp.imag)}
            for occ, amp in state.items()
        ],
    }


def state_from_json(payload: Mapping[str, Any], registry: Optional[ModeRegistry] = None) -> FockState:
    parsed = ModeRegistry.from_labels(payload["modes"])
    if registry is not None and registry != parsed:
        raise StructuralError(
            f"Serialized modes {parsed.labels()} do not match registry {registry.labels()}"
        )
    terms = [(t["occ"], complex(t["re"], t["im"])) for t in payload["terms"]]
    return make_state(parsed, terms)
