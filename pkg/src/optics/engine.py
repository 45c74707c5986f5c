"""
engine.py

Evolution of Fock states through lossless linear-optical networks.

This module performs:
- apply: symbolic multinomial expansion of every basis term under a Transform
- transition_amplitude: independent permanent-based amplitude oracle
- post_select / all_outcome_probabilities: ideal photon-number-resolving detection

Transform convention: the creation operator of input mode i maps to
sum_j matrix[j, i] * (creation operator of output mode j).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from itertools import combinations_with_replacement
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

import numpy as np

from src.optics.fock import (
    DomainError,
    FockState,
    ModeId,
    ModeRegistry,
    Occupation,
    StructuralError,
    make_state,
    squared_norm,
    state_to_json,
)

UNITARITY_TOL = 1e-12


def unitarity_defect(matrix: np.ndarray) -> float:
    """max-entry norm of M^dagger M - I"""
    m = np.asarray(matrix, dtype=complex)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


@dataclass(frozen=True, eq=False)
class Transform:
    registry: ModeRegistry
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=complex)
        size = len(self.registry)
        if matrix.shape != (size, size):
            raise StructuralError(
                f"Transform matrix has shape {matrix.shape}, registry needs ({size}, {size})"
            )
        defect = unitarity_defect(matrix) if size else 0.0
        if defect > UNITARITY_TOL:
            raise DomainError(f"Transform is not unitary (defect {defect:.3e})")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    def then(self, after: "Transform") -> "Transform":
        """This transform followed by `after`."""
        if after.registry != self.registry:
            raise StructuralError("Cannot compose transforms over different registries")
        return Transform(self.registry, after.matrix @ self.matrix)

    def embed(self, registry: ModeRegistry) -> "Transform":
        """Lift onto a larger registry, acting as identity on the extra modes."""
        matrix = np.eye(len(registry), dtype=complex)
        idx = [registry.index(m) for m in self.registry]
        matrix[np.ix_(idx, idx)] = self.matrix
        return Transform(registry, matrix)

    def deviation(self, other: "Transform") -> float:
        """max-entry distance between two transforms"""
        if other.registry != self.registry:
            raise StructuralError("Cannot compare transforms over different registries")
        return float(np.max(np.abs(self.matrix - other.matrix)))


def identity_transform(registry: ModeRegistry) -> Transform:
    return Transform(registry, np.eye(len(registry), dtype=complex))


def compose(transforms: Sequence[Transform]) -> Transform:
    """Compose in order of application: transforms[0] acts first."""
    if not transforms:
        raise StructuralError("compose needs at least one transform")
    return reduce(lambda acc, t: acc.then(t), transforms[1:], transforms[0])


# ---- Multinomial expansion ----

def _multinomial_terms(column: np.ndarray, n: int) -> Iterator[Tuple[Occupation, complex]]:
    """
    Expand (sum_j column[j] a_j^dagger)^n into monomials.

    Yields (exponents k, n!/prod(k_j!) * prod(column[j]^k_j)).
    """
    size = len(column)
    support = [j for j in range(size) if column[j] != 0]
    for combo in combinations_with_replacement(support, n):
        counts = Counter(combo)
        k = tuple(counts.get(j, 0) for j in range(size))
        coef = math.factorial(n) / math.prod(math.factorial(c) for c in counts.values())
        value = complex(coef)
        for j, c in counts.items():
            value *= column[j] ** c
        yield k, value


def _expand_term(matrix: np.ndarray, occ: Occupation) -> Dict[Occupation, complex]:
    """Image of the normalized basis state |occ> as {output occupation: coefficient}."""
    size = len(occ)
    poly: Dict[Occupation, complex] = {(0,) * size: 1.0 + 0j}
    for i, n_i in enumerate(occ):
        if n_i == 0:
            continue
        factor = list(_multinomial_terms(matrix[:, i], n_i))
        nxt: Dict[Occupation, complex] = {}
        for k, c in poly.items():
            for dk, dc in factor:
                key = tuple(a + b for a, b in zip(k, dk))
                nxt[key] = nxt.get(key, 0j) + c * dc
        poly = nxt

    # (a^dagger)^k |0> = sqrt(k!) |k>;  |occ> = prod (a^dagger)^n / sqrt(n!) |0>
    norm_in = math.sqrt(math.prod(math.factorial(n) for n in occ))
    return {
        k: c * math.sqrt(math.prod(math.factorial(x) for x in k)) / norm_in
        for k, c in poly.items()
    }


def apply(state: FockState, t: Transform) -> FockState:
    if state.registry != t.registry:
        raise StructuralError(
            f"State registry {state.registry.labels()} does not match "
            f"transform registry {t.registry.labels()}"
        )
    acc: Dict[Occupation, complex] = {}
    for occ, amp in state.items():
        for out_occ, coef in _expand_term(t.matrix, occ).items():
            acc[out_occ] = acc.get(out_occ, 0j) + amp * coef
    return make_state(state.registry, acc.items())


def apply_all(state: FockState, transforms: Iterable[Transform]) -> FockState:
    for t in transforms:
        state = apply(state, t)
    return state


# ---- Permanent oracle ----

def _permanent_rows(rows: List[List[complex]]) -> complex:
    if not rows:
        return 1.0 + 0j
    first, rest = rows[0], rows[1:]
    total = 0j
    for j, x in enumerate(first):
        if x == 0:
            continue
        total += x * _permanent_rows([r[:j] + r[j + 1:] for r in rest])
    return total


def permanent(matrix: np.ndarray) -> complex:
    """Permanent by expansion along the first row (fine up to ~8x8)."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructuralError(f"Permanent needs a square matrix, got shape {m.shape}")
    return complex(_permanent_rows(m.tolist()))


def transition_amplitude(t: Transform, in_occ: Sequence[int], out_occ: Sequence[int]) -> complex:
    """
    <out_occ| U |in_occ> as perm(U[rows, cols]) / sqrt(prod in! * prod out!),
    rows repeating output mode j out_occ[j] times and cols repeating input
    mode i in_occ[i] times.
    """
    if len(in_occ) != len(t.registry) or len(out_occ) != len(t.registry):
        raise StructuralError("Occupation vectors must match the transform registry")
    if sum(in_occ) != sum(out_occ):
        return 0j
    cols = [i for i, n in enumerate(in_occ) for _ in range(n)]
    rows = [j for j, n in enumerate(out_occ) for _ in range(n)]
    if not cols:
        return 1.0 + 0j
    sub = t.matrix[np.ix_(rows, cols)]
    norm = math.sqrt(
        math.prod(math.factorial(n) for n in in_occ)
        * math.prod(math.factorial(n) for n in out_occ)
    )
    return permanent(sub) / norm


# ---- Detection ----

@dataclass(frozen=True)
class DetectionPattern:
    required: Mapping[ModeId, int]

    def __post_init__(self) -> None:
        for mode, n in self.required.items():
            if int(n) < 0:
                raise DomainError(f"Required count for {mode} must be non-negative, got {n}")

    def validate(self, registry: ModeRegistry) -> None:
        missing = [m.label for m in self.required if m not in registry]
        if missing:
            raise StructuralError(f"Detection pattern uses unregistered modes: {missing}")

    def to_json(self) -> Dict[str, int]:
        return {m.label: int(n) for m, n in sorted(self.required.items())}


@dataclass(frozen=True)
class ConditionalOutcome:
    """Post-selected branch: unnormalized state over the undetected modes."""

    state: FockState
    success_probability: float
    pattern: DetectionPattern


def post_select(state: FockState, pattern: DetectionPattern) -> ConditionalOutcome:
    registry = state.registry
    pattern.validate(registry)
    detected = {registry.index(m): int(n) for m, n in pattern.required.items()}
    keep_idx = [i for i in range(len(registry)) if i not in detected]
    reduced = registry.drop(pattern.required.keys())

    kept = [
        (tuple(occ[i] for i in keep_idx), amp)
        for occ, amp in state.items()
        if all(occ[i] == n for i, n in detected.items())
    ]
    out = make_state(reduced, kept)
    return ConditionalOutcome(state=out, success_probability=squared_norm(out), pattern=pattern)


def all_outcome_probabilities(
    state: FockState,
    detector_modes: Sequence[ModeId],
) -> Dict[Tuple[int, ...], float]:
    """
    Born-rule probabilities of every count pattern on the detector modes that
    occurs in the state. Keys are count tuples aligned with detector_modes.
    """
    idx = [state.registry.index(m) for m in detector_modes]
    probs: Dict[Tuple[int, ...], float] = {}
    for occ, amp in state.items():
        key = tuple(occ[i] for i in idx)
        probs[key] = probs.get(key, 0.0) + abs(amp) ** 2
    return dict(sorted(probs.items()))


def outcome_to_json(outcome: ConditionalOutcome) -> Dict[str, Any]:
    return {
        "pattern": outcome.pattern.to_json(),
        "probability": float(outcome.success_probability),
        "state": state_to_json(outcome.state),
    }


def photon_number_preserved(state: FockState, t: Transform) -> bool:
    """Every output term lies in a sector present in the input."""
    out = apply(state, t)
    return set(out.photon_number_sectors()) <= set(state.photon_number_sectors())
