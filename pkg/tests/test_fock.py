# tests/test_fock.py

import math

import pytest

from src.optics.fock import (
    DomainError,
    ModeId,
    ModeRegistry,
    QubitAmplitudes,
    StructuralError,
    canonicalize,
    leakage,
    make_occupation,
    make_state,
    occupation_from_counts,
    qubit_state,
    read_qubit_amplitudes,
    squared_norm,
    state_from_json,
    state_to_json,
    states_close,
    vacuum,
)


def test_registry_orders_v_before_h_per_spatial_label():
    registry = ModeRegistry.from_spatial(["A", "B"])
    assert registry.labels() == ["A:V", "A:H", "B:V", "B:H"]
    assert registry.index(ModeId("B", "V")) == 2
    assert registry.spatial_labels() == ["A", "B"]


def test_registry_rejects_duplicates_and_bad_labels():
    with pytest.raises(StructuralError):
        ModeRegistry((ModeId("A", "H"), ModeId("A", "H")))
    with pytest.raises(StructuralError):
        ModeId("A", "D")
    with pytest.raises(StructuralError):
        ModeId.parse("no-colon")


def test_unregistered_mode_lookup_raises():
    registry = ModeRegistry.from_spatial(["A"])
    with pytest.raises(StructuralError):
        registry.index(ModeId("B", "H"))


def test_extend_and_drop_round_trip_the_registry():
    base = ModeRegistry.from_spatial(["A", "B"])
    extended = base.extend(["N"])
    assert extended.labels()[-2:] == ["N:V", "N:H"]
    assert extended.drop([ModeId("N", "V"), ModeId("N", "H")]) == base


def test_make_occupation_validates_length_and_sign():
    registry = ModeRegistry.from_spatial(["A"])
    with pytest.raises(StructuralError):
        make_occupation(registry, (1, 0, 0))
    with pytest.raises(DomainError):
        make_occupation(registry, (-1, 0))


def test_make_state_sums_duplicates_and_prunes():
    registry = ModeRegistry.from_spatial(["A"])
    state = make_state(registry, [((1, 0), 0.5), ((1, 0), 0.5), ((0, 1), 1e-14)])
    assert list(state.terms) == [(1, 0)]
    assert state.amplitude((1, 0)) == pytest.approx(1.0)
    assert state.amplitude((0, 1)) == 0j


def test_terms_are_sorted_by_occupation():
    registry = ModeRegistry.from_spatial(["A"])
    state = make_state(registry, [((2, 0), 1.0), ((0, 1), 1.0), ((1, 1), 1.0)])
    assert list(state.terms) == sorted(state.terms)


def test_vacuum_has_unit_norm_and_zero_photons():
    registry = ModeRegistry.from_spatial(["A", "B"])
    state = vacuum(registry)
    assert squared_norm(state) == pytest.approx(1.0)
    assert state.photon_number_sectors() == [0]


def test_states_close_up_to_global_phase():
    registry = ModeRegistry.from_spatial(["A"])
    s1 = make_state(registry, [((1, 0), 0.6), ((0, 1), 0.8)])
    s2 = s1.scale(1j)
    assert not states_close(s1, s2)
    assert states_close(s1, s2, up_to_global_phase=True)


def test_states_close_rejects_registry_mismatch():
    s1 = vacuum(ModeRegistry.from_spatial(["A"]))
    s2 = vacuum(ModeRegistry.from_spatial(["B"]))
    with pytest.raises(StructuralError):
        states_close(s1, s2)


def test_add_cancels_opposite_terms():
    registry = ModeRegistry.from_spatial(["A"])
    s = make_state(registry, [((1, 0), 0.3), ((0, 1), 0.4)])
    assert len(s.add(s.scale(-1.0))) == 0


def test_project_keeps_matching_terms_without_dropping_modes():
    registry = ModeRegistry.from_spatial(["A", "B"])
    state = make_state(registry, [((1, 0, 0, 1), 1.0), ((0, 1, 1, 0), 1.0)])
    projected = state.project({ModeId("B", "H"): 1})
    assert projected.registry == registry
    assert list(projected.terms) == [(1, 0, 0, 1)]


def test_qubit_state_places_horizontal_photons():
    registry = ModeRegistry.from_spatial(["A", "B"])
    amps = QubitAmplitudes(0.5, 0.5, 0.5, 0.5)
    state = qubit_state(registry, amps)
    one_one = occupation_from_counts(registry, {ModeId("A", "H"): 1, ModeId("B", "H"): 1})
    assert state.amplitude(one_one) == pytest.approx(0.5)
    assert read_qubit_amplitudes(state).as_tuple() == pytest.approx(amps.as_tuple())
    assert leakage(state) == 0.0


def test_leakage_counts_non_logical_terms():
    registry = ModeRegistry.from_spatial(["A", "B"])
    state = make_state(registry, [((0, 2, 0, 0), math.sqrt(0.5)), ((0, 0, 0, 0), math.sqrt(0.5))])
    assert leakage(state) == pytest.approx(0.5)


def test_qubit_amplitudes_normalized():
    amps = QubitAmplitudes(1.0, 1.0, 1.0, 1.0)
    assert not amps.is_normalized()
    assert amps.normalized().is_normalized()
    with pytest.raises(DomainError):
        QubitAmplitudes(0, 0, 0, 0).normalized()


def test_state_json_round_trip_preserves_terms():
    registry = ModeRegistry.from_spatial(["A"])
    state = make_state(registry, [((1, 0), 0.6j), ((0, 1), 0.8)])
    payload = state_to_json(state)
    assert payload["modes"] == ["A:V", "A:H"]
    assert states_close(state_from_json(payload, registry), state)


def test_canonicalize_is_idempotent():
    registry = ModeRegistry.from_spatial(["A", "B"])
    raw = make_state(registry, [((0, 1, 1, 0), 0.6), ((1, 0, 0, 1), -0.8j), ((2, 0, 0, 0), 1e-14)], tol=0.0)
    once = canonicalize(raw)
    assert (2, 0, 0, 0) not in once.terms
    twice = canonicalize(once)
    assert list(twice.terms.items()) == list(once.terms.items())
    assert twice.registry is once.registry
