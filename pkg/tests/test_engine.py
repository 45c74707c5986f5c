# tests/test_engine.py

import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from src.optics.elements import beam_splitter
from src.optics.engine import (
    DetectionPattern,
    Transform,
    all_outcome_probabilities,
    apply,
    compose,
    identity_transform,
    outcome_to_json,
    permanent,
    post_select,
    transition_amplitude,
)
from src.optics.fock import (
    DomainError,
    ModeId,
    ModeRegistry,
    StructuralError,
    make_state,
    squared_norm,
    states_close,
)
from src.pipeline.engine_checks import line_registry, occupations_with_total, random_state


def _two_mode():
    registry = ModeRegistry.from_spatial(["1", "2"])
    return registry, ModeId("1", "H"), ModeId("2", "H")


def test_transform_rejects_wrong_shape_and_non_unitary():
    registry = line_registry(2)
    with pytest.raises(StructuralError):
        Transform(registry, np.eye(3))
    with pytest.raises(DomainError):
        Transform(registry, np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_hong_ou_mandel_amplitudes():
    registry, h1, h2 = _two_mode()
    state = make_state(registry, [((0, 1, 0, 1), 1.0)])
    out = apply(state, beam_splitter(0.5, h1, h2, registry))

    assert out.amplitude((0, 1, 0, 1)) == 0j
    assert out.amplitude((0, 2, 0, 0)) == pytest.approx(-1 / math.sqrt(2))
    assert out.amplitude((0, 0, 0, 2)) == pytest.approx(1 / math.sqrt(2))


def test_single_photon_follows_matrix_column():
    registry, h1, h2 = _two_mode()
    t = beam_splitter(0.3, h1, h2, registry)
    out = apply(make_state(registry, [((0, 1, 0, 0), 1.0)]), t)
    assert out.amplitude((0, 1, 0, 0)) == pytest.approx(math.sqrt(0.3))
    assert out.amplitude((0, 0, 0, 1)) == pytest.approx(math.sqrt(0.7))


def test_vacuum_is_invariant():
    registry = line_registry(3)
    rng = np.random.default_rng(1)
    t = Transform(registry, unitary_group.rvs(3, random_state=rng))
    vac = make_state(registry, [((0, 0, 0), 1.0)])
    assert states_close(apply(vac, t), vac)


def test_apply_rejects_foreign_registry():
    registry, h1, h2 = _two_mode()
    other = line_registry(4)
    with pytest.raises(StructuralError):
        apply(make_state(other, [((1, 0, 0, 0), 1.0)]), beam_splitter(0.5, h1, h2, registry))


def test_permanent_small_cases():
    assert permanent(np.zeros((0, 0))) == 1
    assert permanent(np.array([[2.0]])) == 2
    assert permanent(np.array([[1.0, 2.0], [3.0, 4.0]])) == pytest.approx(10.0)
    assert permanent(np.ones((3, 3))) == pytest.approx(6.0)
    with pytest.raises(StructuralError):
        permanent(np.ones((2, 3)))


def test_expansion_matches_permanent_oracle():
    rng = np.random.default_rng(2024)
    for size in (2, 3):
        registry = line_registry(size)
        t = Transform(registry, unitary_group.rvs(size, random_state=rng))
        for total in range(4):
            for in_occ in occupations_with_total(size, total):
                out = apply(make_state(registry, [(in_occ, 1.0)]), t)
                for out_occ in occupations_with_total(size, total):
                    assert out.amplitude(out_occ) == pytest.approx(
                        transition_amplitude(t, in_occ, out_occ), abs=1e-10
                    )


def test_transition_amplitude_vanishes_across_photon_numbers():
    registry = line_registry(2)
    t = identity_transform(registry)
    assert transition_amplitude(t, (1, 0), (1, 1)) == 0j
    assert transition_amplitude(t, (0, 0), (0, 0)) == 1


def test_norm_and_composition_on_random_states():
    rng = np.random.default_rng(11)
    registry = line_registry(3)
    state = random_state(registry, rng, max_photons=3)
    t1 = Transform(registry, unitary_group.rvs(3, random_state=rng))
    t2 = Transform(registry, unitary_group.rvs(3, random_state=rng))

    once = apply(state, t1)
    assert squared_norm(once) == pytest.approx(squared_norm(state), abs=1e-12)
    assert states_close(apply(once, t2), apply(state, compose([t1, t2])), 1e-10)


def test_embed_acts_as_identity_on_new_modes():
    registry, h1, h2 = _two_mode()
    bigger = registry.extend(["3"])
    t = beam_splitter(0.5, h1, h2, registry).embed(bigger)
    assert t.matrix.shape == (6, 6)
    assert t.matrix[4, 4] == 1 and t.matrix[5, 5] == 1


def test_post_select_strips_detected_modes_and_keeps_norm():
    registry, h1, h2 = _two_mode()
    out = apply(make_state(registry, [((0, 1, 0, 1), 1.0)]), beam_splitter(0.5, h1, h2, registry))
    outcome = post_select(out, DetectionPattern({ModeId("2", "V"): 0, ModeId("2", "H"): 0}))

    assert outcome.state.registry.labels() == ["1:V", "1:H"]
    assert outcome.success_probability == pytest.approx(0.5)
    assert outcome_to_json(outcome)["pattern"] == {"2:H": 0, "2:V": 0}


def test_post_select_rejects_unknown_mode():
    registry, _, _ = _two_mode()
    with pytest.raises(StructuralError):
        post_select(make_state(registry, [((0, 0, 0, 0), 1.0)]), DetectionPattern({ModeId("9", "H"): 0}))


def test_detection_pattern_rejects_negative_counts():
    with pytest.raises(DomainError):
        DetectionPattern({ModeId("1", "H"): -1})


def test_outcome_probabilities_sum_to_norm():
    registry, h1, h2 = _two_mode()
    out = apply(make_state(registry, [((0, 2, 0, 1), 1.0)]), beam_splitter(0.4, h1, h2, registry))
    probs = all_outcome_probabilities(out, [h2])
    assert sum(probs.values()) == pytest.approx(1.0)
    assert set(probs) <= {(0,), (1,), (2,), (3,)}
