# tests/test_elements.py

import math

import numpy as np
import pytest

from src.optics.elements import (
    H45,
    R45,
    RM90,
    RP90,
    JonesMatrix,
    beam_splitter,
    composite_network_stages,
    composite_pol_bs,
    hwp,
    jones_preset,
    pbs,
    phase_shifter,
    pol_beam_splitter,
)
from src.optics.engine import apply, compose
from src.optics.fock import DomainError, ModeId, ModeRegistry, make_state

SQ = 1 / math.sqrt(2)


@pytest.fixture
def registry():
    return ModeRegistry.from_spatial(["1", "2"])


def test_jones_presets_have_expected_columns():
    # column 0: image of V, column 1: image of H
    assert np.allclose(H45.matrix, [[SQ, SQ], [SQ, -SQ]])
    assert np.allclose(R45.matrix, [[SQ, -SQ], [SQ, SQ]])
    assert np.allclose(RM90.matrix, [[0, 1], [-1, 0]])
    assert jones_preset("RM90") is RM90
    with pytest.raises(DomainError):
        jones_preset("QWP")


def test_jones_matrix_rejects_non_unitary():
    with pytest.raises(DomainError):
        JonesMatrix(np.array([[1.0, 0.0], [0.0, 2.0]]))
    with pytest.raises(DomainError):
        JonesMatrix(np.eye(3))


def test_rotation_composes_additively():
    a = JonesMatrix.rotation(0.3)
    b = JonesMatrix.rotation(0.4)
    assert a.then(b).close_to(JonesMatrix.rotation(0.7))


def test_beam_splitter_rejects_out_of_range_reflectivity(registry):
    with pytest.raises(DomainError):
        beam_splitter(1.2, ModeId("1", "H"), ModeId("2", "H"), registry)
    with pytest.raises(DomainError):
        pol_beam_splitter(0.5, -0.1, "1", "2", registry)


def test_pol_beam_splitter_acts_independently_per_polarization(registry):
    t = pol_beam_splitter(1.0, 0.0, "1", "2", registry)
    v_in = apply(make_state(registry, [((1, 0, 0, 0), 1.0)]), t)
    h_in = apply(make_state(registry, [((0, 1, 0, 0), 1.0)]), t)
    # R_V = 1 keeps V in port 1, R_H = 0 sends H to port 2
    assert v_in.amplitude((1, 0, 0, 0)) == pytest.approx(1.0)
    assert h_in.amplitude((0, 0, 0, 1)) == pytest.approx(1.0)


def test_pbs_passes_h_and_swaps_v(registry):
    t = pbs("1", "2", registry)
    h = apply(make_state(registry, [((0, 1, 0, 0), 1.0)]), t)
    v = apply(make_state(registry, [((1, 0, 0, 0), 1.0)]), t)
    assert h.amplitude((0, 1, 0, 0)) == pytest.approx(1.0)
    assert v.amplitude((0, 0, 1, 0)) == pytest.approx(1.0)


def test_hwp_rotates_polarization_of_one_spatial_mode(registry):
    out = apply(make_state(registry, [((0, 1, 0, 0), 1.0)]), hwp(RM90, "1", registry))
    # RM90: H -> V
    assert out.amplitude((1, 0, 0, 0)) == pytest.approx(1.0)
    assert hwp(H45, "2", registry).matrix[0, 0] == 1


def test_phase_shifter_applies_phase_to_one_mode(registry):
    t = phase_shifter(math.pi / 2, ModeId("2", "H"), registry)
    out = apply(make_state(registry, [((0, 0, 0, 1), 1.0)]), t)
    assert out.amplitude((0, 0, 0, 1)) == pytest.approx(1j)


def test_composite_network_has_eight_stages(registry):
    stages = composite_network_stages(0.3, 0.4, 0.0, "1", "2", registry)
    assert len(stages) == 8
    assert compose(stages).deviation(composite_pol_bs(0.3, 0.4, 0.0, "1", "2", registry)) == 0.0


@pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (0.3, 1.1), (math.pi / 2, 0.5), (0.51515, 1.07480)])
def test_composite_splitter_matches_pol_beam_splitter_when_aligned(registry, alpha, beta):
    built = composite_pol_bs(alpha, beta, 0.0, "1", "2", registry)
    target = pol_beam_splitter(math.cos(alpha) ** 2, math.cos(beta) ** 2, "1", "2", registry)
    assert built.deviation(target) < 1e-9


def test_composite_splitter_is_phase_sensitive(registry):
    alpha, beta = 0.51515, 1.07480
    aligned = composite_pol_bs(alpha, beta, 0.0, "1", "2", registry)
    assert composite_pol_bs(alpha, beta, math.pi, "1", "2", registry).deviation(aligned) > 0.1
    assert composite_pol_bs(alpha, beta, 2 * math.pi, "1", "2", registry).deviation(aligned) < 1e-9


def test_jones_preset_identities():
    identity = JonesMatrix(np.eye(2))
    assert H45.then(H45).close_to(identity)
    assert RM90.then(RM90).close_to(JonesMatrix(-np.eye(2)))
    assert RM90.then(RP90).close_to(identity)
    assert JonesMatrix.rotation(0.0).close_to(identity)


GRID_DEG = [0.0, 15.0, 30.0, 45.0, 61.6, 90.0]


@pytest.mark.parametrize("alpha_deg", GRID_DEG)
@pytest.mark.parametrize("beta_deg", GRID_DEG)
def test_composite_splitter_matches_on_angle_grid(registry, alpha_deg, beta_deg):
    alpha, beta = math.radians(alpha_deg), math.radians(beta_deg)
    built = composite_pol_bs(alpha, beta, 0.0, "1", "2", registry)
    target = pol_beam_splitter(math.cos(alpha) ** 2, math.cos(beta) ** 2, "1", "2", registry)
    assert built.deviation(target) < 1e-9
