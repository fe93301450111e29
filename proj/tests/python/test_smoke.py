import math

import pytest

import dqm

Q = 0.99


def test_peak_levels():
    assert dqm.f_peak_level(Q, 7.0) == 34
    assert dqm.n_closest(Q, math.pi / 2) == 34
    assert dqm.theta_of_n(Q, 34) / (math.pi / 2) == pytest.approx(1.006, abs=1e-3)


def test_rho_rho_is_sharp():
    g = dqm.FullGeometry([dqm.rho_state(dqm.Role.SPIN, Q), dqm.rho_state(dqm.Role.STERN_GERLACH, Q)])
    law = dqm.probability_moments(g)
    assert law.p0 == pytest.approx(1.0, abs=1e-12)
    assert law.variance == pytest.approx(0.0, abs=1e-12)
    mean, var = dqm.sigma_matrix_moments(g)
    assert mean[0][0].real == pytest.approx(Q, abs=1e-12)
    assert mean[1][1].real == pytest.approx(-1 / Q, abs=1e-12)


def test_spectral_law_matches_moments():
    g = dqm.FullGeometry(
        [
            dqm.rho_state(dqm.Role.SPIN, Q),
            dqm.direction_state(dqm.Role.STERN_GERLACH, Q, math.pi / 2),
        ]
    )
    moments = dqm.probability_moments(g)
    law = dqm.spectral_distribution(g, per_factor_cap=120)
    assert law.spectral
    assert sum(w for _, w in law.histogram) == pytest.approx(1.0, abs=1e-9)
    assert law.p0 == pytest.approx(moments.p0, abs=1e-6)
    lhs, rhs = dqm.variance_equivalence(g)
    assert lhs == pytest.approx(rhs, abs=1e-8)


def test_sampling_is_reproducible():
    g = dqm.FullGeometry(
        [
            dqm.rho_state(dqm.Role.SPIN, Q),
            dqm.direction_state(dqm.Role.STERN_GERLACH, Q, math.pi / 2),
        ]
    )
    law = dqm.spectral_distribution(g, per_factor_cap=80)
    a = dqm.sample_counts(law, 100, 200, seed=5)
    b = dqm.sample_counts(law, 100, 200, seed=5)
    assert a["k"] == b["k"]
    with pytest.raises(ValueError):
        dqm.sample_counts(dqm.probability_moments(g), 100, 10, seed=1)


def test_rotation_protocol():
    est = dqm.estimate_rotation({"q": Q, "rotation": {"theta": 0.0}})
    assert est["means"][0][0] == pytest.approx(0.99, abs=0.015)
    assert est["means"][2][2] == pytest.approx(0.99, abs=0.015)
    with pytest.raises(ValueError, match="/rotation"):
        dqm.estimate_rotation({"q": Q})


def test_state_json_round_trip():
    s = dqm.semiclassical_state(dqm.Role.SPIN, Q, 7.0, 0.3, 0.1)
    back = dqm.GeometryState.from_json(s.to_json())
    assert back.to_json() == s.to_json()
