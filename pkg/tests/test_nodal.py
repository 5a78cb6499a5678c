import numpy as np
import pytest

from beamspec.errors import OutOfDomain, TrivialFunction
from beamspec.grid import SampledFn, make_grid, sample
from beamspec.nodal import (GENERALIZED_DOUBLE, GENERALIZED_SIMPLE,
                            classify_zero, find_zeros, nodal_profile)


def test_find_zeros_sin2pi():
    g = make_grid(800)
    u = sample(lambda t: np.sin(2 * np.pi * t), g)
    zeros = find_zeros(u)
    assert len(zeros) == 1
    assert zeros[0] == pytest.approx(0.5, abs=1e-6)


def test_find_zeros_sin3pi():
    g = make_grid(800)
    u = sample(lambda t: np.sin(3 * np.pi * t), g)
    zeros = find_zeros(u)
    assert len(zeros) == 2
    assert zeros[0] == pytest.approx(1.0 / 3.0, abs=1e-6)
    assert zeros[1] == pytest.approx(2.0 / 3.0, abs=1e-6)


def test_find_zeros_eigenfunction_oracle(spectrum_one800):
    # oracle: zeros of sin(4 pi t)
    phi4 = spectrum_one800.pair(4, +1).phi
    zeros = find_zeros(phi4)
    assert len(zeros) == 3
    for z, target in zip(zeros, (0.25, 0.5, 0.75)):
        assert z == pytest.approx(target, abs=1e-4)


def test_find_zeros_excludes_endpoints():
    g = make_grid(400)
    u = sample(lambda t: np.sin(np.pi * t), g)
    assert find_zeros(u) == []


def test_find_zeros_trivial():
    g = make_grid(100)
    with pytest.raises(TrivialFunction):
        find_zeros(SampledFn(g, np.zeros(len(g))))


def test_classify_simple_crossing():
    g = make_grid(800)
    u = sample(lambda t: np.sin(2 * np.pi * t), g)
    rec = classify_zero(u, 0.5)
    assert rec.kind == GENERALIZED_SIMPLE
    assert rec.derivs[0] == pytest.approx(-2 * np.pi, rel=1e-4)


def test_classify_quartic_touch_is_double():
    g = make_grid(800)
    u = sample(lambda t: (t * (1 - t)) ** 2 * (t - 0.5) ** 4, g)
    assert classify_zero(u, 0.5).kind == GENERALIZED_DOUBLE


def test_classify_cubic_crossing_is_simple():
    # u'''(0.5) = 6 (0.5 * 0.5)^2 = 0.375 survives
    g = make_grid(800)
    u = sample(lambda t: (t * (1 - t)) ** 2 * (t - 0.5) ** 3, g)
    rec = classify_zero(u, 0.5)
    assert rec.kind == GENERALIZED_SIMPLE
    assert rec.derivs[2] == pytest.approx(0.375, rel=1e-3)


def test_classify_out_of_domain():
    g = make_grid(100)
    u = sample(lambda t: np.sin(2 * np.pi * t), g)
    with pytest.raises(OutOfDomain):
        classify_zero(u, 1.5)


def test_profile_first_eigenfunction(spectrum_one800):
    profile = nodal_profile(spectrum_one800.pair(1, +1).phi)
    assert profile.count == 0
    assert profile.sigma == +1
    assert profile.is_nodal


def test_profile_negated_sign():
    g = make_grid(400)
    u = sample(lambda t: -np.sin(2 * np.pi * t), g)
    profile = nodal_profile(u)
    assert profile.count == 1
    assert profile.sigma == -1


def test_profile_sign_changing_weight(spectrum_sin3pi800):
    # cross-check the classifier against raw sign-change counting
    for pair in spectrum_sin3pi800.positive:
        profile = nodal_profile(pair.phi)
        sgn = np.sign(pair.phi.interior)
        raw = int(np.count_nonzero(sgn[:-1] * sgn[1:] < 0))
        assert profile.count == raw == pair.k - 1


def test_profile_scaling_invariance(spectrum_sin3pi800):
    phi = spectrum_sin3pi800.pair(4, +1).phi
    base = nodal_profile(phi)
    up = nodal_profile(3.7 * phi)
    down = nodal_profile(-0.2 * phi)
    assert (up.count, up.sigma) == (base.count, base.sigma)
    assert (down.count, down.sigma) == (base.count, -base.sigma)
    assert [z.kind for z in up.zeros] == [z.kind for z in base.zeros]


def test_profile_counts_touch_double_with_crossing():
    # an off-node quartic contact plus an ordinary crossing: the contact
    # is located via the root of the third-derivative field and counted
    # as a generalized double
    g = make_grid(1000)
    u = sample(lambda t: (t * (1 - t)) ** 2 * (t - 0.3) ** 4 * (t - 0.7), g)
    profile = nodal_profile(u)
    assert profile.count == 2
    kinds = {round(z.t_star, 3): z.kind for z in profile.zeros}
    assert kinds[0.3] == GENERALIZED_DOUBLE
    assert kinds[0.7] == GENERALIZED_SIMPLE
    assert not profile.is_nodal
    assert not profile.anomalies


def test_profile_json():
    g = make_grid(400)
    u = sample(lambda t: np.sin(2 * np.pi * t), g)
    blob = nodal_profile(u).to_json()
    assert blob["count"] == 1
    assert blob["sigma"] == "+"
    assert blob["zeros"][0]["kind"] == GENERALIZED_SIMPLE
