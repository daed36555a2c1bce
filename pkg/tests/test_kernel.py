from math import pi

import numpy as np
import pytest

from geomod import Domain, InvalidArgument, Kernel, UniformDensity, c_eta_rho, sigma_eta
from geomod.kernel import PROFILES, eval_eps, mass_by_quadrature, sigma_by_quadrature

ALL = [(p, d) for p in PROFILES for d in (1, 2, 3)]


def test_eval_eps_indicator_line():
    assert eval_eps(Kernel("indicator", 1), 0.5, 0.2) == pytest.approx(1.0, abs=1e-15)


def test_eval_eps_indicator_plane_origin():
    assert eval_eps(Kernel("indicator", 2), 1.0, [0.0, 0.0]) == pytest.approx(1 / pi, rel=1e-14)


@pytest.mark.parametrize("profile,d", ALL)
def test_compact_support(profile, d):
    k = Kernel(profile, d)
    z = np.zeros((4, d))
    z[:, 0] = [0.29, 0.31, 0.3, 7.0]
    vals = k.eval_eps(0.3, z)
    assert np.all(vals[1:] == 0.0)
    assert vals[0] > 0


@pytest.mark.parametrize("eps", [0.0, -1.0])
def test_eval_eps_rejects_nonpositive(eps):
    with pytest.raises(InvalidArgument):
        eval_eps(Kernel(), eps, 0.1)


def test_unknown_profile():
    with pytest.raises(InvalidArgument):
        Kernel("gaussian", 1)


@pytest.mark.parametrize("profile,d", ALL)
def test_normalization(profile, d):
    assert mass_by_quadrature(Kernel(profile, d)) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("profile,d", ALL)
@pytest.mark.parametrize("eps", [1.0, 0.1, 0.01])
def test_scaled_normalization(profile, d, eps):
    assert mass_by_quadrature(Kernel(profile, d), eps=eps) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("profile,d", ALL)
def test_radial_nonincreasing_and_positive_at_origin(profile, d):
    k = Kernel(profile, d)
    rng = np.random.default_rng(3)
    for _ in range(20):
        ray = rng.standard_normal(d)
        ray /= np.linalg.norm(ray)
        t = np.linspace(0, 1.2, 241)
        vals = k(t[:, None] * ray)
        assert np.all(np.diff(vals) <= 1e-15)
    assert k.at_zero > 0
    assert k(np.full((1, d), 1e-9))[0] == pytest.approx(k.at_zero, rel=1e-8)


@pytest.mark.parametrize("profile,d,expected", [
    ("indicator", 1, 0.5),
    ("indicator", 2, 4 / (3 * pi)),
    # ∫_{-1}^{1} (1 - |x|)|x| dx = 2(1/2 - 1/3)
    ("cone", 1, 1 / 3),
])
def test_sigma_closed_forms(profile, d, expected):
    assert sigma_eta(Kernel(profile, d)) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("profile,d", ALL)
def test_sigma_quadrature_agrees(profile, d):
    k = Kernel(profile, d)
    assert sigma_by_quadrature(k) == pytest.approx(sigma_eta(k), abs=1e-6)


def test_cone_sigma_by_plain_midpoint_sum():
    x = (np.arange(2_000_000) + 0.5) / 1_000_000 - 1.0
    approx = np.sum((1 - np.abs(x)) * np.abs(x)) / 1_000_000
    assert sigma_eta(Kernel("cone", 1)) == pytest.approx(approx, abs=1e-9)


@pytest.mark.parametrize("lo,hi,expected", [
    ([0.0], [1.0], 0.25),
    ([0.0, 0.0], [1.0, 1.0], 2 / (3 * pi)),
    ([0.0, 0.0], [1.0, 4.0], 8 / (3 * pi)),
])
def test_c_eta_rho(lo, hi, expected):
    dom = Domain.box(lo, hi)
    k = Kernel("indicator", dom.dimension)
    assert c_eta_rho(k, UniformDensity(dom)) == pytest.approx(expected, rel=1e-13)
