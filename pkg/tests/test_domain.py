import numpy as np
import pytest
from scipy import stats

from geomod import (Box, BoxUnion, Domain, InvalidArgument, Kernel, QuadratureRule,
                    SamplingFailure, UniformDensity, measure_mu, mollified_density, sample)
from geomod.domain import TruncatedBump, density_from_dict, integrate_power

from helpers import bump_density


def test_sample_deterministic(unit_square):
    dom, rho = unit_square
    a = sample(dom, rho, 1000, 7)
    b = sample(dom, rho, 1000, 7)
    assert np.array_equal(a.points, b.points)
    assert a.to_csv() == b.to_csv()
    assert not np.array_equal(a.points, sample(dom, rho, 1000, 8).points)


@pytest.mark.parametrize("dom", [Domain.interval(-1, 2), Domain.box([0, 0], [1, 4]),
                                 Domain.box([0, 0, 0], [1, 2, 3]), Domain.disc([0, 0], 2.0)])
def test_sample_inside_open_domain(dom):
    cloud = sample(dom, UniformDensity(dom), 5000, 3)
    assert cloud.n == 5000
    assert np.all(dom.contains(cloud.points))


def test_sample_ks(unit_interval):
    dom, rho = unit_interval
    n = 100_000
    x = np.sort(sample(dom, rho, n, 11).points[:, 0])
    i = np.arange(1, n + 1)
    dev = max(np.max(i / n - x), np.max(x - (i - 1) / n))
    assert dev < 1.63 / np.sqrt(n)
    assert stats.kstest(x, "uniform").pvalue > 0.01


def test_bump_sub_box_mass():
    rho = bump_density()
    n = 100_000
    cloud = sample(rho.domain, rho, n, 5)
    sub = Box([0.25, 1.6], [0.75, 2.4])
    p = rho.box_power(sub.lo, sub.hi, 1.0)
    hits = np.mean(sub.contains(cloud.points))
    se = np.sqrt(p * (1 - p) / n)
    assert abs(hits - p) < 3 * se


def test_sample_errors(unit_interval):
    dom, rho = unit_interval
    with pytest.raises(InvalidArgument):
        sample(dom, rho, 0, 1)
    # an envelope far above the density starves the rejection loop
    bad = TruncatedBump(Domain.interval(0.0, 3.0), [2.0], 1e-9, 1e12, 100.0)
    with pytest.raises(SamplingFailure):
        sample(bad.domain, bad, 1, 0)


def test_measure_mu_examples(unit_square, unit_interval):
    dom, rho = unit_square
    left = BoxUnion([Box([0, 0], [0.5, 1])])
    for alpha in (-0.5, 0.0, 1.0, 2.0):
        assert measure_mu(rho, alpha, left) == pytest.approx(0.5, abs=1e-14)
        assert measure_mu(rho, alpha, dom.as_region()) == pytest.approx(1.0, abs=1e-14)
    dom1, rho1 = unit_interval
    for alpha in (0.0, 1.0, 3.0):
        assert measure_mu(rho1, alpha, BoxUnion.interval(0.0, 0.3)) == pytest.approx(0.3, abs=1e-14)


def test_measure_mu_outside_domain(unit_square):
    _, rho = unit_square
    with pytest.raises(InvalidArgument):
        measure_mu(rho, 1.0, BoxUnion([Box([0.5, 0.5], [1.5, 1.0])]))


def test_measure_mu_additive():
    rho = bump_density()
    for alpha in (0.0, 1.0, 2.0):
        parts = [BoxUnion([Box([0, 0], [1, 1.3])]), BoxUnion([Box([0, 1.3], [0.4, 3])]),
                 BoxUnion([Box([0.4, 1.3], [1, 3])])]
        whole = BoxUnion([Box([0, 0], [1, 1.3]), Box([0, 1.3], [0.4, 3])])
        a, b, c = (measure_mu(rho, alpha, r) for r in parts)
        assert measure_mu(rho, alpha, whole) == pytest.approx(a + b, abs=1e-10)
        assert a + b + c == pytest.approx(1.0, abs=1e-10)


def test_integrate_power_examples():
    sq = Domain.box([0, 0], [1, 1])
    assert integrate_power(UniformDensity(sq), 2.0) == pytest.approx(1.0, abs=1e-14)
    tall = Domain.box([0, 0], [1, 4])
    assert integrate_power(UniformDensity(tall), 2.0) == pytest.approx(0.25, abs=1e-14)
    assert integrate_power(UniformDensity(Domain.interval(0, 1)), 4.0) == pytest.approx(1.0)


SHIPPED = [
    lambda: UniformDensity(Domain.interval(0, 1)),
    lambda: UniformDensity(Domain.box([0, 0], [1, 4])),
    lambda: UniformDensity(Domain.disc([0, 0], 1.5)),
    lambda: bump_density(),
    lambda: bump_density(Domain.interval(0.0, 3.0), (2.0,)),
]


@pytest.mark.parametrize("make", SHIPPED)
@pytest.mark.parametrize("p", [1.0, 2.0, 3.0, 0.5])
def test_quadrature_converged(make, p):
    rho = make()
    q = QuadratureRule("gauss", 64)
    assert abs(integrate_power(rho, p, q) - integrate_power(rho, p, q.doubled())) < 1e-8


@pytest.mark.parametrize("make", SHIPPED)
def test_density_invariants(make):
    rho = make()
    assert integrate_power(rho, 1.0) == pytest.approx(1.0, abs=1e-8)
    vals = rho(rho._grid(50))
    assert vals.min() >= rho.lower and vals.max() <= rho.upper


def test_density_validation_rejects_bad_bounds():
    dom = Domain.box([0, 0], [1, 3])
    with pytest.raises(InvalidArgument):
        density_from_dict(dom, {"kind": "truncated_bump", "center": [0.5, 2.0],
                                "lower": 0.5, "upper": 10.0, "lipschitz": 10.0})
    with pytest.raises(InvalidArgument):
        density_from_dict(dom, {"kind": "uniform", "upper": 0.1})


def test_bump_cdf_matches_quadrature():
    rho = bump_density(Domain.interval(0.0, 3.0), (2.0,))
    x = np.linspace(0, 3, 31)
    exact = rho.cdf(x)
    fallback = super(TruncatedBump, rho).cdf(x)
    assert np.max(np.abs(exact - fallback)) < 1e-8
    assert exact[-1] == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("spec", [dict(kind="interval", lo=[1.0], hi=[1.0]),
                                  dict(kind="box", lo=[0, 0], hi=[1, np.inf]),
                                  dict(kind="disc", center=[0, 0], radius=0.0),
                                  dict(kind="box", lo=[0, 0, 0, 0], hi=[1, 1, 1, 1]),
                                  dict(kind="torus", lo=[0], hi=[1])])
def test_domain_rejects_degenerate(spec):
    with pytest.raises(InvalidArgument):
        Domain.from_dict(spec)


@pytest.mark.parametrize("dom", [Domain.interval(0, 2), Domain.box([0, 0], [1, 4]),
                                 Domain.box([0, 0, 0], [1, 2, 3])])
@pytest.mark.parametrize("kind", ["gauss", "midpoint"])
def test_quadrature_rule_weights(dom, kind):
    pts, w = QuadratureRule(kind, 8).box(dom.lo, dom.hi)
    assert np.all(w > 0)
    assert w.sum() == pytest.approx(dom.volume, rel=1e-13)
    with pytest.raises(InvalidArgument):
        QuadratureRule(kind, 1)


def test_mollified_interior_uniform(unit_square, unit_interval):
    dom, rho = unit_square
    x = np.array([[0.5, 0.5], [0.3, 0.7]])
    assert np.allclose(mollified_density(rho, Kernel("indicator", 2), 0.1, x), 1.0, atol=1e-12)
    dom1, rho1 = unit_interval
    assert np.allclose(mollified_density(rho1, Kernel("cone", 1), 0.2, [[0.5]]), 1.0,
                       atol=1e-13)


@pytest.mark.parametrize("make", [SHIPPED[0], SHIPPED[1], SHIPPED[3], SHIPPED[4]])
def test_mollified_bounds(make):
    # inside a box at least one orthant of the kernel ball stays in D, so
    # ρ_eps ≥ A / 2^d; and ρ_eps is an average of ρ, so it stays below B
    rho = make()
    d = rho.domain.dimension
    pts = rho._grid(15 if d == 2 else 200)
    for eps in (0.2, 0.05):
        for prof in ("indicator", "cone"):
            v = mollified_density(rho, Kernel(prof, d), eps, pts)
            assert np.all(v >= rho.lower / 2**d)
            assert np.all(v <= rho.upper * (1 + 1e-10))


def _l1_gap(rho, eps, kernel):
    dom = rho.domain
    lo, hi = dom.lo[0], dom.hi[0]
    br = {lo + eps, hi - eps, *rho.axis_breaks()[0]}
    for b in rho.axis_breaks()[0]:
        br |= {b - eps, b + eps}
    br = sorted(t for t in br if lo < t < hi)
    pts, w = QuadratureRule("gauss", 64).composite([lo, *br, hi])
    pts = pts.reshape(-1, 1)
    return float(np.sum(w * np.abs(mollified_density(rho, kernel, eps, pts) - rho(pts))))


@pytest.mark.parametrize("make", [SHIPPED[0], SHIPPED[4]])
def test_mollified_l1_rate(make):
    rho = make()
    k = Kernel("indicator", 1)
    errs = [_l1_gap(rho, e, k) for e in (0.2, 0.1, 0.05)]
    # at-least-linear decay: halving eps at least halves the gap
    assert errs[1] <= 0.5 * errs[0] * (1 + 1e-6)
    assert errs[2] <= 0.5 * errs[1] * (1 + 1e-6)
