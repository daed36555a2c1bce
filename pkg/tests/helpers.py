"""Small builders shared by several test modules."""

from geomod import Domain, Kernel, UniformDensity, build_graph, sample


def random_geometric(n, d=2, eps=0.2, seed=0, kernel="indicator"):
    dom = Domain.box([0.0] * d, [1.0] * d)
    cloud = sample(dom, UniformDensity(dom), n, seed)
    return build_graph(cloud, Kernel(kernel, d), eps)


def bump_density(domain=None, center=(0.5, 2.0)):
    """The capped Gaussian bump min(2 exp(-4|x - z|²), 1/2), normalized, on
    (0,1)×(0,3) by default, with bounds that pass validation."""
    import numpy as np

    from geomod.domain import TruncatedBump

    domain = domain or Domain.box([0.0, 0.0], [1.0, 3.0])
    probe = TruncatedBump(domain, center, 1e-300, 1e300, 1e300)
    lo, hi = domain.bounds
    far = np.max(np.maximum(np.abs(lo - probe.center), np.abs(hi - probe.center)) ** 2)
    r = probe.cap_radius
    lower = 0.99 * probe.norm * 2 * np.exp(-4 * far)
    upper = probe.norm * 0.5 * (1 + 1e-12)
    lip = 1.01 * probe.norm * 16 * max(r, 8 ** -0.5) * np.exp(-4 * max(r, 8 ** -0.5) ** 2)
    dens = TruncatedBump(domain, center, lower, upper, lip)
    dens.validate()
    return dens
