"""Continuum side of the limit theorems: weighted perimeters, Λ and Λ_eps,
μ-balance, the nonlocal total variation TV_eps, the limiting energy E, and
reference balanced partitions of boxes."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .domain import DEFAULT_QUAD, Density, Domain, SampleCloud, measure_mu, \
    mollified_density, sample
from .errors import InvalidArgument, UnsupportedGeometry
from .functional import DiscretePartition
from .kernel import Kernel, c_eta_rho
from .quadrature import QuadratureRule
from .regions import Box, BoxUnion, HalfDisc, Region, region_from_dict
from .seeding import derive_seed


class ContinuumPartition:
    """K regions of a domain; fewer regions than K means empty classes."""

    def __init__(self, domain: Domain, regions, K: int | None = None):
        regions = list(regions)
        K = len(regions) if K is None else int(K)
        if K < max(1, len(regions)):
            raise InvalidArgument("K must be at least the number of regions")
        for r in regions:
            r.check_within(domain)
        self.domain = domain
        self.regions = regions
        self.K = K
        self.covers = self._check_cover()

    def __repr__(self):
        return f"ContinuumPartition(K={self.K}, regions={self.regions!r})"

    def _check_cover(self) -> bool:
        total = sum(r.volume for r in self.regions)
        if abs(total - self.domain.volume) > 1e-9 * self.domain.volume:
            return False
        boxes = [b for r in self.regions if isinstance(r, BoxUnion) for b in r.boxes]
        for b1, b2 in itertools.combinations(boxes, 2):
            ov = np.minimum(b1.hi, b2.hi) - np.maximum(b1.lo, b2.lo)
            if np.all(ov > 1e-12):
                return False
        return True

    def labels(self, points) -> np.ndarray:
        """Region index per point, -1 where no region contains it."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.full(len(pts), -1, dtype=np.int64)
        for k, r in enumerate(self.regions):
            out[(out < 0) & r.contains(pts)] = k
        return out

    def induce(self, cloud: SampleCloud) -> DiscretePartition:
        """U_{n,k} = U_k ∩ X_n."""
        lab = self.labels(cloud.points)
        if np.any(lab < 0):
            raise InvalidArgument("partition does not cover every sample point")
        return DiscretePartition(lab, self.K)

    def to_dict(self) -> dict:
        return {"K": self.K, "domain": self.domain.to_dict(),
                "regions": [r.to_dict() for r in self.regions]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, spec: dict, domain: Domain | None = None) -> "ContinuumPartition":
        domain = domain or Domain.from_dict(spec["domain"])
        return cls(domain, [region_from_dict(r) for r in spec["regions"]], spec.get("K"))

    @classmethod
    def slabs(cls, domain: Domain, cuts, axis: int = 0, K: int | None = None) -> "ContinuumPartition":
        """Consecutive slabs perpendicular to ``axis``."""
        if not domain.is_box:
            raise UnsupportedGeometry("slabs need a box domain")
        edges = [domain.lo[axis], *sorted(float(c) for c in cuts), domain.hi[axis]]
        regions = []
        for a, b in zip(edges[:-1], edges[1:]):
            lo, hi = list(domain.lo), list(domain.hi)
            lo[axis], hi[axis] = a, b
            regions.append(BoxUnion([Box(lo, hi)]))
        return cls(domain, regions, K)

    @classmethod
    def grid(cls, domain: Domain, cuts_per_axis) -> "ContinuumPartition":
        """Rectilinear product partition."""
        if not domain.is_box:
            raise UnsupportedGeometry("grids need a box domain")
        edges = [[domain.lo[k], *sorted(c), domain.hi[k]] for k, c in enumerate(cuts_per_axis)]
        regions = []
        for idx in itertools.product(*[range(len(e) - 1) for e in edges]):
            lo = [edges[k][i] for k, i in enumerate(idx)]
            hi = [edges[k][i + 1] for k, i in enumerate(idx)]
            regions.append(BoxUnion([Box(lo, hi)]))
        return cls(domain, regions)

    @classmethod
    def halved_disc(cls, domain: Domain, normal=(1.0, 0.0), offset: float = 0.0) -> "ContinuumPartition":
        if domain.kind != "disc":
            raise UnsupportedGeometry("halved_disc needs a disc domain")
        n = np.asarray(normal, dtype=float)
        return cls(domain, [HalfDisc(domain.center, domain.radius, n, offset),
                            HalfDisc(domain.center, domain.radius, -n, -offset)])

    @classmethod
    def whole(cls, domain: Domain) -> "ContinuumPartition":
        return cls(domain, [domain.as_region()])


# ---------------------------------------------------------------------------

def perimeter(region: Region, density: Density, quad: QuadratureRule = DEFAULT_QUAD) -> float:
    """Per(U; ρ²): ρ² integrated over the part of ∂U inside the domain."""
    return region.interface_integral(density.domain, lambda x: density(x) ** 2, density, quad)


def total_perimeter(partition: ContinuumPartition, density: Density,
                    quad: QuadratureRule = DEFAULT_QUAD) -> float:
    """Σ_k Per(U_k; ρ²); every internal interface is counted twice."""
    return sum(perimeter(r, density, quad) for r in partition.regions)


def _integrate_u(u, density: Density, f, quad, breaks=None) -> float:
    """∫_D u·f for a region indicator or a callable ``u``."""
    if isinstance(u, Region):
        if isinstance(u, BoxUnion):
            return u.integrate(f, quad, breaks)
        return u.integrate(f, quad)
    return density.domain.integrate(lambda x: u(x) * f(x), quad, breaks)


def lambda_(u, density: Density, alpha: float, quad: QuadratureRule = DEFAULT_QUAD,
            breaks=None) -> float:
    """Λ(u) = ∫_D u ρ^{1+α}."""
    if isinstance(u, Region):
        u.check_within(density.domain)
        return u.power_integral(density, 1.0 + alpha, quad)
    breaks = breaks if breaks is not None else density.axis_breaks()
    return _integrate_u(u, density, lambda x: density(x) ** (1.0 + alpha), quad, breaks)


def lambda_eps(u, density: Density, alpha: float, kernel: Kernel, eps: float,
               quad: QuadratureRule = DEFAULT_QUAD, breaks=None) -> float:
    """Λ_eps(u) = ∫_D u ρ_eps^α ρ, with ρ_eps the mollified density."""
    if not eps > 0:
        raise InvalidArgument("eps must be positive")
    dom = density.domain
    if breaks is None:
        breaks = density.axis_breaks()
        if dom.is_box:
            # ρ_eps has kinks one kernel radius from the walls
            reach = eps * kernel.radius
            breaks = [list(b) + [dom.lo[k] + reach, dom.hi[k] - reach]
                      for k, b in enumerate(breaks)]

    def f(x):
        return mollified_density(density, kernel, eps, x, quad) ** alpha * density(x)
    return _integrate_u(u, density, f, quad, breaks)


def balance_deficit(partition: ContinuumPartition, density: Density, alpha: float,
                    quad: QuadratureRule = DEFAULT_QUAD) -> float:
    """Σ_k (μ(U_k) - 1/K)², empty classes included."""
    K = partition.K
    masses = [measure_mu(density, alpha, r, quad) for r in partition.regions]
    masses += [0.0] * (K - len(masses))
    return float(sum((m - 1.0 / K) ** 2 for m in masses))


@dataclass(frozen=True)
class MCEstimate:
    value: float
    stderr: float
    samples: int


def tv_eps(u, density: Density, kernel: Kernel, eps: float, mc_samples: int = 1_000_000,
           seed: int = 0, block: int = 1 << 18) -> MCEstimate:
    """Monte Carlo estimate of

        TV_eps(u; ρ) = (1/eps) ∬ η_eps(x - y)|u(x) - u(y)| ρ(x)ρ(y) dx dy.

    Draws x ~ ρ and z ~ η, sets y = x + eps·z, and averages
    |u(x) - u(y)|·ρ(y)·1_D(y)/eps. Blocks are seeded independently and
    reduced in block order.
    """
    if not eps > 0:
        raise InvalidArgument("eps must be positive")
    dom = density.domain
    ufun = u.indicator() if isinstance(u, Region) else u
    sums, sqs, count = 0.0, 0.0, 0
    nblocks = -(-mc_samples // block)
    for b in range(nblocks):
        m = min(block, mc_samples - b * block)
        bseed = derive_seed(seed, b)
        x = sample(dom, density, m, bseed).points
        rng = np.random.Generator(np.random.Philox(key=derive_seed(bseed, 1)))
        y = x + eps * kernel.sample(rng, m)
        inside = dom.contains(y)
        val = np.zeros(m)
        yi = y[inside]
        val[inside] = np.abs(ufun(x[inside]) - ufun(yi)) * density(yi)
        val /= eps
        sums += float(np.sum(val))
        sqs += float(np.sum(val * val))
        count += m
    mean = sums / count
    var = max(sqs / count - mean * mean, 0.0)
    return MCEstimate(mean, float(np.sqrt(var / count)), count)


def continuum_energy(partition: ContinuumPartition, density: Density, alpha: float,
                     kernel: Kernel, tol_balance: float = 1e-6,
                     quad: QuadratureRule = DEFAULT_QUAD) -> float:
    """E(U) = C_{η,ρ} Σ_k Per(U_k; ρ²) for balanced partitions, else +inf."""
    if balance_deficit(partition, density, alpha, quad) > tol_balance:
        return float("inf")
    return c_eta_rho(kernel, density, quad) * total_perimeter(partition, density, quad)


@dataclass
class ReferenceMinimizer:
    partition: ContinuumPartition
    energy: float
    family: str          # "slabs" or "grid"
    multiple: bool       # symmetric domain, minimizer not unique
    heuristic: bool      # global optimality not certified


def _mu_quantiles(domain, density, alpha, axis, K, quad):
    lo, hi = domain.lo[axis], domain.hi[axis]
    p = 1.0 + alpha
    total = density.total_power(p, quad)

    def cum(t):
        top = list(domain.hi)
        top[axis] = t
        return density.box_power(domain.lo, top, p, quad) / total

    cuts = []
    for k in range(1, K):
        target = k / K
        cuts.append(brentq(lambda t: cum(t) - target, lo, hi, xtol=1e-13))
    return cuts


def balanced_slabs(domain: Domain, density: Density, alpha: float, K: int,
                   axis: int | None = None,
                   quad: QuadratureRule = DEFAULT_QUAD) -> ContinuumPartition:
    """K slabs of equal μ-mass perpendicular to ``axis`` (default: the
    longest axis)."""
    if not domain.is_box:
        raise UnsupportedGeometry("slabs need a box domain")
    if axis is None:
        axis = int(np.argmax(np.subtract(domain.hi, domain.lo)))
    return ContinuumPartition.slabs(domain, _mu_quantiles(domain, density, alpha, axis, K, quad),
                                    axis)


def reference_minimizer(domain: Domain, density: Density, alpha: float, K: int,
                        kernel: Kernel | None = None,
                        quad: QuadratureRule = DEFAULT_QUAD) -> ReferenceMinimizer:
    """Balanced parallel-cut partition of a box (cuts perpendicular to the
    longest axis at μ-quantiles); for composite K in d ≥ 2 the rectilinear
    grid family is also tried and the lower energy wins."""
    if not domain.is_box:
        raise UnsupportedGeometry("reference minimizers are computed for boxes only")
    if K < 1:
        raise InvalidArgument("K must be positive")
    kernel = kernel or Kernel("indicator", domain.dimension)
    lengths = np.subtract(domain.hi, domain.lo)
    axis = int(np.argmax(lengths))
    best = balanced_slabs(domain, density, alpha, K, axis, quad)
    best_e = continuum_energy(best, density, alpha, kernel, quad=quad)
    family = "slabs"
    d = domain.dimension
    if d >= 2 and K >= 4:
        for a in range(2, K):
            if K % a:
                continue
            b = K // a
            cuts = [[] for _ in range(d)]
            others = [k for k in range(d) if k != axis]
            cuts[axis] = _mu_quantiles(domain, density, alpha, axis, a, quad)
            cuts[others[0]] = _mu_quantiles(domain, density, alpha, others[0], b, quad)
            cand = ContinuumPartition.grid(domain, cuts)
            e = continuum_energy(cand, density, alpha, kernel, quad=quad)
            if e < best_e:
                best, best_e, family = cand, e, "grid"
    multiple = bool(np.sum(np.isclose(lengths, lengths[axis])) > 1 and density.is_uniform and K > 1)
    certified = density.is_uniform and (d == 1 or K <= 2)
    return ReferenceMinimizer(best, best_e, family, multiple, not certified)
