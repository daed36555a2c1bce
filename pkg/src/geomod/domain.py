"""Bounded domains, sampling densities, seeded point clouds, and the
deterministic integrals (ρ-powers, μ-masses, mollified densities) that the
continuum functionals are built from."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from math import erf, log, pi, sqrt

import numpy as np
from scipy.special import erf as verf

from .errors import (InvalidArgument, SamplingFailure, UnsupportedDimension,
                     UnsupportedGeometry)
from .kernel import Kernel
from .quadrature import QuadratureRule, polar_box_integral, polar_disc_integral
from .regions import Box, BoxUnion, HalfDisc, Region

DEFAULT_QUAD = QuadratureRule("gauss", 64)


@dataclass(frozen=True)
class Domain:
    """An open interval, axis-aligned box, or disc."""

    kind: str
    lo: tuple = ()
    hi: tuple = ()
    center: tuple = ()
    radius: float = 0.0

    def __post_init__(self):
        if self.kind in ("interval", "box"):
            lo = tuple(float(v) for v in np.atleast_1d(self.lo))
            hi = tuple(float(v) for v in np.atleast_1d(self.hi))
            if len(lo) != len(hi) or not 1 <= len(lo) <= 3:
                raise InvalidArgument("box bounds must have matching length 1..3")
            if not all(np.isfinite(lo + hi)) or not all(h > l for l, h in zip(lo, hi)):
                raise InvalidArgument("every axis interval needs positive finite length")
            if self.kind == "interval" and len(lo) != 1:
                raise InvalidArgument("an interval is one-dimensional")
            object.__setattr__(self, "lo", lo)
            object.__setattr__(self, "hi", hi)
        elif self.kind == "disc":
            c = tuple(float(v) for v in self.center)
            if len(c) != 2 or not self.radius > 0:
                raise InvalidArgument("a disc needs a planar center and radius > 0")
            object.__setattr__(self, "center", c)
            object.__setattr__(self, "radius", float(self.radius))
        else:
            raise InvalidArgument(f"unknown domain kind {self.kind!r}")

    @classmethod
    def interval(cls, a: float, b: float) -> "Domain":
        return cls("interval", (a,), (b,))

    @classmethod
    def box(cls, lo, hi) -> "Domain":
        lo = np.atleast_1d(lo)
        return cls("interval" if len(lo) == 1 else "box", lo, hi)

    @classmethod
    def disc(cls, center, radius) -> "Domain":
        return cls("disc", center=center, radius=radius)

    @property
    def is_box(self) -> bool:
        return self.kind != "disc"

    @property
    def dimension(self) -> int:
        return 2 if self.kind == "disc" else len(self.lo)

    @property
    def volume(self) -> float:
        if self.kind == "disc":
            return pi * self.radius**2
        return float(np.prod(np.subtract(self.hi, self.lo)))

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        if self.kind == "disc":
            c = np.asarray(self.center)
            return c - self.radius, c + self.radius
        return np.asarray(self.lo), np.asarray(self.hi)

    @property
    def diameter(self) -> float:
        lo, hi = self.bounds
        return 2 * self.radius if self.kind == "disc" else float(np.linalg.norm(hi - lo))

    def contains(self, x) -> np.ndarray:
        """Membership in the open domain."""
        x = np.atleast_2d(x)
        if self.kind == "disc":
            rel = x - np.asarray(self.center)
            return np.einsum("ij,ij->i", rel, rel) < self.radius**2
        return np.all((x > self.lo) & (x < self.hi), axis=1)

    def as_region(self) -> Region:
        if self.kind == "disc":
            return HalfDisc(self.center, self.radius, (1.0, 0.0), self.radius)
        return BoxUnion([Box(self.lo, self.hi)])

    def integrate(self, f, quad: QuadratureRule = DEFAULT_QUAD, breaks=None) -> float:
        """∫_D f dx for a vectorized ``f(points)``."""
        if self.kind == "disc":
            return polar_disc_integral(self.center, self.radius, self.center,
                                       self.radius, quad, integrand=f)
        pts, w = quad.box(self.lo, self.hi, breaks)
        return float(np.sum(w * f(pts)))

    def to_dict(self) -> dict:
        if self.kind == "disc":
            return {"kind": "disc", "center": list(self.center), "radius": self.radius}
        return {"kind": self.kind, "lo": list(self.lo), "hi": list(self.hi)}

    @classmethod
    def from_dict(cls, spec: dict) -> "Domain":
        if spec["kind"] == "disc":
            return cls.disc(spec["center"], spec["radius"])
        return cls(spec["kind"], spec["lo"], spec["hi"])


# ---------------------------------------------------------------------------
# densities

class Density:
    """Probability density on a domain with declared bounds.

    ``lower``/``upper``/``lipschitz`` are the constants A, B, L; they are
    validated against the density on a grid, never inferred. In d = 1 the
    limit theorems also need monotone behaviour next to the endpoints; the
    shipped densities have it by construction, but it is not checked for
    user subclasses.
    """

    kind: str
    is_uniform = False

    def __init__(self, domain: Domain, lower: float, upper: float, lipschitz: float):
        self.domain = domain
        self.lower = float(lower)
        self.upper = float(upper)
        self.lipschitz = float(lipschitz)

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError

    def box_power(self, lo, hi, p: float, quad: QuadratureRule = DEFAULT_QUAD) -> float:
        """∫_{[lo,hi]} ρ^p dx for a box inside the domain."""
        raise NotImplementedError

    def total_power(self, p: float, quad: QuadratureRule = DEFAULT_QUAD) -> float:
        if self.domain.kind == "disc":
            return self.domain.as_region().power_integral(self, p, quad)
        return self.box_power(self.domain.lo, self.domain.hi, p, quad)

    def cdf(self, x) -> np.ndarray:
        """F(x) = ∫_{lo}^{x} ρ for an interval domain, vectorized.

        Generic densities use cumulative Gauss quadrature on a 4096-cell grid
        (split at the kinks) with monotone cubic interpolation.
        """
        self._require_interval()
        if getattr(self, "_cdf_interp", None) is None:
            from scipy.interpolate import PchipInterpolator
            lo, hi = self.domain.lo[0], self.domain.hi[0]
            grid = np.unique(np.concatenate([np.linspace(lo, hi, 4097),
                                             self.axis_breaks()[0]]))
            y, w = DEFAULT_QUAD.line(grid[:-1], grid[1:])
            cells = np.sum(w * self(y.reshape(-1, 1)).reshape(y.shape), axis=1)
            self._cdf_interp = PchipInterpolator(grid, np.concatenate([[0.0], np.cumsum(cells)]))
        return self._cdf_interp(np.clip(x, self.domain.lo[0], self.domain.hi[0]))

    def _require_interval(self):
        if self.domain.dimension != 1:
            raise UnsupportedDimension("a cumulative distribution needs d = 1")

    def kinks_on_segment(self, a, b) -> list[float]:
        """Parameters t in (0, 1) where ρ restricted to a + t(b - a) has a
        derivative jump."""
        return []

    def axis_breaks(self) -> list[list[float]]:
        return [[] for _ in range(self.domain.dimension)]

    def validate(self, quad: QuadratureRule = DEFAULT_QUAD, grid: int = 41) -> None:
        mass = self.total_power(1.0, quad)
        if abs(mass - 1.0) > 1e-8:
            raise InvalidArgument(f"density integrates to {mass!r}, not 1")
        pts = self._grid(grid)
        vals = self(pts)
        slack = 1e-12 * max(1.0, self.upper)
        if np.any(vals < self.lower - slack) or np.any(vals > self.upper + slack):
            raise InvalidArgument(
                f"density leaves [{self.lower}, {self.upper}] on the check grid "
                f"(range {vals.min()}..{vals.max()})")
        if self.lower <= 0:
            raise InvalidArgument("density lower bound must be positive")
        # Lipschitz spot check on neighbouring grid pairs
        rng = np.random.default_rng(0)
        i = rng.integers(0, len(pts), 2000)
        j = rng.integers(0, len(pts), 2000)
        dist = np.linalg.norm(pts[i] - pts[j], axis=1)
        ok = dist > 0
        ratio = np.abs(vals[i] - vals[j])[ok] / dist[ok]
        if ratio.size and ratio.max() > self.lipschitz * (1 + 1e-6) + 1e-12:
            raise InvalidArgument("declared Lipschitz constant is too small")

    def _grid(self, m: int) -> np.ndarray:
        lo, hi = self.domain.bounds
        axes = [np.linspace(l, h, m + 2)[1:-1] for l, h in zip(lo, hi)]
        pts = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], -1)
        return pts[self.domain.contains(pts)]

    def to_dict(self) -> dict:
        raise NotImplementedError


class UniformDensity(Density):
    kind = "uniform"
    is_uniform = True

    def __init__(self, domain: Domain, lower=None, upper=None, lipschitz=0.0):
        self.value = 1.0 / domain.volume
        super().__init__(domain, self.value if lower is None else lower,
                         self.value if upper is None else upper, lipschitz)

    def __call__(self, x):
        return np.full(len(np.atleast_2d(x)), self.value)

    def box_power(self, lo, hi, p, quad=DEFAULT_QUAD):
        return float(np.prod(np.subtract(hi, lo))) * self.value**p

    def total_power(self, p, quad=DEFAULT_QUAD):
        return self.domain.volume * self.value**p

    def cdf(self, x):
        self._require_interval()
        lo, hi = self.domain.lo[0], self.domain.hi[0]
        return (np.clip(x, lo, hi) - lo) * self.value

    def to_dict(self):
        return {"kind": "uniform", "lower": self.lower, "upper": self.upper,
                "lipschitz": self.lipschitz}


class TruncatedBump(Density):
    """ρ ∝ min(peak·exp(-scale·|x - center|²), cap) on a box, d ≤ 2.

    The cap makes ρ flat on the disc of radius ``sqrt(log(peak/cap)/scale)``
    around ``center``; integrals split off that disc so they stay exact.
    """

    kind = "truncated_bump"

    def __init__(self, domain: Domain, center, lower: float, upper: float,
                 lipschitz: float, scale: float = 4.0, peak: float = 2.0,
                 cap: float = 0.5):
        if not domain.is_box or domain.dimension > 2:
            raise UnsupportedGeometry("truncated bump needs a box domain with d <= 2")
        self.center = np.atleast_1d(np.asarray(center, dtype=float))
        if self.center.size != domain.dimension:
            raise InvalidArgument("bump center dimension mismatch")
        if not (scale > 0 and peak > 0 and cap > 0):
            raise InvalidArgument("bump parameters must be positive")
        self.scale, self.peak, self.cap = float(scale), float(peak), float(cap)
        self.cap_radius = sqrt(log(self.peak / self.cap) / self.scale) if self.peak > self.cap else 0.0
        self.norm = 1.0
        super().__init__(domain, lower, upper, lipschitz)
        self.norm = 1.0 / self.box_power(domain.lo, domain.hi, 1.0)

    def raw(self, x):
        x = np.atleast_2d(x)
        r2 = np.sum((x - self.center) ** 2, axis=1)
        return np.minimum(self.peak * np.exp(-self.scale * r2), self.cap)

    def __call__(self, x):
        return self.norm * self.raw(x)

    def box_power(self, lo, hi, p, quad=DEFAULT_QUAD):
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        a = p * self.scale
        s = sqrt(a)
        gauss = self.peak**p * float(np.prod(
            0.5 * sqrt(pi / a) * (verf(s * (hi - self.center)) - verf(s * (lo - self.center)))))
        excess = 0.0
        r = self.cap_radius
        if r > 0:
            capp = self.cap**p
            if self.domain.dimension == 1:
                z = self.center[0]
                x0, x1 = max(lo[0], z - r), min(hi[0], z + r)
                if x1 > x0:
                    excess = self.peak**p * 0.5 * sqrt(pi / a) * (
                        erf(s * (x1 - z)) - erf(s * (x0 - z))) - capp * (x1 - x0)
            else:
                pk = self.peak**p

                def phi(R):
                    return pk * (1.0 - np.exp(-a * R * R)) / (2 * a) - capp * R * R / 2
                excess = polar_box_integral(self.center, r, lo, hi, quad,
                                            antiderivative=phi)
        return self.norm**p * (gauss - excess)

    def cdf(self, x):
        self._require_interval()
        lo, hi = self.domain.lo[0], self.domain.hi[0]
        x = np.clip(np.asarray(x, dtype=float), lo, hi)
        z, r, a = self.center[0], self.cap_radius, self.scale
        half = 0.5 * sqrt(pi / a) * self.peak

        def gauss(t):
            return half * verf(sqrt(a) * (t - z))
        val = gauss(x) - gauss(lo)
        if r > 0:
            x0, x_end = max(lo, z - r), min(hi, z + r)
            if x_end > x0:
                x1 = np.clip(x, x0, x_end)
                val = val - (gauss(x1) - gauss(x0) - self.cap * (x1 - x0))
        return self.norm * val

    def kinks_on_segment(self, a, b):
        if self.cap_radius == 0:
            return []
        a = np.atleast_1d(np.asarray(a, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        v = b - a
        w = a - self.center
        qa, qb, qc = v @ v, 2 * v @ w, w @ w - self.cap_radius**2
        disc = qb * qb - 4 * qa * qc
        if qa == 0 or disc <= 0:
            return []
        roots = [(-qb - sqrt(disc)) / (2 * qa), (-qb + sqrt(disc)) / (2 * qa)]
        return [t for t in roots if 0 < t < 1]

    def axis_breaks(self):
        r = self.cap_radius
        if self.domain.dimension == 1 and r > 0:
            lo, hi = self.domain.lo[0], self.domain.hi[0]
            return [[t for t in (self.center[0] - r, self.center[0] + r) if lo < t < hi]]
        return [[] for _ in range(self.domain.dimension)]

    def to_dict(self):
        return {"kind": "truncated_bump", "center": self.center.tolist(),
                "scale": self.scale, "peak": self.peak, "cap": self.cap,
                "lower": self.lower, "upper": self.upper, "lipschitz": self.lipschitz}


def density_from_dict(domain: Domain, spec: dict) -> Density:
    kind = spec.get("kind", "uniform")
    if kind == "uniform":
        dens = UniformDensity(domain, spec.get("lower"), spec.get("upper"),
                              spec.get("lipschitz", 0.0))
    elif kind == "truncated_bump":
        dens = TruncatedBump(domain, spec["center"], spec["lower"], spec["upper"],
                             spec["lipschitz"], spec.get("scale", 4.0),
                             spec.get("peak", 2.0), spec.get("cap", 0.5))
    else:
        raise InvalidArgument(f"unknown density kind {kind!r}")
    dens.validate()
    return dens


# ---------------------------------------------------------------------------
# sampling

def make_rng(seed: int) -> np.random.Generator:
    """Philox-4x64 counter-based stream keyed directly by the 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=int(seed) & (2**64 - 1)))


@dataclass(frozen=True)
class SampleCloud:
    points: np.ndarray
    domain: Domain
    density: Density = field(repr=False)
    seed: int

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts[:, None]
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        header = {"n": self.n, "seed": self.seed, "domain": self.domain.to_dict(),
                  "density": self.density.to_dict()}
        buf.write("# " + json.dumps(header) + "\n")
        cols = ["x", "y", "z"][: self.dimension]
        buf.write("index," + ",".join(cols) + "\n")
        for i, row in enumerate(self.points):
            buf.write(f"{i}," + ",".join(repr(float(v)) for v in row) + "\n")
        return buf.getvalue()


def _propose(domain: Domain, rng: np.random.Generator, k: int) -> np.ndarray:
    if domain.kind == "disc":
        u = rng.random((k, 2))
        r = domain.radius * np.sqrt(u[:, 0])
        th = 2 * pi * u[:, 1]
        return np.asarray(domain.center) + np.stack([r * np.cos(th), r * np.sin(th)], -1)
    lo, hi = np.asarray(domain.lo), np.asarray(domain.hi)
    return lo + (hi - lo) * rng.random((k, len(lo)))


def sample(domain: Domain, density: Density, n: int, seed: int) -> SampleCloud:
    """``n`` i.i.d. points from ``density`` inside the open domain.

    Non-uniform densities use rejection against the uniform envelope with
    acceptance ratio ρ(x)/B.
    """
    if n < 1:
        raise InvalidArgument("n must be at least 1")
    rng = make_rng(seed)
    budget = 10**6 * n
    proposed = 0
    chunks, have = [], 0
    while have < n:
        k = max(2 * (n - have), 1024)
        if proposed + k > budget:
            k = budget - proposed
            if k <= 0:
                raise SamplingFailure(
                    f"rejection exceeded {budget} proposals; check the density's upper bound")
        x = _propose(domain, rng, k)
        proposed += k
        keep = domain.contains(x)
        if not density.is_uniform:
            u = rng.random(k)
            keep &= u * density.upper < density(x)
        acc = x[keep]
        chunks.append(acc)
        have += len(acc)
    pts = np.concatenate(chunks)[:n]
    return SampleCloud(pts, domain, density, seed)


# ---------------------------------------------------------------------------
# integrals

def integrate_power(density: Density, p: float, quad: QuadratureRule = DEFAULT_QUAD) -> float:
    """∫_D ρ^p dx."""
    return density.total_power(p, quad)


def measure_mu(density: Density, alpha: float, region: Region,
               quad: QuadratureRule = DEFAULT_QUAD) -> float:
    """μ(region) with dμ ∝ ρ^{1+α} dx."""
    region.check_within(density.domain)
    p = 1.0 + alpha
    val = region.power_integral(density, p, quad) / density.total_power(p, quad)
    return float(min(max(val, 0.0), 1.0))


def mollified_density(density: Density, kernel: Kernel, eps: float, x,
                      quad: QuadratureRule = DEFAULT_QUAD) -> np.ndarray:
    """ρ_eps(x) = ∫_D η_eps(x - y) ρ(y) dy at each row of ``x``."""
    if not eps > 0:
        raise InvalidArgument("eps must be positive")
    dom = density.domain
    d = dom.dimension
    if kernel.dimension != d:
        raise InvalidArgument("kernel and domain dimensions differ")
    x = np.asarray(x, dtype=float).reshape(-1, d)
    reach = eps * kernel.radius
    if d == 1:
        return _mollify_1d(density, kernel, eps, x[:, 0], quad)
    if d == 2:
        out = np.empty(len(x))
        if density.is_uniform:
            val = density.value
            # ∫_0^R η_eps(r) r dr = ∫_0^{R/eps} η(s) s ds
            def anti(R):
                return val * kernel.radial_moment(R / eps, 1)
            kw = {"antiderivative": anti}
        else:
            def f_at(c):
                return lambda y: kernel.eval_eps(eps, y - c) * density(y)
        for i, c in enumerate(x):
            if not density.is_uniform:
                kw = {"integrand": f_at(c)}
            if dom.kind == "disc":
                out[i] = polar_disc_integral(c, reach, dom.center, dom.radius, quad, **kw)
            else:
                out[i] = polar_box_integral(c, reach, dom.lo, dom.hi, quad, **kw)
        return out
    # d = 3: midpoint fallback on the clipped bounding box of the support
    mid = QuadratureRule("midpoint", max(quad.nodes, 24))
    out = np.empty(len(x))
    for i, c in enumerate(x):
        lo = np.maximum(c - reach, dom.lo)
        hi = np.minimum(c + reach, dom.hi)
        pts, w = mid.box(lo, hi)
        out[i] = float(np.sum(w * kernel.eval_eps(eps, pts - c) * density(pts)))
    return out


def _mollify_1d(density, kernel, eps, x, quad):
    dom = density.domain
    reach = eps * kernel.radius
    a = np.maximum(x - reach, dom.lo[0])
    b = np.minimum(x + reach, dom.hi[0])
    extra = [k for k in density.axis_breaks()[0]]
    cols = [a, x, b] + [np.full_like(x, k) for k in extra]
    br = np.sort(np.clip(np.stack(cols, -1), a[:, None], b[:, None]), axis=1)
    total = np.zeros_like(x)
    for j in range(br.shape[1] - 1):
        y, w = quad.line(br[:, j], br[:, j + 1])
        vals = kernel.eval_eps(eps, (y - x[:, None]).ravel()).reshape(y.shape) * \
            density(y.reshape(-1, 1)).reshape(y.shape)
        total += np.sum(w * vals, axis=1)
    return total
