"""Radial connectivity kernels with unit support radius and unit mass.

All profiles are normalized so that ``∫ η = 1``; the length scale lives
entirely in ``eps`` through ``η_eps(z) = η(z / eps) / eps**d``. The figures
this library reproduces used the unnormalized indicator ``1_{|x|<1}``;
modularity does not see the difference (it is invariant under ``W -> cW``)
but the graph total variation and ``σ_η`` do, so the normalized form is used
throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gamma, pi

import numpy as np

from .errors import InvalidArgument
from .quadrature import QuadratureRule

PROFILES = ("indicator", "cone", "epanechnikov")


_BALL = {0: 1.0, 1: 2.0, 2: pi, 3: 4.0 * pi / 3.0}


def ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d (exact constants for d <= 3)."""
    return _BALL[d] if d in _BALL else pi ** (d / 2) / gamma(d / 2 + 1)


def _profile(name: str, r):
    r = np.asarray(r, dtype=float)
    inside = r < 1.0
    if name == "indicator":
        return inside.astype(float)
    if name == "cone":
        return np.where(inside, 1.0 - r, 0.0)
    return np.where(inside, 1.0 - r * r, 0.0)


# ∫_0^t profile(s) s^k ds for t in [0, 1]
def _profile_moment(name: str, t, k: int):
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    if name == "indicator":
        return t ** (k + 1) / (k + 1)
    if name == "cone":
        return t ** (k + 1) / (k + 1) - t ** (k + 2) / (k + 2)
    return t ** (k + 1) / (k + 1) - t ** (k + 3) / (k + 3)


@dataclass(frozen=True)
class Kernel:
    profile: str = "indicator"
    dimension: int = 1

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise InvalidArgument(f"unknown kernel profile {self.profile!r}")
        if self.dimension not in (1, 2, 3):
            raise InvalidArgument("kernel dimension must be 1, 2 or 3")

    @property
    def radius(self) -> float:
        return 1.0

    @property
    def normalization(self) -> float:
        """Constant c with ∫ c·profile = 1."""
        d = self.dimension
        shell = d * ball_volume(d)
        return 1.0 / (shell * float(_profile_moment(self.profile, 1.0, d - 1)))

    def radial(self, r):
        """η as a function of |z|."""
        return self.normalization * _profile(self.profile, r)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if self.dimension == 1 and z.ndim <= 1:
            r = np.abs(z)
        else:
            r = np.linalg.norm(np.atleast_2d(z), axis=-1)
        return self.radial(r)

    def eval_eps(self, eps: float, z):
        """η_eps(z) = η(z/eps)/eps^d."""
        if not eps > 0:
            raise InvalidArgument("eps must be positive")
        return self(np.asarray(z, dtype=float) / eps) / eps**self.dimension

    def radial_moment(self, t, k: int):
        """∫_0^t η(s) s^k ds (radial profile, including the constant)."""
        return self.normalization * _profile_moment(self.profile, t, k)

    @property
    def at_zero(self) -> float:
        return self.normalization

    def sigma(self) -> float:
        """σ_η = ∫ η(x)|x_1| dx in closed form."""
        d = self.dimension
        # ∫_{S^{d-1}} |ω_1| dω = 2 |B_{d-1}|
        return self.normalization * 2.0 * ball_volume(d - 1) * \
            float(_profile_moment(self.profile, 1.0, d))

    def sample(self, rng: np.random.Generator, m: int) -> np.ndarray:
        """``m`` displacements with density η (rejection from the unit ball)."""
        d = self.dimension
        out = np.empty((0, d))
        while len(out) < m:
            k = max(2 * (m - len(out)), 256)
            g = rng.standard_normal((k, d))
            g /= np.linalg.norm(g, axis=1, keepdims=True)
            r = rng.random(k) ** (1.0 / d)
            u = rng.random(k)
            keep = u * self.normalization < self.radial(r)
            out = np.concatenate([out, (g * r[:, None])[keep]])
        return out[:m]

    def to_dict(self) -> dict:
        return {"profile": self.profile, "dimension": self.dimension}


def eval_eps(kernel: Kernel, eps: float, z):
    return kernel.eval_eps(eps, z)


def sigma_eta(kernel: Kernel) -> float:
    return kernel.sigma()


def _polar_nodes(d: int, quad: QuadratureRule, split_first_axis: bool):
    """Unit-ball nodes in polar/spherical coordinates with volume weights."""
    r, wr = quad.line(0.0, 1.0)
    r, wr = r.ravel(), wr.ravel()
    if d == 1:
        x = np.concatenate([-r, r])[:, None]
        return x, np.concatenate([wr, wr])
    if d == 2:
        br = [0, np.pi / 2, 3 * np.pi / 2, 2 * np.pi] if split_first_axis else [0, 2 * np.pi]
        th, wth = quad.composite(br)
        R, TH = np.meshgrid(r, th, indexing="ij")
        W = np.multiply.outer(wr * r, wth)
        x = np.stack([R * np.cos(TH), R * np.sin(TH)], -1)
        return x.reshape(-1, 2), W.ravel()
    br = [0, np.pi / 2, np.pi] if split_first_axis else [0, np.pi]
    ph, wph = quad.composite(br)
    th, wth = quad.composite([0, 2 * np.pi])
    R, PH, TH = np.meshgrid(r, ph, th, indexing="ij")
    W = np.einsum("i,j,k->ijk", wr * r * r, wph * np.sin(ph), wth)
    x = np.stack([R * np.cos(PH), R * np.sin(PH) * np.cos(TH),
                  R * np.sin(PH) * np.sin(TH)], -1)
    return x.reshape(-1, 3), W.ravel()


def mass_by_quadrature(kernel: Kernel, quad: QuadratureRule | None = None,
                       eps: float = 1.0) -> float:
    """∫ η_eps over its support, from Cartesian evaluations on polar nodes."""
    quad = quad or QuadratureRule("gauss", 32)
    x, w = _polar_nodes(kernel.dimension, quad, False)
    x = x * eps
    w = w * eps**kernel.dimension
    return float(np.sum(w * kernel.eval_eps(eps, x)))


def sigma_by_quadrature(kernel: Kernel, quad: QuadratureRule | None = None) -> float:
    quad = quad or QuadratureRule("gauss", 32)
    x, w = _polar_nodes(kernel.dimension, quad, True)
    return float(np.sum(w * kernel(x) * np.abs(x[:, 0])))


def c_eta_rho(kernel: Kernel, density, quad: QuadratureRule | None = None) -> float:
    """σ_η / (2 ∫_D ρ²)."""
    quad = quad or QuadratureRule()
    return kernel.sigma() / (2.0 * density.total_power(2.0, quad))
