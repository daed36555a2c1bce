"""Deterministic quadrature: Gauss-Legendre or midpoint rules on intervals,
composite panels split at breakpoints, tensor products on boxes, and polar
integration over the intersection of a disc with a box."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidArgument


@lru_cache(maxsize=64)
def _reference_rule(kind: str, n: int) -> tuple[np.ndarray, np.ndarray]:
    # nodes and weights on [0, 1]
    if kind == "gauss":
        x, w = np.polynomial.legendre.leggauss(n)
        return 0.5 * (x + 1.0), 0.5 * w
    x = (np.arange(n) + 0.5) / n
    return x, np.full(n, 1.0 / n)


@dataclass(frozen=True)
class QuadratureRule:
    """One-dimensional rule applied per axis (and per panel).

    ``kind`` is ``"gauss"`` (Gauss-Legendre) or ``"midpoint"``; ``nodes`` is
    the node count per axis and per panel.
    """

    kind: str = "gauss"
    nodes: int = 64

    def __post_init__(self):
        if self.kind not in ("gauss", "midpoint"):
            raise InvalidArgument(f"unknown quadrature kind {self.kind!r}")
        if self.nodes < 2:
            raise InvalidArgument("quadrature needs at least 2 nodes per axis")

    def doubled(self) -> "QuadratureRule":
        return QuadratureRule(self.kind, 2 * self.nodes)

    def reference(self) -> tuple[np.ndarray, np.ndarray]:
        return _reference_rule(self.kind, self.nodes)

    def line(self, a, b) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights on ``[a, b]``; broadcasts over array endpoints,
        adding a trailing node axis."""
        t, w = self.reference()
        a = np.asarray(a, dtype=float)[..., None]
        b = np.asarray(b, dtype=float)[..., None]
        return a + (b - a) * t, (b - a) * w

    def composite(self, breaks: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        """Panels between consecutive sorted breakpoints (duplicates dropped)."""
        br = np.unique(np.asarray(breaks, dtype=float))
        x, w = self.line(br[:-1], br[1:])
        return x.ravel(), w.ravel()

    def box(self, lo, hi, breaks=None) -> tuple[np.ndarray, np.ndarray]:
        """Tensor-product points ``(m, d)`` and weights over the box
        ``[lo, hi]``. ``breaks`` optionally lists interior split points per
        axis."""
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        axes_x, axes_w = [], []
        for k in range(lo.size):
            extra = [] if breaks is None else [
                b for b in breaks[k] if lo[k] < b < hi[k]]
            x, w = self.composite([lo[k], hi[k], *extra])
            axes_x.append(x)
            axes_w.append(w)
        grids = np.meshgrid(*axes_x, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        wts = axes_w[0]
        for w in axes_w[1:]:
            wts = np.multiply.outer(wts, w)
        return pts, np.ravel(wts)


def error_estimate(integral: Callable[[QuadratureRule], float],
                   quad: QuadratureRule) -> float:
    """Difference between the rule and its node-doubled refinement."""
    return abs(integral(quad.doubled()) - integral(quad))


# ---------------------------------------------------------------------------
# polar integration over a disc intersected with a box (d = 2)

def _ray_box(c, theta, lo, hi):
    """Entry/exit distances of rays from ``c`` along ``theta`` through the
    box; ``r_in > r_out`` means a miss."""
    dx, dy = np.cos(theta), np.sin(theta)
    r_in = np.zeros_like(theta)
    r_out = np.full_like(theta, np.inf)
    for comp, dcomp in ((0, dx), (1, dy)):
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = (lo[comp] - c[comp]) / dcomp
            t2 = (hi[comp] - c[comp]) / dcomp
        tmin = np.minimum(t1, t2)
        tmax = np.maximum(t1, t2)
        parallel = dcomp == 0
        inside = (lo[comp] <= c[comp]) & (c[comp] <= hi[comp])
        tmin = np.where(parallel, np.where(inside, -np.inf, np.inf), tmin)
        tmax = np.where(parallel, np.where(inside, np.inf, -np.inf), tmax)
        r_in = np.maximum(r_in, tmin)
        r_out = np.minimum(r_out, tmax)
    return r_in, r_out


def _angle_breaks_box(c, rmax, lo, hi):
    br = [0.0, 2 * np.pi]
    corners = [(lo[0], lo[1]), (lo[0], hi[1]), (hi[0], lo[1]), (hi[0], hi[1])]
    for px, py in corners:
        if (px, py) != (c[0], c[1]):
            br.append(np.arctan2(py - c[1], px - c[0]) % (2 * np.pi))
    # circle of radius rmax meets each edge line
    for comp in (0, 1):
        other = 1 - comp
        for pos in (lo[comp], hi[comp]):
            h = pos - c[comp]
            if abs(h) < rmax:
                s = np.sqrt(rmax * rmax - h * h)
                for sgn in (-1.0, 1.0):
                    p = np.empty(2)
                    p[comp] = pos
                    p[other] = c[other] + sgn * s
                    br.append(np.arctan2(p[1] - c[1], p[0] - c[0]) % (2 * np.pi))
    return np.unique(np.asarray(br))


def polar_box_integral(center, rmax, lo, hi, quad: QuadratureRule, *,
                       antiderivative: Callable | None = None,
                       integrand: Callable | None = None) -> float:
    """Integral over ``B(center, rmax) ∩ [lo, hi]`` in the plane.

    Either ``antiderivative(R) = ∫_0^R f(r) r dr`` for a radial integrand
    (exact in the radius), or a general ``integrand(points)`` integrated with
    the radial rule. The angular range is split wherever the ray's clipped
    extent changes formula, so each panel is smooth.
    """
    c = np.asarray(center, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    th, wth = quad.composite(_angle_breaks_box(c, rmax, lo, hi))
    r_in, r_out = _ray_box(c, th, lo, hi)
    a = np.clip(r_in, 0.0, rmax)
    b = np.clip(r_out, 0.0, rmax)
    b = np.maximum(a, b)
    if antiderivative is not None:
        return float(np.sum(wth * (antiderivative(b) - antiderivative(a))))
    r, wr = quad.line(a, b)                       # (m, q)
    pts = c + np.stack([r * np.cos(th)[:, None], r * np.sin(th)[:, None]], -1)
    vals = integrand(pts.reshape(-1, 2)).reshape(r.shape)
    return float(np.sum(wth * np.sum(wr * r * vals, axis=1)))


def polar_disc_integral(center, rmax, disc_center, disc_radius,
                        quad: QuadratureRule, *,
                        antiderivative: Callable | None = None,
                        integrand: Callable | None = None) -> float:
    """Integral over ``B(center, rmax) ∩ B(disc_center, disc_radius)``,
    with ``center`` inside the disc."""
    c = np.asarray(center, dtype=float)
    q = np.asarray(disc_center, dtype=float)
    v = c - q
    dist = float(np.hypot(*v))
    br = [0.0, 2 * np.pi]
    # circle-circle intersection angles seen from c
    if dist > 0 and abs(disc_radius - rmax) < dist < disc_radius + rmax:
        base = np.arctan2(-v[1], -v[0])
        cosang = (rmax**2 + dist**2 - disc_radius**2) / (2 * rmax * dist)
        ang = np.arccos(np.clip(cosang, -1, 1))
        br += [(base + ang) % (2 * np.pi), (base - ang) % (2 * np.pi)]
    th, wth = quad.composite(br)
    e = np.stack([np.cos(th), np.sin(th)], -1)
    proj = e @ v
    r_out = -proj + np.sqrt(np.maximum(proj**2 - dist**2 + disc_radius**2, 0.0))
    b = np.minimum(r_out, rmax)
    if antiderivative is not None:
        return float(np.sum(wth * (antiderivative(b) - antiderivative(0.0))))
    r, wr = quad.line(np.zeros_like(b), b)
    pts = c + r[..., None] * e[:, None, :]
    vals = integrand(pts.reshape(-1, 2)).reshape(r.shape)
    return float(np.sum(wth * np.sum(wr * r * vals, axis=1)))
