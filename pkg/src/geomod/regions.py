"""Region shapes with exactly computable mass and interface integrals:
axis-aligned boxes and their unions (intervals when d = 1), and half-plane
cuts of a disc."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidArgument, UnsupportedGeometry
from .quadrature import QuadratureRule

_TOL = 1e-12


@dataclass(frozen=True)
class Box:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lo))
        hi = tuple(float(v) for v in np.atleast_1d(self.hi))
        if len(lo) != len(hi) or not all(h > l for l, h in zip(lo, hi)):
            raise InvalidArgument(f"degenerate box {lo} .. {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dimension(self) -> int:
        return len(self.lo)

    @property
    def volume(self) -> float:
        return float(np.prod(np.subtract(self.hi, self.lo)))

    def contains(self, x) -> np.ndarray:
        # half-open so that slab partitions label every point exactly once
        x = np.atleast_2d(x)
        return np.all((x >= self.lo) & (x < self.hi), axis=1)


def _segment_integral(a, b, f, density, quad: QuadratureRule) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    length = float(np.linalg.norm(b - a))
    if length == 0.0:
        return 0.0
    cuts = [0.0, 1.0, *density.kinks_on_segment(a, b)]
    t, w = quad.composite(cuts)
    pts = a + t[:, None] * (b - a)
    return length * float(np.sum(w * f(pts)))


class Region:
    """Subset of a domain; subclasses fill in the geometry."""

    dimension: int

    def contains(self, x) -> np.ndarray:
        raise NotImplementedError

    def power_integral(self, density, p: float, quad: QuadratureRule) -> float:
        """∫_region ρ^p dx."""
        raise NotImplementedError

    def integrate(self, f: Callable, quad: QuadratureRule) -> float:
        """∫_region f dx for a vectorized callable ``f(points)``."""
        raise NotImplementedError

    def interface_integral(self, domain, f: Callable, density,
                           quad: QuadratureRule) -> float:
        """∫_{∂U ∩ D} f dH^{d-1}."""
        raise NotImplementedError

    def check_within(self, domain) -> None:
        raise NotImplementedError

    def indicator(self) -> Callable:
        return lambda x: self.contains(x).astype(float)


class BoxUnion(Region):
    """Union of non-overlapping axis-aligned boxes."""

    def __init__(self, boxes):
        boxes = [b if isinstance(b, Box) else Box(*b) for b in boxes]
        if not boxes:
            raise InvalidArgument("empty box union")
        dims = {b.dimension for b in boxes}
        if len(dims) != 1:
            raise InvalidArgument("boxes of mixed dimension")
        self.boxes = tuple(boxes)
        self.dimension = dims.pop()

    def __repr__(self):
        return f"BoxUnion({list(self.boxes)!r})"

    @classmethod
    def interval(cls, a: float, b: float) -> "BoxUnion":
        return cls([Box((a,), (b,))])

    @property
    def volume(self) -> float:
        return sum(b.volume for b in self.boxes)

    def contains(self, x) -> np.ndarray:
        x = np.atleast_2d(x)
        out = np.zeros(len(x), dtype=bool)
        for b in self.boxes:
            out |= b.contains(x)
        return out

    def power_integral(self, density, p, quad):
        return sum(density.box_power(b.lo, b.hi, p, quad) for b in self.boxes)

    def integrate(self, f, quad, breaks=None):
        total = 0.0
        for b in self.boxes:
            pts, w = quad.box(b.lo, b.hi, breaks)
            total += float(np.sum(w * f(pts)))
        return total

    def check_within(self, domain) -> None:
        if domain.kind == "disc":
            for b in self.boxes:
                corners = np.array(np.meshgrid(*zip(b.lo, b.hi))).reshape(2, -1).T
                if not np.all(np.linalg.norm(corners - domain.center, axis=1)
                              <= domain.radius + _TOL):
                    raise InvalidArgument("box leaves the disc domain")
            return
        if self.dimension != domain.dimension:
            raise InvalidArgument("region and domain dimensions differ")
        for b in self.boxes:
            if np.any(np.array(b.lo) < np.array(domain.lo) - _TOL) or \
                    np.any(np.array(b.hi) > np.array(domain.hi) + _TOL):
                raise InvalidArgument(f"box {b} leaves the domain")

    def _facets(self, domain):
        """Interior interface pieces as (axis, position, lo, hi) with the
        extent given in the remaining coordinates."""
        if not domain.is_box:
            raise UnsupportedGeometry("box unions need a box domain")
        d = self.dimension
        facets = []
        for bi, b in enumerate(self.boxes):
            for axis in range(d):
                for side, pos in ((0, b.lo[axis]), (1, b.hi[axis])):
                    if abs(pos - (domain.lo[axis] if side == 0 else domain.hi[axis])) <= _TOL:
                        continue
                    rest = [k for k in range(d) if k != axis]
                    # neighbours of the same region across this face
                    covers = []
                    for bj, other in enumerate(self.boxes):
                        if bj == bi:
                            continue
                        opp = other.hi[axis] if side == 0 else other.lo[axis]
                        if abs(opp - pos) > _TOL:
                            continue
                        ov = [(max(b.lo[k], other.lo[k]), min(b.hi[k], other.hi[k]))
                              for k in rest]
                        if all(h > l for l, h in ov):
                            covers.append(ov)
                    if d == 1:
                        if not covers:
                            facets.append((axis, pos, (), ()))
                    elif d == 2:
                        k = rest[0]
                        for lo_, hi_ in _subtract_intervals(
                                (b.lo[k], b.hi[k]), [c[0] for c in covers]):
                            facets.append((axis, pos, (lo_,), (hi_,)))
                    else:
                        if covers:
                            raise UnsupportedGeometry(
                                "shared faces between boxes are supported for d <= 2")
                        facets.append((axis, pos, tuple(b.lo[k] for k in rest),
                                       tuple(b.hi[k] for k in rest)))
        return facets

    def interface_integral(self, domain, f, density, quad):
        d = self.dimension
        total = 0.0
        for axis, pos, flo, fhi in self._facets(domain):
            rest = [k for k in range(d) if k != axis]
            if d == 1:
                total += float(f(np.array([[pos]]))[0])
            elif d == 2:
                a = np.empty(2)
                b = np.empty(2)
                a[axis] = b[axis] = pos
                a[rest[0]], b[rest[0]] = flo[0], fhi[0]
                total += _segment_integral(a, b, f, density, quad)
            else:
                pts2, w = quad.box(flo, fhi)
                pts = np.empty((len(pts2), d))
                pts[:, axis] = pos
                pts[:, rest] = pts2
                total += float(np.sum(w * f(pts)))
        return total

    def to_dict(self) -> dict:
        return {"shape": "boxes",
                "boxes": [{"lo": list(b.lo), "hi": list(b.hi)} for b in self.boxes]}


def _subtract_intervals(base, holes):
    pieces = [base]
    for hl, hh in holes:
        nxt = []
        for l, h in pieces:
            if hh <= l or hl >= h:
                nxt.append((l, h))
                continue
            if hl > l:
                nxt.append((l, hl))
            if hh < h:
                nxt.append((hh, h))
        pieces = nxt
    return [(l, h) for l, h in pieces if h - l > _TOL]


class HalfDisc(Region):
    """``{x in disc(center, radius) : normal·(x - center) < offset}``."""

    dimension = 2

    def __init__(self, center, radius, normal, offset=0.0):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        n = np.asarray(normal, dtype=float)
        self.normal = n / np.linalg.norm(n)
        self.offset = float(offset)
        if not (-self.radius <= self.offset <= self.radius):
            raise InvalidArgument("cut misses the disc")

    def __repr__(self):
        return (f"HalfDisc(center={self.center.tolist()}, radius={self.radius}, "
                f"normal={self.normal.tolist()}, offset={self.offset})")

    @property
    def volume(self) -> float:
        r, h = self.radius, self.offset
        # circular segment below the chord at signed height h
        return r * r * (np.pi - np.arccos(h / r)) + h * np.sqrt(r * r - h * h)

    def contains(self, x) -> np.ndarray:
        x = np.atleast_2d(x)
        rel = x - self.center
        return (np.einsum("ij,ij->i", rel, rel) < self.radius**2) & \
            (rel @ self.normal < self.offset)

    def _chord_coordinates(self, quad):
        # t = -R cos(phi) along the normal; chord half-width R sin(phi)
        r = self.radius
        phi_max = np.arccos(np.clip(-self.offset / r, -1.0, 1.0))
        phi, wphi = quad.line(0.0, phi_max)
        phi, wphi = phi.ravel(), wphi.ravel()
        t = -r * np.cos(phi)
        half = r * np.sin(phi)
        s, ws = quad.line(-half, half)
        tangent = np.array([-self.normal[1], self.normal[0]])
        pts = (self.center + t[:, None, None] * self.normal
               + s[..., None] * tangent)
        w = (wphi * r * np.sin(phi))[:, None] * ws
        return pts.reshape(-1, 2), w.ravel()

    def integrate(self, f, quad):
        pts, w = self._chord_coordinates(quad)
        return float(np.sum(w * f(pts)))

    def power_integral(self, density, p, quad):
        if density.is_uniform:
            return self.volume * density.value**p
        return self.integrate(lambda x: density(x) ** p, quad)

    def check_within(self, domain) -> None:
        if domain.kind != "disc" or not np.allclose(domain.center, self.center) \
                or abs(domain.radius - self.radius) > _TOL:
            raise InvalidArgument("half-disc must be cut from the disc domain")

    def chord(self):
        r, h = self.radius, self.offset
        half = np.sqrt(max(r * r - h * h, 0.0))
        tangent = np.array([-self.normal[1], self.normal[0]])
        mid = self.center + h * self.normal
        return mid - half * tangent, mid + half * tangent

    def interface_integral(self, domain, f, density, quad):
        if abs(abs(self.offset) - self.radius) <= _TOL:
            return 0.0
        a, b = self.chord()
        return _segment_integral(a, b, f, density, quad)

    def to_dict(self) -> dict:
        return {"shape": "half_disc", "center": self.center.tolist(),
                "radius": self.radius, "normal": self.normal.tolist(),
                "offset": self.offset}


def region_from_dict(spec: dict) -> Region:
    shape = spec.get("shape")
    if shape == "boxes":
        return BoxUnion([Box(b["lo"], b["hi"]) for b in spec["boxes"]])
    if shape == "interval":
        return BoxUnion.interval(spec["lo"], spec["hi"])
    if shape == "half_disc":
        return HalfDisc(spec["center"], spec["radius"], spec["normal"],
                        spec.get("offset", 0.0))
    raise UnsupportedGeometry(f"unknown region shape {shape!r}")
