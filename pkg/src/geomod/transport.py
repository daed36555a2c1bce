"""One-dimensional quantile transport, TL¹ surrogates, misclassification
scores and weak-convergence diagnostics.

For a sample X_1..X_n from ν on an interval, the quantile map is
``T(x) = X_(⌈n F(x)⌉)`` where F is the CDF of ν; it is constant on the cells
``(F⁻¹((i-1)/n), F⁻¹(i/n)]`` and pushes ν forward to the empirical measure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import log, sqrt

import numpy as np

from .domain import DEFAULT_QUAD, Density, SampleCloud
from .errors import InvalidArgument, UnsupportedDimension
from .functional import DiscretePartition
from .quadrature import QuadratureRule
from .regions import BoxUnion, Region

# bisection steps for F⁻¹; interval halves each step, so 80 is below ulp
_INVERSE_STEPS = 80


def inverse_cdf(density: Density, t) -> np.ndarray:
    """F⁻¹(t) by vectorized bisection on the exact CDF (smallest x with
    F(x) ≥ t up to round-off)."""
    t = np.asarray(t, dtype=float)
    lo = np.full(t.shape, density.domain.lo[0])
    hi = np.full(t.shape, density.domain.hi[0])
    for _ in range(_INVERSE_STEPS):
        mid = 0.5 * (lo + hi)
        below = density.cdf(mid) < t
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 4e-16 * np.maximum(1.0, np.abs(hi))):
            break
    return hi


@dataclass(frozen=True)
class TransportMap1D:
    """Quantile map of a 1-d sample.

    ``order`` lists cloud indices by increasing position, ``sorted`` the
    order statistics, ``edges`` the n + 1 cell endpoints F⁻¹(i/n).
    """

    sorted: np.ndarray
    order: np.ndarray
    edges: np.ndarray
    density: Density

    @property
    def n(self) -> int:
        return len(self.sorted)

    def cell_of(self, x) -> np.ndarray:
        """0-based order-statistic index ⌈nF(x)⌉ - 1, with F = 0 sent to the
        first cell."""
        x = np.asarray(x, dtype=float)
        k = np.ceil(self.n * self.density.cdf(x) - 1e-12).astype(np.int64) - 1
        return np.clip(k, 0, self.n - 1)

    def __call__(self, x) -> np.ndarray:
        return self.sorted[self.cell_of(x)]


def build_quantile_map(density: Density, cloud: SampleCloud) -> TransportMap1D:
    if cloud.dimension != 1 or density.domain.dimension != 1:
        raise UnsupportedDimension("quantile transport maps are built in d = 1 only")
    x = cloud.points[:, 0]
    order = np.argsort(x, kind="stable")
    n = len(x)
    edges = np.empty(n + 1)
    edges[0] = density.domain.lo[0]
    edges[-1] = density.domain.hi[0]
    if n > 1:
        edges[1:-1] = inverse_cdf(density, np.arange(1, n) / n)
    for arr in (order, edges):
        arr.setflags(write=False)
    srt = x[order]
    srt.setflags(write=False)
    return TransportMap1D(srt, order, edges, density)


@dataclass(frozen=True)
class SupDeviation:
    sup: float
    lil: float | None  # None for n < 3


def sup_deviation(tmap: TransportMap1D) -> SupDeviation:
    """‖Id - T‖_∞ over the domain.

    On each cell T is constant, so the supremum of |x - X_(i)| is reached at
    (or approached towards) a cell endpoint. The second field is
    √n·sup / √(2 log log n).
    """
    left = np.abs(tmap.edges[:-1] - tmap.sorted)
    right = np.abs(tmap.edges[1:] - tmap.sorted)
    sup = float(max(left.max(), right.max()))
    n = tmap.n
    lil = sqrt(n) * sup / sqrt(2.0 * log(log(n))) if n >= 3 else None
    return SupDeviation(sup, lil)


def _segments(tmap: TransportMap1D, extra=()):
    """Pieces between all cell edges, order statistics and extra points,
    with the cell index of each piece."""
    pts = np.concatenate([tmap.edges, tmap.sorted, np.asarray(extra, dtype=float),
                          tmap.density.axis_breaks()[0]])
    lo, hi = tmap.edges[0], tmap.edges[-1]
    pts = np.unique(np.clip(pts, lo, hi))
    a, b = pts[:-1], pts[1:]
    keep = b > a
    a, b = a[keep], b[keep]
    cell = np.clip(np.searchsorted(tmap.edges, 0.5 * (a + b), side="left") - 1, 0, tmap.n - 1)
    return a, b, cell


def pushforward_integral(tmap: TransportMap1D, g, quad: QuadratureRule = DEFAULT_QUAD) -> float:
    """∫ g(T x) dν(x), by quadrature of ρ over each cell."""
    a, b, cell = _segments(tmap)
    y, w = quad.line(a, b)
    mass = np.sum(w * tmap.density(y.reshape(-1, 1)).reshape(y.shape), axis=1)
    return float(np.sum(np.asarray(g(tmap.sorted), dtype=float)[cell] * mass))


def empirical_mean(tmap: TransportMap1D, g) -> float:
    return float(np.mean(g(tmap.sorted)))


def _interval_ends(region) -> list[float]:
    if region is None:
        return []
    if isinstance(region, BoxUnion):
        return [v for box in region.boxes for v in (box.lo[0], box.hi[0])]
    raise InvalidArgument("u must be given as a union of intervals")


def tl1_surrogate(tmap: TransportMap1D, u: Region | None, u_n,
                  quad: QuadratureRule = DEFAULT_QUAD) -> float:
    """J = ∫|x - Tx| dν + ∫|u(x) - u_n(Tx)| dν.

    ``u`` is the region whose indicator is u (None for u ≡ 0); ``u_n`` is a
    binary vector indexed like the cloud.
    """
    u_n = np.asarray(u_n, dtype=float)
    if u_n.shape != (tmap.n,):
        raise InvalidArgument("u_n must have one entry per sample point")
    a, b, cell = _segments(tmap, _interval_ends(u))
    y, w = quad.line(a, b)
    rho = tmap.density(y.reshape(-1, 1)).reshape(y.shape)
    dist = np.abs(y - tmap.sorted[cell][:, None])
    vals_n = u_n[tmap.order][cell]
    mid = 0.5 * (a + b)
    u_mid = np.zeros_like(mid) if u is None else u.contains(mid[:, None]).astype(float)
    transport = float(np.sum(w * dist * rho))
    mismatch = float(np.sum(np.abs(u_mid - vals_n) * np.sum(w * rho, axis=1)))
    return transport + mismatch


@dataclass(frozen=True)
class Misclassification:
    """Per-class agreement ratios under the best label permutation.

    ``ratios[k]`` is NaN when continuum class k holds no sample point;
    ``permutation[k]`` is the discrete label matched to class k.
    """

    ratios: np.ndarray
    min_ratio: float
    max_ratio: float
    overall: float
    permutation: tuple

    def row(self) -> list:
        return [self.overall, self.min_ratio, self.max_ratio]


MAX_PERMUTATION_K = 8


def misclassification_scores(discrete_labels, continuum_labels, K: int) -> Misclassification:
    """Scores from two label vectors over the same points. Points with a
    negative continuum label (outside every region) are ignored."""
    if K > MAX_PERMUTATION_K:
        raise InvalidArgument(f"permutation search is limited to K <= {MAX_PERMUTATION_K}")
    dl = np.asarray(discrete_labels, dtype=np.int64)
    cl = np.asarray(continuum_labels, dtype=np.int64)
    if dl.shape != cl.shape:
        raise InvalidArgument("label vectors differ in length")
    ok = cl >= 0
    dl, cl = dl[ok], cl[ok]
    if dl.size and (dl.max() >= K or cl.max() >= K):
        raise InvalidArgument("labels exceed K")
    conf = np.zeros((K, K))
    np.add.at(conf, (cl, dl), 1.0)
    perms = np.array(list(itertools.permutations(range(K))))
    agree = conf[np.arange(K)[None, :], perms].sum(axis=1)
    best = int(np.argmax(agree))
    perm = perms[best]
    size = conf.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratios = np.where(size > 0, conf[np.arange(K), perm] / size, np.nan)
    defined = ratios[~np.isnan(ratios)]
    total = max(len(dl), 1)
    return Misclassification(ratios, float(defined.min()) if defined.size else float("nan"),
                             float(defined.max()) if defined.size else float("nan"),
                             float(agree[best] / total), tuple(int(p) for p in perm))


def misclassification(partition_n: DiscretePartition, partition, cloud: SampleCloud,
                      K: int | None = None) -> Misclassification:
    """Compare discrete labels with the continuum partition evaluated at the
    sample points."""
    if len(partition_n) != cloud.n:
        raise InvalidArgument("partition and cloud sizes differ")
    K = max(partition_n.K, partition.K) if K is None else int(K)
    return misclassification_scores(partition_n.labels, partition.labels(cloud.points), K)


# ---------------------------------------------------------------------------
# weak convergence

def _unit(points, domain):
    lo, hi = domain.bounds
    return (np.atleast_2d(points) - lo) / (hi - lo)


def function_panel(domain) -> dict:
    """Five bounded Lipschitz functions in coordinates rescaled to the unit
    box around the domain; kinks (for quadrature splitting) listed per axis
    in original coordinates."""
    lo, hi = domain.bounds

    def one(x):
        return np.ones(len(np.atleast_2d(x)))

    def linear(x):
        return _unit(x, domain)[:, 0]

    def ramp(x):
        # Lipschitz stand-in for the indicator of the lower half
        return np.clip((0.55 - _unit(x, domain)[:, 0]) / 0.1, 0.0, 1.0)

    def wave(x):
        return np.prod(np.cos(np.pi * _unit(x, domain)), axis=1)

    def tent(x):
        return np.maximum(0.0, 1.0 - 2.0 * np.abs(_unit(x, domain)[:, 0] - 0.5))

    k0 = [lo[0] + t * (hi[0] - lo[0]) for t in (0.45, 0.5, 0.55)]
    return {"one": (one, []), "linear": (linear, []), "ramp": (ramp, k0),
            "wave": (wave, []), "tent": (tent, k0)}


@dataclass(frozen=True)
class WeakRow:
    n: int
    seed: int
    name: str
    empirical: float
    exact: float

    @property
    def error(self) -> float:
        return abs(self.empirical - self.exact)


def weak_convergence_diagnostic(clouds, density: Density, panel: dict | None = None,
                                quad: QuadratureRule = DEFAULT_QUAD) -> list[WeakRow]:
    """|(1/n) Σ f(X_i) - ∫ f dν| for each cloud and each panel function."""
    dom = density.domain
    panel = function_panel(dom) if panel is None else panel
    exact = {}
    for name, (f, kinks) in panel.items():
        if dom.is_box:
            breaks = [list(b) for b in density.axis_breaks()]
            breaks[0] = breaks[0] + list(kinks)
            exact[name] = dom.integrate(lambda x, f=f: f(x) * density(x), quad, breaks)
        else:
            exact[name] = dom.integrate(lambda x, f=f: f(x) * density(x), quad)
    rows = []
    for cloud in clouds:
        for name, (f, _) in panel.items():
            rows.append(WeakRow(cloud.n, cloud.seed, name, float(np.mean(f(cloud.points))),
                                exact[name]))
    return rows
