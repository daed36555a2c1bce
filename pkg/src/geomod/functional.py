"""α-modularity, graph total variation, the GΛ functional, and the exact
decomposition

    1 - 1/K - Q = (n²(n-1)^{2α}/S²) Σ_k GΛ(u_k - 1/K)² + eps·(n(n-1)/4m) Σ_k GTV(u_k)

together with the discrete energies F_n, TV_n, E_n built from it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGraph, EmptyGraph, InvalidArgument
from .geograph import GeometricGraph, row_sums

CSV_COLUMNS = ("n", "eps", "alpha", "K", "Q", "quad", "gtv", "residual")


class DiscretePartition:
    """Vertex labels in ``0..K-1``; empty clusters are allowed."""

    def __init__(self, labels, K: int | None = None):
        labels = np.asarray(labels)
        if labels.ndim != 1 or (labels.size and not np.issubdtype(labels.dtype, np.integer)):
            raise InvalidArgument("labels must be a 1-d integer array")
        labels = labels.astype(np.int64)
        if K is None:
            K = int(labels.max()) + 1 if labels.size else 1
        if labels.size and (labels.min() < 0 or labels.max() >= K):
            raise InvalidArgument(f"labels must lie in 0..{K - 1}")
        labels.setflags(write=False)
        self.labels = labels
        self.K = int(K)

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"DiscretePartition(K={self.K}, sizes={self.sizes.tolist()})"

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.K)

    @property
    def n_clusters(self) -> int:
        return int(np.count_nonzero(self.sizes))

    def indicator(self, k: int) -> np.ndarray:
        return (self.labels == k).astype(float)

    def canonical(self) -> "DiscretePartition":
        """Relabel by order of first appearance."""
        _, first, inv = np.unique(self.labels, return_index=True, return_inverse=True)
        rank = np.argsort(np.argsort(first))
        return DiscretePartition(rank[inv], self.K)

    @classmethod
    def single(cls, n: int, K: int = 1) -> "DiscretePartition":
        return cls(np.zeros(n, dtype=np.int64), K)


@dataclass(frozen=True)
class DecompositionReport:
    n: int
    eps: float
    alpha: float
    K: int
    Q: float
    quad_term: float
    gtv_term: float

    @property
    def residual(self) -> float:
        return (1.0 - 1.0 / self.K - self.Q) - (self.quad_term + self.eps * self.gtv_term)

    def row(self) -> list:
        return [self.n, self.eps, self.alpha, self.K, self.Q, self.quad_term,
                self.gtv_term, self.residual]


def _check_partition(graph: GeometricGraph, partition: DiscretePartition):
    if len(partition) != graph.n:
        raise InvalidArgument("partition size differs from vertex count")


def _internal_weight(graph: GeometricGraph, lab: np.ndarray) -> float:
    # summed row by row like the degrees, so one cluster gives exactly 2m
    W = graph.weights
    same = lab[graph.rows] == lab[W.indices]
    return float(np.sum(row_sums(W, np.where(same, W.data, 0.0))))


def _cluster_sums(values: np.ndarray, partition: DiscretePartition) -> np.ndarray:
    # few clusters: reduce each with np.sum, matching the order used for S
    if partition.K > 64:
        return np.bincount(partition.labels, weights=values, minlength=partition.K)
    return np.array([np.sum(values[partition.labels == k]) for k in range(partition.K)])


def modularity(graph: GeometricGraph, partition: DiscretePartition, alpha: float) -> float:
    """α-modularity from cluster aggregates: internal weight over 2m minus
    Σ_k (Σ_{i∈k} d_i^α)² / S²."""
    _check_partition(graph, partition)
    if graph.two_m <= 0:
        raise EmptyGraph("modularity needs positive total weight")
    internal = _internal_weight(graph, partition.labels)
    A = _cluster_sums(graph.degree_power(alpha), partition)
    S = graph.s_alpha(alpha)
    return internal / graph.two_m - float(np.sum((A / S) ** 2))


def modularity_lambda(graph: GeometricGraph, partition: DiscretePartition,
                      lam: float) -> float:
    """Q^λ = (1/2m) Σ_ij (W_ij - λ d_i d_j / 2m) δ(c_i, c_j)."""
    if lam < 0:
        raise InvalidArgument("lambda must be nonnegative")
    _check_partition(graph, partition)
    if graph.two_m <= 0:
        raise EmptyGraph("modularity needs positive total weight")
    internal = _internal_weight(graph, partition.labels)
    D = _cluster_sums(graph.degrees, partition)
    return internal / graph.two_m - lam * float(np.sum((D / graph.two_m) ** 2))


def gtv(graph: GeometricGraph, u) -> float:
    """GTV_n(u) = (1/eps)(1/(n(n-1))) Σ_{i≠j} W_ij |u_i - u_j| for binary u."""
    n = graph.n
    if n < 2:
        raise InvalidArgument("graph total variation needs n >= 2")
    u = np.asarray(u, dtype=float)
    if u.shape != (n,) or not np.all((u == 0) | (u == 1)):
        raise InvalidArgument("u must be a binary vector on the vertices")
    W = graph.weights
    cut = u[graph.rows] != u[W.indices]
    return float(np.sum(W.data[cut])) / (graph.eps * n * (n - 1))


def glambda(graph: GeometricGraph, alpha: float, u) -> float:
    """GΛ_n(u) = (1/n) Σ_i (d_i/(n-1))^α u_i."""
    n = graph.n
    u = np.asarray(u, dtype=float)
    if u.shape != (n,):
        raise InvalidArgument("u must be a vector on the vertices")
    base = graph.degrees / (n - 1)
    if alpha == 0:
        weight = np.ones(n)
    else:
        if alpha < 0 and np.any(base == 0):
            raise DegenerateGraph("isolated vertex with alpha < 0")
        weight = base**alpha
    return float(np.sum(weight * u)) / n


def decompose(graph: GeometricGraph, partition: DiscretePartition, alpha: float,
              K: int | None = None) -> DecompositionReport:
    """Quadratic and total-variation terms of ``1 - 1/K - Q``; Q itself comes
    from :func:`modularity`, so the residual checks two independent routes."""
    K = partition.K if K is None else int(K)
    if K < 1 or (len(partition) and partition.labels.max() >= K):
        raise InvalidArgument("K must cover every label")
    n = graph.n
    if graph.two_m <= 0:
        raise EmptyGraph("decomposition needs positive total weight")
    S = graph.s_alpha(alpha)
    factor = n * float(n - 1) ** alpha / S
    g_one = glambda(graph, alpha, np.ones(n))
    quad = 0.0
    tv = 0.0
    for k in range(K):
        uk = (partition.labels == k).astype(float)
        quad += (factor * (glambda(graph, alpha, uk) - g_one / K)) ** 2
        tv += gtv(graph, uk)
    tv *= n * (n - 1) / (2.0 * graph.two_m)
    Q = modularity(graph, partition, alpha)
    return DecompositionReport(n, graph.eps, alpha, K, Q, quad, tv)


def energy_terms(graph, partition, alpha, K=None) -> tuple[float, float]:
    """(F_n, TV_n)."""
    rep = decompose(graph, partition, alpha, K)
    return rep.quad_term / graph.eps, rep.gtv_term


def energy_en(graph: GeometricGraph, partition: DiscretePartition, alpha: float,
              K: int | None = None) -> float:
    """E_n = F_n + TV_n, so that eps·E_n + Q = 1 - 1/K."""
    f, tv = energy_terms(graph, partition, alpha, K)
    return f + tv
