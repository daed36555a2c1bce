"""Kernel-weighted random geometric graphs built with a uniform cell grid."""

from __future__ import annotations

import io
import itertools
import json

import numpy as np
import scipy.sparse as sp

from .domain import SampleCloud
from .errors import DegenerateGraph, InvalidArgument
from .kernel import Kernel

# candidate pairs materialized per chunk during the grid sweep
_CHUNK = 4_000_000


def row_sums(W: sp.csr_matrix, values: np.ndarray) -> np.ndarray:
    """Per-row sums of ``values`` laid out like ``W.data``, each reduced
    left to right, so equal inputs give bit-equal sums."""
    out = np.zeros(W.shape[0])
    nonempty = np.diff(W.indptr) > 0
    if values.size:
        out[nonempty] = np.add.reduceat(values, W.indptr[:-1][nonempty])
    return out


class GeometricGraph:
    """Symmetric sparse weights ``W_ij = scale·η_eps(X_i - X_j)``, zero
    diagonal, with degrees and total weight ``2m``.

    ``weights`` is a CSR matrix whose rows are the neighbour lists, sorted by
    column index. Treat instances as immutable.
    """

    def __init__(self, weights: sp.csr_matrix, eps: float, kernel: Kernel | None = None,
                 cloud: SampleCloud | None = None, scale: float = 1.0):
        W = sp.csr_matrix(weights, dtype=float)
        W.sort_indices()
        self.weights = W
        self.eps = float(eps)
        self.kernel = kernel
        self.cloud = cloud
        self.scale = float(scale)
        self.degrees = row_sums(W, W.data)
        self.degrees.setflags(write=False)
        self.two_m = float(np.sum(self.degrees))
        self._rows = None
        self._s_cache: dict[float, float] = {}

    @classmethod
    def from_dense(cls, W, eps: float = 1.0) -> "GeometricGraph":
        W = np.asarray(W, dtype=float)
        if W.shape[0] != W.shape[1] or not np.array_equal(W, W.T):
            raise InvalidArgument("weight matrix must be square and symmetric")
        if np.any(np.diag(W) != 0) or np.any(W < 0):
            raise InvalidArgument("weights must be nonnegative with zero diagonal")
        return cls(sp.csr_matrix(W), eps)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def nnz(self) -> int:
        return self.weights.nnz

    @property
    def rows(self) -> np.ndarray:
        """Row index of every stored entry (CSR order)."""
        if self._rows is None:
            W = self.weights
            self._rows = np.repeat(np.arange(self.n, dtype=np.int32), np.diff(W.indptr))
        return self._rows

    def neighbors(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        W = self.weights
        sl = slice(W.indptr[i], W.indptr[i + 1])
        return W.indices[sl], W.data[sl]

    def degree_power(self, alpha: float) -> np.ndarray:
        """d_i**alpha with 0**0 = 1."""
        d = self.degrees
        if alpha == 0:
            return np.ones(self.n)
        if alpha < 0 and np.any(d == 0):
            raise DegenerateGraph(
                "isolated vertex with alpha < 0; eps is below the connectivity scale")
        return d**alpha

    def s_alpha(self, alpha: float) -> float:
        if alpha not in self._s_cache:
            self._s_cache[alpha] = float(np.sum(self.degree_power(alpha)))
        return self._s_cache[alpha]

    def dense(self) -> np.ndarray:
        return self.weights.toarray()

    def header(self) -> dict:
        return {"n": self.n, "eps": self.eps,
                "kernel": None if self.kernel is None else self.kernel.to_dict(),
                "two_m": self.two_m}

    def edge_list_csv(self) -> str:
        """``i,j,weight`` rows for i < j."""
        U = sp.triu(self.weights, k=1).tocoo()
        order = np.lexsort((U.col, U.row))
        buf = io.StringIO()
        buf.write("i,j,weight\n")
        for i, j, w in zip(U.row[order], U.col[order], U.data[order]):
            buf.write(f"{i},{j},{float(w)!r}\n")
        return buf.getvalue()

    def header_json(self) -> str:
        return json.dumps(self.header())


def s_alpha(graph: GeometricGraph, alpha: float) -> float:
    """S = Σ_i d_i**alpha (0**0 = 1, so alpha = 0 gives n)."""
    return graph.s_alpha(alpha)


def _cell_pairs(points: np.ndarray, h: float):
    """Yield candidate index pairs (i, j), i < j, from the 3^d neighbour
    cells of every point; cell edge ``h``."""
    n, d = points.shape
    lo = points.min(axis=0)
    cell = np.floor((points - lo) / h).astype(np.int64)
    dims = cell.max(axis=0) + 1
    strides = np.concatenate([np.cumprod(dims[::-1])[::-1][1:], [1]])
    cid = cell @ strides
    order = np.argsort(cid, kind="stable")
    sorted_cid = cid[order]
    for off in itertools.product((-1, 0, 1), repeat=d):
        nb = cell + np.asarray(off)
        valid = np.all((nb >= 0) & (nb < dims), axis=1)
        nid = nb @ strides
        start = np.searchsorted(sorted_cid, nid, side="left")
        stop = np.searchsorted(sorted_cid, nid, side="right")
        counts = np.where(valid, stop - start, 0)
        csum = np.cumsum(counts)
        bounds = np.searchsorted(csum, np.arange(_CHUNK, csum[-1] if n else 0, _CHUNK))
        edges = np.unique(np.concatenate([[0], bounds, [n]]))
        for a, b in zip(edges[:-1], edges[1:]):
            c = counts[a:b]
            tot = int(c.sum())
            if tot == 0:
                continue
            src = np.repeat(np.arange(a, b), c)
            first = np.repeat(np.cumsum(c) - c, c)
            pos = np.repeat(start[a:b], c) + (np.arange(tot) - first)
            dst = order[pos]
            keep = dst > src
            yield src[keep], dst[keep]


def build_graph(cloud: SampleCloud, kernel: Kernel, eps: float,
                scale: float = 1.0) -> GeometricGraph:
    """Weighted geometric graph on ``cloud`` with ``W_ij = scale·η_eps``.

    Every pair closer than ``R·eps`` gets a stored weight; no other pair does.
    """
    if not eps > 0:
        raise InvalidArgument("eps must be positive")
    if cloud.n < 1:
        raise InvalidArgument("empty cloud")
    if kernel.dimension != cloud.dimension:
        raise InvalidArgument("kernel and cloud dimensions differ")
    X = np.asarray(cloud.points)
    n, d = X.shape
    h = kernel.radius * eps
    rows, cols, vals = [], [], []
    for i, j in _cell_pairs(X, h):
        r = np.linalg.norm(X[i] - X[j], axis=1) / eps
        near = r < kernel.radius
        i, j, r = i[near], j[near], r[near]
        w = scale * kernel.radial(r) / eps**d
        rows.append(i.astype(np.int32))
        cols.append(j.astype(np.int32))
        vals.append(w)
    if rows:
        I, J, V = np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    else:
        I = J = np.zeros(0, dtype=np.int32)
        V = np.zeros(0)
    upper = sp.csr_matrix((V, (I, J)), shape=(n, n))
    del I, J, V, rows, cols, vals
    W = (upper + upper.T).tocsr()
    return GeometricGraph(W, eps, kernel, cloud, scale)


def brute_force_weights(cloud: SampleCloud, kernel: Kernel, eps: float) -> np.ndarray:
    """Dense O(n²) weight matrix; reference for the grid search."""
    X = np.asarray(cloud.points)
    diff = X[:, None, :] - X[None, :, :]
    r = np.linalg.norm(diff, axis=-1) / eps
    W = np.where(r < kernel.radius, kernel.radial(r) / eps**X.shape[1], 0.0)
    np.fill_diagonal(W, 0.0)
    return W
