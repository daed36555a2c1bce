"""Modularity maximization with a cap of K clusters.

Three routes share one objective,

    Q_γ(U) = (1/2m) Σ_k W(U_k, U_k) - γ Σ_k (A_k / S)²,   A_k = Σ_{i∈U_k} d_i^α,

which is α-modularity at γ = 1 and the resolution modularity Q^λ at α = 1,
γ = λ:

* :func:`exhaustive` enumerates restricted-growth strings (n ≤ 14);
* :func:`greedy_capped` is a Louvain-style local-move/aggregate heuristic with
  a final merge phase down to K clusters;
* :func:`spectral_bisection` splits recursively by the sign of the leading
  eigenvector of the generalized modularity matrix.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .domain import make_rng
from .errors import EmptyGraph, InvalidArgument, TooLarge
from .functional import DiscretePartition, modularity, modularity_lambda
from .geograph import GeometricGraph

log = logging.getLogger(__name__)

EXHAUSTIVE_MAX_N = 14
# accepted moves must gain more than this; guards against cycling on round-off
_GAIN_TOL = 1e-13
_DEBUG_EVERY = 100


@dataclass(frozen=True)
class OptimizerResult:
    partition: DiscretePartition
    Q: float
    method: str
    moves: int
    iterations: int
    seed: int | None
    alpha: float
    K: int
    resolution: float = 1.0
    degraded: bool = False

    @property
    def labels(self) -> np.ndarray:
        return self.partition.labels

    def csv(self, graph: GeometricGraph) -> str:
        seed = "" if self.seed is None else self.seed
        return ("method,n,eps,alpha,K,Q,moves,seed\n"
                f"{self.method},{graph.n},{graph.eps!r},{self.alpha!r},{self.K},"
                f"{self.Q!r},{self.moves},{seed}\n")

    def labels_csv(self) -> str:
        buf = io.StringIO()
        buf.write("vertex_index,label\n")
        for i, k in enumerate(self.labels):
            buf.write(f"{i},{k}\n")
        return buf.getvalue()


def objective(graph: GeometricGraph, partition: DiscretePartition, alpha: float,
              resolution: float = 1.0) -> float:
    """Q_γ; routed through the public modularity functions."""
    if resolution == 1.0:
        return modularity(graph, partition, alpha)
    if alpha == 1:
        return modularity_lambda(graph, partition, resolution)
    lab = partition.labels
    W = graph.weights
    internal = float(np.sum(W.data[lab[graph.rows] == lab[W.indices]]))
    A = np.bincount(lab, weights=graph.degree_power(alpha), minlength=partition.K)
    return internal / graph.two_m - resolution * float(np.sum((A / graph.s_alpha(alpha)) ** 2))


def _check(graph: GeometricGraph, K: int):
    if K < 1:
        raise InvalidArgument("K must be at least 1")
    if graph.two_m <= 0:
        raise EmptyGraph("modularity needs positive total weight")


def _result(graph, labels, alpha, K, method, moves, iterations, seed,
            resolution=1.0, degraded=False) -> OptimizerResult:
    part = DiscretePartition(labels, K).canonical()
    Q = objective(graph, part, alpha, resolution)
    return OptimizerResult(part, Q, method, int(moves), int(iterations), seed, float(alpha),
                           int(K), float(resolution), degraded)


# ---------------------------------------------------------------------------
# exhaustive

def restricted_growth_strings(n: int, K: int) -> np.ndarray:
    """All labelings of n items into at most K unordered blocks, one per row,
    in restricted-growth form (label i ≤ 1 + max of earlier labels)."""
    if n < 1:
        return np.zeros((1, 0), dtype=np.int8)
    rows = np.zeros((1, 1), dtype=np.int8)
    top = np.zeros(1, dtype=np.int8)
    for _ in range(1, n):
        parts, tops = [], []
        for v in range(K):
            ok = v <= top + 1
            if not ok.any():
                continue
            r = rows[ok]
            parts.append(np.hstack([r, np.full((len(r), 1), v, dtype=np.int8)]))
            tops.append(np.maximum(top[ok], v))
        rows = np.vstack(parts)
        top = np.concatenate(tops).astype(np.int8)
    return rows


def exhaustive(graph: GeometricGraph, alpha: float, K: int,
               resolution: float = 1.0) -> OptimizerResult:
    n = graph.n
    if n > EXHAUSTIVE_MAX_N:
        raise TooLarge(f"exhaustive search is capped at n = {EXHAUSTIVE_MAX_N}")
    _check(graph, K)
    a = graph.degree_power(alpha) / graph.s_alpha(alpha)
    best, _, count = _best_labeling(graph.dense(), a, K, graph.two_m, resolution)
    return _result(graph, best, alpha, K, "exhaustive", 0, count, None, resolution)


# ---------------------------------------------------------------------------
# greedy

class _MoveState:
    """Cluster aggregates for incremental ΔQ on a (possibly aggregated) graph.

    ``W`` may carry self-loops after aggregation; they never enter the
    vertex-to-cluster weights because they move with the vertex.
    """

    def __init__(self, W: sp.csr_matrix, mass: np.ndarray, labels: np.ndarray,
                 two_m: float, S: float, gamma: float, slots: int | None = None):
        # with ``slots`` every label 0..slots-1 is a candidate, empty or not;
        # otherwise only clusters adjacent to the vertex are
        self.slots = slots
        self.W = W
        self.mass = mass
        self.labels = labels
        size = max(len(mass), slots or 0)
        self.A = np.bincount(labels, weights=mass, minlength=size)
        self.two_m = two_m
        self.S2 = S * S
        self.gamma = gamma

    def best_move(self, i: int) -> tuple[int, float]:
        W = self.W
        sl = slice(W.indptr[i], W.indptr[i + 1])
        idx, w = W.indices[sl], W.data[sl]
        off = idx != i
        idx, w = idx[off], w[off]
        cur = self.labels[i]
        if self.slots is not None:
            cand = np.arange(self.slots)
            w_to = np.bincount(self.labels[idx], weights=w, minlength=self.slots)
        elif idx.size == 0:
            return cur, 0.0
        else:
            cand, inv = np.unique(self.labels[idx], return_inverse=True)
            w_to = np.bincount(inv, weights=w)
        here = np.searchsorted(cand, cur)
        w_cur = w_to[here] if here < len(cand) and cand[here] == cur else 0.0
        ai = self.mass[i]
        gain = (2.0 * (w_to - w_cur) / self.two_m
                - self.gamma * 2.0 * ai * (self.A[cand] - self.A[cur] + ai) / self.S2)
        gain[cand == cur] = 0.0
        j = int(np.argmax(gain))
        if gain[j] > _GAIN_TOL:
            return int(cand[j]), float(gain[j])
        return cur, 0.0

    def move(self, i: int, b: int):
        a = self.labels[i]
        m = self.mass[i]
        self.A[a] -= m
        self.A[b] += m
        self.labels[i] = b


def _sweep(state: _MoveState, order: np.ndarray, tracker) -> int:
    """Passes of single-vertex moves until a full pass makes none."""
    total = 0
    while True:
        moved = 0
        for i in order:
            b, gain = state.best_move(i)
            if b != state.labels[i]:
                state.move(i, b)
                moved += 1
                tracker(gain)
        total += moved
        if moved == 0:
            return total


_KL_MAX_PASSES = 50
_KL_PATIENCE = 200


def _kl_pass(W, mass, labels, K, two_m, S, gamma) -> tuple[float, int]:
    """One Kernighan-Lin/Fiduccia-Mattheyses pass over K labels, in place.

    Repeatedly applies the best single-vertex relabeling, gain positive or
    not, locking each moved vertex, and finally rolls back to the best
    prefix. The pass stops after ``_KL_PATIENCE`` moves without a new best.
    Self-loops of aggregated graphs travel with their vertex.
    Returns (gain of the kept prefix, number of kept moves); a pass that
    cannot gain strictly keeps nothing.
    """
    n = len(labels)
    S2 = S * S
    rows = np.arange(n)
    loop = W.diagonal()
    P = sp.csr_matrix((np.ones(n), (rows, labels)), shape=(n, K))
    Wc = np.asarray((W @ P).todense())
    A = np.bincount(labels, weights=mass, minlength=K)
    locked = np.zeros(n, dtype=bool)
    history = []
    cum = best = 0.0
    best_len = 0
    while len(history) < n and len(history) - best_len < _KL_PATIENCE:
        own = labels
        G = (2.0 * (Wc - (Wc[rows, own] - loop)[:, None]) / two_m
             - gamma * 2.0 * mass[:, None] * (A[None, :] - A[own][:, None] + mass[:, None]) / S2)
        G[rows, own] = -np.inf
        G[locked] = -np.inf
        i, k = np.unravel_index(int(np.argmax(G)), G.shape)
        if not np.isfinite(G[i, k]):
            break
        a = labels[i]
        cum += G[i, k]
        sl = slice(W.indptr[i], W.indptr[i + 1])
        nb, w = W.indices[sl], W.data[sl]
        Wc[nb, a] -= w
        Wc[nb, k] += w
        A[a] -= mass[i]
        A[k] += mass[i]
        labels[i] = k
        locked[i] = True
        history.append((i, a))
        if cum > best + _GAIN_TOL:
            best, best_len = cum, len(history)
    for i, a in reversed(history[best_len:]):
        labels[i] = a
    return best, best_len


def _polish(W, mass, labels, K, two_m, S, gamma, order, track) -> int:
    """Local sweeps over all K labels alternating with Kernighan-Lin passes
    until a pass keeps nothing. ``labels`` is updated in place."""
    state = _MoveState(W, mass, labels, two_m, S, gamma, slots=K)
    moves = _sweep(state, order, track)
    for _ in range(_KL_MAX_PASSES):
        gain, kept = _kl_pass(W, mass, labels, K, two_m, S, gamma)
        if kept == 0:
            break
        track(gain, kept)
        moves += kept
        state = _MoveState(W, mass, labels, two_m, S, gamma, slots=K)
        moves += _sweep(state, order, track)
    return moves


def _labelings(c: int, K: int) -> int:
    """Number of partitions of c items into at most K blocks."""
    row = [1] + [0] * K  # Stirling numbers S(j, k), k = 0..K
    for _ in range(c):
        row = [0] + [k * row[k] + row[k - 1] for k in range(1, K + 1)]
    return sum(row)


def _best_labeling(Wd: np.ndarray, a: np.ndarray, K: int, two_m: float, gamma: float,
                   chunk: int = 1 << 14) -> tuple[np.ndarray, float, int]:
    """Exact maximizer of Q_γ over all labelings of the rows of dense ``Wd``
    (self-loops count as internal weight); ``a`` is the mass over S."""
    strings = restricted_growth_strings(len(a), min(K, len(a)))
    best_val, best = -np.inf, None
    for s in range(0, len(strings), chunk):
        L = strings[s:s + chunk]
        val = np.zeros(len(L))
        for k in range(min(K, len(a))):
            M = (L == k).astype(float)
            val += np.einsum("ij,jk,ik->i", M, Wd, M) / two_m - gamma * (M @ a) ** 2
        i = int(np.argmax(val))
        if val[i] > best_val + 1e-15:
            best_val, best = float(val[i]), L[i].astype(np.int64)
    return best, best_val, len(strings)


# coarse problems up to this many labelings are solved exactly
_COARSE_EXACT = 1 << 20
_COARSE_STARTS = 16


def _coarse_value(W, m, lab, K, two_m, S, gamma) -> float:
    same = lab[:, None] == lab[None, :]
    A = np.bincount(lab, weights=m, minlength=K)
    return float(np.sum(W[same])) / two_m - gamma * float(np.sum((A / S) ** 2))


def _coarse_solve(W, m, K, two_m, S, gamma, rng):
    """Group the super-vertices of the top aggregation level into at most K
    clusters: the best of the pairwise-merge labeling and seeded random
    labelings, each polished by Kernighan-Lin passes. Returns (labels,
    value)."""
    c = W.shape[0]
    W = sp.csr_matrix(W)
    Wd = W.toarray()
    starts = [_pairwise_merge(Wd, m, K, two_m, S, gamma)]
    starts += [rng.integers(0, K, c) for _ in range(_COARSE_STARTS)]
    best, best_val = None, -np.inf
    for lab in starts:
        lab = lab.astype(np.int64)
        for _ in range(_KL_MAX_PASSES):
            if _kl_pass(W, m, lab, K, two_m, S, gamma)[1] == 0:
                break
        val = _coarse_value(Wd, m, lab, K, two_m, S, gamma)
        if val > best_val + 1e-15:
            best, best_val = lab, val
    return best, best_val


def _pairwise_merge(Wd, m, K, two_m, S, gamma) -> np.ndarray:
    """Merge the best pair of clusters until at most K remain."""
    c = len(m)
    C = Wd.copy()
    np.fill_diagonal(C, 0.0)
    A = np.asarray(m, dtype=float).copy()
    alive = np.ones(c, dtype=bool)
    parent = np.arange(c)
    S2 = S * S
    count = c
    while count > K:
        gain = 2.0 * C / two_m - gamma * 2.0 * np.outer(A, A) / S2
        np.fill_diagonal(gain, -np.inf)
        gain[~alive, :] = -np.inf
        gain[:, ~alive] = -np.inf
        a, b = np.unravel_index(int(np.argmax(gain)), gain.shape)
        a, b = min(a, b), max(a, b)
        C[a, :] += C[b, :]
        C[:, a] += C[:, b]
        C[a, a] = 0.0
        C[b, :] = 0.0
        C[:, b] = 0.0
        A[a] += A[b]
        A[b] = 0.0
        alive[b] = False
        parent[parent == b] = a
        count -= 1
    return _compact(parent)[0]


def _aggregate(W: sp.csr_matrix, labels: np.ndarray, n_clusters: int) -> sp.csr_matrix:
    P = sp.csr_matrix((np.ones(len(labels)), (np.arange(len(labels)), labels)),
                      shape=(len(labels), n_clusters))
    return (P.T @ W @ P).tocsr()


def _compact(labels: np.ndarray) -> tuple[np.ndarray, int]:
    _, inv = np.unique(labels, return_inverse=True)
    return inv.astype(np.int64), int(inv.max()) + 1 if len(inv) else 0


class _Tracker:
    """Running Q from accepted gains; in debug mode it is compared with a
    from-scratch recomputation every ``_DEBUG_EVERY`` moves."""

    def __init__(self, graph, alpha, gamma, value, debug):
        self.graph, self.alpha, self.gamma = graph, alpha, gamma
        self.value = value
        self.debug = debug
        self.count = 0
        self.labels = None  # callable returning current vertex labels

    def __call__(self, gain, moves=1):
        self.value += gain
        before = self.count
        self.count += moves
        if self.debug and self.count // _DEBUG_EVERY > before // _DEBUG_EVERY:
            self.check()

    def check(self):
        lab = self.labels()
        exact = objective(self.graph, DiscretePartition(lab, int(lab.max()) + 1),
                          self.alpha, self.gamma)
        if abs(exact - self.value) > 1e-9:
            raise AssertionError(
                f"incremental Q {self.value!r} drifted from recomputed {exact!r}")


def greedy_capped(graph: GeometricGraph, alpha: float, K: int, seed: int = 0,
                  resolution: float = 1.0, init=None, debug: bool = False) -> OptimizerResult:
    """Louvain-style maximization of Q_γ with at most K clusters.

    1. Local moves from singletons (seeded visiting order, strictly positive
       gains only, ties stay), then aggregation of the clusters into
       super-vertices, repeated until a level makes no move.
    2. The finest level with at most 2**20 labelings into K groups is solved
       exactly by enumeration; when none is that small and more than K
       clusters remain, the top level is grouped by :func:`_coarse_solve`.
    3. Vertex-level refinement over all K labels, empty ones included, with
       local sweeps alternating with Kernighan-Lin passes. A pass is kept
       only up to its best prefix and only when that prefix gains strictly,
       so Q never decreases across accepted steps.

    With ``init`` the first two phases are skipped.
    """
    _check(graph, K)
    n = graph.n
    rng = make_rng(seed)
    mass = graph.degree_power(alpha).astype(float)
    S = graph.s_alpha(alpha)
    two_m = graph.two_m
    W0 = graph.weights
    moves = 0
    levels = 0

    if init is None:
        vertex_of = np.arange(n)
        W, m = W0, mass
        hierarchy = [(W, m, vertex_of)]
        track = _Tracker(graph, alpha, resolution,
                         objective(graph, DiscretePartition(np.arange(n), n), alpha, resolution),
                         debug)
        while True:
            state = _MoveState(W, m, np.arange(W.shape[0]), two_m, S, resolution)
            track.labels = lambda state=state, vo=vertex_of: state.labels[vo]
            moved = _sweep(state, rng.permutation(W.shape[0]), track)
            moves += moved
            levels += 1
            lab, c = _compact(state.labels)
            vertex_of = lab[vertex_of]
            if moved == 0:
                break
            W = _aggregate(W, lab, c)
            m = np.bincount(lab, weights=m, minlength=c)
            hierarchy.append((W, m, vertex_of))
        # exact grouping at the finest level small enough to enumerate; it
        # can only improve on the coarser levels, whose clusters are unions
        exact = [h for h in hierarchy if _labelings(len(h[1]), K) <= _COARSE_EXACT]
        if exact:
            Wl, ml, vo = exact[0]
            lab, track.value, _ = _best_labeling(Wl.toarray(), ml / S, K, two_m, resolution)
            vertex_of = lab[vo]
        elif c > K:
            top, track.value = _coarse_solve(W, m, K, two_m, S, resolution, rng)
            vertex_of = top[vertex_of]
        labels = _compact(vertex_of)[0]
        track.labels = lambda: labels
        if debug:
            track.check()
    else:
        labels = np.asarray(init.labels if isinstance(init, DiscretePartition) else init,
                            dtype=np.int64).copy()
        if labels.shape != (n,):
            raise InvalidArgument("initial labels must cover every vertex")
        labels, c = _compact(labels)
        if c > K:
            raise InvalidArgument("initial partition has more than K clusters")
        track = _Tracker(graph, alpha, resolution,
                         objective(graph, DiscretePartition(labels, c), alpha, resolution),
                         debug)
        track.labels = lambda: labels

    moves += _polish(W0, mass, labels, K, two_m, S, resolution, rng.permutation(n), track)
    if debug:
        track.check()
    res = _result(graph, labels, alpha, K, "greedy", moves, levels, seed, resolution)
    if res.partition.n_clusters > K:
        raise AssertionError("greedy exceeded the cluster cap")
    return res


# ---------------------------------------------------------------------------
# spectral

POWER_TOL = 1e-8
POWER_MAXITER = 10_000


class _Block:
    """Generalized modularity matrix of a vertex subset g, applied matrix-free:

        B v = W_gg v - c·a_g (a_g·v) - r ∘ v,   c = γ·2m/S²,

    with r the row sums of the first two terms, so B·1 = 0.
    """

    def __init__(self, W: sp.csr_matrix, a: np.ndarray, coef: float):
        self.W = W
        self.a = a
        self.coef = coef
        wsum = np.asarray(W.sum(axis=1)).ravel()
        self.r = wsum - coef * a * a.sum()
        # Gershgorin bound on |eigenvalues|
        self.radius = float(np.max(wsum + coef * a * a.sum() + np.abs(self.r))) if len(a) else 0.0

    def __call__(self, v):
        return self.W @ v - self.coef * self.a * (self.a @ v) - self.r * v


def leading_eigenvector(block: _Block, rng, tol: float = POWER_TOL,
                        maxiter: int = POWER_MAXITER):
    """Power iteration on B + σI in the complement of the constants.

    σ is 0.6 times the Gershgorin radius G of B. Every shifted eigenvalue
    then lies in [-0.4G, 1.6G], so the top one dominates in modulus whenever
    λ_max ≥ 0, with a margin that also covers λ_max = 0 (a shift of exactly
    G/2 can tie there and oscillate). A shift of the order of 2m instead
    crowds the spectrum near σ and stalls. Convergence is declared when the residual
    ‖Bv - θv‖ drops below tol times the Gershgorin radius.

    Returns (θ, v, iterations, converged).
    """
    m = len(block.a)
    sigma = 0.6 * block.radius
    scale = max(block.radius, 1e-300)
    v = rng.standard_normal(m)
    v -= v.mean()
    nv = np.linalg.norm(v)
    if nv == 0:
        return 0.0, v, 0, True
    v /= nv
    theta = 0.0
    for it in range(1, maxiter + 1):
        Bv = block(v)
        Bv -= Bv.mean()
        theta = float(v @ Bv)
        if np.linalg.norm(Bv - theta * v) <= tol * scale:
            return theta, v, it, True
        w = Bv + sigma * v
        nw = np.linalg.norm(w)
        if nw == 0:
            return theta, v, it, True
        v = w / nw
    return theta, v, maxiter, False


def _split(graph, members, a, coef, two_m, S, gamma, rng):
    """Best bisection of one cluster: sign of the leading eigenvector, then
    Kernighan-Lin fine-tuning on the induced subgraph (edges leaving the
    cluster do not change under a split of it).

    Returns (ΔQ, side mask, kept moves, power iterations, converged).
    """
    sub = graph.weights[members][:, members].tocsr()
    block = _Block(sub, a[members], coef)
    theta, v, iters, ok = leading_eigenvector(block, rng)
    if ok:
        lab = (v >= 0).astype(np.int64)
    else:
        lab = (rng.random(len(members)) < 0.5).astype(np.int64)
    moves = 0
    for _ in range(_KL_MAX_PASSES):
        _, kept = _kl_pass(sub, a[members], lab, 2, two_m, S, gamma)
        if kept == 0:
            break
        moves += kept
    s = 2.0 * lab - 1.0
    dq = float(s @ block(s)) / (2.0 * two_m)
    return dq, lab == 1, moves, iters, ok


def spectral_bisection(graph: GeometricGraph, alpha: float, K: int, seed: int = 0,
                       resolution: float = 1.0) -> OptimizerResult:
    """Recursive leading-eigenvector bisection capped at K clusters.

    Each candidate split is fine-tuned and scored by its exact ΔQ. The best
    positive split is applied first, and at most 2K splits are evaluated.
    If power iteration does not converge on a subproblem, that subproblem is
    split from a random start with the same fine-tuning instead, and the
    result is flagged ``degraded``. The final partition gets the same
    K-label polish as :func:`greedy_capped`.
    """
    _check(graph, K)
    n = graph.n
    rng = make_rng(seed)
    labels = np.zeros(n, dtype=np.int64)
    if K == 1 or n < 2:
        return _result(graph, labels, alpha, K, "spectral", 0, 0, seed, resolution)
    a = graph.degree_power(alpha).astype(float)
    S = graph.s_alpha(alpha)
    two_m = graph.two_m
    coef = resolution * two_m / S**2
    budget = 2 * K
    evaluated = 0
    moves = iters = 0
    degraded = False
    pending = {}

    def propose(k):
        nonlocal evaluated, moves, iters, degraded
        members = np.flatnonzero(labels == k)
        evaluated += 1
        if len(members) < 2:
            pending[k] = None
            return
        dq, side, kept, it, ok = _split(graph, members, a, coef, two_m, S, resolution, rng)
        moves += kept
        iters += it
        if not ok:
            degraded = True
            log.warning("power iteration did not converge on a block of %d vertices",
                        len(members))
        useful = dq > _GAIN_TOL and 0 < side.sum() < len(side)
        pending[k] = (dq, members, side) if useful else None

    propose(0)
    n_clusters = 1
    while n_clusters < K:
        live = {k: p for k, p in pending.items() if p is not None}
        if not live:
            break
        k = max(live, key=lambda j: live[j][0])
        _, members, side = live[k]
        new = n_clusters
        labels[members[side]] = new
        n_clusters += 1
        for j in (k, new):
            if n_clusters < K and evaluated < budget:
                propose(j)
            else:
                pending[j] = None
    moves += _polish(graph.weights, a, labels, K, two_m, S, resolution,
                     rng.permutation(n), lambda gain, kept=1: None)
    return _result(graph, labels, alpha, K, "spectral", moves, iters, seed, resolution,
                   degraded)


def spectral_then_greedy(graph: GeometricGraph, alpha: float, K: int, seed: int = 0,
                         resolution: float = 1.0) -> OptimizerResult:
    """Spectral bisection followed by greedy refinement from its partition."""
    sp_res = spectral_bisection(graph, alpha, K, seed, resolution)
    res = greedy_capped(graph, alpha, K, seed, resolution, init=sp_res.partition)
    return OptimizerResult(res.partition, res.Q, "spectral+greedy", sp_res.moves + res.moves,
                           sp_res.iterations, seed, res.alpha, K, resolution, sp_res.degraded)


def best_of(graph: GeometricGraph, alpha: float, K: int, seed: int = 0,
            resolution: float = 1.0) -> OptimizerResult:
    """Higher-Q result of plain greedy and spectral+greedy (greedy on ties)."""
    a = greedy_capped(graph, alpha, K, seed, resolution)
    b = spectral_then_greedy(graph, alpha, K, seed, resolution)
    return b if b.Q > a.Q else a


OPTIMIZERS = {
    "exhaustive": lambda g, alpha, K, seed=0, resolution=1.0: exhaustive(g, alpha, K, resolution),
    "greedy": greedy_capped,
    "spectral": spectral_bisection,
    "spectral+greedy": spectral_then_greedy,
    "best": best_of,
}


def optimize(graph: GeometricGraph, alpha: float, K: int, method: str = "greedy",
             seed: int = 0, resolution: float = 1.0) -> OptimizerResult:
    try:
        fn = OPTIMIZERS[method]
    except KeyError:
        raise InvalidArgument(f"unknown optimizer {method!r}") from None
    return fn(graph, alpha, K, seed=seed, resolution=resolution)
