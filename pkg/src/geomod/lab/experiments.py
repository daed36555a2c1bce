"""Seeded Monte Carlo experiments behind the limit theorems.

Trial ``t`` draws its sample with seed ``derive_seed(base_seed, t)`` (see
:mod:`geomod.seeding`), so a trial index gives the same seed at every n.
Rows come back ordered by (n, trial) and, within a trial, by the
experiment's inner parameter (K or β_λ), whatever the thread count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..continuum import balance_deficit, balanced_slabs, total_perimeter
from ..domain import sample
from ..functional import decompose, modularity
from ..geograph import build_graph
from ..kernel import c_eta_rho
from ..optimizer import optimize
from ..seeding import derive_seed
from ..transport import build_quantile_map, misclassification, tl1_surrogate
from .config import ExperimentConfig

log = logging.getLogger(__name__)

BASE_COLUMNS = ["experiment", "n", "eps", "trial", "seed"]


@dataclass(frozen=True)
class RateCheck:
    valid: bool
    threshold: float
    reason: str


def validate_rate(alpha: float, d: int, beta: float, condition: str) -> RateCheck:
    """Strict check of eps = n^-beta against the (I1)/(I2) thresholds.

    I1: beta < 2/(d+1) for alpha in {0, 1}, else beta < 1/(d+1).
    I2: beta < min(1/d, 1/2) for alpha in {0, 1}, else beta < 1/(d+1).
    """
    if d not in (1, 2, 3):
        raise ValueError("d must be 1, 2 or 3")
    special = alpha in (0, 1)
    if condition == "I1":
        thr = 2.0 / (d + 1) if special else 1.0 / (d + 1)
    elif condition == "I2":
        thr = min(1.0 / d, 0.5) if special else 1.0 / (d + 1)
    else:
        raise ValueError(f"unknown rate condition {condition!r}")
    if beta < thr:
        return RateCheck(True, thr, f"beta={beta} < {thr:.6g}")
    return RateCheck(False, thr, f"beta={beta} is not below the {condition} threshold {thr:.6g}")


def _warn_rates(cfg: ExperimentConfig):
    if cfg.beta is None:
        return
    conditions = [cfg.rate_condition] if cfg.rate_condition else ["I1", "I2"]
    for cond in conditions:
        check = validate_rate(cfg.alpha, cfg.domain.dimension, cfg.beta, cond)
        if not check.valid:
            log.warning("rate condition %s not met: %s", cond, check.reason)


def _targets(cfg: ExperimentConfig) -> dict:
    """Continuum quantities shared by every trial."""
    part = cfg.partition
    return {"deficit": balance_deficit(part, cfg.density, cfg.alpha),
            "c_per": c_eta_rho(cfg.kernel, cfg.density) * total_perimeter(part, cfg.density)}


# ---------------------------------------------------------------------------
# per-trial bodies; each returns a list of rows without the base columns

def _graph(cfg, n, eps, seed):
    cloud = sample(cfg.domain, cfg.density, n, seed)
    return cloud, build_graph(cloud, cfg.kernel, eps)


def _balance(cfg, n, eps, seed, targets):
    cloud, g = _graph(cfg, n, eps, seed)
    rep = decompose(g, cfg.partition.induce(cloud), cfg.alpha, cfg.K)
    stat = 1.0 - 1.0 / cfg.K - rep.Q
    return [[rep.Q, rep.quad_term, rep.gtv_term, rep.residual, stat, targets["deficit"],
             targets["deficit"] + eps * targets["c_per"]]]


def _perimeter(cfg, n, eps, seed, targets):
    cloud, g = _graph(cfg, n, eps, seed)
    rep = decompose(g, cfg.partition.induce(cloud), cfg.alpha, cfg.K)
    stat = (1.0 - 1.0 / cfg.K - rep.Q) / eps
    return [[rep.Q, rep.quad_term, rep.gtv_term, stat, targets["c_per"], targets["deficit"]]]


def _qstar(cfg, n, eps, seed, targets):
    cloud, g = _graph(cfg, n, eps, seed)
    rows = []
    c = c_eta_rho(cfg.kernel, cfg.density)
    for K in cfg.K_list or (cfg.K,):
        part = balanced_slabs(cfg.domain, cfg.density, cfg.alpha, K)
        Q = modularity(g, part.induce(cloud), cfg.alpha)
        bound = 1.0 - 1.0 / K - eps * c * total_perimeter(part, cfg.density)
        rows.append([K, Q, bound, Q - bound])
    return rows


def _consistency(cfg, n, eps, seed, targets):
    cloud, g = _graph(cfg, n, eps, seed)
    ref = cfg.partition
    induced = ref.induce(cloud)
    if cfg.labels == "induced":
        found, method = induced, "induced"
    else:
        res = optimize(g, cfg.alpha, cfg.K, cfg.optimizer, seed)
        found, method = res.partition, res.method
    scores = misclassification(found, ref, cloud, cfg.K)
    tl1 = float("nan")
    if cfg.domain.dimension == 1:
        tmap = build_quantile_map(cfg.density, cloud)
        u_n = (found.labels == scores.permutation[0]).astype(float)
        tl1 = tl1_surrogate(tmap, ref.regions[0], u_n)
    return [[method, modularity(g, found, cfg.alpha), modularity(g, induced, cfg.alpha),
             scores.overall, scores.min_ratio, scores.max_ratio, tl1]]


def _resolution(cfg, n, eps, seed, targets):
    cloud, g = _graph(cfg, n, eps, seed)
    a = g.degree_power(cfg.alpha)
    rows = []
    for bl in cfg.beta_lambda:
        lam = cfg.kappa * eps**bl
        res = optimize(g, cfg.alpha, cfg.K, "greedy", seed, resolution=lam)
        A = np.bincount(res.labels, weights=a, minlength=cfg.K) / g.s_alpha(cfg.alpha)
        deficit = float(np.sum((A - 1.0 / cfg.K) ** 2))
        rows.append([bl, lam, res.partition.n_clusters, deficit, res.Q])
    return rows


EXPERIMENTS = {
    "balance": (_balance, ["Q", "quad", "gtv", "residual", "stat", "deficit_target",
                           "stat_target"]),
    "perimeter": (_perimeter, ["Q", "quad", "gtv", "stat", "target", "deficit"]),
    "qstar": (_qstar, ["K", "Q", "bound", "gap"]),
    "consistency": (_consistency, ["method", "Q", "Q_reference", "overall", "min_ratio",
                                   "max_ratio", "tl1_surrogate"]),
    "resolution": (_resolution, ["beta_lambda", "lambda", "clusters", "deficit", "Q_lambda"]),
}


@dataclass
class Table:
    header: dict
    columns: list
    rows: list

    def column(self, name: str) -> np.ndarray:
        j = self.columns.index(name)
        return np.array([r[j] for r in self.rows])

    def where(self, **match) -> "Table":
        idx = {k: self.columns.index(k) for k in match}
        rows = [r for r in self.rows if all(r[idx[k]] == v for k, v in match.items())]
        return Table(self.header, self.columns, rows)


def _run_task(args):
    name, cfg, n, eps, t, seed, targets = args
    body, _ = EXPERIMENTS[name]
    return [[name, n, eps, t, seed, *row] for row in body(cfg, n, eps, seed, targets)]


def run_experiment(cfg: ExperimentConfig, name: str | None = None) -> Table:
    name = name or cfg.experiment
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}")
    if not cfg.n:
        raise ValueError("the config has no n grid")
    _warn_rates(cfg)
    targets = _targets(cfg) if name in ("balance", "perimeter") else {}
    tasks = [(name, cfg, n, cfg.eps_for(i, n), t, derive_seed(cfg.seed, t), targets)
             for i, n in enumerate(cfg.n) for t in range(cfg.trials)]
    if cfg.threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            chunks = list(pool.map(_run_task, tasks))
    else:
        chunks = [_run_task(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    header = {"experiment": name, **cfg.resolved()}
    return Table(header, BASE_COLUMNS + EXPERIMENTS[name][1], rows)


def run_balance_experiment(cfg):
    return run_experiment(cfg, "balance")


def run_perimeter_experiment(cfg):
    return run_experiment(cfg, "perimeter")


def run_qstar_experiment(cfg):
    return run_experiment(cfg, "qstar")


def run_consistency_experiment(cfg):
    return run_experiment(cfg, "consistency")


def run_resolution_experiment(cfg):
    return run_experiment(cfg, "resolution")
