"""Experiment configuration: one JSON document, validated against the
shipped schema (unknown keys are rejected), then resolved into objects."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import jsonschema

from ..continuum import ContinuumPartition, reference_minimizer
from ..domain import Density, Domain, density_from_dict
from ..errors import InvalidArgument
from ..kernel import Kernel

DEFAULTS = {
    "density": {"kind": "uniform"},
    "kernel": "indicator",
    "alpha": 1.0,
    "K": 2,
    "trials": 1,
    "seed": 0,
    "optimizer": "greedy",
    "labels": "optimized",
    "kappa": 1.0,
    "beta_lambda": [0.0, 1.0, 2.0],
    "threads": 1,
}


def load_schema() -> dict:
    text = resources.files("geomod.lab").joinpath("config_schema.json").read_text()
    return json.loads(text)


def eps_schedule(n: int, beta: float) -> float:
    """eps_n = n^(-beta)."""
    if n < 1:
        raise InvalidArgument("n must be at least 1")
    return float(n) ** (-beta)


@dataclass
class ExperimentConfig:
    experiment: str | None
    domain: Domain
    density: Density
    kernel: Kernel
    alpha: float
    K: int
    n: tuple = ()
    beta: float | None = None
    eps: tuple | None = None
    trials: int = 1
    seed: int = 0
    optimizer: str = "greedy"
    output: str | None = None
    threads: int = 1
    K_list: tuple = ()
    labels: str = "optimized"
    partition_spec: dict | None = None
    kappa: float = 1.0
    beta_lambda: tuple = (0.0, 1.0, 2.0)
    rate_condition: str | None = None
    raw: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, spec: dict) -> "ExperimentConfig":
        try:
            jsonschema.validate(spec, load_schema())
        except jsonschema.ValidationError as exc:
            raise InvalidArgument(f"invalid config: {exc.message}") from None
        full = {**DEFAULTS, **spec}
        n = tuple(int(v) for v in full.get("n", ()))
        if any(b <= a for a, b in zip(n, n[1:])):
            raise InvalidArgument("the n grid must be strictly increasing")
        eps = full.get("eps")
        if eps is not None and len(eps) not in (1, len(n)):
            raise InvalidArgument("eps needs one value or one per n")
        if eps is not None and "beta" in full:
            raise InvalidArgument("give either beta or an explicit eps list, not both")
        domain = Domain.from_dict(full["domain"])
        density = density_from_dict(domain, full["density"])
        kernel = Kernel(full["kernel"], domain.dimension)
        return cls(
            experiment=full.get("experiment"), domain=domain, density=density,
            kernel=kernel, alpha=float(full["alpha"]), K=int(full["K"]), n=n,
            beta=full.get("beta"), eps=None if eps is None else tuple(map(float, eps)),
            trials=int(full["trials"]), seed=int(full["seed"]), optimizer=full["optimizer"],
            output=full.get("output"), threads=int(full["threads"]),
            K_list=tuple(full.get("K_list", ())), labels=full["labels"],
            partition_spec=full.get("partition"), kappa=float(full["kappa"]),
            beta_lambda=tuple(map(float, full["beta_lambda"])),
            rate_condition=full.get("rate_condition"), raw=full)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(Path(path)) as fh:
            return cls.from_dict(json.load(fh))

    def eps_for(self, index: int, n: int) -> float:
        if self.eps is not None:
            return self.eps[0] if len(self.eps) == 1 else self.eps[index]
        if self.beta is None:
            raise InvalidArgument("config needs beta or eps")
        return eps_schedule(n, self.beta)

    @cached_property
    def partition(self) -> ContinuumPartition:
        """The configured continuum partition; the reference minimizer when
        none is given."""
        spec = self.partition_spec
        if not spec:
            return reference_minimizer(self.domain, self.density, self.alpha, self.K,
                                       self.kernel).partition
        if "regions" in spec:
            return ContinuumPartition.from_dict({"regions": spec["regions"], "K": self.K},
                                                self.domain)
        return ContinuumPartition.slabs(self.domain, spec.get("cuts", []),
                                        spec.get("axis", 0), self.K)

    def resolved(self) -> dict:
        """Header record: every setting after defaults are applied."""
        out = dict(self.raw)
        out["seed"] = self.seed
        out["threads"] = self.threads
        if self.output is not None:
            out["output"] = self.output
        return out

    def with_overrides(self, seed=None, threads=None, output=None) -> "ExperimentConfig":
        raw = dict(self.raw)
        for key, val in (("seed", seed), ("threads", threads), ("output", output)):
            if val is not None:
                raw[key] = val
        return ExperimentConfig.from_dict(raw)
