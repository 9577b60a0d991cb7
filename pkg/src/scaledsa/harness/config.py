"""Experiment configuration files (TOML).

Example::

    [experiment]
    benchmark = "portfolio"
    epsilon = [1e-3]
    beta = 0.01
    s_alpha = [1.1, 1.2]      # or: s = [1.0, 1.2]
    trials = 20
    base_seed = 0
    instance_seed = 0
    mc_samples = 1000000      # optional; default min(1e4/eps, mc_cap)
    mc_cap = 10000000

    [distribution]
    alpha = 0.9               # optional tail-index override
    # optional replacement law, e.g.
    # family = "mvnormal"
    # mean = [6.0, 7.5]
    # cov = [[0.4, 0.2], [0.2, 0.4]]

    [solver]
    tol_feas = 1e-7
    max_iter = 500
    top_k = 50
    max_scenarios = 200000    # optional; larger N is recorded as intractable

    [output]
    trials_csv = "trials.csv"
    aggregate_csv = "aggregate.csv"
    record_timing = true
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

import tomli
import tomli_w

from scaledsa.distributions import distribution_from_dict
from scaledsa.errors import ConfigError
from scaledsa.harness.benchmarks import NAMES


@dataclass(frozen=True)
class SolverOptions:
    tol_feas: float = 1e-7
    max_iter: int = 500
    top_k: int = 50
    max_scenarios: int | None = None


@dataclass(frozen=True)
class OutputOptions:
    trials_csv: str = "trials.csv"
    aggregate_csv: str = "aggregate.csv"
    record_timing: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    benchmark: str
    epsilons: tuple[float, ...]
    beta: float = 0.01
    s_values: tuple[float, ...] | None = None
    s_alpha_values: tuple[float, ...] | None = None
    trials: int = 20
    base_seed: int = 0
    instance_seed: int = 0
    mc_samples: int | None = None
    mc_cap: int = 10**7
    alpha: float | None = None
    distribution: dict | None = None
    workers: int = 1
    solver: SolverOptions = field(default_factory=SolverOptions)
    output: OutputOptions = field(default_factory=OutputOptions)

    def __post_init__(self):
        if self.benchmark not in NAMES:
            raise ConfigError(f"unknown benchmark {self.benchmark!r}")
        if not self.epsilons:
            raise ConfigError("epsilon list is empty")
        for e in (*self.epsilons, self.beta):
            if not 0 < e < 1:
                raise ConfigError(f"epsilon and beta must lie in (0, 1), got {e!r}")
        if (self.s_values is None) == (self.s_alpha_values is None):
            raise ConfigError("give exactly one of 's' and 's_alpha'")
        for v in self.s_values or self.s_alpha_values:
            if v < 1:
                raise ConfigError(f"s and s_alpha values must be >= 1, got {v!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.base_seed < 0 or self.instance_seed < 0:
            raise ConfigError("seeds must be nonnegative")
        if self.mc_samples is not None and self.mc_samples < 1:
            raise ConfigError("mc_samples must be >= 1")
        if self.mc_cap < 1:
            raise ConfigError("mc_cap must be >= 1")
        if self.alpha is not None and not self.alpha > 0:
            raise ConfigError("alpha override must be positive")
        if self.distribution is not None:
            try:
                distribution_from_dict(self.distribution)
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"[distribution]: {exc}") from None
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def scale_values(self, alpha: float) -> list[float]:
        """The s grid, converting ``s**alpha`` entries with ``s = (s**alpha)**(1/alpha)``."""
        if self.s_values is not None:
            return [float(s) for s in self.s_values]
        return [float(v) ** (1.0 / alpha) for v in self.s_alpha_values]

    def mc_for(self, epsilon: float) -> int:
        if self.mc_samples is not None:
            return int(self.mc_samples)
        return int(min(math.ceil(1e4 / epsilon), self.mc_cap))

    # -- (de)serialisation ----------------------------------------------------
    def to_dict(self) -> dict:
        exp = {
            "benchmark": self.benchmark,
            "epsilon": list(self.epsilons),
            "beta": self.beta,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "instance_seed": self.instance_seed,
            "mc_cap": self.mc_cap,
            "workers": self.workers,
        }
        if self.s_values is not None:
            exp["s"] = list(self.s_values)
        else:
            exp["s_alpha"] = list(self.s_alpha_values)
        if self.mc_samples is not None:
            exp["mc_samples"] = self.mc_samples
        out = {"experiment": exp}
        dist = dict(self.distribution or {})
        if self.alpha is not None:
            dist["alpha"] = self.alpha
        if dist:
            out["distribution"] = dist
        out["solver"] = {k: v for k, v in asdict(self.solver).items() if v is not None}
        out["output"] = asdict(self.output)
        return out

    def dumps(self) -> str:
        return tomli_w.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        unknown = set(d) - {"experiment", "distribution", "solver", "output"}
        if unknown:
            raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
        if "experiment" not in d:
            raise ConfigError("missing [experiment] section")
        e = dict(d["experiment"])
        try:
            kw = dict(
                benchmark=str(e.pop("benchmark")),
                epsilons=_floats(e.pop("epsilon")),
                beta=float(e.pop("beta", 0.01)),
                s_values=_floats(e.pop("s")) if "s" in e else None,
                s_alpha_values=_floats(e.pop("s_alpha")) if "s_alpha" in e else None,
                trials=_int(e.pop("trials", 20)),
                base_seed=_int(e.pop("base_seed", 0)),
                instance_seed=_int(e.pop("instance_seed", 0)),
                mc_samples=_int(e.pop("mc_samples")) if "mc_samples" in e else None,
                mc_cap=_int(e.pop("mc_cap", 10**7)),
                workers=_int(e.pop("workers", 1)),
            )
        except KeyError as exc:
            raise ConfigError(f"[experiment] is missing {exc.args[0]!r}") from None
        if e:
            raise ConfigError(f"unknown [experiment] key(s): {', '.join(sorted(e))}")
        dist = dict(d.get("distribution", {}))
        if "alpha" in dist:
            a = dist.pop("alpha")
            if isinstance(a, bool) or not isinstance(a, (int, float)):
                raise ConfigError("[distribution] alpha must be a number")
            kw["alpha"] = float(a)
        if dist:
            if "family" not in dist:
                raise ConfigError(f"unknown [distribution] key(s): {', '.join(sorted(dist))}")
            kw["distribution"] = dist
        kw["solver"] = _section(SolverOptions, d.get("solver", {}), "solver")
        kw["output"] = _section(OutputOptions, d.get("output", {}), "output")
        return cls(**kw)

    @classmethod
    def loads(cls, text: str) -> "ExperimentConfig":
        try:
            return cls.from_dict(tomli.loads(text))
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML: {exc}") from None

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())


def _floats(v) -> tuple[float, ...]:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return (float(v),)
    if not isinstance(v, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        raise ConfigError(f"expected a number or a list of numbers, got {v!r}")
    return tuple(float(x) for x in v)


def _int(v) -> int:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v:
        raise ConfigError(f"expected an integer, got {v!r}")
    return int(v)


def _section(cls, raw: dict, name: str):
    known = {f.name: f for f in fields(cls)}
    extra = set(raw) - set(known)
    if extra:
        raise ConfigError(f"unknown [{name}] key(s): {', '.join(sorted(extra))}")
    kw = {}
    for k, v in raw.items():
        default = known[k].default
        if isinstance(default, bool):
            if not isinstance(v, bool):
                raise ConfigError(f"[{name}] {k} must be true or false")
        elif isinstance(default, int) or k == "max_scenarios":
            v = _int(v)
        elif isinstance(default, float):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"[{name}] {k} must be a number")
            v = float(v)
        elif not isinstance(v, str):
            raise ConfigError(f"[{name}] {k} must be a string")
        kw[k] = v
    return cls(**kw)
