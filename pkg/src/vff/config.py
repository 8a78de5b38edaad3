"""Experiment configuration: defaults, JSON loading, validation.

Every key is optional; the defaults reproduce the reference working
point (2 spins, J = B = 1, dt = 0.2, eta0 = 1.1, kappa = 0.5,
delta = 12, 16 steps, 8000 shots, fast-forward times k * 8 * dt for
k = 0..12).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .model import IsingParams
from .trainer import LearningSchedule

N_TIME_POINTS = 13
TIME_STRIDE_STEPS = 8


class ConfigError(ValueError):
    """Invalid or unreadable experiment configuration."""


def default_times(dt: float) -> tuple[float, ...]:
    return tuple(k * TIME_STRIDE_STEPS * dt for k in range(N_TIME_POINTS))


@dataclass
class ExperimentConfig:
    ising: IsingParams = field(default_factory=IsingParams)
    schedule: LearningSchedule = field(default_factory=LearningSchedule)
    shots: int = 8000
    seed: int = 0
    noise: str | None = None
    analytic: bool = False
    output_dir: str = "out"
    times: tuple[float, ...] | None = None
    dump_circuits: bool = False

    def __post_init__(self):
        if self.shots < 1:
            raise ConfigError(f"shots must be >= 1, got {self.shots}")
        if self.schedule.n_steps < 0:
            raise ConfigError(f"steps must be >= 0, got {self.schedule.n_steps}")
        if self.times is None:
            self.times = default_times(self.ising.dt)
        else:
            self.times = tuple(float(t) for t in self.times)

    def to_dict(self) -> dict:
        return {
            "ising": {
                "n_spins": self.ising.n_spins,
                "J": self.ising.J,
                "B": self.ising.B,
                "dt": self.ising.dt,
            },
            "schedule": {
                "eta0": self.schedule.eta0,
                "kappa": self.schedule.kappa,
                "delta": self.schedule.delta,
                "n_steps": self.schedule.n_steps,
            },
            "shots": self.shots,
            "seed": self.seed,
            "noise": self.noise,
            "analytic": self.analytic,
            "output_dir": self.output_dir,
            "times": list(self.times),
            "dump_circuits": self.dump_circuits,
        }


def _take(doc: dict, allowed: set[str], context: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"unknown {context} key(s): {sorted(unknown)}")


def from_dict(doc: dict) -> ExperimentConfig:
    _take(
        doc,
        {
            "ising",
            "schedule",
            "shots",
            "seed",
            "noise",
            "analytic",
            "output_dir",
            "times",
            "dump_circuits",
        },
        "config",
    )
    try:
        ising_doc = doc.get("ising", {})
        _take(ising_doc, {"n_spins", "J", "B", "dt"}, "ising")
        ising = IsingParams(
            n_spins=int(ising_doc.get("n_spins", 2)),
            J=float(ising_doc.get("J", 1.0)),
            B=float(ising_doc.get("B", 1.0)),
            dt=float(ising_doc.get("dt", 0.2)),
        )
        sched_doc = doc.get("schedule", {})
        _take(sched_doc, {"eta0", "kappa", "delta", "n_steps"}, "schedule")
        schedule = LearningSchedule(
            eta0=float(sched_doc.get("eta0", 1.1)),
            kappa=float(sched_doc.get("kappa", 0.5)),
            delta=float(sched_doc.get("delta", 12.0)),
            n_steps=int(sched_doc.get("n_steps", 16)),
        )
        return ExperimentConfig(
            ising=ising,
            schedule=schedule,
            shots=int(doc.get("shots", 8000)),
            seed=int(doc.get("seed", 0)),
            noise=doc.get("noise"),
            analytic=bool(doc.get("analytic", False)),
            output_dir=str(doc.get("output_dir", "out")),
            times=doc.get("times"),
            dump_circuits=bool(doc.get("dump_circuits", False)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top-level value must be an object")
    return from_dict(doc)


def apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    """Fold parsed CLI flags over a base configuration."""
    sched = cfg.schedule
    if getattr(args, "steps", None) is not None:
        sched = replace(sched, n_steps=args.steps)
    return ExperimentConfig(
        ising=cfg.ising,
        schedule=sched,
        shots=args.shots if getattr(args, "shots", None) is not None else cfg.shots,
        seed=args.seed if getattr(args, "seed", None) is not None else cfg.seed,
        noise=args.noise if getattr(args, "noise", None) is not None else cfg.noise,
        analytic=True if getattr(args, "analytic", False) else cfg.analytic,
        output_dir=args.out if getattr(args, "out", None) is not None else cfg.output_dir,
        times=cfg.times,
        dump_circuits=True if getattr(args, "dump_circuits", False) else cfg.dump_circuits,
    )
