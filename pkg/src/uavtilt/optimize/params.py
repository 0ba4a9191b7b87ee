from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..errors import InvalidParameterError


@dataclass(frozen=True)
class GaParams:
    population: int = 200
    generations: int = 100
    mutation_prob: float = 0.1
    elite_count: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise InvalidParameterError("population must be at least 2")
        if self.generations < 0:
            raise InvalidParameterError("generations must be non-negative")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise InvalidParameterError("mutation_prob must lie in [0, 1]")
        if not 0 <= self.elite_count < self.population:
            raise InvalidParameterError("elite_count must lie in [0, population)")


@dataclass(frozen=True)
class LocalSearchParams:
    step_init: float = 2.0  # degrees
    step_min: float = 0.1  # degrees
    max_iters: int = 50  # full coordinate passes

    def __post_init__(self):
        if not 0 < self.step_min <= self.step_init:
            raise InvalidParameterError("need 0 < step_min <= step_init")
        if self.max_iters < 0:
            raise InvalidParameterError("max_iters must be non-negative")


@dataclass(frozen=True)
class PsoParams:
    swarm: int = 200
    iterations: int = 100
    inertia: float = 0.72
    c1: float = 1.45
    c2: float = 1.45
    v_max: float = 8.0  # degrees per iteration
    nominal: str = "midrange"  # or "geometric"
    init_spread: Optional[float] = None  # +/- degrees around the nominal; None = half the bound range
    seed: int = 0

    def __post_init__(self):
        if self.swarm < 2:
            raise InvalidParameterError("swarm must be at least 2")
        if self.iterations < 0:
            raise InvalidParameterError("iterations must be non-negative")
        if not 0.0 < self.inertia < 1.0:
            raise InvalidParameterError("inertia must lie in (0, 1)")
        if not self.v_max > 0:
            raise InvalidParameterError("v_max must be positive")
        if self.c1 < 0 or self.c2 < 0:
            raise InvalidParameterError("acceleration coefficients must be non-negative")
        if self.nominal not in ("midrange", "geometric"):
            raise InvalidParameterError("nominal must be 'midrange' or 'geometric'")
        if self.init_spread is not None and self.init_spread < 0:
            raise InvalidParameterError("init_spread must be non-negative")
