from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

SCHEMES = ("dt_only", "random", "single", "ga", "hybrid_ga", "pso", "oracle")


@dataclass
class OptimizerReport:
    scheme: str
    best_tilts: np.ndarray
    best_objective_db: float
    objective_trace: list = field(default_factory=list)
    evaluations: int = 0
    seed: Optional[int] = None
    wall_time: float = 0.0
    meta: dict = field(default_factory=dict)

    def summary(self) -> dict:
        """JSON-ready view without wall time (which is not reproducible)."""
        return {
            "scheme": self.scheme,
            "seed": self.seed,
            "best_objective_db": self.best_objective_db,
            "best_tilts": [float(t) for t in self.best_tilts],
            "objective_trace": [float(v) for v in self.objective_trace],
            "evaluations": self.evaluations,
            "meta": self.meta,
        }
