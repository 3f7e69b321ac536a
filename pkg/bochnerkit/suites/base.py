from abc import ABC, abstractmethod
import logging
import math
from typing import List

import numpy as np
from pydantic import BaseModel, Field

from bochnerkit.core.tensors import MAX_DIMENSION, MIN_DIMENSION, RELATIVE_TOLERANCE, SpaceContext
from bochnerkit.errors import UnsupportedDimensionError

logger = logging.getLogger(__name__)


class SuiteConfig(BaseModel):
    """Parameters of one randomized verification run"""
    n: int = Field(ge=MIN_DIMENSION, le=MAX_DIMENSION)
    trials: int = Field(default=1000, ge=1)
    seed: int


class SuiteResult(BaseModel):
    """Outcome of a verification run"""
    suite: str
    description: str = ""
    n: int
    trials: int
    seed: int
    max_residual: float
    tolerance: float
    failures: int
    notes: List[str] = []

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        line = (f"{self.suite:<20} n={self.n} trials={self.trials} seed={self.seed} "
                f"max_residual={self.max_residual:.3e} tolerance={self.tolerance:.0e} {status}")
        lines = [line]
        if self.description:
            lines.append(f"  checks: {self.description}")
        return "\n".join(lines + [f"  note: {note}" for note in self.notes])


class VerificationSuite(ABC):
    """A family of randomized checks of one algebraic identity or bound.

    Every trial draws from its own generator seeded with (seed, trial index), so trials are
    reproducible independently of the order they run in.
    """
    _NAME_ = ""
    _DESCRIPTION_ = ""
    MIN_DIMENSION = MIN_DIMENSION
    TOLERANCE = RELATIVE_TOLERANCE

    def __init__(self, config: SuiteConfig):
        if config.n < self.MIN_DIMENSION:
            raise UnsupportedDimensionError(f"Suite '{self._NAME_}' needs n >= {self.MIN_DIMENSION}, got {config.n}")
        self.config = config
        self.ctx = SpaceContext(config.n)
        self.log = logging.getLogger(__name__)

    def trial_rng(self, index: int) -> np.random.Generator:
        return np.random.default_rng([self.config.seed, index])

    @abstractmethod
    def trial(self, rng: np.random.Generator) -> float:
        """Run one randomized check and return its residual."""

    def notes(self) -> List[str]:
        return []

    def run(self) -> SuiteResult:
        self.log.info(f"Running {self._NAME_} with n={self.config.n}, trials={self.config.trials}, "
                      f"seed={self.config.seed}")
        worst = 0.0
        failures = 0
        for index in range(self.config.trials):
            residual = self.trial(self.trial_rng(index))
            if not residual <= self.TOLERANCE:
                failures += 1
                self.log.warning(f"{self._NAME_} trial {index} residual {residual:.3e} exceeds {self.TOLERANCE:.0e}")
            worst = residual if math.isnan(residual) else max(worst, residual)
        result = SuiteResult(suite=self._NAME_, description=self._DESCRIPTION_,
                             n=self.config.n, trials=self.config.trials, seed=self.config.seed,
                             max_residual=worst, tolerance=self.TOLERANCE, failures=failures, notes=self.notes())
        self.log.info(f"{self._NAME_} finished: max residual {worst:.3e}, {failures} failures")
        return result


def relative(actual: float, expected: float) -> float:
    return abs(actual - expected) / max(1.0, abs(expected))
