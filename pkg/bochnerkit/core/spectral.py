"""
Spectra of curvature operators and the m-positivity classification.

An operator is m-positive (m-nonnegative) when the sum of its lowest m
eigenvalues is positive (nonnegative). Zero is decided against
SPECTRAL_EPSILON scaled by the spectral magnitude.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from bochnerkit.core.curvature import CurvatureOperator, curvature_quadratic, hat
from bochnerkit.core.tensors import (
    MAX_DIMENSION,
    MIN_DIMENSION,
    DenseTensor,
    SeedLike,
    SpaceContext,
    lt_action,
    random_skew,
)
from bochnerkit.errors import (
    DimensionMismatchError,
    HypothesisViolationError,
    InvalidArgumentError,
    InvalidOperatorError,
)

logger = logging.getLogger(__name__)

SPECTRAL_EPSILON = 1e-9
RANDOM_PROBES = 100


class Classification(str, Enum):
    positive = "positive"
    nonnegative_not_positive = "nonnegative_not_positive"
    indefinite = "indefinite"

    @property
    def nonnegative(self) -> bool:
        return self is not Classification.indefinite


def _context_for(N: int) -> Optional[SpaceContext]:
    for n in range(MIN_DIMENSION, MAX_DIMENSION + 1):
        if n * (n - 1) // 2 == N:
            return SpaceContext(n)
    return None


@dataclass(frozen=True)
class SpectralReport:
    """Sorted eigenvalues mu_1 <= ... <= mu_N with prefix sums; prefix_sums[0] = 0.

    ctx is None only for hand-built reports whose length is not N for any
    supported dimension.
    """
    N: int
    eigenvalues: Tuple[float, ...]
    prefix_sums: Tuple[float, ...]
    scale: float
    ctx: Optional[SpaceContext] = None

    @classmethod
    def from_eigenvalues(cls, values, ctx: Optional[SpaceContext] = None) -> 'SpectralReport':
        ordered = np.sort(np.asarray(values, dtype=float))
        if ctx is None:
            ctx = _context_for(ordered.size)
        elif ordered.size != ctx.N:
            raise DimensionMismatchError(f"Expected {ctx.N} eigenvalues for n = {ctx.n}, got {ordered.size}")
        prefix = np.concatenate(([0.0], np.cumsum(ordered)))
        scale = max(1.0, abs(ordered[0]), abs(ordered[-1])) if ordered.size else 1.0
        return cls(
            N=int(ordered.size),
            eigenvalues=tuple(float(v) for v in ordered),
            prefix_sums=tuple(float(v) for v in prefix),
            scale=float(scale),
            ctx=ctx,
        )

    def average(self, m: int) -> float:
        self._check_m(m)
        return self.prefix_sums[m] / m

    def _check_m(self, m: int) -> None:
        if not 1 <= m <= self.N:
            raise InvalidArgumentError(f"m must lie in [1, {self.N}], got {m}")


def spectrum(R: CurvatureOperator) -> SpectralReport:
    matrix = R.matrix
    if np.max(np.abs(matrix - matrix.T), initial=0.0) > 1e-12 * max(1.0, float(np.max(np.abs(matrix)))):
        raise InvalidOperatorError("Operator is not symmetric")
    values, vectors = np.linalg.eigh(matrix)
    report = SpectralReport.from_eigenvalues(values, R.ctx)
    residuals = np.linalg.norm(matrix @ vectors - vectors * values, axis=0)
    worst = float(np.max(residuals, initial=0.0))
    if worst > SPECTRAL_EPSILON * report.scale:
        raise InvalidOperatorError(f"Eigensolver residual {worst:.3e} exceeds {SPECTRAL_EPSILON * report.scale:.3e}")
    logger.debug(f"Spectrum of {R.ctx.N}x{R.ctx.N} operator: min={report.eigenvalues[0]:.6g}, "
                 f"max={report.eigenvalues[-1]:.6g}")
    return report


def classify_value(value: float, scale: float) -> Classification:
    threshold = SPECTRAL_EPSILON * scale
    if value > threshold:
        return Classification.positive
    if abs(value) <= threshold:
        return Classification.nonnegative_not_positive
    return Classification.indefinite


def classify_m(report: SpectralReport, m: int) -> Classification:
    report._check_m(m)
    return classify_value(report.prefix_sums[m], report.scale)


def is_marginal(report: SpectralReport, m: int) -> bool:
    return classify_m(report, m) is Classification.nonnegative_not_positive


def kappa_lower_bound(report: SpectralReport, m: int) -> float:
    """The largest kappa with (mu_1 + ... + mu_m)/m >= kappa."""
    return report.average(m)


def curvature_kappa(report: SpectralReport, m: int) -> float:
    """The smallest kappa >= 0 with (mu_1 + ... + mu_m)/m >= -kappa."""
    return max(0.0, -report.average(m))


def lemma22_check(R: CurvatureOperator, T: DenseTensor, C: float, kappa: float, seed: SeedLike = None) -> bool:
    """Sampled check that g(R(T-hat), T-hat) >= kappa |T-hat|^2 whenever |LT|^2 <= |T-hat|^2 |L|^2 / C.

    The bound on |LT|^2 is tested over the bivector basis and RANDOM_PROBES random L; a violated
    bound raises HypothesisViolationError. kappa is compared against the lowest floor(C) eigenvalues
    only through the caller's choice, this function never proves anything.
    """
    if C < 1:
        raise InvalidArgumentError(f"C must be at least 1, got {C}")
    if R.ctx != T.ctx:
        raise DimensionMismatchError("Operator and tensor live on different spaces")
    T_hat = hat(T)
    hat_norm_squared = T_hat.norm_squared()
    bound = hat_norm_squared / C
    slack = SPECTRAL_EPSILON * max(1.0, bound)
    # |L_alpha T|^2 for the unit basis elements are the slice norms
    basis_norms = np.sum(T_hat.flat() ** 2, axis=1)
    if np.any(basis_norms > bound + slack):
        raise HypothesisViolationError(f"|LT|^2 exceeds |T-hat|^2/C = {bound:.6g} on a basis bivector")
    rng = np.random.default_rng(seed)
    for _ in range(RANDOM_PROBES):
        L = random_skew(T.ctx, rng)
        lt_norm = lt_action(L, T).norm() ** 2
        if lt_norm > (bound + slack) * L.norm() ** 2:
            raise HypothesisViolationError(f"|LT|^2 = {lt_norm:.6g} exceeds |T-hat|^2 |L|^2/C")
    scale = max(1.0, float(np.max(np.abs(R.matrix), initial=0.0)))
    quadratic = curvature_quadratic(R, T)
    return quadratic >= kappa * hat_norm_squared - SPECTRAL_EPSILON * scale * max(hat_norm_squared, 1.0)


def floor_constant(C: float) -> int:
    """floor(C), the number of eigenvalues entering the lower bound for a Lemma constant C."""
    if C < 1:
        raise InvalidArgumentError(f"C must be at least 1, got {C}")
    return int(math.floor(C))
