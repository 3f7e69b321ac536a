"""Sampled inequalities: bounds on |LT|^2 and the eigenvalue lower bound for g(R(T-hat), T-hat)."""
import math

import numpy as np

from bochnerkit.core.curvature import curvature_quadratic, hat, random_curvature, random_operator, traceless_curvature
from bochnerkit.core.spectral import (
    SPECTRAL_EPSILON,
    Classification,
    classify_m,
    floor_constant,
    kappa_lower_bound,
    lemma22_check,
    spectrum,
)
from bochnerkit.core.tensors import MAX_ARITY, lt_action, random_form, random_skew, random_tensor
from bochnerkit.suites.base import VerificationSuite

BOUND_SLACK = 1e-12


def _violation(value: float, bound: float) -> float:
    return max(0.0, value - bound) / max(1.0, bound)


class ActionBoundSuite(VerificationSuite):
    _NAME_ = "lemma25_bounds"
    _DESCRIPTION_ = "|LT|^2 <= k^2|T|^2|L|^2, |L omega|^2 <= min(ell, n-ell)|omega|^2|L|^2, |L Rm|^2 <= 8|Rm0|^2|L|^2"
    TOLERANCE = BOUND_SLACK

    def trial(self, rng: np.random.Generator) -> float:
        n = self.ctx.n
        L = random_skew(self.ctx, rng)
        L_norm_squared = L.norm() ** 2

        k = int(rng.integers(1, MAX_ARITY + 1))
        T = random_tensor(self.ctx, k, rng)
        generic = _violation(lt_action(L, T).norm() ** 2, k * k * T.norm() ** 2 * L_norm_squared)

        ell = int(rng.integers(1, min(n - 1, MAX_ARITY) + 1))
        omega = random_form(self.ctx, ell, rng)
        form = _violation(lt_action(L, omega.underlying).norm() ** 2,
                          min(ell, n - ell) * omega.norm() ** 2 * L_norm_squared)

        Rm = random_curvature(self.ctx, rng)
        curvature = _violation(lt_action(L, Rm.underlying).norm() ** 2,
                               8 * traceless_curvature(Rm).norm() ** 2 * L_norm_squared)
        return max(generic, form, curvature)


class LowerBoundSuite(VerificationSuite):
    _NAME_ = "lemma24"
    _DESCRIPTION_ = "g(R(omega-hat), omega-hat) >= kappa |omega-hat|^2 with C = n - ell and kappa the floor(C) average"
    TOLERANCE = SPECTRAL_EPSILON

    def trial(self, rng: np.random.Generator) -> float:
        n = self.ctx.n
        R = random_operator(self.ctx, rng)
        ell = int(rng.integers(1, min(n - 1, MAX_ARITY) + 1))
        omega = random_form(self.ctx, ell, rng).underlying
        C = n - ell
        report = spectrum(R)
        m = floor_constant(C)
        kappa = kappa_lower_bound(report, m)
        if not lemma22_check(R, omega, C, kappa, rng):
            return math.inf
        hat_norm_squared = hat(omega).norm_squared()
        quadratic = curvature_quadratic(R, omega)
        if classify_m(report, m) is Classification.positive and hat_norm_squared > 0 and not quadratic > 0:
            return math.inf
        scale = report.scale * max(1.0, hat_norm_squared)
        return max(0.0, kappa * hat_norm_squared - quadratic) / scale

