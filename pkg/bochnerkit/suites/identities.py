"""Exact algebraic identities: hat norms, the Weitzenboeck equality and the orthogonal decomposition."""
from typing import List

import numpy as np

from bochnerkit.core.curvature import (
    constant_curvature,
    curvature_bilinear,
    decompose,
    hat,
    hat_norm_identity_residual,
    random_curvature,
    ricci_contraction,
    to_operator,
    traceless_curvature,
    weitzenboeck,
)
from bochnerkit.core.tensors import MAX_ARITY, inner, random_form, random_tensor
from bochnerkit.suites.base import VerificationSuite, relative

CONSTANT_CURVATURES = (-2.0, -1.0, 0.0, 1.0, 2.0)


class HatFormSuite(VerificationSuite):
    _NAME_ = "prop25a"
    _DESCRIPTION_ = "|omega-hat|^2 = ell(n - ell)|omega|^2 for random ell-forms"

    def degrees(self) -> List[int]:
        return list(range(1, min(self.ctx.n - 1, MAX_ARITY) + 1))

    def trial(self, rng: np.random.Generator) -> float:
        n = self.ctx.n
        residual = 0.0
        for ell in self.degrees():
            omega = random_form(self.ctx, ell, rng)
            expected = ell * (n - ell) * omega.norm() ** 2
            residual = max(residual, relative(hat(omega.underlying).norm_squared(), expected))
        return residual

    def notes(self) -> List[str]:
        top = self.degrees()[-1]
        if top < self.ctx.n - 1:
            return [f"degrees {top + 1}..{self.ctx.n - 1} are covered by Hodge duality with degrees "
                    f"1..{self.ctx.n - 1 - top}"]
        return []


class HatCurvatureSuite(VerificationSuite):
    _NAME_ = "prop25b"
    _DESCRIPTION_ = "|Rm-hat|^2 = 4(n-1)|Rm0|^2 - 8|Ric0|^2, Rm-hat = Rm0-hat, and constant curvature is annihilated"

    def trial(self, rng: np.random.Generator) -> float:
        Rm = random_curvature(self.ctx, rng)
        scale = max(1.0, Rm.norm())
        slicewise = np.max(np.abs(hat(Rm.underlying).slices - hat(traceless_curvature(Rm).underlying).slices))
        kappa = CONSTANT_CURVATURES[int(rng.integers(len(CONSTANT_CURVATURES)))]
        constant = hat(constant_curvature(self.ctx, kappa).underlying).norm() / max(1.0, abs(kappa))
        return max(hat_norm_identity_residual(Rm), float(slicewise) / scale, constant)

    def notes(self) -> List[str]:
        if self.ctx.n == 3:
            return ["the Weyl part vanishes identically in dimension 3, so Rm0 carries only its Ricci part"]
        return []


class WeitzenboeckSuite(VerificationSuite):
    _NAME_ = "prop23"
    _DESCRIPTION_ = "g(Ric(S), T) = sum R[alpha, beta] g(S-hat_alpha, T-hat_beta) for arities 1..3"

    ARITIES = (1, 2, 3)

    def trial(self, rng: np.random.Generator) -> float:
        Rm = random_curvature(self.ctx, rng)
        R = to_operator(Rm)
        residual = 0.0
        for k in self.ARITIES:
            S = random_tensor(self.ctx, k, rng)
            T = random_tensor(self.ctx, k, rng)
            S_hat, T_hat = hat(S), hat(T)
            scale = max(1.0, float(np.max(np.abs(R.matrix))) * S_hat.norm() * T_hat.norm())
            weitzenboeck_side = inner(weitzenboeck(Rm, S), T)
            operator_side = curvature_bilinear(R, S, T, S_hat=S_hat, T_hat=T_hat)
            adjoint_side = inner(S, weitzenboeck(Rm, T))
            residual = max(residual,
                           abs(weitzenboeck_side - operator_side) / scale,
                           abs(weitzenboeck_side - adjoint_side) / scale)
        return residual


class DecompositionSuite(VerificationSuite):
    _NAME_ = "decomposition"
    _DESCRIPTION_ = "Rm = scalar part + Ricci part + W with pairwise orthogonal parts and traceless W"
    MIN_DIMENSION = 3

    def trial(self, rng: np.random.Generator) -> float:
        Rm = random_curvature(self.ctx, rng)
        parts = decompose(Rm)
        scale = max(1.0, Rm.norm())
        pieces = (parts.scal_part.underlying, parts.ricci_part.underlying, parts.weyl.underlying)
        reconstruction = (parts.reconstruct().underlying - Rm.underlying).norm() / scale
        orthogonality = max(abs(inner(a, b)) for i, a in enumerate(pieces) for b in pieces[i + 1:]) / scale ** 2
        traceless = ricci_contraction(parts.weyl).norm() / scale
        return max(reconstruction, orthogonality, traceless)
