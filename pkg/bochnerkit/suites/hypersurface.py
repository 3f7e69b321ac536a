import math

import numpy as np

from bochnerkit.core.curvature import to_operator
from bochnerkit.core.decisions import betti_verdict, gauss_curvature_tensor, hypersurface_operator, second_kind_means
from bochnerkit.core.models import Conclusion, HypersurfaceSpec
from bochnerkit.core.spectral import spectrum
from bochnerkit.suites.base import VerificationSuite

ORACLE_TOLERANCE = 1e-12


class HypersurfaceOracleSuite(VerificationSuite):
    """Gauss equation against the diagonal K + lambda_i lambda_j form, plus Betti monotonicity in p."""
    _NAME_ = "hypersurface_oracle"
    _DESCRIPTION_ = "The Gauss-equation operator is diag(K + lambda_i lambda_j) and Betti verdicts nest in p"
    MIN_DIMENSION = 3
    TOLERANCE = ORACLE_TOLERANCE

    def trial(self, rng: np.random.Generator) -> float:
        n = self.ctx.n
        spec = HypersurfaceSpec(n=n, lambdas=rng.uniform(-1.0, 1.0, size=n).tolist(), K=float(rng.uniform(-1.0, 1.0)))
        diagonal = hypersurface_operator(spec)
        gauss = to_operator(gauss_curvature_tensor(spec))
        entrywise = float(np.max(np.abs(gauss.matrix - diagonal.matrix)))

        expected = np.sort([spec.K + spec.lambdas[i] * spec.lambdas[j] for i, j in self.ctx.pair_order])
        spectral = float(np.max(np.abs(np.asarray(spectrum(gauss).eigenvalues) - expected)))

        flat = spec.model_copy(update={'K': 0.0})
        means = float(np.max(np.abs(np.asarray(spectrum(hypersurface_operator(flat)).eigenvalues)
                                    - np.asarray(second_kind_means(spec)))))

        zero = [betti_verdict(spec, p, True).conclusion is Conclusion.BETTI_RANGE_ZERO for p in range(1, n // 2 + 1)]
        # once a p fails every larger p must fail too
        nested = all(earlier or not later for earlier, later in zip(zero, zero[1:]))
        return max(entrywise, spectral, means) if nested else math.inf
