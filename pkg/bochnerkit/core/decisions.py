"""
Decision procedures for the vanishing and rigidity theorems of the Bochner technique.

Each verdict function evaluates the numeric hypotheses of one theorem (curvature
thresholds, m-nonnegativity, Betti sums) and carries the analytic hypotheses
through as user assertions. The result is a TheoremVerdict whose conclusion is
not_applicable unless every listed check is satisfied.
"""
import logging
import math
from typing import Iterable, List, Tuple

import numpy as np

from bochnerkit.core.curvature import (
    CurvatureOperator,
    CurvatureTensor,
    SymmetricBilinear,
    constant_curvature,
    kulkarni_nomizu,
)
from bochnerkit.core.models import (
    AnalyticHypotheses,
    Conclusion,
    HypersurfaceSpec,
    HypothesisCheck,
    IntegralVariant,
    KatoConstant,
    TheoremVerdict,
    UmbilicSpec,
    WeightDescriptor,
    WeylVariant,
)
from bochnerkit.core.spectral import (
    SPECTRAL_EPSILON,
    Classification,
    SpectralReport,
    classify_m,
    classify_value,
)
from bochnerkit.core.tensors import SpaceContext
from bochnerkit.errors import (
    DimensionMismatchError,
    HypothesisViolationError,
    InvalidArgumentError,
    UnsupportedDimensionError,
)

logger = logging.getLogger(__name__)

WEIGHTED_CONDITIONS = ('weighted_poincare', 'liminf_rho_positive', 'nonparabolic')


def _check_q(Q: float) -> None:
    if not Q >= 2:
        raise HypothesisViolationError(f"The integrability exponent Q must be at least 2, got {Q}")


def _check_kappa(kappa: float) -> None:
    if not kappa >= 0:
        raise HypothesisViolationError(f"kappa must be nonnegative, got {kappa}")


def _check_p(n: int, p: int) -> None:
    if n < 3:
        raise UnsupportedDimensionError(f"Form and Betti number results need n >= 3, got n = {n}")
    if not 1 <= p <= n // 2:
        raise InvalidArgumentError(f"p must lie in [1, {n // 2}] for n = {n}, got {p}")


def _check_report(report: SpectralReport, n: int) -> None:
    if report.ctx is None or report.ctx.n != n:
        raise DimensionMismatchError(f"Spectrum has {report.N} eigenvalues, expected {n * (n - 1) // 2} for n = {n}")


def _flags(hyp: AnalyticHypotheses, names: Iterable[str]) -> List[HypothesisCheck]:
    return [HypothesisCheck(name=name, value=getattr(hyp, name), satisfied=getattr(hyp, name)) for name in names]


def _degree_ranges(n: int, p: int) -> List[int]:
    return sorted(set(range(1, p + 1)) | set(range(n - p, n)))


def _tolerance(threshold: float) -> float:
    return SPECTRAL_EPSILON * max(1.0, abs(threshold))


def _below(kappa: float, threshold: float) -> bool:
    return kappa < threshold - _tolerance(threshold)


def _at(kappa: float, threshold: float) -> bool:
    return abs(kappa - threshold) <= _tolerance(threshold)


def _verdict(theorem_id: str, checks: List[HypothesisCheck], conclusion: Conclusion, **fields) -> TheoremVerdict:
    if not all(check.satisfied for check in checks):
        conclusion = Conclusion.NOT_APPLICABLE
        fields['degrees'] = []
        # notes describe the withdrawn conclusion
        fields.pop('notes', None)
    verdict = TheoremVerdict(theorem_id=theorem_id, hypotheses_checked=checks, conclusion=conclusion, **fields)
    logger.debug(f"{theorem_id}: {verdict.conclusion.value} (marginal={verdict.marginal})")
    return verdict


def kappa_threshold(Q: float, c: float, kato: KatoConstant) -> float:
    """4(Q - 1 + a)/(c Q^2); with a = 0 the plain Bochner bound."""
    _check_q(Q)
    if not c > 0:
        raise HypothesisViolationError(f"The Lichnerowicz constant c must be positive, got {c}")
    return 4.0 * (Q - 1.0 + kato.a) / (c * Q * Q)


def form_threshold(n: int, ell: int, Q: float) -> float:
    """4(Q - 1 + 1/max(ell, n - ell)) / (ell (n - ell) Q^2)."""
    if n < 3 or not 1 <= ell <= n - 1:
        raise HypothesisViolationError(f"Form threshold needs n >= 3 and 1 <= ell <= n - 1, got n = {n}, ell = {ell}")
    _check_q(Q)
    return 4.0 * (Q - 1.0 + 1.0 / max(ell, n - ell)) / (ell * (n - ell) * Q * Q)


def weyl_threshold(n: int, Q: float, variant: WeylVariant = WeylVariant.GENERIC) -> float:
    if n < 4:
        raise UnsupportedDimensionError(f"The Weyl tensor vanishes identically for n < 4, got n = {n}")
    _check_q(Q)
    improvement = 2.0 / (n - 1) if WeylVariant(variant) is WeylVariant.EINSTEIN else 0.0
    return 2.0 * (Q - 1.0 + improvement) / ((n - 1) * Q * Q)


def curvature_integral_threshold(n: int, Q: float, variant: IntegralVariant) -> float:
    """2(Q - 1)/((n-1)Q^2) for Einstein metrics, 2(Q - 1/2)/((n-1)Q^2) for zero scalar curvature."""
    if n < 3:
        raise UnsupportedDimensionError(f"Curvature integral results need n >= 3, got n = {n}")
    _check_q(Q)
    shift = 0.5 if IntegralVariant(variant) is IntegralVariant.ZERO_SCALAR else 1.0
    return 2.0 * (Q - shift) / ((n - 1) * Q * Q)


def harmonic_tensor_verdict(report: SpectralReport, n: int, Q: float, hyp: AnalyticHypotheses) -> TheoremVerdict:
    """Harmonic tensors with |T| in L^Q vanish on complete non-compact manifolds with ceil(n/2)-nonnegative curvature."""
    _check_report(report, n)
    m = math.ceil(n / 2)
    classification = classify_m(report, m)
    checks = [
        HypothesisCheck(name=f"{m}_nonnegative", value=report.prefix_sums[m], satisfied=classification.nonnegative,
                        note=classification.value),
        HypothesisCheck(name="q_at_least_2", value=Q, satisfied=Q >= 2),
    ]
    checks += _flags(hyp, ['complete_noncompact'])
    return _verdict("harmonic_tensor", checks, Conclusion.VANISHES,
                    marginal=classification is Classification.nonnegative_not_positive)


def weighted_tensor_verdict(kappa: float, Q: float, c: float, kato: KatoConstant,
                            hyp: AnalyticHypotheses) -> TheoremVerdict:
    """Vanishing under g(R(T-hat), T-hat) >= -kappa rho |T|^2 and a weighted Poincare inequality."""
    _check_kappa(kappa)
    threshold = kappa_threshold(Q, c, kato)
    checks = [
        HypothesisCheck(name="kappa_below_threshold", value=kappa, satisfied=_below(kappa, threshold),
                        note=f"threshold {threshold:.12g} with Kato constant a = {kato.a:.6g} ({kato.provenance})"),
    ]
    checks += _flags(hyp, WEIGHTED_CONDITIONS + ('connected', 'complete_noncompact'))
    return _verdict("weighted_tensor", checks, Conclusion.VANISHES, marginal=_at(kappa, threshold))


def form_vanishing_verdict(report: SpectralReport, n: int, p: int, Q: float,
                           hyp: AnalyticHypotheses) -> TheoremVerdict:
    """Harmonic ell-forms in L^Q vanish for ell in [1..p] and [n-p..n-1] under (n-p)-nonnegative curvature."""
    _check_p(n, p)
    _check_report(report, n)
    classification = classify_m(report, n - p)
    checks = [
        HypothesisCheck(name=f"{n - p}_nonnegative", value=report.prefix_sums[n - p],
                        satisfied=classification.nonnegative, note=classification.value),
        HypothesisCheck(name="q_at_least_2", value=Q, satisfied=Q >= 2),
    ]
    checks += _flags(hyp, ['complete_noncompact'])
    return _verdict("form_vanishing", checks, Conclusion.VANISHES, degrees=_degree_ranges(n, p),
                    marginal=classification is Classification.nonnegative_not_positive)


def weighted_form_verdict(n: int, p: int, Q: float, kappa: float, hyp: AnalyticHypotheses) -> TheoremVerdict:
    """Per-degree form thresholds once (mu_1 + ... + mu_{n-p})/(n-p) >= -kappa rho is granted."""
    _check_p(n, p)
    _check_kappa(kappa)
    thresholds = {ell: form_threshold(n, ell, Q) for ell in _degree_ranges(n, p)}
    passing = [ell for ell, threshold in thresholds.items() if _below(kappa, threshold)]
    listing = ", ".join(f"ell={ell}: {threshold:.12g}" for ell, threshold in thresholds.items())
    checks = [HypothesisCheck(name="kappa_below_form_threshold", value=kappa, satisfied=bool(passing),
                              note=listing)]
    checks += _flags(hyp, WEIGHTED_CONDITIONS + ('complete_noncompact',))
    return _verdict("weighted_form", checks, Conclusion.VANISHES, degrees=passing,
                    marginal=any(_at(kappa, threshold) for threshold in thresholds.values()))


def weyl_verdict(n: int, Q: float, kappa: float, variant: WeylVariant, hyp: AnalyticHypotheses) -> TheoremVerdict:
    """Weyl rigidity: locally conformally flat (generic), constant curvature (Einstein), flat (Ricci-flat, kappa = 0)."""
    variant = WeylVariant(variant)
    threshold = weyl_threshold(n, Q, variant)
    _check_kappa(kappa)
    m = (n - 1) // 2
    kappa_zero = abs(kappa) <= SPECTRAL_EPSILON
    if hyp.ricci_flat and kappa_zero:
        checks = [HypothesisCheck(name=f"{m}_nonnegative", value=kappa, satisfied=True,
                                  note="kappa = 0 means the curvature operator is nonnegative on the lowest sums")]
        checks += _flags(hyp, ['ricci_flat', 'connected', 'complete_noncompact'])
        return _verdict("ricci_flat_rigidity", checks, Conclusion.FLAT,
                        notes=["the curvature tensor vanishes, so the metric is flat"])

    checks = [HypothesisCheck(name="kappa_below_threshold", value=kappa, satisfied=_below(kappa, threshold),
                              note=f"threshold {threshold:.12g} on the lowest {m} eigenvalues")]
    checks += _flags(hyp, ['divergence_free_weyl', 'connected', 'complete_noncompact'])
    checks.append(HypothesisCheck(
        name="weighted_poincare", value=hyp.weighted_poincare, satisfied=hyp.weighted_poincare or kappa_zero,
        note="not needed when kappa = 0" if kappa_zero else None))
    conclusion = Conclusion.LOCALLY_CONFORMALLY_FLAT
    if variant is WeylVariant.EINSTEIN:
        checks += _flags(hyp, ['einstein'])
        alternative = 2.0 * (Q - 1.0 + 2.0 / (n - 2)) / ((n - 1) * Q * Q)
        checks.append(HypothesisCheck(
            name="kato_constant", value=2.0 / (n - 1), satisfied=True,
            note=f"a = 2/(n-1) as stated; the derivation writes 2/(n-2), which gives threshold {alternative:.12g}"))
        conclusion = Conclusion.CONSTANT_SECTIONAL_CURVATURE
    return _verdict(f"weyl_{variant.value}", checks, conclusion, marginal=_at(kappa, threshold))


def curvature_integral_verdict(n: int, Q: float, kappa: float, variant: IntegralVariant,
                               hyp: AnalyticHypotheses) -> TheoremVerdict:
    """Threshold arithmetic for the infinite curvature integral results; the integral itself is never evaluated."""
    variant = IntegralVariant(variant)
    threshold = curvature_integral_threshold(n, Q, variant)
    _check_kappa(kappa)
    checks = [HypothesisCheck(name="kappa_below_threshold", value=kappa, satisfied=_below(kappa, threshold),
                              note=f"threshold {threshold:.12g}")]
    if variant is IntegralVariant.EINSTEIN:
        checks += _flags(hyp, ['einstein'])
    else:
        checks += _flags(hyp, ['zero_scalar', 'divergence_free_rm'])
    checks += _flags(hyp, WEIGHTED_CONDITIONS + ('connected', 'complete_noncompact'))
    return _verdict(f"curvature_integral_{variant.value}", checks, Conclusion.INFINITE_LQ_NORM,
                    marginal=_at(kappa, threshold),
                    notes=[f"unless Rm vanishes, the integral of |Rm|^{Q:g} over M is infinite"])


def hypersurface_operator(spec: HypersurfaceSpec) -> CurvatureOperator:
    """Diagonal operator with entry K + lambda_i lambda_j at pair (i, j)."""
    ctx = SpaceContext(spec.n)
    lambdas = np.asarray(spec.lambdas, dtype=float)
    values = [spec.K + lambdas[i] * lambdas[j] for i, j in ctx.pair_order]
    return CurvatureOperator.diagonal(ctx, values)


def gauss_curvature_tensor(spec: HypersurfaceSpec) -> CurvatureTensor:
    """Rm = K (1/2) g.g + (1/2) h.h for the shape operator h = diag(lambda)."""
    ctx = SpaceContext(spec.n)
    h = SymmetricBilinear(ctx, np.diag(np.asarray(spec.lambdas, dtype=float)))
    return constant_curvature(ctx, spec.K) + 0.5 * kulkarni_nomizu(h, h)


def second_kind_means(spec: HypersurfaceSpec) -> List[float]:
    lambdas = np.asarray(spec.lambdas, dtype=float)
    i, j = np.triu_indices(spec.n, k=1)
    return [float(v) for v in np.sort(lambdas[i] * lambdas[j])]


def _prefix_verdict(theorem_id: str, n: int, p: int, m: int, value: float, scale: float, closed: bool,
                    note: str) -> TheoremVerdict:
    classification = classify_value(value, scale)
    checks = [
        HypothesisCheck(name=f"{m}_sum_bound", value=value, satisfied=classification.nonnegative, note=note),
        HypothesisCheck(name="closed", value=closed, satisfied=closed),
    ]
    if classification is Classification.positive:
        return _verdict(theorem_id, checks, Conclusion.BETTI_RANGE_ZERO, degrees=_degree_ranges(n, p))
    return _verdict(theorem_id, checks, Conclusion.PARALLEL, degrees=sorted({p, n - p}),
                    marginal=classification is Classification.nonnegative_not_positive,
                    notes=[f"harmonic {p}-forms and {n - p}-forms are parallel"])


def _hypersurface_sum(spec: HypersurfaceSpec, m: int) -> Tuple[float, float, str]:
    means = second_kind_means(spec)
    # equivalent to m-positivity of the operator with eigenvalues K + mu_i
    value = float(np.sum(np.asarray(means[:m]) + spec.K))
    scale = max(1.0, abs(means[0] + spec.K), abs(means[-1] + spec.K))
    note = f"mu_1 + ... + mu_{m} = {sum(means[:m]):.12g} against -{m}K = {-m * spec.K:.12g}"
    return value, scale, note


def betti_verdict(spec: HypersurfaceSpec, p: int, closed: bool) -> TheoremVerdict:
    """Betti numbers b_1..b_p and b_{n-p}..b_{n-1} vanish when mu_1 + ... + mu_{n-p} > -(n-p)K."""
    n = spec.n
    _check_p(n, p)
    value, scale, note = _hypersurface_sum(spec, n - p)
    return _prefix_verdict("betti_hypersurface", n, p, n - p, value, scale, closed, note)


def all_degrees_betti_verdict(spec: HypersurfaceSpec, closed: bool) -> TheoremVerdict:
    """b_p = 0 for 0 < p < n when mu_1 + ... + mu_{n - ceil(n/2)} > -(n - ceil(n/2))K."""
    n = spec.n
    _check_p(n, 1)
    m = n - math.ceil(n / 2)
    value, scale, note = _hypersurface_sum(spec, m)
    return _prefix_verdict("betti_hypersurface_all_degrees", n, n // 2, m, value, scale, closed, note)


def _umbilic_sum(spec: UmbilicSpec, m: int) -> Tuple[float, float, str]:
    if len(spec.ambient_mu) < m:
        raise InvalidArgumentError(f"Need at least {m} ambient eigenvalues, got {len(spec.ambient_mu)}")
    shift = spec.h_norm ** 2
    leading = float(np.sum(spec.ambient_mu[:m]))
    scale = max(1.0, abs(spec.ambient_mu[0]), abs(spec.ambient_mu[-1]), shift)
    note = f"ambient mu_1 + ... + mu_{m} = {leading:.12g} against -{m}|H|^2 = {-m * shift:.12g}"
    return leading + m * shift, scale, note


def umbilic_verdict(spec: UmbilicSpec, p: int, closed: bool) -> TheoremVerdict:
    """Totally umbilical case: the submanifold operator has eigenvalues |H|^2 + ambient mu_i."""
    n = spec.n
    _check_p(n, p)
    value, scale, note = _umbilic_sum(spec, n - p)
    return _prefix_verdict("betti_umbilic", n, p, n - p, value, scale, closed, note)


def all_degrees_umbilic_verdict(spec: UmbilicSpec, closed: bool) -> TheoremVerdict:
    n = spec.n
    _check_p(n, 1)
    m = n - math.ceil(n / 2)
    value, scale, note = _umbilic_sum(spec, m)
    return _prefix_verdict("betti_umbilic_all_degrees", n, n // 2, m, value, scale, closed, note)


def first_eigenvalue_weight(lambda1: float) -> WeightDescriptor:
    """A positive first eigenvalue gives a Poincare inequality with constant weight rho = lambda_1."""
    if not lambda1 > 0:
        raise HypothesisViolationError(f"The first eigenvalue must be positive, got {lambda1}")
    return WeightDescriptor(rho=float(lambda1))


def submanifold_form_verdict(spec: HypersurfaceSpec, p: int, Q: float, kappa: float, weight: WeightDescriptor,
                             hyp: AnalyticHypotheses) -> TheoremVerdict:
    """Complete non-compact hypersurfaces: ((n-p)K + mu_1 + ... + mu_{n-p})/(n-p) >= -kappa lambda_1."""
    n = spec.n
    _check_p(n, p)
    _check_kappa(kappa)
    m = n - p
    means = second_kind_means(spec)
    average = (m * spec.K + sum(means[:m])) / m
    bound = -kappa * weight.rho
    tolerance = SPECTRAL_EPSILON * max(1.0, abs(average), abs(bound))
    forms = weighted_form_verdict(n, p, Q, kappa, weight.apply(hyp))
    checks = [HypothesisCheck(name="curvature_average_bound", value=average, satisfied=average >= bound - tolerance,
                              note=f"-kappa lambda_1 = {bound:.12g}")]
    checks += forms.hypotheses_checked
    return _verdict("submanifold_form", checks, Conclusion.VANISHES, degrees=forms.degrees,
                    marginal=forms.marginal or abs(average - bound) <= tolerance)

