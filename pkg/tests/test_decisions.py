import numpy as np
import pytest
from pydantic import ValidationError

from bochnerkit.core.curvature import CurvatureOperator, to_operator
from bochnerkit.core.decisions import (
    all_degrees_betti_verdict,
    all_degrees_umbilic_verdict,
    betti_verdict,
    curvature_integral_threshold,
    curvature_integral_verdict,
    first_eigenvalue_weight,
    form_threshold,
    form_vanishing_verdict,
    gauss_curvature_tensor,
    harmonic_tensor_verdict,
    hypersurface_operator,
    kappa_threshold,
    second_kind_means,
    submanifold_form_verdict,
    weighted_form_verdict,
    weighted_tensor_verdict,
    weyl_threshold,
    weyl_verdict,
)
from bochnerkit.core.models import (
    AnalyticHypotheses,
    Conclusion,
    HypersurfaceSpec,
    HypothesisCheck,
    IntegralVariant,
    KatoConstant,
    KatoVariant,
    TheoremVerdict,
    UmbilicSpec,
    WeylVariant,
)
from bochnerkit.core.spectral import SpectralReport, spectrum
from bochnerkit.core.tensors import SpaceContext
from bochnerkit.errors import (
    DimensionMismatchError,
    HypothesisViolationError,
    InvalidArgumentError,
    UnsupportedDimensionError,
)
from .utils import rng

ALL_TRUE = AnalyticHypotheses.all_true()


def identity_spectrum(n):
    return spectrum(CurvatureOperator.identity(SpaceContext(n)))


def umbilic_verdict_conclusion(spec):
    return all_degrees_umbilic_verdict(spec, closed=True).conclusion


def test_kappa_threshold_examples():
    assert kappa_threshold(2, 1, KatoConstant.generic()) == pytest.approx(1.0)
    assert kappa_threshold(2, 0.5, KatoConstant.generic()) == pytest.approx(2.0)
    assert kappa_threshold(2, 1, KatoConstant.zero_scalar_rm()) == pytest.approx(1.5)


@pytest.mark.parametrize("Q, c", [(1.5, 1.0), (2.0, 0.0), (2.0, -1.0)])
def test_kappa_threshold_rejects(Q, c):
    with pytest.raises(HypothesisViolationError):
        kappa_threshold(Q, c, KatoConstant.generic())


def test_form_threshold_examples():
    assert form_threshold(4, 1, 2) == pytest.approx(4 / 9)
    assert form_threshold(4, 2, 2) == pytest.approx(3 / 8)
    assert form_threshold(3, 1, 2) == pytest.approx(3 / 4)
    with pytest.raises(HypothesisViolationError):
        form_threshold(4, 4, 2)


def test_weyl_threshold_examples():
    assert weyl_threshold(4, 2) == pytest.approx(1 / 6)
    assert weyl_threshold(4, 2, WeylVariant.EINSTEIN) == pytest.approx(5 / 18)
    assert weyl_threshold(5, 2) == pytest.approx(1 / 8)
    with pytest.raises(UnsupportedDimensionError):
        weyl_threshold(3, 2)


def test_curvature_integral_threshold():
    assert curvature_integral_threshold(4, 2, IntegralVariant.EINSTEIN) == pytest.approx(1 / 6)
    assert curvature_integral_threshold(4, 2, IntegralVariant.ZERO_SCALAR) == pytest.approx(1 / 4)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
@pytest.mark.parametrize("Q", [2.0, 3.0, 4.5])
def test_threshold_factorizations(n, Q):
    for ell in range(1, n):
        expected = kappa_threshold(Q, 1, KatoConstant.form(ell, n)) / (ell * (n - ell))
        assert abs(form_threshold(n, ell, Q) - expected) <= 1e-12
    if n >= 4:
        expected = kappa_threshold(Q, 0.5, KatoConstant.generic()) / (4 * (n - 1))
        assert abs(weyl_threshold(n, Q) - expected) <= 1e-12


def test_kato_constants():
    assert KatoConstant.generic().a == 0.0
    assert KatoConstant.form(1, 4).a == pytest.approx(1 / 3)
    assert KatoConstant.einstein_weyl(5).a == pytest.approx(0.5)
    assert KatoConstant.for_variant(KatoVariant.ZERO_SCALAR).a == 0.5
    with pytest.raises(InvalidArgumentError):
        KatoConstant.for_variant(KatoVariant.FORM, n=4)


def test_ricci_flat_implies_einstein():
    hyp = AnalyticHypotheses(ricci_flat=True)
    assert hyp.einstein and hyp.zero_scalar
    with pytest.raises(ValidationError):
        AnalyticHypotheses(ricci_flat=True, einstein=False)


def test_verdict_requires_satisfied_hypotheses():
    with pytest.raises(ValidationError):
        TheoremVerdict(theorem_id="example", conclusion=Conclusion.VANISHES,
                       hypotheses_checked=[HypothesisCheck(name="closed", value=False, satisfied=False)])


def test_harmonic_tensor_verdict_examples():
    verdict = harmonic_tensor_verdict(identity_spectrum(4), 4, 2, ALL_TRUE)
    assert verdict.conclusion is Conclusion.VANISHES
    assert not verdict.marginal

    verdict = harmonic_tensor_verdict(SpectralReport.from_eigenvalues([-1.0, -1.0, 3.0]), 3, 2, ALL_TRUE)
    assert verdict.conclusion is Conclusion.NOT_APPLICABLE
    assert verdict.failing() == ["2_nonnegative"]

    verdict = harmonic_tensor_verdict(identity_spectrum(4), 4, 2, AnalyticHypotheses())
    assert verdict.conclusion is Conclusion.NOT_APPLICABLE
    assert verdict.failing() == ["complete_noncompact"]

    with pytest.raises(DimensionMismatchError):
        harmonic_tensor_verdict(identity_spectrum(4), 5, 2, ALL_TRUE)


def test_weighted_tensor_verdict_examples():
    generic = KatoConstant.generic()
    assert weighted_tensor_verdict(0.5, 2, 1, generic, ALL_TRUE).conclusion is Conclusion.VANISHES

    boundary = weighted_tensor_verdict(1.0, 2, 1, generic, ALL_TRUE)
    assert boundary.conclusion is Conclusion.NOT_APPLICABLE
    assert boundary.marginal

    no_c2 = ALL_TRUE.model_copy(update={'nonparabolic': False})
    verdict = weighted_tensor_verdict(0.5, 2, 1, generic, no_c2)
    assert verdict.conclusion is Conclusion.NOT_APPLICABLE
    assert verdict.failing() == ["nonparabolic"]

    with pytest.raises(HypothesisViolationError):
        weighted_tensor_verdict(-0.1, 2, 1, generic, ALL_TRUE)


def test_form_vanishing_verdict_examples():
    verdict = form_vanishing_verdict(identity_spectrum(5), 5, 2, 2, ALL_TRUE)
    assert verdict.conclusion is Conclusion.VANISHES
    assert verdict.degrees == [1, 2, 3, 4]

    verdict = form_vanishing_verdict(SpectralReport.from_eigenvalues([0, 0, 0, 0, 0, 1]), 4, 1, 2, ALL_TRUE)
    assert verdict.conclusion is Conclusion.VANISHES
    assert verdict.degrees == [1, 3]
    assert verdict.marginal

    verdict = form_vanishing_verdict(SpectralReport.from_eigenvalues([-1, 0, 3, 3, 3, 3]), 4, 2, 2, ALL_TRUE)
    assert verdict.conclusion is Conclusion.NOT_APPLICABLE
    assert verdict.degrees == []


@pytest.mark.parametrize("p", [0, 3])
def test_form_vanishing_rejects_degree(p):
    with pytest.raises(InvalidArgumentError):
        form_vanishing_verdict(identity_spectrum(5), 5, p, 2, ALL_TRUE)


def test_weighted_form_verdict_degrees():
    # n=4, Q=2: thresholds 4/9 for ell in {1, 3} and 3/8 for ell = 2
    verdict = weighted_form_verdict(4, 2, 2, 0.4, ALL_TRUE)
    assert verdict.conclusion is Conclusion.VANISHES
    assert verdict.degrees == [1, 3]
    assert weighted_form_verdict(4, 2, 2, 0.3, ALL_TRUE).degrees == [1, 2, 3]
    assert weighted_form_verdict(4, 2, 2, 0.5, ALL_TRUE).conclusion is Conclusion.NOT_APPLICABLE


def test_weyl_verdict_examples():
    verdict = weyl_verdict(4, 2, 0.1, WeylVariant.GENERIC, ALL_TRUE)
    assert verdict.conclusion is Conclusion.LOCALLY_CONFORMALLY_FLAT
    assert verdict.theorem_id == "weyl_generic"

    assert weyl_verdict(4, 2, 0.2, WeylVariant.GENERIC, ALL_TRUE).conclusion is Conclusion.NOT_APPLICABLE

    ricci_flat = AnalyticHypotheses(ricci_flat=True, connected=True, complete_noncompact=True)
    verdict = weyl_verdict(5, 2, 0.0, WeylVariant.GENERIC, ricci_flat)
    assert verdict.conclusion is Conclusion.FLAT
    assert verdict.theorem_id == "ricci_flat_rigidity"

    with pytest.raises(UnsupportedDimensionError):
        weyl_verdict(3, 2, 0.0, WeylVariant.GENERIC, ALL_TRUE)


def test_weyl_verdict_einstein():
    verdict = weyl_verdict(4, 2, 0.25, WeylVariant.EINSTEIN, ALL_TRUE)
    assert verdict.conclusion is Conclusion.CONSTANT_SECTIONAL_CURVATURE
    kato = next(check for check in verdict.hypotheses_checked if check.name == "kato_constant")
    assert "2/(n-2)" in kato.note
    not_einstein = ALL_TRUE.model_copy(update={'einstein': False, 'ricci_flat': False})
    assert weyl_verdict(4, 2, 0.25, WeylVariant.EINSTEIN, not_einstein).failing() == ["einstein"]


def test_weyl_verdict_needs_divergence_free_weyl():
    hyp = ALL_TRUE.model_copy(update={'divergence_free_weyl': False})
    assert weyl_verdict(4, 2, 0.1, WeylVariant.GENERIC, hyp).failing() == ["divergence_free_weyl"]


def test_curvature_integral_verdict():
    verdict = curvature_integral_verdict(4, 2, 0.1, IntegralVariant.ZERO_SCALAR, ALL_TRUE)
    assert verdict.conclusion is Conclusion.INFINITE_LQ_NORM
    assert verdict.notes
    assert curvature_integral_verdict(4, 2, 0.2, IntegralVariant.EINSTEIN, ALL_TRUE).conclusion \
        is Conclusion.NOT_APPLICABLE


@pytest.mark.parametrize("lambdas, K, expected", [
    ([1.0, 1.0, 1.0], 0.0, [1.0, 1.0, 1.0]),
    ([1.0, 2.0, 3.0], 0.0, [2.0, 3.0, 6.0]),
    ([1.0, 1.0, -1.0], 1.0, [2.0, 0.0, 0.0]),
])
def test_hypersurface_operator_examples(lambdas, K, expected):
    R = hypersurface_operator(HypersurfaceSpec(n=3, lambdas=lambdas, K=K))
    np.testing.assert_allclose(R.matrix, np.diag(expected))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_hypersurface_operator_matches_gauss_equation(n):
    generator = rng(n)
    for _ in range(5):
        spec = HypersurfaceSpec(n=n, lambdas=list(generator.uniform(-2, 2, n)), K=float(generator.uniform(-1, 1)))
        np.testing.assert_allclose(hypersurface_operator(spec).matrix, to_operator(gauss_curvature_tensor(spec)).matrix,
                                   atol=1e-12)
        flat = spec.model_copy(update={'K': 0.0})
        np.testing.assert_allclose(second_kind_means(spec), spectrum(hypersurface_operator(flat)).eigenvalues,
                                   atol=1e-12)


def test_hypersurface_spec_validation():
    with pytest.raises(ValidationError):
        HypersurfaceSpec(n=3, lambdas=[1.0, 2.0])
    with pytest.raises(ValidationError):
        HypersurfaceSpec(n=3, lambdas=[1.0, 2.0, float('inf')])


@pytest.mark.parametrize("lambdas, expected", [
    ([1.0, 2.0, 3.0], [2.0, 3.0, 6.0]),
    ([1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]),
    ([0.0, 0.0, 0.0], [0.0, 0.0, 0.0]),
])
def test_second_kind_means(lambdas, expected):
    assert second_kind_means(HypersurfaceSpec(n=3, lambdas=lambdas)) == expected


def test_betti_verdict_examples():
    sphere = HypersurfaceSpec(n=4, lambdas=[1.0, 1.0, 1.0, 1.0], K=0.0)
    verdict = betti_verdict(sphere, 2, closed=True)
    assert verdict.conclusion is Conclusion.BETTI_RANGE_ZERO
    assert verdict.degrees == [1, 2, 3]

    boundary = betti_verdict(HypersurfaceSpec(n=3, lambdas=[1.0, 1.0, -1.0], K=1.0), 1, closed=True)
    assert boundary.conclusion is Conclusion.PARALLEL
    assert boundary.marginal
    assert boundary.degrees == [1, 2]

    assert betti_verdict(sphere, 2, closed=False).conclusion is Conclusion.NOT_APPLICABLE


def test_not_applicable_verdicts_carry_no_conclusion_notes():
    indefinite = HypersurfaceSpec(n=4, lambdas=[1.0, -1.0, 1.0, -1.0])
    flat_claim = AnalyticHypotheses(ricci_flat=True)
    verdicts = [
        betti_verdict(indefinite, 2, closed=True),
        all_degrees_betti_verdict(indefinite, closed=True),
        weyl_verdict(5, 2, 0.0, WeylVariant.GENERIC, flat_claim),
        curvature_integral_verdict(4, 2, 0.1, IntegralVariant.ZERO_SCALAR, AnalyticHypotheses()),
    ]
    for verdict in verdicts:
        assert verdict.conclusion is Conclusion.NOT_APPLICABLE
        assert verdict.notes == []
        assert verdict.degrees == []
    flat = weyl_verdict(5, 2, 0.0, WeylVariant.GENERIC, ALL_TRUE.model_copy(update={'ricci_flat': True}))
    assert flat.conclusion is Conclusion.FLAT
    assert flat.notes


def test_betti_verdict_nesting():
    generator = rng(7)
    for _ in range(50):
        n = int(generator.integers(3, 9))
        spec = HypersurfaceSpec(n=n, lambdas=list(generator.uniform(-1, 2, n)), K=float(generator.uniform(-1, 1)))
        conclusions = [betti_verdict(spec, p, True).conclusion for p in range(1, n // 2 + 1)]
        for p in range(1, len(conclusions)):
            if conclusions[p] is Conclusion.BETTI_RANGE_ZERO:
                assert conclusions[p - 1] is Conclusion.BETTI_RANGE_ZERO


def test_all_degrees_betti_verdict():
    verdict = all_degrees_betti_verdict(HypersurfaceSpec(n=5, lambdas=[1.0] * 5), closed=True)
    assert verdict.theorem_id == "betti_hypersurface_all_degrees"
    assert verdict.degrees == [1, 2, 3, 4]


def test_all_degrees_betti_verdict_odd_dimension_uses_floor_sum():
    # means 1, 5 x 6, 25 x 3; with K = -3 the lowest two sit exactly on the bound
    spec = HypersurfaceSpec(n=5, lambdas=[1.0, 1.0, 5.0, 5.0, 5.0], K=-3.0)
    verdict = all_degrees_betti_verdict(spec, closed=True)
    assert verdict.conclusion is Conclusion.PARALLEL
    assert verdict.marginal
    assert verdict.degrees == [2, 3]
    assert verdict.hypotheses_checked[0].name == "2_sum_bound"
    assert betti_verdict(spec, 2, closed=True).conclusion is Conclusion.BETTI_RANGE_ZERO


def test_umbilic_verdict_examples():
    flat = UmbilicSpec(n=4, h_norm=1.0, ambient_mu=[0.0] * 10)
    assert umbilic_verdict_conclusion(flat) is Conclusion.BETTI_RANGE_ZERO

    boundary = UmbilicSpec(n=4, h_norm=1.0, ambient_mu=[-1.0] * 10)
    verdict = all_degrees_umbilic_verdict(boundary, closed=True)
    assert verdict.conclusion is Conclusion.PARALLEL
    assert verdict.marginal

    negative = UmbilicSpec(n=4, h_norm=0.0, ambient_mu=[-1.0, 0.0, 1.0])
    assert umbilic_verdict_conclusion(negative) is Conclusion.NOT_APPLICABLE


def test_umbilic_verdict_needs_eigenvalues():
    with pytest.raises(InvalidArgumentError):
        all_degrees_umbilic_verdict(UmbilicSpec(n=4, h_norm=1.0, ambient_mu=[0.0]), closed=True)
    with pytest.raises(ValidationError):
        UmbilicSpec(n=4, h_norm=1.0, ambient_mu=[1.0, 0.0])


def test_first_eigenvalue_weight():
    weight = first_eigenvalue_weight(1.0)
    assert weight.rho == 1.0
    hyp = weight.apply(AnalyticHypotheses())
    assert hyp.weighted_poincare and hyp.liminf_rho_positive
    with pytest.raises(HypothesisViolationError):
        first_eigenvalue_weight(0.0)


def test_submanifold_form_verdict():
    spec = HypersurfaceSpec(n=4, lambdas=[1.0, 1.0, 1.0, 1.0])
    hyp = AnalyticHypotheses(nonparabolic=True, complete_noncompact=True)
    verdict = submanifold_form_verdict(spec, 1, 2, 0.1, first_eigenvalue_weight(2.0), hyp)
    assert verdict.conclusion is Conclusion.VANISHES
    assert verdict.degrees == [1, 3]

    saddle = HypersurfaceSpec(n=4, lambdas=[2.0, -2.0, 0.0, 0.0])
    verdict = submanifold_form_verdict(saddle, 1, 2, 0.1, first_eigenvalue_weight(2.0), hyp)
    assert verdict.conclusion is Conclusion.NOT_APPLICABLE
    assert "curvature_average_bound" in verdict.failing()
