import numpy as np
import pytest

from bochnerkit.core.curvature import (
    CurvatureOperator,
    CurvatureTensor,
    SymmetricBilinear,
    constant_curvature,
    curvature_bilinear,
    curvature_quadratic,
    decompose,
    from_operator,
    hat,
    hat_norm_identity_residual,
    kulkarni_nomizu,
    project_curvature,
    random_curvature,
    random_operator,
    random_symmetric,
    ricci_contraction,
    to_operator,
    traceless_curvature,
    weitzenboeck,
)
from bochnerkit.core.decisions import gauss_curvature_tensor
from bochnerkit.core.models import HypersurfaceSpec
from bochnerkit.core.tensors import DenseTensor, SpaceContext, inner, random_form, random_tensor
from bochnerkit.errors import (
    CurvatureInvariantError,
    DimensionMismatchError,
    InvalidOperatorError,
    UnsupportedDimensionError,
)
from .utils import covector, metric_product, relative_error, rm_at, rng


def test_kulkarni_nomizu_metric_values():
    gg = metric_product(3)
    assert rm_at(gg, 1, 2, 1, 2) == 2.0
    assert rm_at(gg, 1, 2, 2, 1) == -2.0
    assert rm_at(gg, 1, 2, 1, 3) == 0.0


@pytest.mark.parametrize("n", [2, 3, 5])
def test_kulkarni_nomizu_is_symmetric(n):
    ctx = SpaceContext(n)
    generator = rng(n)
    S, T = random_symmetric(ctx, generator), random_symmetric(ctx, generator)
    np.testing.assert_array_equal(kulkarni_nomizu(S, T).components, kulkarni_nomizu(T, S).components)


def test_kulkarni_nomizu_mismatch():
    with pytest.raises(DimensionMismatchError):
        kulkarni_nomizu(SymmetricBilinear.metric(SpaceContext(3)), SymmetricBilinear.metric(SpaceContext(4)))


def test_ricci_contraction_examples():
    ctx = SpaceContext(3)
    np.testing.assert_allclose(ricci_contraction(constant_curvature(ctx, 1.0)).matrix, 2 * np.eye(3))
    np.testing.assert_array_equal(ricci_contraction(CurvatureTensor.zero(ctx)).matrix, np.zeros((3, 3)))
    sphere = gauss_curvature_tensor(HypersurfaceSpec(n=3, lambdas=[1.0, 1.0, 1.0], K=0.0))
    np.testing.assert_allclose(ricci_contraction(sphere).matrix, 2 * np.eye(3))


@pytest.mark.parametrize("n, kappa", [(3, 1.0), (4, -2.0), (6, 0.5)])
def test_decompose_constant_curvature(n, kappa):
    parts = decompose(constant_curvature(SpaceContext(n), kappa))
    assert parts.scal == pytest.approx(n * (n - 1) * kappa)
    assert parts.weyl.norm() < 1e-12
    assert parts.ricci_part.norm() < 1e-12


def test_decompose_zero():
    parts = decompose(CurvatureTensor.zero(SpaceContext(4)))
    assert parts.scal == 0.0
    for part in (parts.scal_part, parts.ricci_part, parts.weyl):
        assert part.norm() == 0.0


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_decompose_random(n):
    Rm = random_curvature(SpaceContext(n), rng(n))
    parts = decompose(Rm)
    scale = Rm.norm()
    assert (parts.reconstruct() - Rm).norm() <= 1e-9 * scale
    pieces = (parts.scal_part.underlying, parts.ricci_part.underlying, parts.weyl.underlying)
    for a in range(3):
        for b in range(a + 1, 3):
            assert abs(inner(pieces[a], pieces[b])) <= 1e-9 * scale ** 2
    assert ricci_contraction(parts.weyl).norm() <= 1e-9 * scale


def test_decompose_needs_three_dimensions():
    with pytest.raises(UnsupportedDimensionError):
        decompose(constant_curvature(SpaceContext(2), 1.0))


def test_curvature_tensor_rejects_asymmetry():
    components = np.zeros((3,) * 4)
    components[0, 1, 0, 1] = 1.0
    with pytest.raises(CurvatureInvariantError) as info:
        CurvatureTensor.from_components(SpaceContext(3), components)
    assert info.value.invariant == 'antisymmetry_first_pair'


def test_to_operator_examples():
    ctx = SpaceContext(3)
    np.testing.assert_allclose(to_operator(constant_curvature(ctx, 1.0)).matrix, np.eye(3))
    np.testing.assert_array_equal(to_operator(CurvatureTensor.zero(ctx)).matrix, np.zeros((3, 3)))
    Rm = gauss_curvature_tensor(HypersurfaceSpec(n=3, lambdas=[1.0, 2.0, 3.0], K=0.0))
    np.testing.assert_allclose(to_operator(Rm).matrix, np.diag([2.0, 3.0, 6.0]))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_operator_round_trip_is_exact(n):
    Rm = random_curvature(SpaceContext(n), rng(n + 100))
    np.testing.assert_array_equal(from_operator(to_operator(Rm)).components, Rm.components)


def test_from_operator_validates_bianchi():
    with pytest.raises(CurvatureInvariantError):
        from_operator(random_operator(SpaceContext(4), rng(5)))


def test_operator_rejects_asymmetry():
    with pytest.raises(InvalidOperatorError):
        CurvatureOperator(SpaceContext(3), [[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    with pytest.raises(InvalidOperatorError):
        CurvatureOperator(SpaceContext(3), np.eye(4))


def test_project_curvature_fixes_curvature_tensors():
    Rm = random_curvature(SpaceContext(5), rng(8))
    projected = project_curvature(Rm.ctx, Rm.components)
    assert (projected - Rm).norm() <= 1e-12 * Rm.norm()


@pytest.mark.parametrize("n", [3, 5, 8])
def test_difference_of_agreeing_tensors_is_a_curvature_tensor(n):
    Rm = random_curvature(SpaceContext(n), rng(n + 40))
    rebuilt = project_curvature(Rm.ctx, Rm.components)
    difference = rebuilt - Rm
    assert isinstance(difference, CurvatureTensor)
    assert difference.norm() <= 1e-12 * Rm.norm()
    assert (difference + Rm - rebuilt).norm() <= 1e-12 * Rm.norm()


def test_project_curvature_cleans_noise():
    ctx = SpaceContext(4)
    noisy = rng(9).uniform(-1.0, 1.0, size=(4,) * 4)
    # the constructor would reject the raw array; the projection passes every invariant
    projected = project_curvature(ctx, noisy)
    assert isinstance(projected, CurvatureTensor)


def test_hat_examples():
    ctx = SpaceContext(3)
    assert hat(covector(3, 1)).norm_squared() == pytest.approx(2.0)
    assert hat(DenseTensor.zeros(ctx, 2)).norm() == 0.0
    scalar_hat = hat(DenseTensor(ctx, 1.0))
    assert scalar_hat.k == 0 and scalar_hat.norm() == 0.0
    for kappa in (-2.0, 1.0, 3.0):
        assert hat(constant_curvature(SpaceContext(4), kappa).underlying).norm() < 1e-12


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_hat_norm_of_forms(n):
    ctx = SpaceContext(n)
    generator = rng(n)
    for ell in range(1, min(n - 1, 4) + 1):
        for _ in range(5):
            omega = random_form(ctx, ell, generator)
            expected = ell * (n - ell) * omega.norm() ** 2
            assert relative_error(hat(omega.underlying).norm_squared(), expected) < 1e-9


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_hat_norm_of_curvature(n):
    generator = rng(n)
    for _ in range(5):
        Rm = random_curvature(SpaceContext(n), generator)
        assert hat_norm_identity_residual(Rm) < 1e-9
        np.testing.assert_allclose(hat(Rm.underlying).slices, hat(traceless_curvature(Rm).underlying).slices,
                                   atol=1e-12 * max(1.0, Rm.norm()))


def test_hat_slices_match_norm():
    T = random_tensor(SpaceContext(4), 2, rng(4))
    T_hat = hat(T)
    assert T_hat.norm_squared() == pytest.approx(sum(T_hat.slice(a).norm() ** 2 for a in range(6)))


def test_weitzenboeck_constant_curvature_on_one_form():
    Rm = constant_curvature(SpaceContext(3), 1.0)
    np.testing.assert_allclose(weitzenboeck(Rm, covector(3, 1)).components, [2.0, 0.0, 0.0])
    assert weitzenboeck(Rm, DenseTensor.zeros(Rm.ctx, 2)).norm() == 0.0


@pytest.mark.parametrize("n, k", [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (5, 2)])
def test_weitzenboeck_matches_operator_form(n, k):
    ctx = SpaceContext(n)
    generator = rng(10 * n + k)
    Rm = random_curvature(ctx, generator)
    R = to_operator(Rm)
    S, T = random_tensor(ctx, k, generator), random_tensor(ctx, k, generator)
    scale = max(1.0, np.max(np.abs(R.matrix)) * hat(S).norm() * hat(T).norm())
    lhs = inner(weitzenboeck(Rm, S), T)
    assert abs(lhs - curvature_bilinear(R, S, T)) <= 1e-9 * scale
    assert abs(lhs - inner(S, weitzenboeck(Rm, T))) <= 1e-9 * scale
    quadratic_scale = max(1.0, np.max(np.abs(R.matrix)) * hat(T).norm_squared())
    assert abs(inner(weitzenboeck(Rm, T), T) - curvature_quadratic(R, T)) <= 1e-9 * quadratic_scale


def test_curvature_quadratic_examples():
    ctx = SpaceContext(3)
    assert curvature_quadratic(CurvatureOperator.identity(ctx), covector(3, 1)) == pytest.approx(2.0)
    assert curvature_quadratic(random_operator(ctx, rng(1)), DenseTensor.zeros(ctx, 2)) == 0.0


def test_weitzenboeck_mismatch():
    with pytest.raises(DimensionMismatchError):
        weitzenboeck(constant_curvature(SpaceContext(3), 1.0), covector(4, 1))
