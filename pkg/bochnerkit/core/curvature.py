"""
Algebraic curvature tensors and the operators built from them.

A CurvatureTensor is a (0,4)-tensor with the pair symmetries and the first
Bianchi identity. Its curvature operator is the symmetric N x N matrix
R[(i,j),(k,l)] = Rm(e_i, e_j, e_k, e_l) in the pair order of the SpaceContext.
The hat map sends T to the N slices L_alpha T over the orthonormal bivector
basis, and the Weitzenboeck curvature term is built from the (1,3)-action
g(R(X,Y)Z, W) = Rm(X, Y, Z, W) extended to tensors as a derivation.
"""
import logging
import math
import string
from dataclasses import dataclass
from typing import Optional

import numpy as np

from bochnerkit.core.tensors import (
    RELATIVE_TOLERANCE,
    DenseTensor,
    SeedLike,
    SpaceContext,
    derivation_action,
    inner,
)
from bochnerkit.errors import (
    CurvatureInvariantError,
    DimensionMismatchError,
    InvalidArgumentError,
    InvalidOperatorError,
    UnsupportedDimensionError,
)

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-12


def _symmetry_scale(matrix: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(matrix), initial=0.0)))


@dataclass(frozen=True, eq=False)
class SymmetricBilinear:
    """A symmetric bilinear form on V, e.g. the metric g, Ric or its traceless part."""
    ctx: SpaceContext
    matrix: np.ndarray

    def __post_init__(self):
        array = np.array(self.matrix, dtype=float)
        if array.shape != (self.ctx.n, self.ctx.n):
            raise DimensionMismatchError(f"Matrix of shape {array.shape} does not match dimension {self.ctx.n}")
        if not np.all(np.isfinite(array)):
            raise InvalidArgumentError("Matrix entries must be finite")
        if np.max(np.abs(array - array.T)) > SYMMETRY_TOLERANCE * _symmetry_scale(array):
            raise InvalidArgumentError("Bilinear form is not symmetric within tolerance")
        array.setflags(write=False)
        object.__setattr__(self, 'matrix', array)

    @classmethod
    def metric(cls, ctx: SpaceContext) -> 'SymmetricBilinear':
        return cls(ctx, np.eye(ctx.n))

    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def traceless(self) -> 'SymmetricBilinear':
        return SymmetricBilinear(self.ctx, self.matrix - (self.trace() / self.ctx.n) * np.eye(self.ctx.n))

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def __add__(self, other: 'SymmetricBilinear') -> 'SymmetricBilinear':
        return SymmetricBilinear(self.ctx, self.matrix + other.matrix)

    def __mul__(self, scalar: float) -> 'SymmetricBilinear':
        return SymmetricBilinear(self.ctx, float(scalar) * self.matrix)

    __rmul__ = __mul__


def _symmetry_residuals(rm: np.ndarray):
    yield 'antisymmetry_first_pair', float(np.max(np.abs(rm + rm.transpose(1, 0, 2, 3))))
    yield 'antisymmetry_second_pair', float(np.max(np.abs(rm + rm.transpose(0, 1, 3, 2))))
    yield 'pair_symmetry', float(np.max(np.abs(rm - rm.transpose(2, 3, 0, 1))))
    yield 'first_bianchi', float(np.max(np.abs(_bianchi_sum(rm))))


def _bianchi_sum(rm: np.ndarray) -> np.ndarray:
    # Rm(x,y,z,w) + Rm(y,z,x,w) + Rm(z,x,y,w)
    return rm + np.einsum('yzxw->xyzw', rm) + np.einsum('zxyw->xyzw', rm)


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """An algebraic curvature (0,4)-tensor."""
    ctx: SpaceContext
    underlying: DenseTensor

    def __post_init__(self):
        if self.underlying.ctx != self.ctx:
            raise DimensionMismatchError("Curvature tensor and its components live on different spaces")
        if self.underlying.k != 4:
            raise DimensionMismatchError(f"Curvature tensors have arity 4, got {self.underlying.k}")
        tolerance = RELATIVE_TOLERANCE * max(self.underlying.norm(), 1.0)
        for invariant, residual in _symmetry_residuals(self.underlying.components):
            if residual > tolerance:
                raise CurvatureInvariantError(invariant, residual, tolerance)

    @classmethod
    def from_components(cls, ctx: SpaceContext, components) -> 'CurvatureTensor':
        return cls(ctx, DenseTensor(ctx, components))

    @classmethod
    def zero(cls, ctx: SpaceContext) -> 'CurvatureTensor':
        return cls.from_components(ctx, np.zeros((ctx.n,) * 4))

    @property
    def components(self) -> np.ndarray:
        return self.underlying.components

    def norm(self) -> float:
        return self.underlying.norm()

    def __add__(self, other: 'CurvatureTensor') -> 'CurvatureTensor':
        return CurvatureTensor(self.ctx, self.underlying + other.underlying)

    def __sub__(self, other: 'CurvatureTensor') -> 'CurvatureTensor':
        return CurvatureTensor(self.ctx, self.underlying - other.underlying)

    def __mul__(self, scalar: float) -> 'CurvatureTensor':
        return CurvatureTensor(self.ctx, self.underlying * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class CurvatureOperator:
    """The symmetric matrix of the curvature operator on bivectors, in pair order."""
    ctx: SpaceContext
    matrix: np.ndarray

    def __post_init__(self):
        array = np.array(self.matrix, dtype=float)
        if array.shape != (self.ctx.N, self.ctx.N):
            raise InvalidOperatorError(f"Operator of shape {array.shape} does not act on {self.ctx.N} bivectors")
        if not np.all(np.isfinite(array)):
            raise InvalidOperatorError("Operator entries must be finite")
        asymmetry = float(np.max(np.abs(array - array.T)))
        if asymmetry > SYMMETRY_TOLERANCE * _symmetry_scale(array):
            raise InvalidOperatorError(f"Operator is not symmetric: residual {asymmetry:.3e}")
        array.setflags(write=False)
        object.__setattr__(self, 'matrix', array)

    @classmethod
    def identity(cls, ctx: SpaceContext) -> 'CurvatureOperator':
        return cls(ctx, np.eye(ctx.N))

    @classmethod
    def diagonal(cls, ctx: SpaceContext, values) -> 'CurvatureOperator':
        return cls(ctx, np.diag(np.asarray(values, dtype=float)))


@dataclass(frozen=True, eq=False)
class HatTensor:
    """T-hat: for each orthonormal bivector L_alpha the (0,k)-tensor L_alpha T."""
    ctx: SpaceContext
    k: int
    slices: np.ndarray

    def __post_init__(self):
        array = np.array(self.slices, dtype=float)
        if array.shape != (self.ctx.N,) + (self.ctx.n,) * self.k:
            raise DimensionMismatchError(f"Slices of shape {array.shape} do not match (N, n^k)")
        array.setflags(write=False)
        object.__setattr__(self, 'slices', array)

    def slice(self, alpha: int) -> DenseTensor:
        return DenseTensor(self.ctx, self.slices[alpha])

    def flat(self) -> np.ndarray:
        return self.slices.reshape(self.ctx.N, -1)

    def norm_squared(self) -> float:
        return float(np.sum(self.slices * self.slices))

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())


@dataclass(frozen=True, eq=False)
class DecompositionParts:
    scal: float
    scal_part: CurvatureTensor
    ricci_part: CurvatureTensor
    weyl: CurvatureTensor

    def reconstruct(self) -> CurvatureTensor:
        return self.scal_part + self.ricci_part + self.weyl


def _same_space(a, b) -> None:
    if a.ctx != b.ctx:
        raise DimensionMismatchError(f"Operands live on spaces of dimension {a.ctx.n} and {b.ctx.n}")


def kulkarni_nomizu(S: SymmetricBilinear, T: SymmetricBilinear) -> CurvatureTensor:
    """(S.T)(x,y,z,w) = S(x,z)T(y,w) - S(x,w)T(y,z) + S(y,w)T(x,z) - S(y,z)T(x,w)."""
    _same_space(S, T)
    # summands grouped so that swapping S and T only commutes the additions
    direct = np.einsum('ik,jl->ijkl', S.matrix, T.matrix) + np.einsum('ik,jl->ijkl', T.matrix, S.matrix)
    crossed = np.einsum('il,jk->ijkl', S.matrix, T.matrix) + np.einsum('il,jk->ijkl', T.matrix, S.matrix)
    return CurvatureTensor.from_components(S.ctx, direct - crossed)


def constant_curvature(ctx: SpaceContext, kappa: float) -> CurvatureTensor:
    g = SymmetricBilinear.metric(ctx)
    return (0.5 * float(kappa)) * kulkarni_nomizu(g, g)


def ricci_contraction(Rm: CurvatureTensor) -> SymmetricBilinear:
    """Ric(x, y) = sum_j Rm(x, e_j, y, e_j)."""
    ric = np.einsum('ijkj->ik', Rm.components)
    return SymmetricBilinear(Rm.ctx, 0.5 * (ric + ric.T))


def scalar_curvature(Rm: CurvatureTensor) -> float:
    return ricci_contraction(Rm).trace()


def traceless_curvature(Rm: CurvatureTensor) -> CurvatureTensor:
    """Rm minus its scalar part Scal/(2n(n-1)) g.g."""
    n = Rm.ctx.n
    return Rm - constant_curvature(Rm.ctx, scalar_curvature(Rm) / (n * (n - 1)))


def decompose(Rm: CurvatureTensor) -> DecompositionParts:
    """Rm = Scal/(2(n-1)n) g.g + 1/(n-2) g.Ric0 + W."""
    ctx = Rm.ctx
    n = ctx.n
    if n < 3:
        raise UnsupportedDimensionError(f"The Weyl decomposition needs n >= 3, got n = {n}")
    g = SymmetricBilinear.metric(ctx)
    ric = ricci_contraction(Rm)
    scal = ric.trace()
    scal_part = constant_curvature(ctx, scal / (n * (n - 1)))
    ricci_part = (1.0 / (n - 2)) * kulkarni_nomizu(g, ric.traceless())
    weyl = Rm - scal_part - ricci_part
    if n == 3:
        tolerance = RELATIVE_TOLERANCE * max(Rm.norm(), 1.0)
        if weyl.norm() > tolerance:
            raise CurvatureInvariantError('weyl_vanishes_in_dimension_three', weyl.norm(), tolerance)
    logger.debug(f"Decomposed curvature tensor in dimension {n}: scal={scal:.6g}, |W|={weyl.norm():.3e}")
    return DecompositionParts(scal=scal, scal_part=scal_part, ricci_part=ricci_part, weyl=weyl)


def _pair_indices(ctx: SpaceContext):
    pairs = np.array(ctx.pair_order, dtype=int).reshape(-1, 2)
    return pairs[:, 0], pairs[:, 1]


def to_operator(Rm: CurvatureTensor) -> CurvatureOperator:
    I, J = _pair_indices(Rm.ctx)
    matrix = Rm.components[I[:, None], J[:, None], I[None, :], J[None, :]]
    return CurvatureOperator(Rm.ctx, matrix)


def _fill_from_matrix(ctx: SpaceContext, matrix: np.ndarray) -> np.ndarray:
    I, J = _pair_indices(ctx)
    rm = np.zeros((ctx.n,) * 4)
    rm[I[:, None], J[:, None], I[None, :], J[None, :]] = matrix
    rm[J[:, None], I[:, None], I[None, :], J[None, :]] = -matrix
    rm[I[:, None], J[:, None], J[None, :], I[None, :]] = -matrix
    rm[J[:, None], I[:, None], J[None, :], I[None, :]] = matrix
    return rm


def from_operator(R: CurvatureOperator) -> CurvatureTensor:
    """Inverse of to_operator; raises CurvatureInvariantError unless R satisfies Bianchi."""
    return CurvatureTensor.from_components(R.ctx, _fill_from_matrix(R.ctx, R.matrix))


def project_curvature(ctx: SpaceContext, components) -> CurvatureTensor:
    """Orthogonal projection of an arbitrary (0,4) array onto the algebraic curvature tensors."""
    raw = np.array(components, dtype=float).reshape((ctx.n,) * 4)
    # average over the 8 images under the pair symmetries
    images = (raw, -raw.transpose(1, 0, 2, 3), -raw.transpose(0, 1, 3, 2), raw.transpose(1, 0, 3, 2))
    paired = sum(images)
    paired = (paired + paired.transpose(2, 3, 0, 1)) / 8.0
    # remove the Lambda^4 part
    projected = paired - _bianchi_sum(paired) / 3.0
    I, J = _pair_indices(ctx)
    matrix = projected[I[:, None], J[:, None], I[None, :], J[None, :]]
    return CurvatureTensor.from_components(ctx, _fill_from_matrix(ctx, 0.5 * (matrix + matrix.T)))


def random_symmetric(ctx: SpaceContext, seed: SeedLike = None) -> SymmetricBilinear:
    rng = np.random.default_rng(seed)
    raw = rng.uniform(-1.0, 1.0, size=(ctx.n, ctx.n))
    return SymmetricBilinear(ctx, 0.5 * (raw + raw.T))


def random_operator(ctx: SpaceContext, seed: SeedLike = None) -> CurvatureOperator:
    """A random symmetric operator on bivectors; it need not satisfy Bianchi."""
    rng = np.random.default_rng(seed)
    raw = rng.uniform(-1.0, 1.0, size=(ctx.N, ctx.N))
    return CurvatureOperator(ctx, 0.5 * (raw + raw.T))


def random_curvature(ctx: SpaceContext, seed: SeedLike = None) -> CurvatureTensor:
    rng = np.random.default_rng(seed)
    raw = rng.uniform(-1.0, 1.0, size=(ctx.N, ctx.N))
    return project_curvature(ctx, _fill_from_matrix(ctx, 0.5 * (raw + raw.T)))


def hat(T: DenseTensor) -> HatTensor:
    """Slices L_alpha T over the orthonormal bivector basis {L_alpha}."""
    ctx = T.ctx
    if T.k == 0:
        return HatTensor(ctx, 0, np.zeros((ctx.N,)))
    return HatTensor(ctx, T.k, derivation_action(ctx.bivector_basis(), T.components))


def _curvature_endomorphisms(Rm: CurvatureTensor) -> np.ndarray:
    # E[i, j] is the matrix of R(e_i, e_j): E[i, j, a, b] = <R(e_i, e_j) e_b, e_a> = Rm(i, j, b, a)
    return np.swapaxes(Rm.components, 2, 3)


def weitzenboeck(Rm: CurvatureTensor, T: DenseTensor) -> DenseTensor:
    """Ric(T)(X_1, ..., X_k) = sum_i sum_j (R(X_i, e_j) T)(X_1, ..., e_j, ..., X_k)."""
    _same_space(Rm, T)
    if T.k < 1:
        raise InvalidArgumentError("The Weitzenboeck curvature term needs arity at least 1")
    n, k = T.ctx.n, T.k
    acted = derivation_action(_curvature_endomorphisms(Rm).reshape(n * n, n, n), T.components)
    acted = acted.reshape((n, n) + (n,) * k)
    letters = string.ascii_lowercase[2:2 + k]
    result = np.zeros((n,) * k)
    for slot in range(k):
        source = 'ab' + letters[:slot] + 'b' + letters[slot + 1:]
        target = letters[:slot] + 'a' + letters[slot + 1:]
        result += np.einsum(f'{source}->{target}', acted)
    return DenseTensor(T.ctx, result)


def curvature_bilinear(R: CurvatureOperator, S: DenseTensor, T: DenseTensor,
                       S_hat: Optional[HatTensor] = None, T_hat: Optional[HatTensor] = None) -> float:
    """sum_{alpha,beta} R[alpha, beta] <S-hat_alpha, T-hat_beta>."""
    if R.ctx != S.ctx or R.ctx != T.ctx:
        raise DimensionMismatchError("Operator and tensors live on different spaces")
    if S.k != T.k:
        raise DimensionMismatchError(f"Tensors have arity {S.k} and {T.k}")
    S_hat = S_hat if S_hat is not None else hat(S)
    T_hat = T_hat if T_hat is not None else hat(T)
    gram = S_hat.flat() @ T_hat.flat().T
    return float(np.sum(R.matrix * gram))


def curvature_quadratic(R: CurvatureOperator, T: DenseTensor) -> float:
    """g(R(T-hat), T-hat), the curvature term of the Bochner formula."""
    return curvature_bilinear(R, T, T)


def hat_norm_identity_residual(Rm: CurvatureTensor) -> float:
    """Relative residual of |Rm-hat|^2 = 4(n-1)|Rm0|^2 - 8|Ric0|^2."""
    n = Rm.ctx.n
    traceless = traceless_curvature(Rm)
    expected = 4 * (n - 1) * inner(traceless.underlying, traceless.underlying) \
        - 8 * ricci_contraction(Rm).traceless().norm() ** 2
    actual = hat(Rm.underlying).norm_squared()
    scale = max(4 * (n - 1) * traceless.norm() ** 2, 1.0)
    return abs(actual - expected) / scale
