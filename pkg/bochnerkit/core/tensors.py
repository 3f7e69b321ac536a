"""
Dense multilinear algebra on an n-dimensional Euclidean space.

Tensors are stored as full numpy arrays of shape (n,)*k in an orthonormal
basis, so the metric is the identity and the tensor inner product is the
plain sum of componentwise products. Skew endomorphisms act on tensors as
derivations, which is the infinitesimal version of the orthogonal action.

Conventions:
  - matrix[a, b] = <L e_b, e_a> for an endomorphism L.
  - The bivector e_i ^ e_j corresponds to L with L e_i = e_j, L e_j = -e_i.
  - {e_i ^ e_j}_{i<j} is orthonormal, so |L|^2 = sum_{i<j} <L e_i, e_j>^2,
    half the Frobenius norm of the matrix.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Tuple, Union

import numpy as np

from bochnerkit.errors import (
    DimensionMismatchError,
    InvalidArgumentError,
    InvalidPairError,
    UnsupportedDimensionError,
)

logger = logging.getLogger(__name__)

MIN_DIMENSION = 2
MAX_DIMENSION = 8
MAX_ARITY = 4
RELATIVE_TOLERANCE = 1e-9
SKEW_TOLERANCE = 1e-12

SeedLike = Union[int, np.random.Generator, None]


@lru_cache(maxsize=None)
def _pairs(n: int) -> Tuple[Tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


@lru_cache(maxsize=None)
def _bivector_basis(n: int) -> np.ndarray:
    pairs = _pairs(n)
    basis = np.zeros((len(pairs), n, n))
    for alpha, (i, j) in enumerate(pairs):
        basis[alpha, j, i] = 1.0
        basis[alpha, i, j] = -1.0
    basis.setflags(write=False)
    return basis


def _readonly(values) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class SpaceContext:
    """The Euclidean space V of dimension n together with its bivector basis ordering."""
    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not MIN_DIMENSION <= self.n <= MAX_DIMENSION:
            raise UnsupportedDimensionError(
                f"Dimension must be an integer in [{MIN_DIMENSION}, {MAX_DIMENSION}], got {self.n}")
        object.__setattr__(self, 'n', int(self.n))

    @property
    def N(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def pair_order(self) -> Tuple[Tuple[int, int], ...]:
        """Lexicographic (i, j), i < j, zero-based."""
        return _pairs(self.n)

    @property
    def pair_index(self) -> Dict[Tuple[int, int], int]:
        return {pair: alpha for alpha, pair in enumerate(self.pair_order)}

    def bivector_basis(self) -> np.ndarray:
        """Stacked (N, n, n) matrices of the orthonormal basis e_i ^ e_j in pair order."""
        return _bivector_basis(self.n)


@dataclass(frozen=True, eq=False)
class DenseTensor:
    """A (0,k)-tensor with dense component storage."""
    ctx: SpaceContext
    components: np.ndarray

    def __post_init__(self):
        array = _readonly(self.components)
        if array.ndim > MAX_ARITY:
            raise UnsupportedDimensionError(f"Arity {array.ndim} exceeds the supported maximum {MAX_ARITY}")
        if array.shape != (self.ctx.n,) * array.ndim:
            raise DimensionMismatchError(
                f"Component array of shape {array.shape} does not match dimension {self.ctx.n}")
        if not np.all(np.isfinite(array)):
            raise InvalidArgumentError("Tensor components must be finite")
        object.__setattr__(self, 'components', array)

    @property
    def k(self) -> int:
        return self.components.ndim

    @classmethod
    def zeros(cls, ctx: SpaceContext, k: int) -> 'DenseTensor':
        return cls(ctx, np.zeros((ctx.n,) * k))

    @classmethod
    def covector(cls, ctx: SpaceContext, index: int) -> 'DenseTensor':
        """The dual basis covector e^index (zero-based index)."""
        values = np.zeros(ctx.n)
        values[index] = 1.0
        return cls(ctx, values)

    def norm(self) -> float:
        return math.sqrt(inner(self, self))

    def __add__(self, other: 'DenseTensor') -> 'DenseTensor':
        _check_same(self, other)
        return DenseTensor(self.ctx, self.components + other.components)

    def __sub__(self, other: 'DenseTensor') -> 'DenseTensor':
        _check_same(self, other)
        return DenseTensor(self.ctx, self.components - other.components)

    def __neg__(self) -> 'DenseTensor':
        return DenseTensor(self.ctx, -self.components)

    def __mul__(self, scalar: float) -> 'DenseTensor':
        return DenseTensor(self.ctx, float(scalar) * self.components)

    __rmul__ = __mul__

    def allclose(self, other: 'DenseTensor', rtol: float = RELATIVE_TOLERANCE) -> bool:
        _check_same(self, other)
        scale = max(self.norm(), other.norm(), 1.0)
        return float(np.max(np.abs(self.components - other.components), initial=0.0)) <= rtol * scale


@dataclass(frozen=True, eq=False)
class AlternatingForm:
    """An ell-form: a fully antisymmetric DenseTensor of arity ell."""
    ctx: SpaceContext
    ell: int
    underlying: DenseTensor

    def __post_init__(self):
        if self.underlying.ctx != self.ctx:
            raise DimensionMismatchError("Form and its underlying tensor live on different spaces")
        if self.underlying.k != self.ell:
            raise DimensionMismatchError(f"Underlying tensor has arity {self.underlying.k}, expected {self.ell}")
        top = min(self.ctx.n - 1, MAX_ARITY)
        if not 1 <= self.ell <= top:
            raise InvalidArgumentError(f"Form degree must lie in [1, {top}], got {self.ell}")
        residual = _alternation_residual(self.underlying.components)
        tolerance = RELATIVE_TOLERANCE * max(self.underlying.norm(), 1.0)
        if residual > tolerance:
            raise InvalidArgumentError(
                f"Tensor is not alternating: transposition residual {residual:.3e} exceeds {tolerance:.3e}")

    @property
    def components(self) -> np.ndarray:
        return self.underlying.components

    def norm(self) -> float:
        return self.underlying.norm()


@dataclass(frozen=True, eq=False)
class SkewEndomorphism:
    """An element L of so(V), identified with a bivector."""
    ctx: SpaceContext
    matrix: np.ndarray

    def __post_init__(self):
        array = _readonly(self.matrix)
        if array.shape != (self.ctx.n, self.ctx.n):
            raise DimensionMismatchError(f"Matrix of shape {array.shape} does not match dimension {self.ctx.n}")
        if not np.all(np.isfinite(array)):
            raise InvalidArgumentError("Matrix entries must be finite")
        if np.max(np.abs(array + array.T)) > SKEW_TOLERANCE:
            raise InvalidArgumentError("Matrix is not skew-symmetric within tolerance")
        object.__setattr__(self, 'matrix', array)

    def norm(self) -> float:
        return math.sqrt(0.5 * float(np.sum(self.matrix * self.matrix)))

    def inner(self, other: 'SkewEndomorphism') -> float:
        if other.ctx != self.ctx:
            raise DimensionMismatchError("Skew endomorphisms live on different spaces")
        return 0.5 * float(np.sum(self.matrix * other.matrix))

    def apply(self, vector) -> np.ndarray:
        return self.matrix @ np.asarray(vector, dtype=float)

    def coefficients(self) -> np.ndarray:
        """Coordinates in the orthonormal bivector basis, in pair order."""
        return np.array([self.matrix[j, i] for i, j in self.ctx.pair_order])


def _check_same(a: DenseTensor, b: DenseTensor) -> None:
    if a.ctx != b.ctx:
        raise DimensionMismatchError(f"Tensors live on spaces of dimension {a.ctx.n} and {b.ctx.n}")
    if a.k != b.k:
        raise DimensionMismatchError(f"Tensors have arity {a.k} and {b.k}")


def _alternation_residual(components: np.ndarray) -> float:
    residual = 0.0
    for a, b in itertools.combinations(range(components.ndim), 2):
        residual = max(residual, float(np.max(np.abs(components + np.swapaxes(components, a, b)))))
    return residual


def _permutation_sign(permutation: Tuple[int, ...]) -> int:
    inversions = sum(1 for a, b in itertools.combinations(permutation, 2) if a > b)
    return -1 if inversions % 2 else 1


def derivation_action(matrices: np.ndarray, components: np.ndarray) -> np.ndarray:
    """Apply a stack of endomorphisms to one tensor as derivations.

    matrices has shape (B, n, n); the result has shape (B,) + components.shape with
    result[b] = -sum_m T(..., L_b X_m, ...).
    """
    result = np.zeros((matrices.shape[0],) + components.shape)
    for axis in range(components.ndim):
        moved = np.tensordot(matrices, components, axes=([1], [axis]))
        result -= np.moveaxis(moved, 1, 1 + axis)
    return result


def inner(a: DenseTensor, b: DenseTensor) -> float:
    """Sum over all n^k multi-indices of componentwise products."""
    _check_same(a, b)
    return float(np.sum(a.components * b.components))


def outer(a: DenseTensor, b: DenseTensor) -> DenseTensor:
    if a.ctx != b.ctx:
        raise DimensionMismatchError("Tensors live on different spaces")
    return DenseTensor(a.ctx, np.multiply.outer(a.components, b.components))


def wedge_to_skew(i: int, j: int, ctx: SpaceContext) -> SkewEndomorphism:
    """The skew endomorphism of e_i ^ e_j for 1-based indices i < j."""
    if not (1 <= i < j <= ctx.n):
        raise InvalidPairError(f"Expected 1 <= i < j <= {ctx.n}, got ({i}, {j})")
    matrix = np.zeros((ctx.n, ctx.n))
    matrix[j - 1, i - 1] = 1.0
    matrix[i - 1, j - 1] = -1.0
    return SkewEndomorphism(ctx, matrix)


def lt_action(L: SkewEndomorphism, T: DenseTensor) -> DenseTensor:
    """(LT)(X_1, ..., X_k) = -sum_i T(X_1, ..., L X_i, ..., X_k)."""
    if L.ctx != T.ctx:
        raise DimensionMismatchError(f"Endomorphism on dimension {L.ctx.n}, tensor on dimension {T.ctx.n}")
    if T.k == 0:
        return DenseTensor(T.ctx, np.zeros(()))
    return DenseTensor(T.ctx, derivation_action(L.matrix[np.newaxis], T.components)[0])


def antisymmetrize(T: DenseTensor) -> AlternatingForm:
    """(1/k!) sum_sigma sign(sigma) T o sigma."""
    if T.k < 1:
        raise InvalidArgumentError("Antisymmetrization needs arity at least 1")
    total = np.zeros_like(T.components)
    for permutation in itertools.permutations(range(T.k)):
        total += _permutation_sign(permutation) * np.transpose(T.components, permutation)
    total /= math.factorial(T.k)
    return AlternatingForm(T.ctx, T.k, DenseTensor(T.ctx, total))


def random_tensor(ctx: SpaceContext, k: int, seed: SeedLike = None) -> DenseTensor:
    rng = np.random.default_rng(seed)
    return DenseTensor(ctx, rng.uniform(-1.0, 1.0, size=(ctx.n,) * k))


def random_form(ctx: SpaceContext, ell: int, seed: SeedLike = None) -> AlternatingForm:
    if not 1 <= ell <= ctx.n - 1:
        raise InvalidArgumentError(f"Form degree must lie in [1, {ctx.n - 1}], got {ell}")
    return antisymmetrize(random_tensor(ctx, ell, seed))


def random_skew(ctx: SpaceContext, seed: SeedLike = None) -> SkewEndomorphism:
    rng = np.random.default_rng(seed)
    raw = rng.uniform(-1.0, 1.0, size=(ctx.n, ctx.n))
    upper = np.triu(raw, 1)
    return SkewEndomorphism(ctx, upper - upper.T)


def skew_from_coefficients(ctx: SpaceContext, coefficients: Iterable[float]) -> SkewEndomorphism:
    """Inverse of SkewEndomorphism.coefficients."""
    values = np.asarray(list(coefficients), dtype=float)
    if values.shape != (ctx.N,):
        raise DimensionMismatchError(f"Expected {ctx.N} bivector coefficients, got {values.shape}")
    return SkewEndomorphism(ctx, np.tensordot(values, ctx.bivector_basis(), axes=1))
