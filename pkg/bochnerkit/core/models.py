import math
from enum import Enum
from typing import Any, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from bochnerkit.errors import InvalidArgumentError


class Conclusion(str, Enum):
    """Conclusion codes carried by a TheoremVerdict"""
    VANISHES = "vanishes"
    PARALLEL = "parallel"
    LOCALLY_CONFORMALLY_FLAT = "locally_conformally_flat"
    CONSTANT_SECTIONAL_CURVATURE = "constant_sectional_curvature"
    FLAT = "flat"
    BETTI_RANGE_ZERO = "betti_range_zero"
    INFINITE_LQ_NORM = "infinite_lq_norm"
    NOT_APPLICABLE = "not_applicable"


class KatoVariant(str, Enum):
    """Refined Kato inequalities, named the way the command line spells them"""
    GENERIC = "generic"
    FORM = "form"
    EINSTEIN_WEYL = "einstein-weyl"
    ZERO_SCALAR = "zero-scalar"


class WeylVariant(str, Enum):
    GENERIC = "generic"
    EINSTEIN = "einstein"


class IntegralVariant(str, Enum):
    EINSTEIN = "einstein"
    ZERO_SCALAR = "zero_scalar"


class AnalyticHypotheses(BaseModel):
    """Analytic conditions asserted by the user; never checked numerically"""
    model_config = ConfigDict(frozen=True)

    weighted_poincare: bool = False
    liminf_rho_positive: bool = False
    nonparabolic: bool = False
    complete_noncompact: bool = False
    connected: bool = False
    einstein: bool = False
    ricci_flat: bool = False
    zero_scalar: bool = False
    divergence_free_rm: bool = False
    divergence_free_weyl: bool = False

    @model_validator(mode='before')
    @classmethod
    def _ricci_flat_implies(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get('ricci_flat'):
            data = dict(data)
            data.setdefault('einstein', True)
            data.setdefault('zero_scalar', True)
        return data

    @model_validator(mode='after')
    def _check_ricci_flat(self) -> 'AnalyticHypotheses':
        if self.ricci_flat and not (self.einstein and self.zero_scalar):
            raise ValueError("ricci_flat implies einstein and zero_scalar")
        return self

    @classmethod
    def all_true(cls) -> 'AnalyticHypotheses':
        return cls(**{name: True for name in cls.model_fields})


class KatoConstant(BaseModel):
    """The constant a of a refined Kato inequality |grad T|^2 >= (1 + a)|grad |T||^2"""
    model_config = ConfigDict(frozen=True)

    a: float = Field(ge=0.0)
    provenance: str

    @classmethod
    def generic(cls) -> 'KatoConstant':
        return cls(a=0.0, provenance="generic")

    @classmethod
    def form(cls, ell: int, n: int) -> 'KatoConstant':
        if not 1 <= ell <= n - 1:
            raise InvalidArgumentError(f"Form degree must lie in [1, {n - 1}], got {ell}")
        return cls(a=1.0 / max(ell, n - ell), provenance=f"form({ell},{n})")

    @classmethod
    def einstein_weyl(cls, n: int) -> 'KatoConstant':
        if n < 3:
            raise InvalidArgumentError(f"The Einstein-Weyl constant needs n >= 3, got {n}")
        return cls(a=2.0 / (n - 1), provenance=f"einstein_weyl({n})")

    @classmethod
    def zero_scalar_rm(cls) -> 'KatoConstant':
        return cls(a=0.5, provenance="zero_scalar_rm")

    @classmethod
    def for_variant(cls, variant: KatoVariant, n: Optional[int] = None, ell: Optional[int] = None) -> 'KatoConstant':
        if variant is KatoVariant.GENERIC:
            return cls.generic()
        if variant is KatoVariant.ZERO_SCALAR:
            return cls.zero_scalar_rm()
        if n is None:
            raise InvalidArgumentError(f"Kato variant '{variant.value}' needs the dimension n")
        if variant is KatoVariant.EINSTEIN_WEYL:
            return cls.einstein_weyl(n)
        if ell is None:
            raise InvalidArgumentError("Kato variant 'form' needs the form degree ell")
        return cls.form(ell, n)


class HypersurfaceSpec(BaseModel):
    """Principal curvatures of a hypersurface in a space form of curvature K"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2, le=8)
    lambdas: List[float]
    K: float = 0.0

    @field_validator('lambdas', 'K')
    @classmethod
    def _finite(cls, value):
        values = value if isinstance(value, list) else [value]
        if not all(math.isfinite(v) for v in values):
            raise ValueError("values must be finite")
        return value

    @model_validator(mode='after')
    def _check_count(self) -> 'HypersurfaceSpec':
        if len(self.lambdas) != self.n:
            raise ValueError(f"expected {self.n} principal curvatures, got {len(self.lambdas)}")
        return self


class UmbilicSpec(BaseModel):
    """A totally umbilical submanifold: |H| and the sorted ambient operator spectrum"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2, le=8)
    h_norm: float = Field(ge=0.0)
    ambient_mu: List[float]

    @field_validator('ambient_mu')
    @classmethod
    def _sorted(cls, value: List[float]) -> List[float]:
        if any(b < a for a, b in zip(value, value[1:])):
            raise ValueError("ambient_mu must be sorted ascending")
        return value


class HypothesisCheck(BaseModel):
    name: str
    value: Any = None
    satisfied: bool
    note: Optional[str] = None


class TheoremVerdict(BaseModel):
    """Outcome of one decision procedure"""
    theorem_id: str
    hypotheses_checked: List[HypothesisCheck] = []
    conclusion: Conclusion = Conclusion.NOT_APPLICABLE
    marginal: bool = False
    degrees: List[int] = []
    notes: List[str] = []

    @model_validator(mode='after')
    def _conclusion_needs_hypotheses(self) -> 'TheoremVerdict':
        if self.conclusion is not Conclusion.NOT_APPLICABLE:
            failing = [check.name for check in self.hypotheses_checked if not check.satisfied]
            if failing:
                raise ValueError(f"conclusion {self.conclusion.value} with failing hypotheses {failing}")
        return self

    @property
    def applicable(self) -> bool:
        return self.conclusion is not Conclusion.NOT_APPLICABLE

    def failing(self) -> List[str]:
        return [check.name for check in self.hypotheses_checked if not check.satisfied]


class WeightDescriptor(BaseModel):
    """A constant weight rho = lambda_1(M) for a weighted Poincare inequality"""
    model_config = ConfigDict(frozen=True)

    rho: float = Field(gt=0.0)
    kind: str = "constant"

    def apply(self, hyp: AnalyticHypotheses) -> AnalyticHypotheses:
        return hyp.model_copy(update={'weighted_poincare': True, 'liminf_rho_positive': True})
