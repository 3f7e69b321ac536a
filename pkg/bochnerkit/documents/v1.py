"""
format_version 1 documents.

A (0,4) curvature tensor is given as a flat list of n^4 components in row-major
order over (i, j, k, l) with 1-based indices, i.e. Rm(e_1, e_1, e_1, e_1),
Rm(e_1, e_1, e_1, e_2), ... . Forms are flat lists of n^ell components in the
same order. Operator matrices use the lexicographic pair order (1,2), (1,3), ...
"""
import hashlib
import json
import logging
import math
from typing import List, Literal, Optional

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from bochnerkit.core import decisions
from bochnerkit.core.curvature import (
    CurvatureOperator,
    CurvatureTensor,
    SymmetricBilinear,
    constant_curvature,
    curvature_quadratic,
    decompose,
    from_operator,
    hat,
    hat_norm_identity_residual,
    kulkarni_nomizu,
    random_curvature,
    ricci_contraction,
    to_operator,
    weitzenboeck,
)
from bochnerkit.core.models import (
    AnalyticHypotheses,
    HypersurfaceSpec,
    IntegralVariant,
    KatoConstant,
    KatoVariant,
    TheoremVerdict,
    UmbilicSpec,
    WeylVariant,
)
from bochnerkit.core.spectral import (
    SpectralReport,
    classify_m,
    curvature_kappa,
    kappa_lower_bound,
    spectrum,
)
from bochnerkit.core.tensors import RELATIVE_TOLERANCE, AlternatingForm, DenseTensor, SpaceContext, inner

logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = RELATIVE_TOLERANCE
OPERATOR_TOLERANCE = 1e-12


class KulkarniNomizuSpec(BaseModel):
    model_config = ConfigDict(extra='forbid')

    S: List[List[float]]
    T: List[List[float]]


class HypersurfaceBlock(BaseModel):
    model_config = ConfigDict(extra='forbid')

    lambdas: List[float]
    K: float = 0.0


class RandomBianchiSpec(BaseModel):
    model_config = ConfigDict(extra='forbid')

    seed: int = 0


class ConstructorSpec(BaseModel):
    """Exactly one way of building the curvature tensor"""
    model_config = ConfigDict(extra='forbid')

    constant_curvature: Optional[float] = None
    kulkarni_nomizu: Optional[KulkarniNomizuSpec] = None
    hypersurface: Optional[HypersurfaceBlock] = None
    operator_matrix: Optional[List[List[float]]] = None
    random_bianchi: Optional[RandomBianchiSpec] = None

    @model_validator(mode='after')
    def _exactly_one(self) -> 'ConstructorSpec':
        present = [name for name in type(self).model_fields if getattr(self, name) is not None]
        if len(present) != 1:
            raise ValueError(f"exactly one constructor must be given, found {present or 'none'}")
        return self

    @property
    def kind(self) -> str:
        return next(name for name in type(self).model_fields if getattr(self, name) is not None)


class ObjectSpec(BaseModel):
    model_config = ConfigDict(extra='forbid')

    curvature_tensor: Optional[List[float]] = None
    constructor: Optional[ConstructorSpec] = None

    @model_validator(mode='after')
    def _exactly_one(self) -> 'ObjectSpec':
        if (self.curvature_tensor is None) == (self.constructor is None):
            raise ValueError("exactly one of curvature_tensor and constructor must be given")
        return self


class FormSpec(BaseModel):
    model_config = ConfigDict(extra='forbid')

    degree: int = Field(ge=1)
    components: List[float]


class UmbilicBlock(BaseModel):
    model_config = ConfigDict(extra='forbid')

    h_norm: float = Field(ge=0.0)
    ambient_mu: List[float]


class AnalysisSpec(BaseModel):
    """Requested operations and their parameters"""
    model_config = ConfigDict(extra='forbid')

    m: List[int] = []
    p: Optional[int] = None
    Q: float = 2.0
    c: float = 1.0
    kappa: Optional[float] = None
    kato: KatoVariant = KatoVariant.GENERIC
    ell: Optional[int] = None
    weyl_variant: WeylVariant = WeylVariant.GENERIC
    closed: bool = True
    lambda1: Optional[float] = None
    umbilic: Optional[UmbilicBlock] = None
    hypotheses: AnalyticHypotheses = AnalyticHypotheses()


class InputDocument(BaseModel):
    model_config = ConfigDict(extra='forbid')

    format_version: Literal[1] = 1
    dimension: int = Field(ge=2, le=8)
    seed: int = 0
    object: ObjectSpec
    form: Optional[FormSpec] = None
    analysis: AnalysisSpec = AnalysisSpec()

    @model_validator(mode='after')
    def _check_counts(self) -> 'InputDocument':
        n = self.dimension
        N = n * (n - 1) // 2
        if self.object.curvature_tensor is not None and len(self.object.curvature_tensor) != n ** 4:
            raise ValueError(f"curvature_tensor needs {n ** 4} components, got {len(self.object.curvature_tensor)}")
        constructor = self.object.constructor
        if constructor is not None:
            if constructor.kulkarni_nomizu is not None:
                for name in ('S', 'T'):
                    matrix = getattr(constructor.kulkarni_nomizu, name)
                    if len(matrix) != n or any(len(row) != n for row in matrix):
                        raise ValueError(f"kulkarni_nomizu.{name} must be {n}x{n}")
            if constructor.hypersurface is not None and len(constructor.hypersurface.lambdas) != n:
                raise ValueError(f"hypersurface needs {n} principal curvatures")
            if constructor.operator_matrix is not None:
                matrix = constructor.operator_matrix
                if len(matrix) != N or any(len(row) != N for row in matrix):
                    raise ValueError(f"operator_matrix must be {N}x{N}")
        if self.form is not None and len(self.form.components) != n ** self.form.degree:
            raise ValueError(f"form of degree {self.form.degree} needs {n ** self.form.degree} components")
        return self

    def input_hash(self) -> str:
        payload = json.dumps(self.model_dump(mode='json'), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()


class ClassificationEntry(BaseModel):
    m: int
    classification: str
    prefix_sum: float
    kappa_lower_bound: float
    marginal: bool


class DecompositionNorms(BaseModel):
    scal: float
    scal_part: float
    ricci_part: float
    weyl: float


class IdentityCheck(BaseModel):
    name: str
    residual: float
    tolerance: float
    passed: bool

    @model_validator(mode='after')
    def _pass_means_within(self) -> 'IdentityCheck':
        if self.passed and not self.residual <= self.tolerance:
            raise ValueError(f"{self.name} marked passed with residual {self.residual} > {self.tolerance}")
        return self


class ReportDocument(BaseModel):
    format_version: Literal[1] = 1
    input_hash: str
    seed: int
    dimension: int
    constructor: ObjectSpec
    spectrum: List[float]
    classifications: List[ClassificationEntry] = []
    decomposition: Optional[DecompositionNorms] = None
    form_quadratic: Optional[float] = None
    verdicts: List[TheoremVerdict] = []
    identity_checks: List[IdentityCheck] = []

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.identity_checks)

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.model_dump(mode='json', exclude_none=True), sort_keys=False)


def _identity(name: str, residual: float, tolerance: float = IDENTITY_TOLERANCE) -> IdentityCheck:
    residual = float(residual)
    return IdentityCheck(name=name, residual=residual, tolerance=tolerance, passed=residual <= tolerance)


def _relative(actual: float, expected: float) -> float:
    return abs(actual - expected) / max(1.0, abs(expected))


def build_curvature(ctx: SpaceContext, obj: ObjectSpec) -> CurvatureTensor:
    """The curvature tensor described by an object block; raises on invariant violations."""
    if obj.curvature_tensor is not None:
        return CurvatureTensor.from_components(ctx, np.reshape(obj.curvature_tensor, (ctx.n,) * 4))
    constructor = obj.constructor
    if constructor.constant_curvature is not None:
        return constant_curvature(ctx, constructor.constant_curvature)
    if constructor.kulkarni_nomizu is not None:
        S = SymmetricBilinear(ctx, constructor.kulkarni_nomizu.S)
        T = SymmetricBilinear(ctx, constructor.kulkarni_nomizu.T)
        return kulkarni_nomizu(S, T)
    if constructor.hypersurface is not None:
        spec = HypersurfaceSpec(n=ctx.n, lambdas=constructor.hypersurface.lambdas, K=constructor.hypersurface.K)
        return decisions.gauss_curvature_tensor(spec)
    if constructor.operator_matrix is not None:
        return from_operator(CurvatureOperator(ctx, constructor.operator_matrix))
    return random_curvature(ctx, constructor.random_bianchi.seed)


def _identity_checks(Rm: CurvatureTensor, R: CurvatureOperator) -> List[IdentityCheck]:
    ctx = Rm.ctx
    scale = max(1.0, Rm.norm())
    checks = [
        _identity("hat_norm_curvature", hat_norm_identity_residual(Rm)),
        _identity("operator_round_trip", (from_operator(R).underlying - Rm.underlying).norm() / scale),
    ]
    if ctx.n >= 3:
        parts = decompose(Rm)
        checks.append(_identity("decomposition_reconstruction",
                                (parts.reconstruct().underlying - Rm.underlying).norm() / scale))
        checks.append(_identity("weyl_traceless", ricci_contraction(parts.weyl).norm() / scale))
    return checks


def _form_checks(ctx: SpaceContext, form: FormSpec, Rm: CurvatureTensor, R: CurvatureOperator):
    tensor = DenseTensor(ctx, np.reshape(form.components, (ctx.n,) * form.degree))
    omega = AlternatingForm(ctx, form.degree, tensor)
    ell, n = omega.ell, ctx.n
    quadratic = curvature_quadratic(R, tensor)
    hat_norm = hat(tensor).norm_squared()
    weitzenboeck_side = inner(weitzenboeck(Rm, tensor), tensor)
    scale = max(1.0, float(np.max(np.abs(R.matrix), initial=0.0)) * max(hat_norm, 1.0))
    checks = [
        _identity("hat_norm_form", _relative(hat_norm, ell * (n - ell) * omega.norm() ** 2)),
        _identity("weitzenboeck_operator_form", abs(weitzenboeck_side - quadratic) / scale),
    ]
    return quadratic, checks


def _classifications(report: SpectralReport, ms: List[int]) -> List[ClassificationEntry]:
    entries = []
    for m in ms:
        classification = classify_m(report, m)
        entries.append(ClassificationEntry(
            m=m,
            classification=classification.value,
            prefix_sum=report.prefix_sums[m],
            kappa_lower_bound=kappa_lower_bound(report, m),
            marginal=classification.value == "nonnegative_not_positive",
        ))
    return entries


def _verdicts(doc: InputDocument, report: SpectralReport) -> List[TheoremVerdict]:
    n = doc.dimension
    analysis = doc.analysis
    hyp = analysis.hypotheses
    weight = None
    if analysis.lambda1 is not None:
        weight = decisions.first_eigenvalue_weight(analysis.lambda1)
        hyp = weight.apply(hyp)

    def kappa_for(m: int) -> float:
        return analysis.kappa if analysis.kappa is not None else curvature_kappa(report, max(1, m))

    ell = analysis.ell if analysis.ell is not None else (doc.form.degree if doc.form is not None else None)
    kato = KatoConstant.for_variant(analysis.kato, n=n, ell=ell)
    verdicts = [
        decisions.harmonic_tensor_verdict(report, n, analysis.Q, hyp),
        decisions.weighted_tensor_verdict(kappa_for(math.ceil(n / 2)), analysis.Q, analysis.c, kato, hyp),
    ]
    if n < 3:
        return verdicts
    p = analysis.p if analysis.p is not None else n // 2
    verdicts.append(decisions.form_vanishing_verdict(report, n, p, analysis.Q, hyp))
    verdicts.append(decisions.weighted_form_verdict(n, p, analysis.Q, kappa_for(n - p), hyp))
    lowest = (n - 1) // 2
    if n >= 4:
        verdicts.append(decisions.weyl_verdict(n, analysis.Q, kappa_for(lowest), analysis.weyl_variant, hyp))
    if hyp.einstein:
        verdicts.append(decisions.curvature_integral_verdict(
            n, analysis.Q, kappa_for(lowest), IntegralVariant.EINSTEIN, hyp))
    if hyp.zero_scalar:
        verdicts.append(decisions.curvature_integral_verdict(
            n, analysis.Q, kappa_for(lowest), IntegralVariant.ZERO_SCALAR, hyp))
    constructor = doc.object.constructor
    if constructor is not None and constructor.hypersurface is not None:
        spec = HypersurfaceSpec(n=n, lambdas=constructor.hypersurface.lambdas, K=constructor.hypersurface.K)
        verdicts.append(decisions.betti_verdict(spec, p, analysis.closed))
        verdicts.append(decisions.all_degrees_betti_verdict(spec, analysis.closed))
        if weight is not None:
            verdicts.append(decisions.submanifold_form_verdict(spec, p, analysis.Q, kappa_for(n - p), weight, hyp))
    if analysis.umbilic is not None:
        spec = UmbilicSpec(n=n, h_norm=analysis.umbilic.h_norm, ambient_mu=sorted(analysis.umbilic.ambient_mu))
        verdicts.append(decisions.umbilic_verdict(spec, p, analysis.closed))
        verdicts.append(decisions.all_degrees_umbilic_verdict(spec, analysis.closed))
    return verdicts


def analyze(doc: InputDocument) -> ReportDocument:
    """Run every analysis a document asks for and assemble the report."""
    ctx = SpaceContext(doc.dimension)
    Rm = build_curvature(ctx, doc.object)
    R = to_operator(Rm)
    report = spectrum(R)
    source = doc.object.constructor.kind if doc.object.constructor is not None else "curvature_tensor"
    logger.info(f"Analyzing dimension {ctx.n} {source}, spectrum {report.eigenvalues[0]:.6g}.."
                f"{report.eigenvalues[-1]:.6g}")

    checks = _identity_checks(Rm, R)
    constructor = doc.object.constructor
    if constructor is not None and constructor.hypersurface is not None:
        spec = HypersurfaceSpec(n=ctx.n, lambdas=constructor.hypersurface.lambdas, K=constructor.hypersurface.K)
        difference = np.max(np.abs(decisions.hypersurface_operator(spec).matrix - R.matrix), initial=0.0)
        checks.append(_identity("hypersurface_operator", difference, OPERATOR_TOLERANCE))

    decomposition = None
    if ctx.n >= 3:
        parts = decompose(Rm)
        decomposition = DecompositionNorms(scal=parts.scal, scal_part=parts.scal_part.norm(),
                                           ricci_part=parts.ricci_part.norm(), weyl=parts.weyl.norm())

    form_quadratic = None
    if doc.form is not None:
        form_quadratic, form_checks = _form_checks(ctx, doc.form, Rm, R)
        checks += form_checks

    result = ReportDocument(
        input_hash=doc.input_hash(),
        seed=doc.seed,
        dimension=ctx.n,
        constructor=doc.object,
        spectrum=list(report.eigenvalues),
        classifications=_classifications(report, doc.analysis.m),
        decomposition=decomposition,
        form_quadratic=form_quadratic,
        verdicts=_verdicts(doc, report),
        identity_checks=checks,
    )
    failed = [check.name for check in checks if not check.passed]
    if failed:
        logger.warning(f"Identity checks failed: {failed}")
    return result


def document_from_report(report: ReportDocument) -> InputDocument:
    """An input document that rebuilds the reported object."""
    return InputDocument(dimension=report.dimension, seed=report.seed, object=report.constructor)

