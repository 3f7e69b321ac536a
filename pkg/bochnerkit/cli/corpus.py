"""The built-in example corpus: documents whose verdicts and residuals are known in advance."""
from typing import List, Tuple

from bochnerkit.core.curvature import constant_curvature, to_operator
from bochnerkit.core.spectral import spectrum
from bochnerkit.core.tensors import SpaceContext
from bochnerkit.documents.v1 import InputDocument

ALL_TRUE = {
    'weighted_poincare': True,
    'liminf_rho_positive': True,
    'nonparabolic': True,
    'complete_noncompact': True,
    'connected': True,
    'divergence_free_weyl': True,
}


def _document(name: str, n: int, constructor: dict, **analysis) -> Tuple[str, InputDocument]:
    document = InputDocument.model_validate({
        'dimension': n,
        'object': {'constructor': constructor},
        'analysis': analysis,
    })
    return name, document


def _flat_ambient_mu(ambient_dimension: int) -> List[float]:
    ctx = SpaceContext(ambient_dimension)
    return list(spectrum(to_operator(constant_curvature(ctx, 0.0))).eigenvalues)


def corpus() -> List[Tuple[str, InputDocument]]:
    entries = []
    for n in range(3, 7):
        entries.append(_document(f"constant_curvature_n{n}", n, {'constant_curvature': 1.0},
                                 m=[1, n - 1], hypotheses=ALL_TRUE))
    entries.append(_document("unit_sphere_hypersurface_n4", 4,
                             {'hypersurface': {'lambdas': [1.0, 1.0, 1.0, 1.0], 'K': 0.0}},
                             p=2, closed=True))
    entries.append(_document("boundary_hypersurface_n3", 3,
                             {'hypersurface': {'lambdas': [1.0, 1.0, -1.0], 'K': 1.0}},
                             p=1, m=[2], closed=True))
    # umbilical hypersurface of a flat ambient: the submanifold is the unit sphere
    entries.append(_document("umbilic_flat_ambient_n4", 4, {'constant_curvature': 1.0}, p=2, closed=True,
                             umbilic={'h_norm': 1.0, 'ambient_mu': _flat_ambient_mu(5)}))
    for n in range(3, 7):
        entries.append(_document(f"random_bianchi_n{n}", n, {'random_bianchi': {'seed': n}}, m=[1, n - 1]))
    entries.append(_document("ricci_flat_identity_operator_n4", 4,
                             {'operator_matrix': [[float(i == j) for j in range(6)] for i in range(6)]},
                             kappa=0.0, hypotheses=dict(ALL_TRUE, ricci_flat=True)))
    return entries
