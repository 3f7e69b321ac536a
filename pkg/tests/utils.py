import numpy as np

from bochnerkit.core.curvature import SymmetricBilinear, kulkarni_nomizu
from bochnerkit.core.tensors import DenseTensor, SpaceContext


def covector(n: int, index: int) -> DenseTensor:
    """e^index for a 1-based index"""
    return DenseTensor.covector(SpaceContext(n), index - 1)


def metric_product(n: int):
    """g.g, the Kulkarni-Nomizu square of the metric"""
    g = SymmetricBilinear.metric(SpaceContext(n))
    return kulkarni_nomizu(g, g)


def rm_at(Rm, i: int, j: int, k: int, l: int) -> float:
    """Rm(e_i, e_j, e_k, e_l) for 1-based indices"""
    return float(Rm.components[i - 1, j - 1, k - 1, l - 1])


def relative_error(actual: float, expected: float) -> float:
    return abs(actual - expected) / max(1.0, abs(expected))


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
