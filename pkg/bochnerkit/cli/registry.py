from typing import List
import importlib
import logging

from bochnerkit.errors import UsageError
from bochnerkit.suites.base import SuiteConfig, VerificationSuite

logger = logging.getLogger(__name__)

# Suite configuration
SUITE_CONFIGS = {
    'prop25a': {
        'class': 'bochnerkit.suites.identities.HatFormSuite',
        'min_dimension': 2,
    },
    'prop25b': {
        'class': 'bochnerkit.suites.identities.HatCurvatureSuite',
        'min_dimension': 2,
    },
    'prop23': {
        'class': 'bochnerkit.suites.identities.WeitzenboeckSuite',
        'min_dimension': 2,
    },
    'lemma25_bounds': {
        'class': 'bochnerkit.suites.bounds.ActionBoundSuite',
        'min_dimension': 2,
    },
    'lemma24': {
        'class': 'bochnerkit.suites.bounds.LowerBoundSuite',
        'min_dimension': 2,
    },
    'decomposition': {
        'class': 'bochnerkit.suites.identities.DecompositionSuite',
        'min_dimension': 3,
    },
    'hypersurface_oracle': {
        'class': 'bochnerkit.suites.hypersurface.HypersurfaceOracleSuite',
        'min_dimension': 3,
    },
}
ALL_SUITES = 'all'


def suite_names() -> List[str]:
    return list(SUITE_CONFIGS) + [ALL_SUITES]


def resolve(name: str) -> List[str]:
    """Expand a suite name given on the command line into registered suite names"""
    if name == ALL_SUITES:
        return list(SUITE_CONFIGS)
    if name not in SUITE_CONFIGS:
        logger.warning(f"Suite '{name}' not found in SUITE_CONFIGS")
        raise UsageError(f"Unknown suite: {name} (choose from {', '.join(suite_names())})")
    return [name]


def get_suite(name: str, config: SuiteConfig) -> VerificationSuite:
    """Factory function that imports and instantiates the suite registered under name"""
    if name not in SUITE_CONFIGS:
        raise UsageError(f"Unknown suite: {name}")
    module_path, class_name = SUITE_CONFIGS[name]['class'].rsplit('.', 1)
    logger.debug(f"Importing {class_name} from {module_path}")
    try:
        module = importlib.import_module(module_path)
        suite_class = getattr(module, class_name)
    except (ImportError, AttributeError) as e:
        logger.error(f"Failed to load suite {name}: {str(e)}")
        raise RuntimeError(f"Failed to load suite {name}: {str(e)}")
    return suite_class(config)


def applicable(name: str, n: int) -> bool:
    return n >= SUITE_CONFIGS[name]['min_dimension']
