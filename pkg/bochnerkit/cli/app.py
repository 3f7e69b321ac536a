import argparse
import logging
import logging.config
import os
import sys
import traceback
from typing import List, Optional

import yaml
from pydantic import ValidationError

from bochnerkit.cli import registry
from bochnerkit.cli.corpus import corpus
from bochnerkit.core.decisions import form_threshold, kappa_threshold, weyl_threshold
from bochnerkit.core.models import KatoConstant, KatoVariant, WeylVariant
from bochnerkit.documents import load_document
from bochnerkit.documents.v1 import InputDocument, analyze
from bochnerkit.errors import BochnerError, UsageError
from bochnerkit.suites.base import SuiteConfig

logger = logging.getLogger(__name__)

LOGGING_CONFIG = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "logging.yaml")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def configure_logging() -> None:
    """Load logging configuration from YAML, honouring BOCHNERKIT_LOGGING_CONFIG and BOCHNERKIT_LOG_LEVEL"""
    path = os.getenv('BOCHNERKIT_LOGGING_CONFIG', LOGGING_CONFIG)
    with open(path, "r") as f:
        config = yaml.safe_load(f)
        logging.config.dictConfig(config)
    level = os.getenv('BOCHNERKIT_LOG_LEVEL')
    if level:
        logging.getLogger('bochnerkit').setLevel(level.upper())


def _csv_floats(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got '{text}'")


def _write(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w") as f:
            f.write(text)
        logger.info(f"Wrote report to {output}")
    else:
        sys.stdout.write(text)


def _analysis_overrides(args: argparse.Namespace) -> dict:
    overrides = {'Q': args.q, 'c': args.c, 'kappa': args.kappa, 'kato': args.kato, 'p': args.p}
    return {key: value for key, value in overrides.items() if value is not None}


def cmd_analyze(args: argparse.Namespace) -> int:
    if args.input and args.lambdas:
        raise UsageError("--input and --lambdas are mutually exclusive")
    if args.input:
        document = load_document(args.input)
        data = document.model_dump()
    elif args.lambdas:
        data = {
            'dimension': len(args.lambdas),
            'object': {'constructor': {'hypersurface': {'lambdas': args.lambdas, 'K': args.ambient_k}}},
            'analysis': {'closed': args.closed},
        }
    else:
        raise UsageError("analyze needs --input PATH or --lambdas CSV")
    if args.seed is not None:
        data['seed'] = args.seed
    data['analysis'] = dict(data.get('analysis', {}), **_analysis_overrides(args))
    report = analyze(InputDocument.model_validate(data))
    _write(report.to_yaml(), args.output)
    if not report.passed:
        logger.error("One or more identity checks failed")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    names = registry.resolve(args.suite)
    if args.suite != registry.ALL_SUITES and not registry.applicable(args.suite, args.n):
        raise UsageError(f"Suite '{args.suite}' needs n >= {registry.SUITE_CONFIGS[args.suite]['min_dimension']}")
    try:
        config = SuiteConfig(n=args.n, trials=args.trials, seed=args.seed)
    except ValidationError as e:
        raise UsageError(f"Invalid suite parameters: {e.errors()[0]['msg']}")
    passed = True
    for name in names:
        if not registry.applicable(name, args.n):
            print(f"{name:<20} n={args.n} skipped (needs n >= {registry.SUITE_CONFIGS[name]['min_dimension']})")
            continue
        result = registry.get_suite(name, config).run()
        print(result.summary())
        passed = passed and result.passed
    return EXIT_OK if passed else EXIT_FAILURE


def _threshold_line(label: str, value: float, formula: str, statement: str) -> str:
    return f"{label:<28} {value:.6f}  {formula:<40} [{statement}]"


def cmd_thresholds(args: argparse.Namespace) -> int:
    try:
        rows = []
        kato = KatoConstant.for_variant(KatoVariant(args.kato), n=args.n, ell=args.ell)
        rows.append((f"kappa (a={kato.a:.6g})", kappa_threshold(args.q, args.c, kato), "4(Q-1+a)/(cQ^2)",
                     f"weighted harmonic tensor vanishing, Kato {kato.provenance}"))
        if args.ell is not None:
            if args.n is None:
                raise UsageError("--ell needs --n")
            rows.append((f"form (n={args.n}, ell={args.ell})", form_threshold(args.n, args.ell, args.q),
                         "4(Q-1+1/max(ell,n-ell))/(ell(n-ell)Q^2)", "weighted harmonic form vanishing"))
        if args.weyl is not None:
            if args.n is None:
                raise UsageError("--weyl needs --n")
            variant = WeylVariant(args.weyl)
            formula = "2(Q-1)/((n-1)Q^2)" if variant is WeylVariant.GENERIC else "2(Q-1+2/(n-1))/((n-1)Q^2)"
            statement = ("divergence-free Weyl tensor, locally conformally flat" if variant is WeylVariant.GENERIC
                         else "Einstein, constant sectional curvature")
            rows.append((f"weyl {variant.value} (n={args.n})", weyl_threshold(args.n, args.q, variant), formula,
                         statement))
    except UsageError:
        raise
    except BochnerError as e:
        raise UsageError(str(e))
    for label, value, formula, statement in rows:
        print(_threshold_line(label, value, formula, statement))
        if args.kappa is not None:
            relation = "below" if args.kappa < value else ("at" if args.kappa == value else "above")
            print(f"{'':<28} kappa={args.kappa:g} is {relation} the threshold")
    return EXIT_OK


def cmd_corpus(args: argparse.Namespace) -> int:
    reports = []
    passed = True
    for name, document in corpus():
        report = analyze(document)
        reports.append({'name': name, 'report': report.model_dump(mode='json', exclude_none=True)})
        verdicts = ", ".join(f"{v.theorem_id}={v.conclusion.value}{'*' if v.marginal else ''}"
                             for v in report.verdicts)
        status = "pass" if report.passed else "FAIL"
        worst = max((check.residual for check in report.identity_checks), default=0.0)
        print(f"{name:<34} identities {status} (max residual {worst:.2e})  {verdicts}")
        passed = passed and report.passed
    if args.output:
        _write(yaml.safe_dump_all(reports, sort_keys=False), args.output)
    return EXIT_OK if passed else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bochnerkit",
                                     description="Algebraic curvature tensors and Bochner technique decisions")
    subparsers = parser.add_subparsers(dest="command", required=True)

    analyze_parser = subparsers.add_parser("analyze", help="analyze a curvature tensor document")
    analyze_parser.add_argument("--input", metavar="PATH")
    analyze_parser.add_argument("--output", metavar="PATH")
    analyze_parser.add_argument("--lambdas", type=_csv_floats, metavar="CSV", help="principal curvatures")
    analyze_parser.add_argument("--ambient-k", type=float, default=0.0, dest="ambient_k")
    analyze_parser.add_argument("--closed", action=argparse.BooleanOptionalAction, default=True)
    analyze_parser.add_argument("--p", type=int)
    analyze_parser.add_argument("--q", type=float)
    analyze_parser.add_argument("--c", type=float)
    analyze_parser.add_argument("--kappa", type=float)
    analyze_parser.add_argument("--kato", choices=[v.value for v in KatoVariant])
    analyze_parser.add_argument("--seed", type=int)
    analyze_parser.set_defaults(handler=cmd_analyze)

    verify_parser = subparsers.add_parser("verify", help="run randomized verification suites")
    verify_parser.add_argument("--suite", required=True, metavar="NAME")
    verify_parser.add_argument("--n", type=int, required=True)
    verify_parser.add_argument("--trials", type=int, default=1000)
    verify_parser.add_argument("--seed", type=int, required=True)
    verify_parser.set_defaults(handler=cmd_verify)

    thresholds_parser = subparsers.add_parser("thresholds", help="print kappa thresholds")
    thresholds_parser.add_argument("--n", type=int)
    thresholds_parser.add_argument("--q", type=float, default=2.0)
    thresholds_parser.add_argument("--c", type=float, default=1.0)
    thresholds_parser.add_argument("--kato", choices=[v.value for v in KatoVariant], default=KatoVariant.GENERIC.value)
    thresholds_parser.add_argument("--ell", type=int)
    thresholds_parser.add_argument("--weyl", choices=[v.value for v in WeylVariant])
    thresholds_parser.add_argument("--kappa", type=float)
    thresholds_parser.set_defaults(handler=cmd_thresholds)

    corpus_parser = subparsers.add_parser("corpus", help="run the built-in example corpus")
    corpus_parser.add_argument("--output", metavar="PATH")
    corpus_parser.set_defaults(handler=cmd_corpus)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        print(f"bochnerkit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (BochnerError, ValidationError) as e:
        logger.error(f"{args.command} failed:\n{traceback.format_exc()}")
        print(f"bochnerkit: {e}", file=sys.stderr)
        return EXIT_FAILURE
