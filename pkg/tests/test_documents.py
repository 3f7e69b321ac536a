import os

import numpy as np
import pytest

from bochnerkit.core.models import Conclusion
from bochnerkit.documents import get_schema, load_document, parse_document
from bochnerkit.documents.v1 import InputDocument, analyze, document_from_report
from bochnerkit.errors import CurvatureInvariantError, DocumentParseError

SAMPLES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "bochnerkit", "samples")

CONSTANT_CURVATURE = """\
format_version: 1
dimension: 4
object:
  constructor:
    constant_curvature: 1.0
analysis:
  m: [2]
"""

HYPERSURFACE = """\
format_version: 1
dimension: 3
object:
  constructor:
    hypersurface:
      lambdas: [1.0, 2.0, 3.0]
      K: 0.0
analysis:
  p: 1
"""


def verdict(report, theorem_id):
    return next(v for v in report.verdicts if v.theorem_id == theorem_id)


def test_analyze_constant_curvature():
    report = analyze(parse_document(CONSTANT_CURVATURE))
    np.testing.assert_allclose(report.spectrum, [1.0] * 6)
    assert [entry.classification for entry in report.classifications] == ["positive"]
    assert report.classifications[0].kappa_lower_bound == pytest.approx(1.0)
    assert report.decomposition.weyl < 1e-12
    assert report.decomposition.scal == pytest.approx(12.0)
    assert report.passed


def test_analyze_hypersurface():
    report = analyze(parse_document(HYPERSURFACE))
    np.testing.assert_allclose(report.spectrum, [2.0, 3.0, 6.0])
    betti = verdict(report, "betti_hypersurface")
    assert betti.conclusion is Conclusion.BETTI_RANGE_ZERO
    assert betti.degrees == [1, 2]
    assert "hypersurface_operator" in [check.name for check in report.identity_checks]
    assert report.passed


def test_analyze_rejects_asymmetric_tensor():
    components = [0.0] * 81
    components[1 * 27 + 0 * 9 + 1 * 3 + 0] = 1.0
    doc = InputDocument.model_validate({'dimension': 3, 'object': {'curvature_tensor': components}})
    with pytest.raises(CurvatureInvariantError):
        analyze(doc)


def test_analyze_rejects_operator_without_bianchi():
    matrix = np.eye(6)
    matrix[0, 5] = matrix[5, 0] = 1.0
    doc = InputDocument.model_validate({'dimension': 4, 'object': {'constructor': {'operator_matrix': matrix.tolist()}}})
    with pytest.raises(CurvatureInvariantError) as info:
        analyze(doc)
    assert info.value.invariant == 'first_bianchi'


def test_malformed_yaml_reports_line():
    with pytest.raises(DocumentParseError) as info:
        parse_document("dimension: 3\nobject: [1, 2\n")
    assert "line" in info.value.diagnostics[0]


def test_validation_error_reports_field_and_line():
    text = CONSTANT_CURVATURE.replace("dimension: 4", "dimension: 12")
    with pytest.raises(DocumentParseError) as info:
        parse_document(text)
    assert info.value.diagnostics[0].startswith("field 'dimension' (line 2)")


def test_two_constructors_are_rejected():
    text = CONSTANT_CURVATURE.replace("    constant_curvature: 1.0\n",
                                      "    constant_curvature: 1.0\n    random_bianchi:\n      seed: 1\n")
    with pytest.raises(DocumentParseError) as info:
        parse_document(text)
    assert "exactly one constructor" in str(info.value)
    assert "object.constructor" in info.value.diagnostics[0]


def test_component_counts_are_checked():
    with pytest.raises(DocumentParseError):
        parse_document("dimension: 3\nobject:\n  curvature_tensor: [0.0, 1.0]\n")
    with pytest.raises(DocumentParseError):
        parse_document(HYPERSURFACE.replace("[1.0, 2.0, 3.0]", "[1.0, 2.0]"))


def test_unknown_fields_and_versions():
    with pytest.raises(DocumentParseError):
        parse_document(CONSTANT_CURVATURE + "colour: blue\n")
    with pytest.raises(DocumentParseError):
        parse_document(CONSTANT_CURVATURE.replace("format_version: 1", "format_version: 2"))
    with pytest.raises(DocumentParseError):
        parse_document("- just\n- a list\n")
    with pytest.raises(DocumentParseError):
        get_schema(0)


def test_reports_are_deterministic():
    doc = InputDocument.model_validate({'dimension': 5, 'seed': 3,
                                        'object': {'constructor': {'random_bianchi': {'seed': 17}}},
                                        'analysis': {'m': [1, 4, 10]}})
    assert analyze(doc).to_yaml() == analyze(doc).to_yaml()
    reseeded = doc.model_copy(update={'seed': 4})
    assert reseeded.input_hash() != doc.input_hash()


def test_report_round_trip():
    report = analyze(parse_document(HYPERSURFACE))
    rebuilt = analyze(document_from_report(report))
    np.testing.assert_allclose(rebuilt.spectrum, report.spectrum, atol=1e-12)


def test_constant_curvature_sample():
    report = analyze(load_document(os.path.join(SAMPLES, "constant_curvature_n4.yaml")))
    # e^1 on the unit sphere: the quadratic equals |e^1-hat|^2 = n - 1
    assert report.form_quadratic == pytest.approx(3.0)
    assert verdict(report, "harmonic_tensor").conclusion is Conclusion.VANISHES
    assert verdict(report, "weyl_generic").conclusion is Conclusion.LOCALLY_CONFORMALLY_FLAT
    assert report.passed


def test_hypersurface_sample():
    report = analyze(load_document(os.path.join(SAMPLES, "hypersurface_n3.yaml")))
    submanifold = verdict(report, "submanifold_form")
    assert submanifold.conclusion is Conclusion.VANISHES
    assert submanifold.degrees == [1, 2]
    assert verdict(report, "betti_hypersurface_all_degrees").conclusion is Conclusion.BETTI_RANGE_ZERO


def test_umbilic_block():
    doc = InputDocument.model_validate({
        'dimension': 4,
        'object': {'constructor': {'constant_curvature': 1.0}},
        'analysis': {'p': 2, 'umbilic': {'h_norm': 1.0, 'ambient_mu': [0.0] * 10}},
    })
    report = analyze(doc)
    assert verdict(report, "betti_umbilic").conclusion is Conclusion.BETTI_RANGE_ZERO
