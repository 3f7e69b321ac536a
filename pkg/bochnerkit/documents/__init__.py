"""
Versioned input and report documents.

Documents are YAML key-value trees carrying a `format_version`. Each version
lives in its own module, registered in FORMAT_VERSIONS and imported on demand.
"""
import importlib
import logging
from types import ModuleType
from typing import Any, List, Optional, Sequence, Union

import yaml
from pydantic import ValidationError

from bochnerkit.errors import DocumentParseError

logger = logging.getLogger(__name__)

# Schema modules by format_version
FORMAT_VERSIONS = {
    1: 'bochnerkit.documents.v1',
}
CURRENT_VERSION = 1


def get_schema(version: int) -> ModuleType:
    """Import the schema module registered for a format_version"""
    if version not in FORMAT_VERSIONS:
        logger.warning(f"format_version {version!r} not found in FORMAT_VERSIONS")
        raise DocumentParseError("Unsupported document", [f"format_version {version!r} is not one of "
                                                         f"{sorted(FORMAT_VERSIONS)}"])
    return importlib.import_module(FORMAT_VERSIONS[version])


def _line_of(node: Optional[yaml.Node], loc: Sequence[Union[str, int]]) -> Optional[int]:
    """1-based line of the deepest YAML node reachable along a pydantic error location."""
    line = node.start_mark.line + 1 if node is not None else None
    for key in loc:
        if isinstance(node, yaml.MappingNode):
            matches = [value for name, value in node.value if name.value == key]
            if not matches:
                break
            node = matches[0]
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
        else:
            break
        line = node.start_mark.line + 1
    return line


def _diagnostics(error: ValidationError, root: Optional[yaml.Node]) -> List[str]:
    diagnostics = []
    for item in error.errors():
        field = ".".join(str(part) for part in item['loc']) or "<document>"
        line = _line_of(root, item['loc'])
        where = f"field '{field}'" + (f" (line {line})" if line is not None else "")
        diagnostics.append(f"{where}: {item['msg']}")
    return diagnostics


def parse_document(text: str, source: str = "<string>") -> Any:
    """Parse and validate an input document, returning the InputDocument of its format_version."""
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, 'problem_mark', None)
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark is not None else "unknown position"
        raise DocumentParseError(f"Malformed document {source}", [f"{where}: {getattr(e, 'problem', e)}"])
    if not isinstance(data, dict):
        raise DocumentParseError(f"Malformed document {source}", ["top level must be a mapping"])
    schema = get_schema(data.get('format_version', CURRENT_VERSION))
    try:
        document = schema.InputDocument.model_validate(data)
    except ValidationError as e:
        raise DocumentParseError(f"Invalid document {source}", _diagnostics(e, root))
    logger.info(f"Loaded format_version {document.format_version} document from {source}")
    return document


def load_document(path: str) -> Any:
    with open(path, "r") as f:
        return parse_document(f.read(), source=path)
