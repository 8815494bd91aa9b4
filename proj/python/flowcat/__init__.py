"""Discrete flow categories of cell complexes: validation, localization and homology."""

import json
from dataclasses import dataclass
from typing import Any, Optional

from . import _core

EXIT_OK = _core.EXIT_OK
EXIT_INVALID = _core.EXIT_INVALID
EXIT_COMPUTATION = _core.EXIT_COMPUTATION


@dataclass
class Report:
    exit_code: int
    command: str
    results: Any
    warnings: list

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK


def _report(result) -> Report:
    code, text = result
    data = json.loads(text)
    return Report(code, data.get("command", ""), data.get("results"), data.get("warnings", []))


def _text(value) -> Optional[str]:
    if value is None or isinstance(value, str):
        return value
    return json.dumps(value)


def fixture(name: str) -> dict:
    """Parsed contents of an embedded fixture file such as "sphere.json"."""
    text = _core.fixture_file(name)
    if text is None:
        raise KeyError(name)
    return json.loads(text)


def fixture_files() -> list:
    return list(_core.fixture_files())


def validate(complex, matching=None) -> Report:
    return _report(_core.validate(_text(complex), _text(matching)))


def flow(complex, matching, source=None, target=None, max_zigzag_len=4, category=None) -> Report:
    return _report(_core.flow(_text(complex), _text(matching), source, target, max_zigzag_len, category))


def homology(kind, complex, matching=None, cosheaf=None, coefficients=None,
             max_nerve_dim=3, max_zigzag_len=4, category=None) -> Report:
    return _report(_core.homology(kind, _text(complex), _text(matching), _text(cosheaf),
                                  coefficients, max_nerve_dim, max_zigzag_len, category))


def fixture_list() -> Report:
    return _report(_core.fixture_list())


def fixture_run(name: str) -> Report:
    return _report(_core.fixture_run(name))


__all__ = [
    "EXIT_OK", "EXIT_INVALID", "EXIT_COMPUTATION", "Report",
    "fixture", "fixture_files", "validate", "flow", "homology", "fixture_list", "fixture_run",
]
