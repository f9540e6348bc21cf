"""Identity reports and their JSON serialization (schema ``qk-report/1``)."""

from dataclasses import dataclass, field
from fractions import Fraction
import json

SCHEMA = "qk-report/1"


@dataclass
class IdentityReport:
    name: str
    params: dict = field(default_factory=dict)
    verdict: str = "PASS"
    detail: dict | None = None

    @property
    def passed(self):
        return self.verdict == "PASS"

    def to_json(self):
        return {
            "schema": SCHEMA,
            "name": self.name,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "verdict": self.verdict,
            "detail": None if self.detail is None else {k: _jsonable(v) for k, v in self.detail.items()},
        }


def _jsonable(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int):
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return str(v)


def verdict(name, params, detail=None):
    """PASS when ``detail`` is None, otherwise FAIL carrying the detail."""
    return IdentityReport(name, dict(params), "PASS" if detail is None else "FAIL", detail)


def dumps_reports(reports):
    if not reports:
        return "[]"
    return json.dumps([r.to_json() for r in reports], indent=2, ensure_ascii=False)


def emit_report(reports, path=None):
    """Serialize reports; write to ``path`` when given. Returns the text."""
    text = dumps_reports(reports)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
