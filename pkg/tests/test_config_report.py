from fractions import Fraction
import json

import pytest

from qkloop.config import CHECKS, ConfigError, SuiteConfig, config_from_dict, load_config
from qkloop.report import IdentityReport, dumps_reports, emit_report, verdict


def test_defaults_and_roundtrip():
    cfg = config_from_dict({})
    assert cfg == SuiteConfig()
    assert config_from_dict(cfg.to_dict()) == cfg
    assert set(cfg.checks) == set(CHECKS)


@pytest.mark.parametrize(
    "doc, needle",
    [
        ({"extra": 1}, "unknown key"),
        ({"ring": {"R": 2}}, "unknown key"),
        ({"grid": {"x": []}}, "unknown key"),
        ({"ring": {"D": 0}}, "ring.D"),
        ({"ring": {"D": "4"}}, "ring.D"),
        ({"ring": {"D": True}}, "ring.D"),
        ({"grid": {"tau": "Q"}}, "grid.tau"),
        ({"checks": ["nope"]}, "unknown check"),
        ({"m": [0]}, "m"),
        ({"m": 2}, "m"),
        ({"corrupt_sign": 1}, "corrupt_sign"),
        ({"workers": 0}, "workers"),
        ({"output": 3}, "output"),
        ([], "expected an object"),
    ],
)
def test_validation(doc, needle):
    with pytest.raises(ConfigError, match=needle):
        config_from_dict(doc)


def test_load_config(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"ring": {"D": 3}, "grid": {"tau": ["Q"]}, "seed": 5}))
    cfg = load_config(path)
    assert cfg.D == 3 and cfg.tau == ("Q",) and cfg.seed == 5
    path.write_text("{\n  oops")
    with pytest.raises(ConfigError, match="2:3"):
        load_config(path)


def test_report_serialization(tmp_path):
    assert dumps_reports([]) == "[]"
    ok = verdict("ruling", {"tau": "Q", "D": 3})
    assert ok.passed
    doc = json.loads(dumps_reports([ok]))[0]
    assert doc == {"schema": "qk-report/1", "name": "ruling", "params": {"tau": "Q", "D": 3}, "verdict": "PASS", "detail": None}
    bad = IdentityReport("sstar_s", {}, "FAIL", {"monomial": "N1", "q_exponent": 0, "expected": Fraction(1, 3), "got": Fraction(-2)})
    doc = json.loads(emit_report([bad], tmp_path / "r.json"))[0]
    assert doc["detail"] == {"monomial": "N1", "q_exponent": 0, "expected": "1/3", "got": "-2"}
    assert json.loads((tmp_path / "r.json").read_text())[0] == doc
    assert list(doc) == ["schema", "name", "params", "verdict", "detail"]
