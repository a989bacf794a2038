import json
import math

import numpy as np
import pytest

from owdvv import catalog
from owdvv.pipeline import compare_with_printed, derive, derive_numeric, verify_pair
from owdvv.report import CheckReport, canonical_json

from .conftest import coef, expr, spec_of


def test_derive_catalog_entries():
    for name, n in (("h0_1", None), ("trig1", None), ("h0_n_0", 3)):
        entry = catalog.get(name, n)
        result = derive(entry.spec, entry=entry)
        assert result.passed and result.exit_code == 0, name


def test_pole_family_skips_quasi_homogeneity():
    entry = catalog.get("h0_n_0", 2)
    checks = {c["name"]: c for c in derive(entry.spec, entry=entry).report["checks"]}
    assert checks["quasi_homogeneity"]["status"] == "skipped"
    assert checks["open_wdvv"]["details"]["source"].startswith("Hessian")


def test_coefficient_coordinates_fail():
    entry = catalog.get("h0_n", 3, coordinates="coefficient")
    with pytest.warns(RuntimeWarning, match="not flat"):
        assert not derive(entry.spec, entry=entry).passed


def test_compare_with_printed_reports_trig2():
    entry = catalog.get("trig2")
    cmp = derive(entry.spec, entry=entry).report["printed_comparison"]
    assert cmp["match"] and not cmp["parts"]["F"]["match"] and cmp["parts"]["Omega"]["match"]
    assert cmp["printed_pair_open_wdvv"]["status"] == "fail"


def test_compare_with_printed_flags_mismatch():
    entry = catalog.get("h0_1")
    out = compare_with_printed(entry, coef("t1^3", 1), expr("p^3/3 + t1*p", 1))
    assert not out["match"]


def test_verify_pair():
    assert verify_pair(coef("t1^3/6", 1), expr("p^3/3 + t1*p", 1), ("t1",)).passed
    assert not verify_pair(coef("t1^3/6", 1), expr("p^3/3 + t1*p + t1^2*p", 1), ("t1",)).passed


def test_derive_numeric_is_seeded():
    spec = spec_of("p^3 + t2*p + t1", 2)
    a = derive_numeric(spec, samples=2, seed=4)
    b = derive_numeric(spec, samples=2, seed=4)
    assert a.passed and canonical_json(a.report) == canonical_json(b.report)


def test_canonical_json():
    text = canonical_json({"b": 1.0 / 3, "a": [1 + 2j, np.float64(0.5), np.array([1, 2])], "c": math.inf, "d": None})
    assert text.index('"a"') < text.index('"b"')
    assert "0.33333333333333331" in text
    data = json.loads(text)
    assert data["a"][0] == {"re": 1.0, "im": 2.0} and data["a"][2] == [1, 2] and data["c"] == "inf"


def test_check_report_json():
    rep = CheckReport("x")
    rep.fail((1, 2), "t1")
    assert rep.to_json(timings=False) == {"name": "x", "status": "fail", "residuals": [{"index": [1, 2], "residual": "t1"}]}
    assert CheckReport.skip("y", "why").to_json(False)["status"] == "skipped"
