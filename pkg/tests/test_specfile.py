import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from owdvv.specfile import SpecFileError, load_spec_file, parse_spec_text

from .conftest import coef, lpoly

TOML = """\
variables = ["t1", "t2"]
lambda = "p^3 + t2*p + t1"

[weights]
q = ["0", "1/3"]
d = "2/3"
"""


def test_toml_round_trip():
    sf = parse_spec_text(TOML)
    spec = sf.superpotential()
    assert spec.lam == lpoly("p^3 + t2*p + t1", 2)
    assert sf.mode == "exact" and sf.weights is not None and len(sf.digest) == 64


def test_json_equivalent(tmp_path):
    data = {"variables": ["t1", "t2"], "lambda": "p^3 + t2*p + t1", "weights": {"q": ["0", "1/3"], "d": "2/3"}}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(data))
    sf = load_spec_file(str(path))
    assert sf.superpotential().lam == parse_spec_text(TOML).superpotential().lam


def test_exp_chart_and_pair():
    sf = parse_spec_text('variables = ["t1", "t2"]\nchart = "exp"\nkappa = "i"\nF = "t1^2*t2/2 + exp(t2)"\nOmega = "t1*p - 2*exp(t2/2)*sin(p)"\n')
    F, omega = sf.pair()
    assert F == coef("t1^2*t2/2 + exp(t2)", 2)


def test_expression_error_position():
    with pytest.raises(SpecFileError) as info:
        parse_spec_text('variables = ["t1", "t2"]\nlambda = "p^3 + t2*p +* t1"\n').superpotential()
    assert (info.value.line, info.value.column) == (2, 23)


def test_toml_syntax_error_position():
    with pytest.raises(SpecFileError) as info:
        parse_spec_text('variables = ["t1"\nlambda = "p^2"\n')
    assert info.value.line == 2


def test_json_syntax_error_position():
    with pytest.raises(SpecFileError) as info:
        parse_spec_text('{"variables": ["t1"],\n "lambda": }', "json")
    assert info.value.line == 2


@pytest.mark.parametrize(
    "text",
    [
        'variables = ["t1", "t1"]\nlambda = "p^2 + t1"\n',
        'variables = ["p"]\nlambda = "p^2"\n',
        'variables = []\nlambda = "p^2"\n',
        'variables = ["t1"]\nlambda = "p^2 + t1"\nchart = "polar"\n',
        'variables = ["t1"]\nlambda = "p^2 + t1"\nkappa = "i"\n',
        'variables = ["t1"]\nlambda = "p^2 + t1"\nmode = "fast"\n',
        'variables = ["t1"]\nlambda = "p^2 + t1"\ncolour = 1\n',
        'variables = ["t1"]\nlambda = 3\n',
        'variables = ["t1"]\nlambda = "p^2 + t1"\n[weights]\nq = ["x"]\n',
        'variables = ["t1"]\nlambda = "p^2 + t1"\n[weights]\nq = ["0", "1"]\n',
    ],
)
def test_invalid_specs(text):
    with pytest.raises(SpecFileError):
        parse_spec_text(text).superpotential()


def test_missing_pair():
    with pytest.raises(SpecFileError):
        parse_spec_text('variables = ["t1"]\nlambda = "p^2 + t1"\n').pair()


def test_float_literal_rejected():
    with pytest.raises(SpecFileError):
        parse_spec_text('variables = ["t1"]\nlambda = "p^2 + 0.5*t1"\n').superpotential()


@given(st.text(max_size=40))
def test_arbitrary_lambda_never_crashes(body):
    text = 'variables = ["t1", "t2"]\nlambda = ' + json.dumps(body) + "\n"
    try:
        sf = parse_spec_text(text)
        sf.superpotential()
    except SpecFileError as exc:
        assert str(exc)
