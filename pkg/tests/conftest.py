import pytest
from hypothesis import HealthCheck, settings

from owdvv.expr import parse_coefficient, parse_expression, parse_superpotential
from owdvv.frobenius import SuperpotentialSpec
from owdvv.laurent import AFFINE, Chart

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

Z_I = Chart("exp", "i")
Z_1 = Chart("exp", "1")


def names(n):
    return tuple(f"t{i}" for i in range(1, n + 1))


def coef(text, n=3):
    return parse_coefficient(text, names(n))


def lpoly(text, n=3, chart=AFFINE):
    return parse_superpotential(text, chart, names(n))


def expr(text, n=3, chart=AFFINE):
    return parse_expression(text, chart, names(n))


def spec_of(text, n, chart=AFFINE, euler=None):
    return SuperpotentialSpec(parse_superpotential(text, chart, names(n)), names(n), euler)


@pytest.fixture
def cubic():
    return spec_of("p^3 + t2*p + t1", 2)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
