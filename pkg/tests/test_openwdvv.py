import pytest

from owdvv import catalog
from owdvv.frobenius import derive_frobenius, raise_index
from owdvv.laurent import LogLaurent
from owdvv.openwdvv import (
    open_rhs,
    check_first_line_redundancy,
    check_main_identity,
    check_open_wdvv,
    check_oriented_wdvv,
    check_unit_conditions,
    derive_open,
)

from .conftest import Z_1, Z_I, coef, expr

EXACT = [("h0_1", None), ("h0_2", None), ("trig1", None), ("trig2", None), ("h0_n", 3), ("h0_n_0", 2)]


def _derived(name, n=None):
    entry = catalog.get(name, n)
    fd = derive_frobenius(entry.spec)
    return entry, fd, derive_open(entry.spec, fd)


@pytest.mark.parametrize("name,n", EXACT)
def test_main_identity_and_redundancy(name, n):
    entry, fd, _ = _derived(name, n)
    assert check_main_identity(entry.spec, fd.c_raised).passed
    assert check_first_line_redundancy(entry.spec, fd.c_raised).passed


def test_main_identity_detects_corruption():
    entry, fd, _ = _derived("h0_2")
    c = [[list(r) for r in m] for m in fd.c_lower]
    c[1][1][1] = c[1][1][1] + coef("1")
    rep = check_main_identity(entry.spec, raise_index(fd.eta_inv, c))
    assert not rep.passed and rep.residuals


def test_rhs_shape():
    entry, fd, _ = _derived("h0_2")
    rhs = open_rhs(entry.spec, fd.c_raised)
    assert len(rhs) == 2 and all(len(row) == 2 for row in rhs)


@pytest.mark.parametrize(
    "name, omega_tilde",
    [("h0_1", "0"), ("h0_2", "t2^2/6"), ("trig1", "0"), ("trig2", "t2^2/2")],
)
def test_integration_constants(name, omega_tilde):
    entry, _, od = _derived(name)
    assert od.OmegaTilde == coef(omega_tilde)


def test_assembled_omega():
    entry, _, od = _derived("trig1")
    assert od.Omega == expr("t1*p - 2*exp(t2/2)*sin(p)", 2, Z_I)
    entry, _, od = _derived("h0_1")
    assert od.Omega == expr("p^3/3 + t1*p", 1)


@pytest.mark.parametrize("name,n", EXACT)
def test_open_oriented_unit(name, n):
    entry, fd, od = _derived(name, n)
    if od.Omega is not None:
        args = (fd.F, od.Omega, entry.spec.n, fd.eta)
        assert check_open_wdvv(*args).passed
        assert check_oriented_wdvv(*args).passed
        assert check_unit_conditions(od.Omega, entry.spec.n).passed
    else:  # logarithmic potential: use the Hessian built from lambda and Delta
        kw = {"c_raised": fd.c_raised, "hessian": od.hessian}
        assert check_open_wdvv(None, None, entry.spec.n, **kw).passed
        assert check_oriented_wdvv(None, None, entry.spec.n, **kw).passed
        assert check_unit_conditions(None, entry.spec.n, hessian=od.hessian).passed


def test_unit_conditions_example():
    omega = expr("t1*p - 2*exp(t2/2)*sin(p)", 2, Z_I)
    assert check_unit_conditions(omega, 2).passed
    assert not check_unit_conditions(expr("p^2", 1), 1).passed


def test_corrupted_omega_fails():
    entry, fd, od = _derived("h0_2")
    bad = od.Omega + expr("t2^2*p", 2)
    rep = check_open_wdvv(fd.F, bad, 2, fd.eta)
    assert not rep.passed and rep.residuals


def test_printed_pairs():
    h02 = catalog.get("h0_2")
    F, omega = h02.printed_solution()
    assert check_open_wdvv(F, omega, 2).passed
    assert check_oriented_wdvv(F, omega, 2).passed
    trig2 = catalog.get("trig2")
    F, omega = trig2.printed_solution()
    # the printed potential has a degenerate metric
    assert not check_open_wdvv(F, omega, 3).passed


def test_cube_pair_fails_only_the_unit_condition():
    F = coef("t1^3", 1)
    omega = expr("p^2", 1)
    assert check_open_wdvv(F, omega, 1).passed
    assert not check_unit_conditions(omega, 1).passed


def test_trig2_omega_round_trip():
    entry, _, od = _derived("trig2")
    assert isinstance(od.Omega, LogLaurent)
    printed = expr("exp(2*p)/2 + sqrt2*t2*exp(p) + t1*p - exp(t3 - p)/sqrt2 + t2^2/2", 3, Z_1)
    assert od.Omega == printed
