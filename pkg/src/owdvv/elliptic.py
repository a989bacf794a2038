"""Genus-one family: theta-function q-series, E2, Weierstrass functions and the
numeric verification of the open pair built from

    lambda = t1 + beta (t2)^2 d^2/dp^2 log theta1(p, t3).

theta1(p, tau) = 2 sum_n (-1)^n e^{i pi tau (n+1/2)^2} sin((2n+1)p) has periods
pi and pi*tau in p.  E2 uses q = e^{2 pi i tau}.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import factorial

import numpy as np

from . import kernels

__all__ = [
    "EllipticParams",
    "LatticePointError",
    "theta1",
    "theta1_d",
    "theta1_tau_d",
    "heat_residual",
    "e2",
    "e2_d",
    "e2_lattice",
    "g1",
    "weierstrass",
    "log_theta_jet",
    "H11_BETA",
    "H11_F_COEFFICIENT",
    "h11_structure",
    "h11_point_residuals",
    "h11_verify",
    "draw_samples",
]

PI = math.pi
# F = (t1)^2 t3/2 + t1 (t2)^2/2 + H11_F_COEFFICIENT (t2)^4 E2(t3) has eta = antidiag(1);
# the matching superpotential carries H11_BETA in front of (t2)^2.
H11_F_COEFFICIENT = -1j * PI / 48
H11_BETA = 1j * PI / 4
DEFAULT_SEED = 20240611


class LatticePointError(ValueError):
    pass


@dataclass(frozen=True)
class EllipticParams:
    tau: complex
    q_terms: int = 40

    def __post_init__(self):
        if not complex(self.tau).imag > 0:
            raise ValueError("Im(tau) must be positive")
        if int(self.q_terms) < 1:
            raise ValueError("q_terms must be at least 1")

    def theta_tail(self) -> float:
        """Size of the first omitted theta term, |e^{i pi tau (N+1/2)^2}|."""
        return math.exp(-PI * complex(self.tau).imag * (self.q_terms + 0.5) ** 2)



# -- theta ------------------------------------------------------------------------------


def theta1(p: complex, params: EllipticParams) -> complex:
    return kernels.theta1_jet(complex(p), complex(params.tau), params.q_terms, 0, 0)[0][0]


def theta1_d(p: complex, params: EllipticParams, k: int) -> complex:
    """k-th p-derivative, k in 0..3 (higher orders are accepted too)."""
    if k < 0:
        raise ValueError("derivative order must be non-negative")
    return kernels.theta1_jet(complex(p), complex(params.tau), params.q_terms, k, 0)[k][0]


def theta1_tau_d(p: complex, params: EllipticParams) -> complex:
    return kernels.theta1_jet(complex(p), complex(params.tau), params.q_terms, 0, 1)[0][1]


def heat_residual(p: complex, params: EllipticParams) -> complex:
    """4 d_tau theta1 + i pi d_p^2 theta1, zero term by term."""
    jet = kernels.theta1_jet(complex(p), complex(params.tau), params.q_terms, 2, 1)
    return 4 * jet[0][1] + 1j * PI * jet[2][0]


# -- E2 ------------------------------------------------------------------------------


def e2(tau: complex, n_terms: int = 40) -> complex:
    if not complex(tau).imag > 0:
        raise ValueError("Im(tau) must be positive")
    return kernels.e2_jet(complex(tau), n_terms, 0)[0]


def e2_d(tau: complex, n_terms: int = 40, order: int = 1) -> complex:
    if not complex(tau).imag > 0:
        raise ValueError("Im(tau) must be positive")
    if order < 0:
        raise ValueError("order must be non-negative")
    return kernels.e2_jet(complex(tau), n_terms, order)[order]


def e2_lattice(tau: complex, m_max: int = 400) -> complex:
    """Slow cross-check: Eisenstein-ordered lattice sum with Euler-Maclaurin row tails."""
    if not complex(tau).imag > 0:
        raise ValueError("Im(tau) must be positive")
    return kernels.e2_lattice(complex(tau), int(m_max))


# -- Weierstrass -------------------------------------------------------------------------


def g1(params: EllipticParams) -> complex:
    """Constant with zeta = d_p log theta1 + 4 pi i g1 p and zeta(p) - 1/p -> 0."""
    jet = kernels.theta1_jet(0j, complex(params.tau), params.q_terms, 3, 0)
    return -jet[3][0] / (3 * jet[1][0]) / (4j * PI)


def _near_lattice(p: complex, tau: complex, tol: float) -> bool:
    # p = pi (a + b tau); reduce to the fundamental cell and test the corners
    x = p / PI
    b = (x.imag / tau.imag) if tau.imag else 0.0
    a = x.real - b * tau.real
    for da in (math.floor(a), math.ceil(a)):
        for db in (math.floor(b), math.ceil(b)):
            if abs(p - PI * (da + db * tau)) < tol:
                return True
    return False


def weierstrass(p: complex, params: EllipticParams) -> tuple:
    """(zeta(p), wp(p)) for the lattice pi Z + pi tau Z."""
    p = complex(p)
    tau = complex(params.tau)
    if _near_lattice(p, tau, 1e-8):
        raise LatticePointError(f"p = {p} is within 1e-8 of a lattice point")
    jet = kernels.theta1_jet(p, tau, params.q_terms, 2, 0)
    th, th1, th2 = jet[0][0], jet[1][0], jet[2][0]
    c = 4j * PI * g1(params)
    dlog = th1 / th
    d2log = (th2 * th - th1 * th1) / (th * th)
    return dlog + c * p, -d2log - c


# -- jets of log theta ----------------------------------------------------------------------


def _series_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    P, T = x.shape
    z = np.zeros_like(x)
    for i in range(P):
        for j in range(T):
            xij = x[i, j]
            if xij == 0:
                continue
            z[i:, j:] += xij * y[: P - i, : T - j]
    return z


def log_theta_jet(p: complex, params: EllipticParams, max_p: int = 4, max_tau: int = 2) -> np.ndarray:
    """out[j, k] = d^j/dp^j d^k/dtau^k log theta1 for (j, k) != (0, 0); out[0, 0] = 0."""
    jet = kernels.theta1_jet(complex(p), complex(params.tau), params.q_terms, max_p, max_tau)
    P, T = max_p + 1, max_tau + 1
    fac = np.array([[factorial(j) * factorial(k) for k in range(T)] for j in range(P)], dtype=float)
    a = np.array(jet, dtype=complex) / fac
    if abs(a[0, 0]) == 0:
        raise LatticePointError("theta1 vanishes at this point")
    u = a / a[0, 0]
    u[0, 0] = 0
    out = np.zeros_like(u)
    power = u.copy()
    for m in range(1, P + T - 1):
        out += ((-1) ** (m + 1) / m) * power
        power = _series_mul(power, u)
    return out * fac


# -- the open pair for H_{1,1} ------------------------------------------------------------------


def h11_structure(t: tuple, params: EllipticParams, coefficient: complex = H11_F_COEFFICIENT,
                  t2_power: int = 4, c333_shift: complex = 0) -> np.ndarray:
    """c^g_ab (stored [g, a, b]) from F, with eta = antidiag(1) read off as c_1ab.

    ``t2_power`` = 0 gives the literal variant without the (t2)^4 factor.
    """
    _, t2, t3 = t
    E = kernels.e2_jet(complex(t3), params.q_terms, 3)
    K = coefficient
    c = np.zeros((3, 3, 3), dtype=complex)

    def put(i, j, k, v):
        for a, b, e in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
            c[a, b, e] = v

    put(0, 0, 2, 1)
    put(0, 1, 1, 1)
    if t2_power == 4:
        put(1, 1, 1, 24 * K * t2 * E[0])
        put(1, 1, 2, 12 * K * t2**2 * E[1])
        put(1, 2, 2, 4 * K * t2**3 * E[2])
        put(2, 2, 2, K * t2**4 * E[3] + c333_shift)
    elif t2_power == 0:
        put(2, 2, 2, K * E[3] + c333_shift)
    else:
        raise ValueError("t2_power must be 0 or 4")
    eta_inv = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)
    return np.einsum("gd,dab->gab", eta_inv, c)


@dataclass
class PointResiduals:
    main: np.ndarray  # 3x3, d_a d_b lambda - d_p RHS_ab
    open_line1: float
    open_line2: float
    delta: np.ndarray  # 3x3, RHS_ab - d_a d_b Omega
    lambda_p: complex


def h11_point_residuals(t: tuple, p: complex, params: EllipticParams, beta: complex = H11_BETA,
                        structure: np.ndarray | None = None) -> PointResiduals:
    """Main identity, both open lines and Delta at one sample.

    lambda = t1 + beta t2^2 f_pp, Omega = t1 p + beta t2^2 f_p with f = log theta1(p, t3).
    """
    t1, t2, t3 = (complex(x) for x in t)
    prm = EllipticParams(t3, params.q_terms)
    f = log_theta_jet(p, prm, 4, 2)
    cr = structure if structure is not None else h11_structure((t1, t2, t3), prm)
    B = beta
    dl = np.array([1, 2 * B * t2 * f[2, 0], B * t2**2 * f[2, 1]])
    dlp = np.array([0, 2 * B * t2 * f[3, 0], B * t2**2 * f[3, 1]])
    lp = B * t2**2 * f[3, 0]
    lpp = B * t2**2 * f[4, 0]
    dd = np.array([
        [0, 0, 0],
        [0, 2 * B * f[2, 0], 2 * B * t2 * f[2, 1]],
        [0, 2 * B * t2 * f[2, 1], B * t2**2 * f[2, 2]],
    ])
    # Hessian of Omega: index 0 = p, 1..3 = t
    H = np.zeros((4, 4), dtype=complex)
    H[0, 0] = lp
    H[0, 1:] = H[1:, 0] = dl
    H[2, 2] = 2 * B * f[1, 0]
    H[2, 3] = H[3, 2] = 2 * B * t2 * f[1, 1]
    H[3, 3] = B * t2**2 * f[1, 2]
    main = np.zeros((3, 3), dtype=complex)
    delta = np.zeros((3, 3), dtype=complex)
    for a in range(3):
        for b in range(3):
            num = dl[a] * dl[b] - cr[:, a, b] @ dl
            num_p = dlp[a] * dl[b] + dl[a] * dlp[b] - cr[:, a, b] @ dlp
            main[a, b] = dd[a, b] - (num_p * lp - num * lpp) / (lp * lp)
            delta[a, b] = num / lp - H[a + 1, b + 1]
    line1 = 0.0
    line2 = 0.0
    T = H[1:, 1:]
    for a in range(3):
        for b in range(3):
            for g in range(a + 1, 3):
                lhs = cr[:, a, b] @ T[g] + T[a, b] * H[g + 1, 0]
                rhs = cr[:, g, b] @ T[a] + T[g, b] * H[a + 1, 0]
                line1 = max(line1, abs(lhs - rhs))
            lhs = cr[:, a, b] @ H[0, 1:] + T[a, b] * H[0, 0]
            line2 = max(line2, abs(lhs - H[a + 1, 0] * H[b + 1, 0]))
    return PointResiduals(main, line1, line2, delta, lp)


def draw_samples(count: int, seed: int = DEFAULT_SEED) -> list:
    """Seeded (t1, t2, t3, p) draws: |Re p| <= 1, 0.2 <= Im p <= 0.8,
    Im t3 in [0.8, 2], |Re t3| <= 0.5, t1 and t2 in the annulus 0.5 <= |t| <= 1.5."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        r1, a1, r2, a2 = rng.uniform(0.5, 1.5), rng.uniform(0, 2 * PI), rng.uniform(0.5, 1.5), rng.uniform(0, 2 * PI)
        t3 = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 2.0))
        p = complex(rng.uniform(-1.0, 1.0), rng.uniform(0.2, 0.8))
        out.append((cmath.rect(r1, a1), cmath.rect(r2, a2), t3, p))
    return out


def _check_sample(t, p, params, beta) -> None:
    t3 = complex(t[2])
    if not t3.imag > 0:
        raise ValueError("Im(t3) must be positive")
    if _near_lattice(complex(p), t3, 1e-6):
        raise LatticePointError(f"sample p = {p} is too close to a pole of lambda")
    # critical points of lambda are the half periods
    for hp in (PI / 2, PI * t3 / 2, PI / 2 + PI * t3 / 2):
        if _near_lattice(complex(p) - hp, t3, 1e-3):
            raise LatticePointError(f"sample p = {p} is too close to a critical point of lambda")
    if abs(complex(t[1])) < 1e-6:
        raise ValueError("t2 = 0 makes lambda constant in p")


def h11_verify(
    samples: list | None = None,
    params: EllipticParams | None = None,
    tol: float = 1e-9,
    count: int = 20,
    seed: int = DEFAULT_SEED,
    beta: complex = H11_BETA,
    coefficient: complex = H11_F_COEFFICIENT,
    t2_power: int = 4,
    c333_shift: complex = 0,
    threads: int | None = None,
) -> dict:
    """Numeric main identity, open WDVV and Delta = 0 over seeded (t, p) samples.

    ``samples`` is a list of (t1, t2, t3, p); when omitted ``count`` samples
    are drawn with ``seed``.  Each sample's t3 is the modulus; ``params``
    only supplies the truncation order.
    """
    q_terms = params.q_terms if params is not None else 40
    if tol <= 0:
        raise ValueError("tol must be positive")
    drawn = samples is None
    samples = draw_samples(count, seed) if drawn else [tuple(complex(x) for x in s) for s in samples]
    for s in samples:
        _check_sample(s[:3], s[3], EllipticParams(s[2], q_terms), beta)
    threads = threads or int(os.environ.get("OWDVV_THREADS", "1") or 1)

    def work(s):
        t, p = s[:3], s[3]
        prm = EllipticParams(t[2], q_terms)
        cr = h11_structure(t, prm, coefficient, t2_power, c333_shift)
        return h11_point_residuals(t, p, prm, beta, cr)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, samples))  # map keeps sample order
    else:
        results = [work(s) for s in samples]
    rows = []
    for s, r in zip(samples, results):
        rows.append({
            "t": [s[0], s[1], s[2]],
            "p": s[3],
            "main_identity": float(np.max(np.abs(r.main))),
            "main_identity_11": float(abs(r.main[0, 0])),
            "open_line1": float(r.open_line1),
            "open_line2": float(r.open_line2),
            "delta": float(np.max(np.abs(r.delta))),
            "delta_22": float(abs(r.delta[1, 1])),
        })
    worst = {k: max(row[k] for row in rows) for k in ("main_identity", "main_identity_11", "open_line1", "open_line2", "delta", "delta_22")}
    checks = {
        "main_identity": worst["main_identity"] < tol,
        "open_wdvv": max(worst["open_line1"], worst["open_line2"]) < tol,
        "omega_tilde_zero": worst["delta"] < tol,
    }
    return {
        "family": "h1_1",
        "settings": {
            "q_terms": q_terms,
            "tol": tol,
            "samples": len(samples),
            "seed": seed if drawn else None,
            "beta": beta,
            "F_coefficient": coefficient,
            "t2_power": t2_power,
            "c333_shift": c333_shift,
            "backend": kernels.BACKEND,
        },
        "max_residuals": worst,
        "checks": checks,
        "passed": all(checks.values()),
        "samples": rows,
    }
