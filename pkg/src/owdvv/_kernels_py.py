"""Pure-Python numeric kernels; same interface as the compiled ``_kernels``."""

from __future__ import annotations

import cmath
import math

PI = math.pi


def theta1_jet(p: complex, tau: complex, n_terms: int, max_p: int, max_tau: int) -> list:
    """out[j][k] = d^j/dp^j d^k/dtau^k of 2 sum_n (-1)^n e^{i pi tau (n+1/2)^2} sin((2n+1)p).

    Terms are added from the highest n down, smallest magnitude first.
    """
    out = [[0j] * (max_tau + 1) for _ in range(max_p + 1)]
    for n in range(n_terms - 1, -1, -1):
        half = n + 0.5
        freq = 2 * n + 1
        base = (2.0 if n % 2 == 0 else -2.0) * cmath.exp(1j * PI * tau * half * half)
        s = cmath.sin(freq * p)
        c = cmath.cos(freq * p)
        trig = (s, c, -s, -c)
        tau_factor = 1j * PI * half * half
        fp = 1.0
        for j in range(max_p + 1):
            term = base * fp * trig[j % 4]
            row = out[j]
            for k in range(max_tau + 1):
                row[k] += term
                term *= tau_factor
            fp *= freq
    return out


def _sigma1_table(n_terms: int) -> list:
    sig = [0] * (n_terms + 1)
    for d in range(1, n_terms + 1):
        for m in range(d, n_terms + 1, d):
            sig[m] += d
    return sig


def e2_jet(tau: complex, n_terms: int, max_order: int) -> list:
    """[E2, E2', ..., E2^(max_order)] from 1 - 24 sum sigma_1(n) q^n, q = e^{2 pi i tau}."""
    sig = _sigma1_table(n_terms)
    q = cmath.exp(2j * PI * tau)
    out = [0j] * (max_order + 1)
    for n in range(n_terms, 0, -1):
        qn = q**n
        w = 2j * PI * n
        term = sig[n] * qn
        for k in range(max_order + 1):
            out[k] += term
            term *= w
    out = [-24 * x for x in out]
    out[0] += 1
    return out


def _row_tail(z: complex, m_max: int) -> complex:
    """sum over |m| > m_max of 1/(m+z)^2 by the midpoint Euler-Maclaurin formula."""
    w1 = m_max + 0.5 + z
    w2 = m_max + 0.5 - z
    return 1 / w1 - 1 / (12 * w1**3) + 1 / w2 - 1 / (12 * w2**3)


def e2_lattice(tau: complex, m_max: int) -> complex:
    """1 + 3/pi^2 sum_{n != 0} sum_m 1/(m + n tau)^2, m inner, |m|, |n| <= m_max.

    Each truncated inner sum gets its Euler-Maclaurin tail; without it the
    symmetric truncation converges to a different constant.
    """
    total = 0j
    for n in range(m_max, 0, -1):
        for sgn in (1, -1):
            z = sgn * n * tau
            row = 0j
            for m in range(m_max, -m_max - 1, -1):
                d = m + z
                row += 1 / (d * d)
            total += row + _row_tail(z, m_max)
    return 1 + 3 / PI**2 * total
