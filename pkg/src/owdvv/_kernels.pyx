# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels; ``_kernels_py`` holds the reference implementation."""

from libc.math cimport M_PI
from libc.stdlib cimport malloc, free

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex csin(double complex)
    double complex ccos(double complex)


cdef void _theta_jet(double complex p, double complex tau, int n_terms, int max_p, int max_tau,
                     double complex* out) noexcept nogil:
    cdef int n, j, k, width = max_tau + 1
    cdef double half, freq, fp
    cdef double complex base, s, c, term, tau_factor, tr
    cdef double complex I = 1j
    for j in range((max_p + 1) * width):
        out[j] = 0
    for n in range(n_terms - 1, -1, -1):
        half = n + 0.5
        freq = 2 * n + 1
        base = (2.0 if n % 2 == 0 else -2.0) * cexp(I * M_PI * tau * half * half)
        s = csin(freq * p)
        c = ccos(freq * p)
        tau_factor = I * M_PI * half * half
        fp = 1.0
        for j in range(max_p + 1):
            if j % 4 == 0:
                tr = s
            elif j % 4 == 1:
                tr = c
            elif j % 4 == 2:
                tr = -s
            else:
                tr = -c
            term = base * fp * tr
            for k in range(max_tau + 1):
                out[j * width + k] = out[j * width + k] + term
                term = term * tau_factor
            fp = fp * freq


def theta1_jet(double complex p, double complex tau, int n_terms, int max_p, int max_tau):
    cdef int width = max_tau + 1
    cdef double complex* buf = <double complex*> malloc((max_p + 1) * width * sizeof(double complex))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            _theta_jet(p, tau, n_terms, max_p, max_tau, buf)
        return [[buf[j * width + k] for k in range(width)] for j in range(max_p + 1)]
    finally:
        free(buf)


def e2_jet(double complex tau, int n_terms, int max_order):
    cdef int n, d, m, k
    cdef long* sig = <long*> malloc((n_terms + 1) * sizeof(long))
    cdef double complex* acc = <double complex*> malloc((max_order + 1) * sizeof(double complex))
    cdef double complex q, qn, w, term
    cdef double complex I = 1j
    if sig == NULL or acc == NULL:
        free(sig)
        free(acc)
        raise MemoryError()
    try:
        with nogil:
            for n in range(n_terms + 1):
                sig[n] = 0
            for d in range(1, n_terms + 1):
                m = d
                while m <= n_terms:
                    sig[m] += d
                    m += d
            for k in range(max_order + 1):
                acc[k] = 0
            q = cexp(2 * I * M_PI * tau)
            for n in range(n_terms, 0, -1):
                qn = _ipow(q, n)
                w = 2 * I * M_PI * n
                term = sig[n] * qn
                for k in range(max_order + 1):
                    acc[k] = acc[k] + term
                    term = term * w
        out = [-24 * acc[k] for k in range(max_order + 1)]
        out[0] += 1
        return out
    finally:
        free(sig)
        free(acc)


cdef double complex _ipow(double complex x, int n) noexcept nogil:
    cdef double complex r = 1
    while n > 0:
        if n & 1:
            r = r * x
        x = x * x
        n >>= 1
    return r


cdef double complex _row_tail(double complex z, int m_max) noexcept nogil:
    cdef double complex w1 = m_max + 0.5 + z
    cdef double complex w2 = m_max + 0.5 - z
    return 1 / w1 - 1 / (12 * w1 * w1 * w1) + 1 / w2 - 1 / (12 * w2 * w2 * w2)


def e2_lattice(double complex tau, int m_max):
    cdef int n, m, sgn
    cdef double complex total = 0, row, z, d
    with nogil:
        for n in range(m_max, 0, -1):
            for sgn in range(2):
                z = (n if sgn == 0 else -n) * tau
                row = 0
                for m in range(m_max, -m_max - 1, -1):
                    d = m + z
                    row = row + 1 / (d * d)
                total = total + row + _row_tail(z, m_max)
    return 1 + 3 / (M_PI * M_PI) * total
