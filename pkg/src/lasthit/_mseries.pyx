# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the confluent hypergeometric power series.

These are the hottest scalar kernels in the package: every eigenvalue
refinement step for the square-root families evaluates M(a,b,z) (and often
its order derivative) a few dozen times.  The pure-Python twin lives in
_mseries_py.py and must stay algorithmically identical.
"""

from libc.math cimport fabs


def m_series(double alpha, double beta, double z, int max_terms):
    """Kahan-compensated power series for M(alpha, beta, z).

    Returns (sum, max_abs_term, n_terms).  The caller decides whether the
    cancellation ratio max_abs_term/|sum| makes the result trustworthy.
    """
    cdef double s = 1.0
    cdef double comp = 0.0
    cdef double t = 1.0
    cdef double maxt = 1.0
    cdef double y, tmp, at
    cdef int n = 0
    cdef int small = 0
    while n < max_terms:
        t *= (alpha + n) / (beta + n) * z / (n + 1)
        y = t - comp
        tmp = s + y
        comp = (tmp - s) - y
        s = tmp
        n += 1
        at = fabs(t)
        if at > maxt:
            maxt = at
        if at <= 1e-17 * fabs(s) + 1e-300:
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    return s, maxt, n


def m1_series(double alpha, double beta, double z, double psi0, int max_terms):
    """Series for the first-argument derivative of M.

    Termwise differentiation gives sum_n c_n (psi(alpha+n) - psi(alpha)) z^n
    with c_n the M series coefficients; psi0 = digamma(alpha) is supplied by
    the caller and advanced by the recurrence psi(x+1) = psi(x) + 1/x.
    Returns (sum, max_abs_term, n_terms).
    """
    cdef double s = 0.0
    cdef double comp = 0.0
    cdef double t = 1.0
    cdef double psi = psi0
    cdef double maxt = 0.0
    cdef double y, tmp, at, contrib
    cdef int n = 0
    cdef int small = 0
    while n < max_terms:
        psi += 1.0 / (alpha + n)
        t *= (alpha + n) / (beta + n) * z / (n + 1)
        n += 1
        contrib = t * (psi - psi0)
        y = contrib - comp
        tmp = s + y
        comp = (tmp - s) - y
        s = tmp
        at = fabs(contrib)
        if at > maxt:
            maxt = at
        if at <= 1e-17 * fabs(s) + 1e-300:
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    return s, maxt, n
