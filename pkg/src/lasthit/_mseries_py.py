"""Pure-Python fallback for the compiled kernels in _mseries.pyx.

Kept algorithmically identical to the Cython version so both backends give
bit-for-bit equal results; specfun selects whichever imports.
"""


def m_series(alpha, beta, z, max_terms):
    """Kahan-compensated power series for M(alpha, beta, z).

    Returns (sum, max_abs_term, n_terms).
    """
    s = 1.0
    comp = 0.0
    t = 1.0
    maxt = 1.0
    n = 0
    small = 0
    while n < max_terms:
        t *= (alpha + n) / (beta + n) * z / (n + 1)
        y = t - comp
        tmp = s + y
        comp = (tmp - s) - y
        s = tmp
        n += 1
        at = abs(t)
        if at > maxt:
            maxt = at
        if at <= 1e-17 * abs(s) + 1e-300:
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    return s, maxt, n


def m1_series(alpha, beta, z, psi0, max_terms):
    """Series for the first-argument derivative of M; psi0 = digamma(alpha).

    Returns (sum, max_abs_term, n_terms).
    """
    s = 0.0
    comp = 0.0
    t = 1.0
    psi = psi0
    maxt = 0.0
    n = 0
    small = 0
    while n < max_terms:
        psi += 1.0 / (alpha + n)
        t *= (alpha + n) / (beta + n) * z / (n + 1)
        n += 1
        contrib = t * (psi - psi0)
        y = contrib - comp
        tmp = s + y
        comp = (tmp - s) - y
        s = tmp
        at = abs(contrib)
        if at > maxt:
            maxt = at
        if at <= 1e-17 * abs(s) + 1e-300:
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    return s, maxt, n
