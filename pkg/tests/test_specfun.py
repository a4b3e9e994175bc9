"""Checks for the scalar special-function kernels.

Frozen reference values come from tests/oracles/specfun_oracle.py (mpmath at
50 digits); closed forms are asserted directly.
"""

import math

import numpy as np
import pytest

from lasthit import specfun as sf

ANALYTIC = sf.OrderDerivativeConfig(mode="analytic")


# ---------------------------------------------------------------------------
# gamma ratios
# ---------------------------------------------------------------------------

def test_gamma_ratio_trivial():
    assert sf.gamma_ratio(1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
    assert sf.gamma_ratio(0.5, 0.5) == pytest.approx(2.0 / math.sqrt(math.pi), rel=1e-14)


def test_gamma_ratio_large_order():
    assert sf.gamma_ratio(40.0, 1.7) == pytest.approx(13.422651471967325, rel=1e-10)


def test_gamma_ratio_asymptotic_is_too_coarse():
    # the Stirling shortcut carries ~(1-beta)/(12 nu^2) relative error, which
    # is why gamma_ratio evaluates the exact log-gamma difference instead
    rel = sf.gamma_ratio_asymptotic(40.0, 1.7) / sf.gamma_ratio(40.0, 1.7) - 1.0
    assert 1e-5 < abs(rel) < 1e-4
    rel = sf.gamma_ratio_asymptotic(300.0, 1.7) / sf.gamma_ratio(300.0, 1.7) - 1.0
    assert abs(rel) < 1e-6


def test_gamma_ratio_domain():
    with pytest.raises(ValueError):
        sf.gamma_ratio(-2.0, 1.0)
    with pytest.raises(ValueError):
        sf.gamma_ratio(0.5, -1.5)


def test_gamma_half_ratio():
    assert sf.gamma_half_ratio(3.0) == pytest.approx(
        math.gamma(2.0) / math.gamma(1.5), rel=1e-13)
    # negative non-integer order picks up the sign of Gamma(nu/2)
    assert sf.gamma_half_ratio(-0.6) == pytest.approx(
        math.gamma(0.2) / math.gamma(-0.3), rel=1e-13)
    # pole of the denominator
    assert sf.gamma_half_ratio(0.0) == 0.0


def test_ou_gamma_factor():
    nu = 4.6
    exact = 2.0 ** nu * math.gamma(nu / 2) ** 2 / math.gamma(nu + 1)
    assert sf.ou_gamma_factor(nu) == pytest.approx(exact, rel=1e-13)
    # decays like sqrt(pi)(nu/2)^{-3/2} at large order, no overflow
    big = sf.ou_gamma_factor(400.0)
    assert big == pytest.approx(math.sqrt(math.pi) * 200.0 ** -1.5, rel=1e-2)


# ---------------------------------------------------------------------------
# Bessel
# ---------------------------------------------------------------------------

def test_bessel_values():
    assert sf.bessel("J", 0.0, 1e-12) == pytest.approx(1.0, abs=1e-12)
    assert sf.bessel("I", 0.5, 1.0) == pytest.approx(0.93767488824548765, rel=1e-12)


def test_bessel_wronskian_fixed():
    z, mu = 3.7, 0.6
    w = (sf.bessel("J", mu + 1, z) * sf.bessel("Y", mu, z)
         - sf.bessel("Y", mu + 1, z) * sf.bessel("J", mu, z))
    assert abs(w - 2.0 / (math.pi * z)) < 1e-12


def test_bessel_wronskian_random():
    rng = np.random.default_rng(20240817)
    for _ in range(100):
        mu = rng.uniform(0.0, 5.0)
        z = rng.uniform(0.1, 50.0)
        w = (sf.bessel("J", mu + 1, z) * sf.bessel("Y", mu, z)
             - sf.bessel("Y", mu + 1, z) * sf.bessel("J", mu, z))
        assert abs(w - 2.0 / (math.pi * z)) < 1e-12


def test_bessel_errors():
    with pytest.raises(ValueError):
        sf.bessel("Q", 0.0, 1.0)
    with pytest.raises(ValueError):
        sf.bessel("Y", 0.5, -1.0)
    with pytest.raises(ValueError):
        sf.bessel("K", 0.5, 0.0)
    with pytest.raises(OverflowError):
        sf.bessel("I", 0.0, 800.0)


# ---------------------------------------------------------------------------
# Kummer M
# ---------------------------------------------------------------------------

def test_kummer_m_trivial():
    assert sf.kummer_m(-3.7, 2.2, 0.0) == 1.0
    assert sf.kummer_m(1.0, 1.0, 2.5) == pytest.approx(math.exp(2.5), rel=1e-13)


def test_kummer_m_large_order():
    # heavy cancellation: the double-precision series loses ~26 digits here
    # and the high-precision fallback must kick in
    assert sf.kummer_m(-60.5, 1.5, 30.0) == pytest.approx(30205.406144050863, rel=1e-10)
    assert sf.kummer_m(-200.25, 2.5, 40.0) == pytest.approx(24447.452605806787, rel=1e-10)


def test_kummer_m_errors():
    with pytest.raises(ValueError):
        sf.kummer_m(1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        sf.kummer_m(1.0, -2.0, 1.0)
    with pytest.raises(sf.ConvergenceError):
        sf.kummer_m(1.0, 1.0, 50.0, max_terms=10)


def test_kummer_m1():
    v = sf.kummer_m1(-2.3, 1.4, 0.9)
    # central finite difference with step 1e-6 (frozen from the oracle)
    assert v == pytest.approx(0.25332825523110915, abs=1e-6)
    # and the exact order derivative
    assert v == pytest.approx(0.25332825523110033, rel=1e-12)
    assert sf.kummer_m1(1.3, 1.1, 0.0) == 0.0
    assert sf.kummer_m1(-60.5, 1.5, 30.0) == pytest.approx(18346.901488569636, rel=1e-10)


def test_kummer_m1_integer_alpha():
    # the digamma recurrence walks into a pole at nonpositive integer alpha,
    # so that case goes through the high-precision numeric derivative
    v = sf.kummer_m1(-3.0, 1.4, 0.9)
    h = 1e-6
    fd = (sf.kummer_m(-3.0 + h, 1.4, 0.9) - sf.kummer_m(-3.0 - h, 1.4, 0.9)) / (2 * h)
    assert v == pytest.approx(fd, abs=1e-6)


# ---------------------------------------------------------------------------
# Tricomi U
# ---------------------------------------------------------------------------

def test_kummer_u_fixed():
    assert sf.kummer_u(-2.3, 1.7, 1.1) == pytest.approx(1.8260174930817978, rel=1e-10)


U_GRID = [
    (-0.3, 1.2, 0.5, 0.61005922888062736),
    (-1.7, 1.4, 1.0, -1.1842443270568966),
    (-2.9, 2.6, 3.0, 6.0560819141791596),
    (-4.4, 1.1, 7.5, -461.99741371535009),
    (-6.1, 2.2, 12.0, -6414.7860415346982),
    (-7.8, 1.8, 20.0, -78404928.411382945),
    (-9.6, 2.9, 15.0, -327448373.18556448),
    (-0.9, 2.4, 0.8, -1.4886742129632613),
    (-3.3, 1.3, 4.2, -16.385873112366522),
    (-5.5, 2.7, 9.9, 3320.9137069394694),
    (-8.2, 1.6, 2.3, 73956.391855454782),
    (-2.1, 2.1, 18.0, 281.91921924333768),
]


def test_kummer_u_reflection_grid():
    for alpha, beta, z, want in U_GRID:
        assert sf.kummer_u(alpha, beta, z) == pytest.approx(want, rel=1e-8)


def test_kummer_u_errors():
    with pytest.raises(ValueError):
        sf.kummer_u(-1.0, 2.0, 1.0)  # integer beta
    with pytest.raises(ValueError):
        sf.kummer_u(-1.0, 1.5, -1.0)
    with pytest.raises(OverflowError):
        sf.kummer_u(-172.2, 1.5, 2.0)


def test_kummer_u_rescaled():
    assert sf.kummer_u_rescaled(0.0, 1.7, 1.1) == pytest.approx(1.0, rel=1e-13)
    lhs = sf.kummer_u_rescaled(2.3, 1.7, 1.1) * math.gamma(3.3)
    assert lhs == pytest.approx(1.8260174930817978, rel=1e-10)
    # finite and accurate at order 60, where the direct route has already
    # lost most of its digits to cancellation
    assert sf.kummer_u_rescaled(60.0, 1.5, 2.0) == pytest.approx(
        -0.026159756188867607, rel=1e-8)
    # stays representable far beyond that
    assert math.isfinite(sf.kummer_u_rescaled(500.0, 1.5, 2.0))


def test_kummer_u_rescaled_errors():
    with pytest.raises(ValueError):
        sf.kummer_u_rescaled(1.0, 3.0, 1.0)
    with pytest.raises(ValueError):
        sf.kummer_u_rescaled(-1.2, 1.5, 1.0)
    with pytest.raises(ValueError):
        sf.kummer_u_rescaled(1.0, 1.5, 0.0)


def test_kummer_u1_rescaled():
    want = -2.100525514650861
    assert sf.kummer_u1_rescaled(2.3, 1.7, 1.1, ANALYTIC) == pytest.approx(want, rel=1e-9)
    assert sf.kummer_u1_rescaled(2.3, 1.7, 1.1) == pytest.approx(want, abs=1e-5)


# ---------------------------------------------------------------------------
# parabolic cylinder D
# ---------------------------------------------------------------------------

def test_parabolic_d_closed_forms():
    z = 0.9
    assert sf.parabolic_d(0.0, z) == pytest.approx(math.exp(-z * z / 4), rel=1e-13)
    assert sf.parabolic_d(1.0, 1.3) == pytest.approx(0.85202813062489267, rel=1e-10)
    # Hermite reduction D_n(z) = 2^{-n/2} H_n(z/sqrt2) e^{-z^2/4}
    want = 2.0 ** -1.5 * sf.hermite(3, 0.8 / math.sqrt(2)) * math.exp(-0.64 / 4)
    assert sf.parabolic_d(3.0, 0.8) == pytest.approx(want, rel=1e-10)
    assert sf.parabolic_d(3.0, 0.8) == pytest.approx(-1.608847473568207, rel=1e-10)


def test_parabolic_d_general():
    assert sf.parabolic_d(2.6, 1.1) == pytest.approx(-0.7430570171507702, rel=1e-12)
    assert sf.parabolic_d(-0.4, -0.9) == pytest.approx(1.5824089229544553, rel=1e-12)
    with pytest.raises(OverflowError):
        sf.parabolic_d(400.0, 1.0)


def test_parabolic_d_rescaled():
    # unscaling: D = (1/sqrt(pi)) 2^{nu/2} Gamma(nu/2) Dtilde
    nu, z = 2.6, 1.1
    d = sf.parabolic_d_rescaled(nu, z) * 2.0 ** (nu / 2) * math.gamma(nu / 2) / math.sqrt(math.pi)
    assert d == pytest.approx(-0.7430570171507702, rel=1e-9)
    # nu -> 0+ limit recovers D_0
    z = 0.9
    lim = (2.0 ** (0.5e-8) / math.sqrt(math.pi)) * math.gamma(0.5e-8) \
        * sf.parabolic_d_rescaled(1e-8, z)
    assert lim == pytest.approx(math.exp(-z * z / 4), abs=1e-6)


def test_parabolic_d1_rescaled():
    want = -1.2400040739429295
    assert sf.parabolic_d1_rescaled(2.6, 1.1, ANALYTIC) == pytest.approx(want, rel=1e-9)
    assert sf.parabolic_d1_rescaled(2.6, 1.1) == pytest.approx(want, abs=1e-5)
    with pytest.raises(ValueError):
        sf.parabolic_d1_rescaled(-0.5, 1.1, ANALYTIC)


# ---------------------------------------------------------------------------
# cylinder combinations
# ---------------------------------------------------------------------------

def test_cylinder_bessel_diagonal_and_antisymmetry():
    assert sf.cylinder_bessel(0.6, 1.3, 1.3, 0.9) == 0.0
    a = sf.cylinder_bessel(0.6, 1.0, 2.0, 0.9)
    b = sf.cylinder_bessel(0.6, 2.0, 1.0, 0.9)
    assert a == -b


def test_cylinder_bessel_order_symmetry():
    assert sf.cylinder_bessel(-0.7, 1.0, 2.0, 0.5) == sf.cylinder_bessel(0.7, 1.0, 2.0, 0.5)


def test_cylinder_bessel_boundary_derivative():
    # d/dx Psi_mu(k, x; eps) at x = k collapses to 1/(pi k) by the Wronskian
    k, eps, mu = 1.7, 0.9, 0.6
    h = 1e-6
    fd = (sf.cylinder_bessel(mu, k, k + h, eps)
          - sf.cylinder_bessel(mu, k, k - h, eps)) / (2 * h)
    assert fd == pytest.approx(1.0 / (math.pi * k), abs=1e-8)


def test_cylinder_kummer():
    want = -0.47247293296253872
    assert sf.cylinder_kummer(-1.2, 1.6, 0.4, 2.0) == pytest.approx(want, rel=1e-9)
    # rescaled * Gamma(nu+1) recovers the unscaled cylinder
    lhs = sf.cylinder_kummer_rescaled(1.2, 1.6, 0.4, 2.0) * math.gamma(2.2)
    assert lhs == pytest.approx(want, rel=1e-9)
    # antisymmetry is exact
    assert sf.cylinder_kummer_rescaled(1.2, 1.6, 0.4, 2.0) == \
        -sf.cylinder_kummer_rescaled(1.2, 1.6, 2.0, 0.4)
    assert sf.cylinder_kummer_rescaled(1.2, 1.6, 0.7, 0.7) == 0.0


def test_cylinder_kummer1_rescaled():
    want = 1.5977765473885461
    assert sf.cylinder_kummer1_rescaled(1.2, 1.6, 0.4, 2.0, ANALYTIC) == \
        pytest.approx(want, rel=1e-9)
    assert sf.cylinder_kummer1_rescaled(1.2, 1.6, 0.4, 2.0) == pytest.approx(want, abs=1e-5)


def test_cylinder_parabolic():
    x, y = -0.3, 0.9
    want = 0.94294225875209111
    assert sf.cylinder_parabolic(-1.5, x, y) == pytest.approx(want, rel=1e-9)
    # unscaling identity at order nu = 1.5
    nu = 1.5
    scale = math.pi * 2.0 ** -nu / math.gamma(nu / 2) ** 2
    assert sf.cylinder_parabolic_rescaled(nu, x, y) == pytest.approx(scale * want, rel=1e-9)
    assert sf.cylinder_parabolic_rescaled(nu, x, y) == pytest.approx(
        0.69746494995033688, rel=1e-9)
    # reflection through the origin: S(nu; -y, -x) = S(nu; x, y)
    assert sf.cylinder_parabolic(-1.5, -y, -x) == pytest.approx(want, rel=1e-12)
    # antisymmetry is exact
    assert sf.cylinder_parabolic_rescaled(nu, x, y) == \
        -sf.cylinder_parabolic_rescaled(nu, y, x)
    assert sf.cylinder_parabolic_rescaled(nu, 0.4, 0.4) == 0.0


def test_cylinder_parabolic1_rescaled():
    want = -0.55347663393433662
    assert sf.cylinder_parabolic1_rescaled(1.5, -0.3, 0.9, ANALYTIC) == \
        pytest.approx(want, rel=1e-9)
    assert sf.cylinder_parabolic1_rescaled(1.5, -0.3, 0.9) == pytest.approx(want, abs=1e-5)


def test_sinpi_cospi_exact_at_special_points():
    assert sf.sinpi(3.0) == 0.0
    assert sf.sinpi(-12.0) == 0.0
    assert sf.sinpi(1e8) == 0.0
    assert sf.cospi(0.5) == 0.0
    assert sf.cospi(-7.5) == 0.0
    assert sf.sinpi(0.5) == 1.0
    assert sf.sinpi(2.5) == 1.0 and sf.sinpi(1.5) == -1.0
    assert sf.cospi(3.0) == -1.0 and sf.cospi(4.0) == 1.0
    assert sf.sinpi(0.25) == pytest.approx(math.sin(math.pi * 0.25), rel=1e-15)
    assert sf.cospi(-0.3) == pytest.approx(math.cos(math.pi * 0.3), rel=1e-15)


def test_cylinder_second_order_derivatives():
    # the cylinders vanish identically at integer order, so near-integer
    # residues need the second derivative; check against a central
    # difference of the (analytic) first derivative, whose sign is d/d(-nu)
    h = 1e-4
    for nu in (2.0, 3.0):
        d2 = sf.cylinder_parabolic2_rescaled(nu, -1.2, 0.8)
        fd = -(sf.cylinder_parabolic1_rescaled(nu + h, -1.2, 0.8, ANALYTIC)
               - sf.cylinder_parabolic1_rescaled(nu - h, -1.2, 0.8, ANALYTIC)) / (2 * h)
        assert d2 == pytest.approx(fd, rel=1e-6)
        k2 = sf.cylinder_kummer2_rescaled(nu, 1.5, 1.0, 5.0)
        kfd = -(sf.cylinder_kummer1_rescaled(nu + h, 1.5, 1.0, 5.0, ANALYTIC)
                - sf.cylinder_kummer1_rescaled(nu - h, 1.5, 1.0, 5.0, ANALYTIC)) / (2 * h)
        assert k2 == pytest.approx(kfd, rel=1e-6)


# ---------------------------------------------------------------------------
# order-derivative modes agree
# ---------------------------------------------------------------------------

def test_order_derivative_modes_agree():
    # forward-difference truncation is (step/2) f'', so the bulk comparison
    # uses a finer (still valid) step; the fixed-point tests above cover the
    # default step.  Points are drawn from the regime the spectral formulas
    # use: beta = 1 - mu in (1, 2), moderate arguments.
    numeric = sf.OrderDerivativeConfig(step=1e-7)
    rng = np.random.default_rng(7)
    for _ in range(50):
        nu = rng.uniform(0.3, 4.5)
        beta = rng.uniform(1.05, 1.95)
        z = rng.uniform(0.3, 5.0)
        x = rng.uniform(0.5, 2.5)
        y = x + rng.uniform(0.1, 2.0)
        w = rng.uniform(-1.5, 1.5)
        g = rng.uniform(0.2, 1.0)
        pairs = [
            (sf.kummer_u1_rescaled(nu, beta, z, numeric),
             sf.kummer_u1_rescaled(nu, beta, z, ANALYTIC)),
            (sf.parabolic_d1_rescaled(nu, w, numeric),
             sf.parabolic_d1_rescaled(nu, w, ANALYTIC)),
            (sf.cylinder_kummer1_rescaled(nu, beta, x, y, numeric),
             sf.cylinder_kummer1_rescaled(nu, beta, x, y, ANALYTIC)),
            (sf.cylinder_parabolic1_rescaled(nu, w, w + g, numeric),
             sf.cylinder_parabolic1_rescaled(nu, w, w + g, ANALYTIC)),
        ]
        for num, ana in pairs:
            assert num == pytest.approx(ana, abs=1e-5)


# ---------------------------------------------------------------------------
# Laguerre summation identity
# ---------------------------------------------------------------------------

def test_laguerre_bessel_summation():
    # sum_m t^m m!/Gamma(1+a+m) L_m(x) L_m(y) has the closed Bessel-I form;
    # 200 terms reproduce it to 1e-8 for t = e^{-2s}, s >= 0.5
    alpha, x, y = 0.7, 1.2, 0.8
    for s in (0.5, 1.0):
        t = math.exp(-2.0 * s)
        acc = 0.0
        for m in range(200):
            acc += (t ** m / sf.gamma_ratio(m, 1.0 + alpha)
                    * sf.laguerre(m, alpha, x) * sf.laguerre(m, alpha, y))
        closed = (math.exp(-(x + y) * t / (1 - t)) / ((x * y * t) ** (alpha / 2) * (1 - t))
                  * sf.bessel("I", alpha, 2.0 * math.sqrt(x * y * t) / (1 - t)))
        assert acc == pytest.approx(closed, rel=1e-8)


# ---------------------------------------------------------------------------
# wrappers and config
# ---------------------------------------------------------------------------

def test_wrappers():
    assert sf.digamma(1.0) == pytest.approx(-0.5772156649015329, rel=1e-12)
    z = 0.7
    assert sf.laguerre(2, 0.0, z) == pytest.approx(1 - 2 * z + z * z / 2, rel=1e-12)
    assert sf.hermite(3, 0.8) == pytest.approx(8 * 0.8 ** 3 - 12 * 0.8, rel=1e-12)
    assert sf.norm_cdf(0.0) == 0.5
    assert sf.erf(1.0) == pytest.approx(0.8427007929497149, rel=1e-12)


def test_incomplete_gamma():
    a, z = 0.7, 1.3
    lo = sf.gammainc_lower(a, z)
    up = sf.gammainc_upper(a, z)
    assert lo == pytest.approx(1.0797777768644877, rel=1e-12)
    assert up == pytest.approx(0.21827755578307012, rel=1e-12)
    assert lo + up == pytest.approx(math.gamma(a), rel=1e-13)
    assert sf.gammainc_lower(a, z, regularized=True) \
        + sf.gammainc_upper(a, z, regularized=True) == pytest.approx(1.0, rel=1e-13)


def test_order_derivative_config_validation():
    with pytest.raises(ValueError):
        sf.OrderDerivativeConfig(step=0.0)
    with pytest.raises(ValueError):
        sf.OrderDerivativeConfig(step=1e-2)
    with pytest.raises(ValueError):
        sf.OrderDerivativeConfig(mode="central")


def test_backends_bit_identical():
    from lasthit import _mseries_py
    assert sf.BACKEND in ("compiled", "pure")
    for args in [(-8.3, 1.4, 7.7, 10000), (2.0, 0.5, 3.1, 10000), (-60.5, 1.5, 30.0, 10000)]:
        assert sf._m_series(*args) == _mseries_py.m_series(*args)
    psi0 = sf.digamma(-8.3)
    assert sf._m1_series(-8.3, 1.4, 7.7, psi0, 10000) == \
        _mseries_py.m1_series(-8.3, 1.4, 7.7, psi0, 10000)
