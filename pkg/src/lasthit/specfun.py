"""Overflow-safe special functions and their order derivatives.

Scalar kernels shared by every spectral formula in the package:

  * gamma ratios evaluated in log space so they never overflow
  * Kummer M (compensated power series with a high-precision fallback when
    the series cancels catastrophically) and its first-argument derivative
  * rescaled Kummer U and parabolic cylinder D functions that stay finite at
    large order, plus their order derivatives
  * the two-barrier "cylinder" combinations built from Bessel, Kummer and
    parabolic cylinder pairs
  * thin wrappers for digamma, incomplete gammas, Laguerre/Hermite
    polynomials, the normal CDF and erf

Only the rescaled variants are meant for production formulas.  The unscaled
functions (kummer_u, parabolic_d, cylinder_kummer, cylinder_parabolic) exist
for cross-checks and raise OverflowError instead of returning inf.

Everything here is a pure function of its arguments; safe to call from any
number of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import scipy.special as sc

try:
    from lasthit._mseries import m_series as _m_series, m1_series as _m1_series
    BACKEND = "compiled"
except ImportError:  # extension not built; the pure twin is bit-identical
    from lasthit._mseries_py import m_series as _m_series, m1_series as _m1_series
    BACKEND = "pure"

_SQRTPI = math.sqrt(math.pi)
_SQRT2 = math.sqrt(2.0)
_LN2 = math.log(2.0)
_MAX_TERMS = 10000
# Lose more than ~6 digits to cancellation and the double-precision sum is no
# longer trusted; recompute in arbitrary precision.
_CANCEL_RATIO = 1e6
_U_CANCEL = 1e2
_TINY = 1e-300


class ConvergenceError(RuntimeError):
    """A series or iteration failed to converge within its term budget."""


@dataclass(frozen=True)
class OrderDerivativeConfig:
    """How to differentiate w.r.t. the order argument of a special function.

    The numeric mode takes a forward difference with the given step in the
    order slot (the first Kummer argument, or the parabolic cylinder order).
    """

    step: float = 1e-6
    mode: str = "numeric"

    def __post_init__(self):
        if not 0.0 < self.step < 1e-3:
            raise ValueError(f"step must lie in (0, 1e-3), got {self.step}")
        if self.mode not in ("numeric", "analytic"):
            raise ValueError(f"mode must be 'numeric' or 'analytic', got {self.mode!r}")


_DEFAULT_DERIV = OrderDerivativeConfig()


# ---------------------------------------------------------------------------
# gamma ratios
# ---------------------------------------------------------------------------

def gamma_ratio(nu: float, beta: float) -> float:
    """Gamma(nu+beta) / Gamma(nu+1) for nu+beta > 0, nu+1 > 0.

    Computed as exp(lgamma(nu+beta) - lgamma(nu+1)), which is accurate to a
    few ulp at every order and cannot overflow while the ratio itself is
    representable.  The classical shortcut in gamma_ratio_asymptotic carries
    a relative error of about (1-beta)/(12 nu^2) (3e-5 already at nu=40),
    too coarse for the eigenfunction normalizations downstream, so the exact
    form is used at all orders.
    """
    a = nu + beta
    b = nu + 1.0
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"gamma_ratio needs nu+beta > 0 and nu+1 > 0, got {a}, {b}")
    return math.exp(math.lgamma(a) - math.lgamma(b))


def gamma_ratio_asymptotic(nu: float, beta: float) -> float:
    """Stirling form of gamma_ratio for large nu; kept for cross-checks."""
    a = nu + beta
    b = nu + 1.0
    return (a / b) ** (nu + 0.5) * (a / math.e) ** (beta - 1.0)


def gamma_half_ratio(nu: float) -> float:
    """Gamma((nu+1)/2) / Gamma(nu/2), with signs for negative orders.

    Returns 0 at the poles of the denominator (nu a nonpositive even
    integer); raises at poles of the numerator.
    """
    a = 0.5 * (nu + 1.0)
    b = 0.5 * nu
    if b <= 0.0 and b == round(b):
        return 0.0
    if a <= 0.0 and a == round(a):
        raise ValueError(f"gamma pole in numerator at {a}")
    sign = sc.gammasgn(a) * sc.gammasgn(b)
    return sign * math.exp(sc.gammaln(a) - sc.gammaln(b))


def ou_gamma_factor(nu: float) -> float:
    """2^nu Gamma(nu/2)^2 / Gamma(nu+1) for nu > 0, in log space.

    Normalization carried by rescaled parabolic cylinder products; decays
    like sqrt(pi) (nu/2)^{-3/2} for large nu so it never overflows.
    """
    if nu <= 0.0:
        raise ValueError(f"ou_gamma_factor needs nu > 0, got {nu}")
    return math.exp(nu * _LN2 + 2.0 * sc.gammaln(0.5 * nu) - math.lgamma(nu + 1.0))


# ---------------------------------------------------------------------------
# small wrappers
# ---------------------------------------------------------------------------

def sinpi(u: float) -> float:
    """sin(pi u) with argument reduction: exact zeros at integer u.

    Reflection factors like sin(pi(nu+beta)) must vanish identically at
    integers or they leak an e^z-sized Kummer term scaled by ~2e-16.
    """
    m = round(u)
    s = math.sin(math.pi * (u - m))
    return -s if m % 2 else s


def cospi(u: float) -> float:
    # shift identity keeps the exact zeros at half-integers
    return sinpi(u + 0.5)


def digamma(x: float) -> float:
    return float(sc.digamma(x))


def gammainc_lower(a: float, z: float, regularized: bool = False) -> float:
    """Lower incomplete gamma(a, z); unregularized by default."""
    v = float(sc.gammainc(a, z))
    return v if regularized else v * math.gamma(a)


def gammainc_upper(a: float, z: float, regularized: bool = False) -> float:
    """Upper incomplete Gamma(a, z); unregularized by default."""
    v = float(sc.gammaincc(a, z))
    return v if regularized else v * math.gamma(a)


def laguerre(m: int, alpha: float, z: float) -> float:
    """Generalized Laguerre polynomial L_m^(alpha)(z)."""
    return float(sc.eval_genlaguerre(m, alpha, z))


def hermite(m: int, z: float) -> float:
    """Hermite polynomial H_m(z) (physicists' convention)."""
    return float(sc.eval_hermite(m, z))


def norm_cdf(x: float) -> float:
    return float(sc.ndtr(x))


def erf(x: float) -> float:
    return math.erf(x)


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------

_BESSEL = {"J": sc.jv, "Y": sc.yv, "I": sc.iv, "K": sc.kv}


def bessel(kind: str, order: float, z: float) -> float:
    """Bessel function J, Y, I or K of real order.

    Overflow and invalid evaluations raise instead of returning inf/nan.
    """
    try:
        fn = _BESSEL[kind]
    except KeyError:
        raise ValueError(f"kind must be one of J, Y, I, K, got {kind!r}") from None
    if kind in ("Y", "K") and z <= 0.0:
        raise ValueError(f"bessel {kind} needs z > 0, got {z}")
    v = float(fn(order, z))
    if math.isinf(v):
        raise OverflowError(f"bessel {kind}(order={order}, z={z}) exceeds double range")
    if math.isnan(v):
        raise ValueError(f"bessel {kind}(order={order}, z={z}) is not defined")
    return v


# ---------------------------------------------------------------------------
# Kummer M and its first-argument derivative
# ---------------------------------------------------------------------------

def _check_beta(beta: float) -> None:
    if beta <= 0.0 and beta == round(beta):
        raise ValueError(f"second Kummer argument must not be a nonpositive integer, got {beta}")


def _near_nonpositive_int(x: float) -> bool:
    return x <= 0.5 and abs(x - round(x)) < 1e-9 and round(x) <= 0


def _mp_dps(maxt: float, s: float) -> int:
    lost = math.log10(maxt / max(abs(s), _TINY))
    return min(int(lost) + 25, 350)


def _kummer_m_mp(alpha: float, beta: float, z: float, dps: int) -> float:
    with mpmath.workdps(dps):
        try:
            return float(mpmath.hyp1f1(alpha, beta, z))
        except ValueError:
            # the target sits on (or within rounding of) a zero crossing, so
            # no relative precision can be reached; resolve it to an absolute
            # threshold instead, which is all root bracketing ever needs
            return float(mpmath.hyp1f1(alpha, beta, z,
                                       zeroprec=mpmath.mp.prec))


def _kummer_m1_mp(alpha: float, beta: float, z: float, dps: int, max_terms: int) -> float:
    with mpmath.workdps(dps):
        a = mpmath.mpf(alpha)
        b = mpmath.mpf(beta)
        zz = mpmath.mpf(z)
        psi0 = mpmath.digamma(a)
        s = mpmath.mpf(0)
        t = mpmath.mpf(1)
        psi = psi0
        eps = mpmath.mpf(10) ** (-dps - 5)
        small = 0
        for n in range(max_terms):
            psi += 1 / (a + n)
            t *= (a + n) / (b + n) * zz / (n + 1)
            contrib = t * (psi - psi0)
            s += contrib
            if abs(contrib) <= eps * abs(s) + mpmath.mpf(10) ** (-3 * dps):
                small += 1
                if small >= 2:
                    return float(s)
            else:
                small = 0
        raise ConvergenceError(
            f"M1({alpha}, {beta}, {z}) did not converge within {max_terms} terms")


def kummer_m(alpha: float, beta: float, z: float, max_terms: int = _MAX_TERMS) -> float:
    """Confluent hypergeometric M(alpha, beta, z) by compensated power series.

    When the alternating series loses more than ~6 digits to cancellation
    (large negative alpha, the oscillatory eigenvalue regime) the sum is
    recomputed in arbitrary precision sized to the detected loss.
    """
    _check_beta(beta)
    if z == 0.0:
        return 1.0
    s, maxt, n = _m_series(alpha, beta, z, max_terms)
    if n >= max_terms:
        raise ConvergenceError(f"M({alpha}, {beta}, {z}) did not converge within {max_terms} terms")
    if maxt > _CANCEL_RATIO * max(abs(s), _TINY):
        return _kummer_m_mp(alpha, beta, z, _mp_dps(maxt, s))
    return s


def kummer_m1(alpha: float, beta: float, z: float, max_terms: int = _MAX_TERMS) -> float:
    """d/d(alpha) of M(alpha, beta, z), by termwise-differentiated series.

    The digamma factors Psi(alpha+n) - Psi(alpha) are advanced with the
    recurrence Psi(x+1) = Psi(x) + 1/x.  Within 1e-9 of a nonpositive
    integer alpha that recurrence walks into a digamma pole, so the
    derivative is taken numerically in high precision instead.
    """
    _check_beta(beta)
    if _near_nonpositive_int(alpha):
        with mpmath.workdps(40):
            return float(mpmath.diff(lambda t: mpmath.hyp1f1(t, beta, z), alpha))
    if z == 0.0:
        return 0.0
    psi0 = float(sc.digamma(alpha))
    s, maxt, n = _m1_series(alpha, beta, z, psi0, max_terms)
    if n >= max_terms:
        raise ConvergenceError(f"M1({alpha}, {beta}, {z}) did not converge within {max_terms} terms")
    if maxt > _CANCEL_RATIO * max(abs(s), _TINY):
        return _kummer_m1_mp(alpha, beta, z, _mp_dps(maxt, s), max_terms)
    return s


# ---------------------------------------------------------------------------
# Tricomi U: unscaled (testing only) and rescaled
# ---------------------------------------------------------------------------

def _check_beta_noninteger(beta: float) -> None:
    if beta == round(beta):
        raise ValueError(f"sin(pi*beta) vanishes at integer beta = {beta}")


def kummer_u(alpha: float, beta: float, z: float) -> float:
    """Tricomi U(alpha, beta, z) from the two-M reflection formula.

    Testing only: overflows explicitly at large |alpha| where the rescaled
    variant should be used.
    """
    if z <= 0.0:
        raise ValueError(f"kummer_u needs z > 0, got {z}")
    _check_beta_noninteger(beta)
    t1 = kummer_m(alpha, beta, z) * float(sc.rgamma(1.0 + alpha - beta)) / math.gamma(beta)
    t2 = (z ** (1.0 - beta) * kummer_m(1.0 + alpha - beta, 2.0 - beta, z)
          * float(sc.rgamma(alpha)) / math.gamma(2.0 - beta))
    v = math.pi / sinpi(beta) * (t1 - t2)
    if not math.isfinite(v):
        raise OverflowError(f"U({alpha}, {beta}, {z}) exceeds double range; use the rescaled form")
    return v


def _kummer_u_mp(nu: float, beta: float, z: float, dps: int) -> float:
    with mpmath.workdps(dps):
        return float(mpmath.hyperu(-nu, beta, z) / mpmath.gamma(nu + 1.0))


def kummer_u_rescaled(nu: float, beta: float, z: float) -> float:
    """U(-nu, beta, z) / Gamma(nu+1), assembled so no factor overflows.

    The reflection poles are absorbed into sin factors and the ratio
    Gamma(nu+beta)/Gamma(nu+1), which grows only like nu^(beta-1); usable to
    order nu of several hundred.  Past the turning point (z well above 4 nu)
    both M terms grow like e^z while U stays polynomial, so the difference
    is recomputed in arbitrary precision when that cancellation bites.
    """
    if z <= 0.0:
        raise ValueError(f"kummer_u_rescaled needs z > 0, got {z}")
    _check_beta_noninteger(beta)
    if nu <= -1.0:
        raise ValueError(f"kummer_u_rescaled needs nu > -1, got {nu}")
    t1 = (sinpi(nu + beta) * gamma_ratio(nu, beta)
          * kummer_m(-nu, beta, z) / math.gamma(beta))
    t2 = (sinpi(nu) * z ** (1.0 - beta)
          * kummer_m(1.0 - nu - beta, 2.0 - beta, z) / math.gamma(2.0 - beta))
    s = (t1 + t2) / sinpi(beta)
    big = (abs(t1) + abs(t2)) / abs(sinpi(beta))
    # downstream eigenfunction sums cancel across terms, so U needs nearly
    # full relative accuracy, not just the ~1e-10 a 1e6 ratio would leave;
    # the floor keeps dps bounded when s sits on a characteristic root
    if big > _U_CANCEL * max(abs(s), _TINY):
        return _kummer_u_mp(nu, beta, z, _mp_dps(big, max(abs(s), big * 1e-40)))
    return s


def kummer_u1_rescaled(nu: float, beta: float, z: float,
                       deriv: OrderDerivativeConfig | None = None) -> float:
    """Derivative of the rescaled U w.r.t. its first slot alpha = -nu."""
    cfg = deriv or _DEFAULT_DERIV
    if cfg.mode == "numeric":
        return (kummer_u_rescaled(nu - cfg.step, beta, z)
                - kummer_u_rescaled(nu, beta, z)) / cfg.step
    sb = sinpi(beta)
    snb = sinpi(nu + beta)
    cnb = cospi(nu + beta)
    r = gamma_ratio(nu, beta)
    m_a = kummer_m(-nu, beta, z)
    m1_a = kummer_m1(-nu, beta, z)
    m_b = kummer_m(1.0 - nu - beta, 2.0 - beta, z)
    m1_b = kummer_m1(1.0 - nu - beta, 2.0 - beta, z)
    part1 = (r / math.gamma(beta)) * (
        (snb * (digamma(nu + 1.0) - digamma(nu + beta)) - math.pi * cnb) * m_a + snb * m1_a)
    part2 = (z ** (1.0 - beta) / math.gamma(2.0 - beta)) * (
        math.pi * cospi(nu) * m_b - sinpi(nu) * m1_b)
    s = (part1 - part2) / sb
    big = (abs(part1) + abs(part2)) / abs(sb)
    if big > _U_CANCEL * max(abs(s), _TINY):
        with mpmath.workdps(_mp_dps(big, max(abs(s), big * 1e-40))):
            return float(mpmath.diff(
                lambda a: mpmath.hyperu(a, beta, z) / mpmath.gamma(1.0 - a),
                -nu))
    return s


# ---------------------------------------------------------------------------
# parabolic cylinder D: unscaled (testing only) and rescaled
# ---------------------------------------------------------------------------

def parabolic_d(nu: float, z: float) -> float:
    """Weber parabolic cylinder D_nu(z) from its two-Kummer representation.

    Testing only; overflows explicitly at large positive order.
    """
    w = 0.5 * z * z
    v = (2.0 ** (0.5 * nu) * _SQRTPI * math.exp(-0.25 * z * z)
         * (kummer_m(-0.5 * nu, 0.5, w) * float(sc.rgamma(0.5 * (1.0 - nu)))
            - _SQRT2 * z * kummer_m(0.5 * (1.0 - nu), 1.5, w) * float(sc.rgamma(-0.5 * nu))))
    if not math.isfinite(v):
        raise OverflowError(f"D_{nu}({z}) exceeds double range; use the rescaled form")
    return v


def _parabolic_d_mp(nu: float, z: float, dps: int) -> float:
    with mpmath.workdps(dps):
        return float(_SQRTPI * mpmath.mpf(2.0) ** (-0.5 * nu)
                     * mpmath.pcfd(nu, z) / mpmath.gamma(0.5 * nu))


def parabolic_d_rescaled(nu: float, z: float) -> float:
    """sqrt(pi) 2^(-nu/2) D_nu(z) / Gamma(nu/2), finite at large order.

    Assembled directly from Kummer M parts; the only order-dependent
    coefficients are Gamma((nu+1)/2)/Gamma(nu/2) ~ sqrt(nu/2) and nu itself.
    Valid for nu > -1 (all positive orders included).  At large positive z
    the recessive D decays like e^(-z^2/4) while both M parts grow like
    e^(+z^2/4), so the combination is recomputed in arbitrary precision
    once that cancellation eats the double mantissa.
    """
    w = 0.5 * z * z
    g = gamma_half_ratio(nu)
    t1 = g * cospi(0.5 * nu) * kummer_m(-0.5 * nu, 0.5, w)
    t2 = ((nu / _SQRT2) * sinpi(0.5 * nu) * z
          * kummer_m(0.5 * (1.0 - nu), 1.5, w))
    e = math.exp(-0.25 * z * z)
    s = e * (t1 + t2)
    big = e * (abs(t1) + abs(t2))
    if not math.isfinite(s) or big > _U_CANCEL * max(abs(s), _TINY):
        if math.isfinite(big):
            dps = _mp_dps(big, max(abs(s), big * 1e-40))
        else:
            dps = min(int(0.22 * z * z) + 40, 350)
        return _parabolic_d_mp(nu, z, dps)
    return s


def parabolic_d1_rescaled(nu: float, z: float,
                          deriv: OrderDerivativeConfig | None = None) -> float:
    """Derivative of the rescaled D w.r.t. the order nu.

    Analytic mode needs nu > 0 (it evaluates digamma(nu/2)); the numeric
    default has no such restriction.
    """
    cfg = deriv or _DEFAULT_DERIV
    if cfg.mode == "numeric":
        return (parabolic_d_rescaled(nu + cfg.step, z)
                - parabolic_d_rescaled(nu, z)) / cfg.step
    if nu <= 0.0:
        raise ValueError(f"analytic order derivative needs nu > 0, got {nu}")
    w = 0.5 * z * z
    g = gamma_half_ratio(nu)
    c = cospi(0.5 * nu)
    s = sinpi(0.5 * nu)
    m_a = kummer_m(-0.5 * nu, 0.5, w)
    m1_a = kummer_m1(-0.5 * nu, 0.5, w)
    m_b = kummer_m(0.5 * (1.0 - nu), 1.5, w)
    m1_b = kummer_m1(0.5 * (1.0 - nu), 1.5, w)
    dg = 0.5 * (digamma(0.5 * (nu + 1.0)) - digamma(0.5 * nu))
    p1 = g * ((dg * c - 0.5 * math.pi * s) * m_a - 0.5 * c * m1_a)
    p2 = (z * ((1.0 / _SQRT2) * s + (math.pi * nu / (2.0 * _SQRT2)) * c) * m_b
          - (nu / (2.0 * _SQRT2)) * s * z * m1_b)
    e = math.exp(-0.25 * z * z)
    v = e * (p1 + p2)
    big = e * (abs(p1) + abs(p2))
    if not math.isfinite(v) or big > _U_CANCEL * max(abs(v), _TINY):
        if math.isfinite(big):
            dps = _mp_dps(big, max(abs(v), big * 1e-40))
        else:
            dps = min(int(0.22 * z * z) + 40, 350)
        with mpmath.workdps(dps):
            return float(mpmath.diff(
                lambda a: (_SQRTPI * mpmath.mpf(2.0) ** (-0.5 * a)
                           * mpmath.pcfd(a, z) / mpmath.gamma(0.5 * a)), nu))
    return v


# ---------------------------------------------------------------------------
# cylinder combinations
# ---------------------------------------------------------------------------

def cylinder_bessel(mu: float, x: float, y: float, lam: float) -> float:
    """J_mu(sqrt(2 lam x)) Y_mu(sqrt(2 lam y)) - Y_mu(...x) J_mu(...y).

    The J/Y cross product is even in the order, so |mu| is used and the
    mu -> -mu symmetry holds exactly.
    """
    if x <= 0.0 or y <= 0.0 or lam <= 0.0:
        raise ValueError(f"cylinder_bessel needs x, y, lam > 0, got {x}, {y}, {lam}")
    m = abs(mu)
    u = math.sqrt(2.0 * lam * x)
    v = math.sqrt(2.0 * lam * y)
    return float(sc.jv(m, u) * sc.yv(m, v) - sc.yv(m, u) * sc.jv(m, v))


def cylinder_kummer(alpha: float, beta: float, x: float, y: float) -> float:
    """S(alpha, beta; x, y) = M(x)U(y) - U(x)M(y).  Testing only."""
    v = (kummer_m(alpha, beta, x) * kummer_u(alpha, beta, y)
         - kummer_u(alpha, beta, x) * kummer_m(alpha, beta, y))
    if not math.isfinite(v):
        raise OverflowError(f"cylinder_kummer({alpha}, {beta}, {x}, {y}) exceeds double range")
    return v


def cylinder_kummer_rescaled(nu: float, beta: float, x: float, y: float) -> float:
    """S(-nu, beta; x, y) / Gamma(nu+1), via the rescaled U.  Antisymmetric in (x, y)."""
    m_x = kummer_m(-nu, beta, x)
    m_y = kummer_m(-nu, beta, y)
    u_x = kummer_u_rescaled(nu, beta, x)
    u_y = kummer_u_rescaled(nu, beta, y)
    return m_x * u_y - u_x * m_y


def cylinder_kummer1_rescaled(nu: float, beta: float, x: float, y: float,
                              deriv: OrderDerivativeConfig | None = None) -> float:
    """Derivative of the rescaled Kummer cylinder w.r.t. its slot alpha = -nu."""
    cfg = deriv or _DEFAULT_DERIV
    if cfg.mode == "numeric":
        return (cylinder_kummer_rescaled(nu - cfg.step, beta, x, y)
                - cylinder_kummer_rescaled(nu, beta, x, y)) / cfg.step
    acfg = OrderDerivativeConfig(step=cfg.step, mode="analytic")
    m_x = kummer_m(-nu, beta, x)
    m_y = kummer_m(-nu, beta, y)
    u_x = kummer_u_rescaled(nu, beta, x)
    u_y = kummer_u_rescaled(nu, beta, y)
    m1_x = kummer_m1(-nu, beta, x)
    m1_y = kummer_m1(-nu, beta, y)
    u1_x = kummer_u1_rescaled(nu, beta, x, acfg)
    u1_y = kummer_u1_rescaled(nu, beta, y, acfg)
    return m1_x * u_y + m_x * u1_y - u1_x * m_y - u_x * m1_y


def cylinder_parabolic(nu: float, x: float, y: float) -> float:
    """S(nu; x, y) = e^((x^2+y^2)/4) [D_-nu(x)D_-nu(-y) - D_-nu(y)D_-nu(-x)].

    Testing only; the first slot carries the sign convention, so the
    rescaled variant at order nu corresponds to cylinder_parabolic(-nu, ...).
    """
    e = math.exp(0.25 * (x * x + y * y))
    v = e * (parabolic_d(-nu, x) * parabolic_d(-nu, -y)
             - parabolic_d(-nu, y) * parabolic_d(-nu, -x))
    if not math.isfinite(v):
        raise OverflowError(f"cylinder_parabolic({nu}, {x}, {y}) exceeds double range")
    return v


def cylinder_parabolic_rescaled(nu: float, x: float, y: float) -> float:
    """pi 2^(-nu) / Gamma(nu/2)^2 times S(-nu; x, y).  Antisymmetric in (x, y)."""
    e = math.exp(0.25 * (x * x + y * y))
    d_x = parabolic_d_rescaled(nu, x)
    d_mx = parabolic_d_rescaled(nu, -x)
    d_y = parabolic_d_rescaled(nu, y)
    d_my = parabolic_d_rescaled(nu, -y)
    return e * (d_x * d_my - d_y * d_mx)


def cylinder_parabolic1_rescaled(nu: float, x: float, y: float,
                                 deriv: OrderDerivativeConfig | None = None) -> float:
    """Derivative of the rescaled parabolic cylinder pair w.r.t. its slot -nu."""
    cfg = deriv or _DEFAULT_DERIV
    if cfg.mode == "numeric":
        return (cylinder_parabolic_rescaled(nu - cfg.step, x, y)
                - cylinder_parabolic_rescaled(nu, x, y)) / cfg.step
    acfg = OrderDerivativeConfig(step=cfg.step, mode="analytic")
    e = math.exp(0.25 * (x * x + y * y))
    d_x = parabolic_d_rescaled(nu, x)
    d_mx = parabolic_d_rescaled(nu, -x)
    d_y = parabolic_d_rescaled(nu, y)
    d_my = parabolic_d_rescaled(nu, -y)
    d1_x = parabolic_d1_rescaled(nu, x, acfg)
    d1_mx = parabolic_d1_rescaled(nu, -x, acfg)
    d1_y = parabolic_d1_rescaled(nu, y, acfg)
    d1_my = parabolic_d1_rescaled(nu, -y, acfg)
    return e * (d_mx * d1_y + d_y * d1_mx - d_my * d1_x - d_x * d1_my)


def cylinder_kummer2_rescaled(nu: float, beta: float, x: float, y: float) -> float:
    """Second order-derivative of the rescaled Kummer cylinder.

    At integer nu the cylinder vanishes identically in (x, y) because
    U(-m, beta, z) is proportional to M(-m, beta, z); interval eigenvalues
    sitting on an integer therefore make both the cylinder and its first
    derivative vanish, and residues need this second derivative.  Computed
    in extended precision, so keep it out of per-point hot paths.
    """
    with mpmath.workdps(40):
        mb, mx, my = mpmath.mpf(beta), mpmath.mpf(x), mpmath.mpf(y)

        def f(v):
            g = mpmath.gamma(v + 1)
            return (mpmath.hyp1f1(-v, mb, mx) * mpmath.hyperu(-v, mb, my) / g
                    - mpmath.hyperu(-v, mb, mx) / g * mpmath.hyp1f1(-v, mb, my))

        return float(mpmath.diff(f, mpmath.mpf(nu), n=2))


def cylinder_parabolic2_rescaled(nu: float, x: float, y: float) -> float:
    """Second order-derivative of the rescaled parabolic cylinder pair.

    Same role as cylinder_kummer2_rescaled: D_m(-z) = (-1)^m D_m(z) makes
    the cylinder vanish identically at integer order, so doubly degenerate
    interval eigenvalues need the second derivative.  Extended precision.
    """
    with mpmath.workdps(40):
        mx, my = mpmath.mpf(x), mpmath.mpf(y)
        e = mpmath.exp(0.25 * (mx * mx + my * my))
        rp = mpmath.sqrt(mpmath.pi)

        def dt(v, z):
            return rp * mpmath.mpf(2.0) ** (-0.5 * v) * mpmath.pcfd(v, z) / mpmath.gamma(0.5 * v)

        def f(v):
            return e * (dt(v, mx) * dt(v, -my) - dt(v, my) * dt(v, -mx))

        return float(mpmath.diff(f, mpmath.mpf(nu), n=2))
