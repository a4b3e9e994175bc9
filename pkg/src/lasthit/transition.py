"""Transition densities, free and killed, for the six diffusions.

Closed forms carry the free densities (Gaussian, lognormal, Bessel-I,
Mehler) and the BM/DBM killed-one-barrier images.  Everything else is a
truncated eigenfunction series over the problems enumerated by the eigen
module, or a continuous-spectrum quadrature for the squared Bessel
process above a barrier.  Series results carry a certified geometric
tail bound; quadratures carry the integrator's error estimate plus the
range-truncation bound.

GBM is handled by the monotone map to drifted BM: densities pick up the
Jacobian 1/(sigma y), kill levels map through log(B/f0)/sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import scipy.integrate
import scipy.special as sc

from lasthit import eigen, model, specfun

_SQRT2PI = math.sqrt(2.0 * math.pi)
_MAX_TERMS = 512
_EPS = 4.4e-16
_COEF_REL = 1e-12
_ANALYTIC = specfun.OrderDerivativeConfig(mode="analytic")
# eigenvalues whose Kummer/parabolic order sits this close to an integer hit
# the reflection-formula pole and need limit forms for the residue weights
_NU_INT_TOL = 1e-8


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy: fixed n_terms, or adaptive against tail_tol."""

    n_terms: int | None = None
    tail_tol: float = 1e-10
    quad_abs_tol: float = 1e-10

    def __post_init__(self):
        if self.n_terms is not None and self.n_terms < 1:
            raise ValueError("n_terms must be >= 1")
        if not self.tail_tol > 0.0:
            raise ValueError("tail_tol must be positive")
        if not self.quad_abs_tol > 0.0:
            raise ValueError("quad_abs_tol must be positive")


DEFAULT = SeriesControl()


@dataclass(frozen=True)
class TransitionResult:
    value: float
    terms_used: int
    tail_estimate: float

    def __post_init__(self):
        if not self.value >= -self.tail_estimate:
            raise ValueError("density %g below certified tail %g"
                             % (self.value, self.tail_estimate))


def _result(value: float, terms: int, tail: float) -> TransitionResult:
    return TransitionResult(value, terms, tail)


def _gauss(t: float, d: float) -> float:
    return math.exp(-0.5 * d * d / t) / math.sqrt(2.0 * math.pi * t)


def _check_t(t: float) -> None:
    if not t > 0.0:
        raise ValueError("t must be positive")


def _check_inside(spec: model.ProcessSpec, v: float, name: str) -> None:
    l, r = spec.interval
    if not l < v < r:
        raise ValueError("%s=%g outside the state interval" % (name, v))


# ---------------------------------------------------------------------------
# adaptive series engine


def _sum_series(problem: eigen.EigenProblem, coef, t: float,
                ctrl: SeriesControl) -> tuple[float, int, float]:
    """Sum e^{-lam_n t} coef(n, lam_n) with a geometric tail certificate.

    coef is called once per index; expensive n-dependent normalizations
    should be cached by the caller keyed on (problem, lam).
    """
    fixed = ctrl.n_terms
    want = fixed if fixed is not None else 16
    seq = eigen.eigenvalues(problem, n_max=max(want, 8))
    total = 0.0
    abs_sum = 0.0
    term = 0.0
    small = 0
    i = 0
    while True:
        if i >= len(seq):
            if fixed is not None or len(seq) >= _MAX_TERMS:
                break
            seq = eigen.eigenvalues(problem, n_max=min(2 * len(seq), _MAX_TERMS))
        lam = seq.values[i]
        e = math.exp(-lam * t) if lam * t < 745.0 else 0.0
        term = e * coef(i, lam) if e > 0.0 else 0.0
        total += term
        abs_sum += abs(term)
        i += 1
        if fixed is not None:
            if i >= fixed:
                break
            continue
        # two consecutive small terms: a single one can be a structural
        # zero (sine node, odd Hermite at the origin) mid-series
        if term == 0.0 or abs(term) < ctrl.tail_tol * abs(total):
            small += 1
            if i >= 8 and small >= 2:
                break
        else:
            small = 0
    if fixed is None and i >= _MAX_TERMS and small < 2:
        raise specfun.ConvergenceError(
            "series not converged after %d terms (t=%g too small?)" % (i, t))
    # eigenvalues grow, so the smallest decay ratio from here on is the
    # one across the last computed gap
    if i >= 2 and seq.values[i - 1] > seq.values[i - 2]:
        r = math.exp(-(seq.values[i - 1] - seq.values[i - 2]) * t)
        tail = abs(term) * r / (1.0 - r) if r < 1.0 else math.inf
    else:
        tail = abs(term)
    # abs_sum scales both the summation rounding and the precision of the
    # eigenvalues and norm constants inside each term; in the far tail the
    # series cancels by many orders and that floor dominates the truncation
    return total, i, tail + (_EPS + _COEF_REL) * abs_sum


# ---------------------------------------------------------------------------
# free transition densities


def p(spec: model.ProcessSpec, t: float, x: float, y: float,
      ctrl: SeriesControl = DEFAULT, route: str = "closed") -> TransitionResult:
    """Density of X_t at y started from x, no killing."""
    _check_t(t)
    _check_inside(spec, x, "x")
    _check_inside(spec, y, "y")
    if route not in ("closed", "spectral"):
        raise ValueError("route must be closed or spectral")
    f = spec.family
    if f in ("bm", "dbm", "gbm"):
        if route == "spectral":
            raise ValueError("%s has a purely continuous free spectrum; "
                             "no spectral cross-check route" % f)
        if f == "gbm":
            eq = model.dbm_equivalent(spec)
            xx = model.map_gbm("to_bm", x, spec.f0, spec.sigma)
            yy = model.map_gbm("to_bm", y, spec.f0, spec.sigma)
            v = _gauss(t, yy - xx - eq.mu * t) * model.gbm_map_jacobian(y, spec.sigma)
        else:
            v = _gauss(t, y - x - spec.mu * t)
        return _result(v, 1, _EPS * v)
    if f == "sqb":
        if route == "spectral":
            return _sqb_free_quad(spec, t, x, y, ctrl)
        nu = _sqb_nu(spec)
        z = math.sqrt(x * y) / t
        d = math.sqrt(x) - math.sqrt(y)
        v = ((y / x) ** (0.5 * spec.mu) / (2.0 * t)
             * math.exp(-0.5 * d * d / t) * sc.ive(nu, z))
        return _result(v, 1, _EPS * v)
    if f == "cir":
        if route == "spectral":
            return _cir_free_series(spec, t, x, y, ctrl)
        return _cir_free_closed(spec, t, x, y)
    if route == "spectral":
        return _ou_free_series(spec, t, x, y, ctrl)
    u0 = x - spec.theta
    u1 = y - spec.theta
    s2 = (1.0 - math.exp(-2.0 * spec.gamma1 * t)) / spec.kappa
    v = _gauss(s2, u1 - math.exp(-spec.gamma1 * t) * u0)
    return _result(v, 1, _EPS * v)


def _sqb_nu(spec: model.ProcessSpec) -> float:
    if spec.mu >= 0.0 or spec.bessel_boundary == "reflect":
        return spec.mu
    return abs(spec.mu)


def _sqb_free_quad(spec, t, x, y, ctrl):
    nu = _sqb_nu(spec)
    hi = math.sqrt(40.0 / t)
    sx, sy = math.sqrt(2.0 * x), math.sqrt(2.0 * y)

    def f(u):
        return u * math.exp(-u * u * t) * sc.jv(nu, u * sx) * sc.jv(nu, u * sy)

    val, err, info = scipy.integrate.quad(f, 0.0, hi, epsabs=ctrl.quad_abs_tol,
                                          limit=200, full_output=1)
    pref = (y / x) ** (0.5 * spec.mu)
    cut = math.exp(-hi * hi * t) / (2.0 * t)
    return _result(pref * val, info["neval"], pref * (err + cut) + 1e-300)


def _cir_free_closed(spec, t, x, y):
    ak = abs(spec.kappa)
    anu = abs(spec.mu)
    c = ak / (2.0 * math.sinh(ak * t))
    if c == 0.0 or not math.isfinite(c):
        return _result(0.0, 1, 0.0)
    z = 2.0 * c * math.sqrt(x * y)
    ex = (-ak * x - (1.0 + spec.mu) * ak * t
          - c * math.exp(-ak * t) * (x + y) + z)
    v = c * (y / x) ** (0.5 * spec.mu) * model._exp_ext(ex) * sc.ive(anu, z)
    return _result(v, 1, _EPS * v)


def _cir_free_series(spec, t, x, y, ctrl):
    ak = abs(spec.kappa)
    anu = abs(spec.mu)
    pref = ak ** (1.0 + anu) * x ** anu * math.exp(spec.kappa * x)
    lx, ly = ak * x, ak * y

    def coef(i, lam):
        # lam = 2|kappa|(m+1) with m = i, including the overall e^{-2|k|t}
        m = i
        w = math.exp(sc.gammaln(m + 1.0) - sc.gammaln(1.0 + anu + m))
        return w * specfun.laguerre(m, anu, lx) * specfun.laguerre(m, anu, ly)

    # unkilled spectrum is lam_m = 2|kappa| m; the extra e^{-2|kappa|t}
    # prefactor shifts everything by one step
    total, used, tail = _sum_series(eigen.unkilled(spec), coef, t, ctrl)
    shift = math.exp(-2.0 * ak * t)
    return _result(pref * shift * total, used, pref * shift * tail)


def _ou_free_series(spec, t, x, y, ctrl):
    h = math.sqrt(0.5 * spec.kappa)
    zx, zy = (x - spec.theta) * h, (y - spec.theta) * h
    pref = math.sqrt(spec.kappa / (2.0 * math.pi)) * math.exp(-zy * zy)
    # normalized recurrence: hh_m = H_m / sqrt(2^m m!) stays bounded
    hx0, hy0 = 1.0, 1.0
    hx1, hy1 = math.sqrt(2.0) * zx, math.sqrt(2.0) * zy
    total = hx0 * hy0
    abs_sum = abs(total)
    term = total
    small = 0
    m = 1
    while m < _MAX_TERMS:
        e = math.exp(-m * spec.gamma1 * t)
        term = e * hx1 * hy1
        total += term
        abs_sum += abs(term)
        m += 1
        # odd terms vanish identically on the center line, so only two
        # consecutive small terms signal real convergence
        if abs(term) < ctrl.tail_tol * abs(total):
            small += 1
            if m >= 8 and small >= 2:
                break
        else:
            small = 0
        cx = math.sqrt(2.0 / m)
        cp = math.sqrt((m - 1.0) / m)
        hx0, hx1 = hx1, cx * zx * hx1 - cp * hx0
        hy0, hy1 = hy1, cx * zy * hy1 - cp * hy0
    if m >= _MAX_TERMS:
        raise specfun.ConvergenceError("Hermite series not converged")
    r = math.exp(-spec.gamma1 * t)
    tail = abs(term) * r / (1.0 - r) + _EPS * abs_sum
    return _result(pref * total, m, pref * tail)


# ---------------------------------------------------------------------------
# one kill level


def p_killed_one(spec: model.ProcessSpec, b: float, side: str, t: float,
                 x: float, y: float,
                 ctrl: SeriesControl = DEFAULT) -> TransitionResult:
    """Density of the process killed at b, living below or above it."""
    _check_t(t)
    _check_inside(spec, b, "b")
    killing = model.kill_one(b, side)
    lo, hi = model.killed_interval(spec, killing)
    if not lo < x < hi:
        raise ValueError("x=%g not strictly inside the killed interval" % x)
    if y == b:
        return _result(0.0, 0, 0.0)
    if not lo < y < hi:
        raise ValueError("y=%g outside the killed interval" % y)
    f = spec.family
    if f == "gbm":
        eq = model.dbm_equivalent(spec)
        m = lambda v: model.map_gbm("to_bm", v, spec.f0, spec.sigma)
        r = p_killed_one(eq, m(b), side, t, m(x), m(y), ctrl)
        j = model.gbm_map_jacobian(y, spec.sigma)
        return _result(r.value * j, r.terms_used, r.tail_estimate * j)
    if f in ("bm", "dbm"):
        mu = spec.mu
        v = _gauss(t, y - x - mu * t) - (
            model._exp_ext(2.0 * mu * (b - x) - 0.5 * (x + y - 2.0 * b - mu * t) ** 2 / t)
            / math.sqrt(2.0 * math.pi * t))
        tail = _EPS * (_gauss(t, y - x - mu * t) + abs(v))
        return _result(v, 2, tail)
    if f == "sqb":
        if side == "below":
            return _sqb_one_below(spec, b, t, x, y, ctrl)
        return _sqb_one_above(spec, b, t, x, y, ctrl)
    if f == "cir":
        return _cir_one(spec, b, side, t, x, y, ctrl)
    return _ou_one(spec, b, side, t, x, y, ctrl)


@lru_cache(maxsize=None)
def _sqb_one_norm(problem, lam):
    b = problem.k
    nu = _sqb_nu(problem.spec)
    j = math.sqrt(2.0 * lam * b)
    return 1.0 / (b * sc.jv(nu + 1.0, j) ** 2)


def _sqb_one_below(spec, b, t, x, y, ctrl):
    prob = eigen.plus_at_level(spec, b)
    nu = _sqb_nu(spec)
    rx, ry = math.sqrt(x / b), math.sqrt(y / b)

    def coef(i, lam):
        j = math.sqrt(2.0 * lam * b)
        return _sqb_one_norm(prob, lam) * sc.jv(nu, j * rx) * sc.jv(nu, j * ry)

    total, used, tail = _sum_series(prob, coef, t, ctrl)
    pref = (y / x) ** (0.5 * spec.mu)
    return _result(pref * total, used, pref * tail)


def _sqb_one_above(spec, b, t, x, y, ctrl):
    anu = abs(spec.mu)
    hi = math.sqrt(40.0 / t)
    s2b = math.sqrt(2.0 * b)

    def f(u):
        e = u * u
        jb = sc.jv(anu, u * s2b)
        yb = sc.yv(anu, u * s2b)
        return (u * math.exp(-e * t)
                * specfun.cylinder_bessel(spec.mu, b, x, e)
                * specfun.cylinder_bessel(spec.mu, b, y, e)
                / (jb * jb + yb * yb))

    val, err, info = scipy.integrate.quad(f, 0.0, hi, epsabs=ctrl.quad_abs_tol,
                                          limit=200, full_output=1)
    pref = (y / x) ** (0.5 * spec.mu)
    cut = math.exp(-hi * hi * t)
    return _result(pref * val, info["neval"], pref * (err + cut) + 1e-300)


@lru_cache(maxsize=None)
def _cir_one_norm(problem, lam):
    spec = problem.spec
    ak = abs(spec.kappa)
    beta = 1.0 - spec.mu
    nu = 0.5 * lam / ak - 1.0
    zb = ak * problem.k
    if abs(nu - round(nu)) < _NU_INT_TOL:
        # integer order, hit exactly when zb lands on a polynomial root
        # (e.g. zb = beta): 1/sinpi blows up but the connection formula
        # turns the root condition into a sinpi-free second Kummer M
        head = (2.0 * ak ** (1.0 - spec.mu) * zb ** (1.0 - beta)
                / (beta - 1.0)
                * specfun.kummer_m(1.0 - nu - beta, 2.0 - beta, zb))
        if problem.kind == "plus_at_level":
            return -head / specfun.kummer_m1(-nu, beta, zb)
        return (head * math.gamma(1.0 + nu) * math.gamma(1.0 - nu - beta)
                / (math.gamma(1.0 - beta)
                   * specfun.kummer_u1_rescaled(nu, beta, zb, _ANALYTIC)))
    base = (2.0 * math.pi * ak ** (1.0 - spec.mu)
            / (math.gamma(beta) * specfun.sinpi(nu)))
    if problem.kind == "plus_at_level":
        return (base * specfun.kummer_u_rescaled(nu, beta, zb)
                / specfun.kummer_m1(-nu, beta, zb))
    return (base * specfun.kummer_m(-nu, beta, zb)
            / specfun.kummer_u1_rescaled(nu, beta, zb, _ANALYTIC))


def _cir_one(spec, b, side, t, x, y, ctrl):
    ak = abs(spec.kappa)
    beta = 1.0 - spec.mu
    prob = (eigen.plus_at_level(spec, b) if side == "below"
            else eigen.minus_at_level(spec, b))

    def coef(i, lam):
        nu = 0.5 * lam / ak - 1.0
        if side == "below":
            fx = specfun.kummer_m(-nu, beta, ak * x)
            fy = specfun.kummer_m(-nu, beta, ak * y)
        else:
            fx = specfun.kummer_u_rescaled(nu, beta, ak * x)
            fy = specfun.kummer_u_rescaled(nu, beta, ak * y)
        return _cir_one_norm(prob, lam) * fx * fy

    total, used, tail = _sum_series(prob, coef, t, ctrl)
    pref = 0.5 * x ** (-spec.mu) * math.exp(spec.kappa * x)
    return _result(pref * total, used, pref * tail)


@lru_cache(maxsize=None)
def _ou_one_norm(problem, lam):
    spec = problem.spec
    nu = lam / spec.gamma1
    rk = math.sqrt(spec.kappa)
    zb = rk * (problem.k - spec.theta)
    if problem.kind == "plus_at_level":
        z_num, z_root = zb, -zb
    else:
        z_num, z_root = -zb, zb
    d1_root = specfun.parabolic_d1_rescaled(nu, z_root, _ANALYTIC)
    m = round(nu)
    if m >= 1 and abs(nu - m) < _NU_INT_TOL:
        # integer order: D_m(-z) = (-1)^m D_m(z) zeroes the numerator slot as
        # well, and the gamma pole in 1/w revives the cylinder term the root
        # condition normally kills, so the limit keeps both pieces
        sgn = -1.0 if m % 2 else 1.0
        d1_num = specfun.parabolic_d1_rescaled(nu, z_num, _ANALYTIC)
        return (specfun.ou_gamma_factor(nu) / math.pi
                * (1.0 - sgn * d1_num / d1_root))
    gf = -specfun.ou_gamma_factor(nu) / specfun.sinpi(nu)
    return gf * specfun.parabolic_d_rescaled(nu, z_num) / d1_root


def _ou_one(spec, b, side, t, x, y, ctrl):
    rk = math.sqrt(spec.kappa)
    sgn = -1.0 if side == "below" else 1.0
    zx = sgn * rk * (x - spec.theta)
    zy = sgn * rk * (y - spec.theta)
    prob = (eigen.plus_at_level(spec, b) if side == "below"
            else eigen.minus_at_level(spec, b))

    def coef(i, lam):
        nu = lam / spec.gamma1
        return (_ou_one_norm(prob, lam)
                * specfun.parabolic_d_rescaled(nu, zx)
                * specfun.parabolic_d_rescaled(nu, zy))

    total, used, tail = _sum_series(prob, coef, t, ctrl)
    ux = x - spec.theta
    uy = y - spec.theta
    pref = (math.sqrt(spec.kappa / (2.0 * math.pi))
            * math.exp(0.25 * spec.kappa * (ux * ux - uy * uy)))
    return _result(pref * total, used, pref * tail)


# ---------------------------------------------------------------------------
# two kill levels


def p_killed_two(spec: model.ProcessSpec, a: float, b: float, t: float,
                 x: float, y: float,
                 ctrl: SeriesControl = DEFAULT) -> TransitionResult:
    """Density of the process killed at both a and b, a < x,y < b."""
    _check_t(t)
    killing = model.kill_two(a, b)
    model.validate_killing(spec, killing)
    if not a < x < b:
        raise ValueError("x=%g not strictly inside (a, b)" % x)
    if y == a or y == b:
        return _result(0.0, 0, 0.0)
    if not a < y < b:
        raise ValueError("y=%g outside [a, b]" % y)
    f = spec.family
    if f == "gbm":
        eq = model.dbm_equivalent(spec)
        m = lambda v: model.map_gbm("to_bm", v, spec.f0, spec.sigma)
        r = p_killed_two(eq, m(a), m(b), t, m(x), m(y), ctrl)
        j = model.gbm_map_jacobian(y, spec.sigma)
        return _result(r.value * j, r.terms_used, r.tail_estimate * j)
    if f in ("bm", "dbm"):
        return _dbm_two(spec, a, b, t, x, y, ctrl)
    if f == "sqb":
        return _sqb_two(spec, a, b, t, x, y, ctrl)
    if f == "cir":
        return _cir_two(spec, a, b, t, x, y, ctrl)
    return _ou_two(spec, a, b, t, x, y, ctrl)


def _dbm_two(spec, a, b, t, x, y, ctrl):
    d = b - a
    prob = eigen.interval(spec, a, b)
    sx = math.pi * (x - a) / d
    sy = math.pi * (y - a) / d

    def coef(i, lam):
        n = i + 1
        return math.sin(n * sx) * math.sin(n * sy)

    total, used, tail = _sum_series(prob, coef, t, ctrl)
    # the mu^2 t / 2 damping lives inside the eigenvalues already
    pref = (2.0 / d) * model._exp_ext(spec.mu * (y - x))
    return _result(pref * total, used, pref * tail)


def _sqb_endpoint_ratio(problem, lam):
    # J(za)/J(zb), but through the projection form of the endpoint
    # proportionality: the raw ratio is 0/0 whenever J vanishes at both
    # ends at once, which half-integer orders hit at every eigenvalue
    anu = abs(problem.spec.mu)
    za = math.sqrt(2.0 * lam * problem.a)
    zb = math.sqrt(2.0 * lam * problem.b)
    ja, ya = sc.jv(anu, za), sc.yv(anu, za)
    jb, yb = sc.jv(anu, zb), sc.yv(anu, zb)
    return (ja * ja + ya * ya) / (ja * jb + ya * yb)


@lru_cache(maxsize=None)
def _sqb_two_norm(problem, lam):
    r = _sqb_endpoint_ratio(problem, lam)
    return math.pi ** 2 * lam / (r * r - 1.0)


def _sqb_two(spec, a, b, t, x, y, ctrl):
    prob = eigen.interval(spec, a, b)

    def coef(i, lam):
        return (_sqb_two_norm(prob, lam)
                * specfun.cylinder_bessel(spec.mu, a, x, lam)
                * specfun.cylinder_bessel(spec.mu, a, y, lam))

    total, used, tail = _sum_series(prob, coef, t, ctrl)
    pref = 0.5 * (y / x) ** (0.5 * spec.mu)
    return _result(pref * total, used, pref * tail)


@lru_cache(maxsize=None)
def _cir_two_norm(problem, lam):
    spec = problem.spec
    ak = abs(spec.kappa)
    beta = 1.0 - spec.mu
    nu = 0.5 * lam / ak - 1.0
    m = round(nu)
    if abs(nu - m) < _NU_INT_TOL:
        # doubly degenerate root: the cylinder vanishes identically at
        # integer order, so the slots switch to first derivatives and the
        # denominator to the second (see coef in _cir_two)
        sgn = -1.0 if m % 2 else 1.0
        d2 = specfun.cylinder_kummer2_rescaled(nu, beta, ak * problem.a,
                                               ak * problem.b)
        return -2.0 * sgn / (math.pi * d2)
    s1 = specfun.cylinder_kummer1_rescaled(nu, beta, ak * problem.a,
                                           ak * problem.b, _ANALYTIC)
    return 1.0 / (specfun.sinpi(nu) * s1)


def _cir_two(spec, a, b, t, x, y, ctrl):
    ak = abs(spec.kappa)
    beta = 1.0 - spec.mu
    prob = eigen.interval(spec, a, b)

    def coef(i, lam):
        nu = 0.5 * lam / ak - 1.0
        if abs(nu - round(nu)) < _NU_INT_TOL:
            sx = specfun.cylinder_kummer1_rescaled(nu, beta, ak * a, ak * x,
                                                   _ANALYTIC)
            sy = specfun.cylinder_kummer1_rescaled(nu, beta, ak * y, ak * b,
                                                   _ANALYTIC)
        else:
            sx = specfun.cylinder_kummer_rescaled(nu, beta, ak * a, ak * x)
            sy = specfun.cylinder_kummer_rescaled(nu, beta, ak * y, ak * b)
        return _cir_two_norm(prob, lam) * sx * sy

    total, used, tail = _sum_series(prob, coef, t, ctrl)
    pref = (math.pi * ak ** (1.0 - spec.mu) * x ** (-spec.mu)
            * math.exp(spec.kappa * x) / math.gamma(beta))
    return _result(pref * total, used, pref * tail)


@lru_cache(maxsize=None)
def _ou_two_norm(problem, lam):
    spec = problem.spec
    nu = lam / spec.gamma1
    rk = math.sqrt(spec.kappa)
    za = rk * (problem.a - spec.theta)
    zb = rk * (problem.b - spec.theta)
    m = round(nu)
    if m >= 1 and abs(nu - m) < _NU_INT_TOL:
        # doubly degenerate root, e.g. Hermite zeros landing on both ends
        # of a symmetric interval; mirrors the Kummer rescue in _cir_two
        sgn = -1.0 if m % 2 else 1.0
        d2 = specfun.cylinder_parabolic2_rescaled(nu, za, zb)
        return 2.0 * sgn * specfun.ou_gamma_factor(nu) / (math.pi * d2)
    gf = -specfun.ou_gamma_factor(nu) / specfun.sinpi(nu)
    s1 = specfun.cylinder_parabolic1_rescaled(nu, za, zb, _ANALYTIC)
    return gf / s1


def _ou_two(spec, a, b, t, x, y, ctrl):
    rk = math.sqrt(spec.kappa)
    za = rk * (a - spec.theta)
    zb = rk * (b - spec.theta)
    zx = rk * (x - spec.theta)
    zy = rk * (y - spec.theta)
    prob = eigen.interval(spec, a, b)

    def coef(i, lam):
        nu = lam / spec.gamma1
        if round(nu) >= 1 and abs(nu - round(nu)) < _NU_INT_TOL:
            sx = specfun.cylinder_parabolic1_rescaled(nu, za, zx, _ANALYTIC)
            sy = specfun.cylinder_parabolic1_rescaled(nu, zy, zb, _ANALYTIC)
        else:
            sx = specfun.cylinder_parabolic_rescaled(nu, za, zx)
            sy = specfun.cylinder_parabolic_rescaled(nu, zy, zb)
        return _ou_two_norm(prob, lam) * sx * sy

    total, used, tail = _sum_series(prob, coef, t, ctrl)
    pref = math.sqrt(spec.kappa / (2.0 * math.pi)) * math.exp(-0.5 * zy * zy)
    return _result(pref * total, used, pref * tail)
