"""Declarative descriptions of the six solvable diffusions.

Each process is a value object (family + parameters + state interval)
together with the analytic ingredients every downstream formula consumes:

  * scale density s(x), speed density m(x), scale function S[x,y]
  * boundary classification at both endpoints (reachability + whether the
    spectrum coming from that end is discrete or has a continuous band)
  * the fundamental pair phi_plus / phi_minus (increasing / decreasing
    solutions of G phi = lam phi on the resolvent ray lam > 0) and their
    Wronskian factor w_lam, with W[phi_minus, phi_plus](x) = w_lam * s(x)
  * the generalized cylinder function phi(x, y; lam) and the Green
    functions for the free, one-barrier and two-barrier processes

Families: bm (standard Brownian motion), dbm (drift mu), gbm (geometric,
handled exclusively through the log map onto dbm), sqb (squared Bessel,
index mu, with a kill/reflect choice at 0 when mu is in (-1, 0)), cir
(square-root mean reversion in the transient regime kappa < 0, mu < 0),
ou (Ornstein-Uhlenbeck, kappa > 0, gamma1 > 0, optional level shift).

Everything is immutable and pure; thread-safe throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import mpmath
import scipy.integrate
import scipy.special as sc

from lasthit import specfun

FAMILIES = ("bm", "dbm", "gbm", "sqb", "cir", "ou")

_INF = math.inf


def _exp_ext(v: float) -> float:
    """exp() extended to +-inf and saturating instead of overflowing."""
    if v > 709.0:
        return _INF
    if v < -745.0:
        return 0.0
    return math.exp(v)


def _pow_ext(x: float, p: float) -> float:
    """x**p for x >= 0 with the monotone limits at 0 and +inf."""
    if p == 0.0:
        return 1.0
    if x == 0.0:
        return _INF if p < 0.0 else 0.0
    if x == _INF:
        return 0.0 if p < 0.0 else _INF
    return x ** p


@dataclass(frozen=True)
class ProcessSpec:
    """One diffusion family with its parameters.

    Unused parameter slots stay at their defaults; __post_init__ enforces
    the per-family constraints.  bessel_boundary picks the condition at 0
    for sqb when mu is in (-1, 0) and must be omitted otherwise.
    """

    family: str
    mu: float = 0.0
    sigma: float = 0.0
    f0: float = 0.0
    kappa: float = 0.0
    gamma1: float = 0.0
    theta: float = 0.0
    bessel_boundary: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError("unknown family %r" % (self.family,))
        if self.family == "bm" and self.mu != 0.0:
            raise ValueError("bm has no drift parameter; use dbm")
        if self.family == "gbm":
            if self.sigma <= 0.0 or self.f0 <= 0.0:
                raise ValueError("gbm needs sigma > 0 and f0 > 0")
        if self.family == "sqb":
            regular = -1.0 < self.mu < 0.0
            if regular and self.bessel_boundary not in ("kill", "reflect"):
                raise ValueError(
                    "sqb with mu in (-1, 0) has a regular boundary at 0; "
                    "choose bessel_boundary='kill' or 'reflect'")
            if not regular and self.bessel_boundary is not None:
                raise ValueError(
                    "bessel_boundary only applies to sqb with mu in (-1, 0)")
        if self.family == "cir" and not (self.kappa < 0.0 and self.mu < 0.0):
            raise ValueError("cir is implemented for kappa < 0 and mu < 0")
        if self.family == "ou" and not (self.kappa > 0.0 and self.gamma1 > 0.0):
            raise ValueError("ou needs kappa > 0 and gamma1 > 0")

    @property
    def interval(self) -> tuple[float, float]:
        """Open state interval (l, r)."""
        if self.family in ("gbm", "sqb", "cir"):
            return (0.0, _INF)
        return (-_INF, _INF)


def bm() -> ProcessSpec:
    return ProcessSpec("bm")


def dbm(mu: float) -> ProcessSpec:
    return ProcessSpec("dbm", mu=mu)


def gbm(mu: float, sigma: float, f0: float) -> ProcessSpec:
    return ProcessSpec("gbm", mu=mu, sigma=sigma, f0=f0)


def sqb(mu: float, boundary: str | None = None) -> ProcessSpec:
    return ProcessSpec("sqb", mu=mu, bessel_boundary=boundary)


def cir(mu: float, kappa: float) -> ProcessSpec:
    return ProcessSpec("cir", mu=mu, kappa=kappa)


def ou(kappa: float, gamma1: float, theta: float = 0.0) -> ProcessSpec:
    return ProcessSpec("ou", kappa=kappa, gamma1=gamma1, theta=theta)


def dbm_equivalent(spec: ProcessSpec) -> ProcessSpec:
    """The drifted BM a gbm spec maps onto: drift (mu - sigma^2/2) / sigma."""
    if spec.family != "gbm":
        raise ValueError("dbm_equivalent is defined for gbm only")
    return dbm((spec.mu - 0.5 * spec.sigma ** 2) / spec.sigma)


def _spectral_spec(spec: ProcessSpec) -> ProcessSpec:
    if spec.family == "gbm":
        raise ValueError(
            "gbm has no direct spectral objects; map to dbm with "
            "map_gbm / dbm_equivalent first")
    return spec


@dataclass(frozen=True)
class BoundaryClass:
    """Feller class of one endpoint plus its spectral character.

    osc is "NONOSC" when the end contributes only discrete spectrum, or
    "O-NO" when there is a continuous band above the given cutoff (and the
    cutoff field is present exactly in that case).
    """

    kind: str
    osc: str
    cutoff: float | None = None

    _KINDS = ("entrance-not-exit", "exit-not-entrance", "regular-killing",
              "regular-reflecting", "natural-attracting",
              "natural-nonattracting")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError("unknown boundary kind %r" % (self.kind,))
        if self.osc not in ("NONOSC", "O-NO"):
            raise ValueError("osc must be NONOSC or O-NO")
        if (self.cutoff is not None) != (self.osc == "O-NO"):
            raise ValueError("cutoff present iff osc is O-NO")
        if self.cutoff is not None and self.cutoff < 0.0:
            raise ValueError("cutoff must be >= 0")


def boundary_classification(spec: ProcessSpec) -> tuple[BoundaryClass, BoundaryClass]:
    """(left endpoint, right endpoint) classes, hard-coded per family."""
    if spec.family in ("bm", "dbm", "gbm"):
        mu = spec.mu if spec.family != "gbm" else dbm_equivalent(spec).mu
        cut = 0.5 * mu * mu
        left = "natural-attracting" if mu < 0.0 else "natural-nonattracting"
        right = "natural-attracting" if mu > 0.0 else "natural-nonattracting"
        return (BoundaryClass(left, "O-NO", cut),
                BoundaryClass(right, "O-NO", cut))
    if spec.family == "sqb":
        if spec.mu >= 0.0:
            at0 = "entrance-not-exit"
        elif spec.mu <= -1.0:
            at0 = "exit-not-entrance"
        elif spec.bessel_boundary == "kill":
            at0 = "regular-killing"
        else:
            at0 = "regular-reflecting"
        atinf = "natural-attracting" if spec.mu > 0.0 else "natural-nonattracting"
        return (BoundaryClass(at0, "NONOSC"),
                BoundaryClass(atinf, "O-NO", 0.0))
    if spec.family == "cir":
        at0 = "exit-not-entrance" if spec.mu <= -1.0 else "regular-killing"
        return (BoundaryClass(at0, "NONOSC"),
                BoundaryClass("natural-attracting", "NONOSC"))
    # ou: mean reversion keeps both ends unreachable and the spectrum discrete
    return (BoundaryClass("natural-nonattracting", "NONOSC"),
            BoundaryClass("natural-nonattracting", "NONOSC"))


@dataclass(frozen=True)
class KillingConfig:
    """No killing, one absorbing level, or two absorbing levels.

    mode "one" keeps the side of b the process lives on ("below" or
    "above"); mode "two" kills at both a and b with a < b.
    """

    mode: str = "none"
    a: float | None = None
    b: float | None = None
    side: str | None = None

    def __post_init__(self):
        if self.mode not in ("none", "one", "two"):
            raise ValueError("mode must be none, one or two")
        if self.mode == "none" and not (self.a is None and self.b is None
                                        and self.side is None):
            raise ValueError("mode none takes no levels")
        if self.mode == "one":
            if self.b is None or self.a is not None:
                raise ValueError("mode one takes a single level b")
            if self.side not in ("below", "above"):
                raise ValueError("side must be below or above")
        if self.mode == "two":
            if self.a is None or self.b is None or self.side is not None:
                raise ValueError("mode two takes levels a and b")
            if not self.a < self.b:
                raise ValueError("mode two needs a < b")


def no_killing() -> KillingConfig:
    return KillingConfig()


def kill_one(b: float, side: str) -> KillingConfig:
    return KillingConfig(mode="one", b=b, side=side)


def kill_two(a: float, b: float) -> KillingConfig:
    return KillingConfig(mode="two", a=a, b=b)


def validate_killing(spec: ProcessSpec, killing: KillingConfig) -> None:
    """Check the kill levels sit strictly inside the state interval."""
    l, r = spec.interval
    for level in (killing.a, killing.b):
        if level is not None and not l < level < r:
            raise ValueError("kill level %g outside state interval" % level)


def killed_interval(spec: ProcessSpec, killing: KillingConfig) -> tuple[float, float]:
    """Open interval the killed process lives on."""
    validate_killing(spec, killing)
    l, r = spec.interval
    if killing.mode == "one":
        return (l, killing.b) if killing.side == "below" else (killing.b, r)
    if killing.mode == "two":
        return (killing.a, killing.b)
    return (l, r)


def _check_inside(spec: ProcessSpec, x: float) -> None:
    l, r = spec.interval
    if not l < x < r:
        raise ValueError("x=%g outside the open state interval" % x)


def scale_density(spec: ProcessSpec, x: float) -> float:
    _check_inside(spec, x)
    f = _spectral_spec(spec).family
    if f in ("bm", "dbm"):
        return _exp_ext(-2.0 * spec.mu * x)
    if f == "sqb":
        return x ** (-1.0 - spec.mu)
    if f == "cir":
        return x ** (-1.0 - spec.mu) * math.exp(spec.kappa * x)
    u = x - spec.theta
    return _exp_ext(0.5 * spec.kappa * u * u)


def speed_density(spec: ProcessSpec, x: float) -> float:
    _check_inside(spec, x)
    f = _spectral_spec(spec).family
    if f in ("bm", "dbm"):
        return 2.0 * _exp_ext(2.0 * spec.mu * x)
    if f == "sqb":
        return 0.5 * x ** spec.mu
    if f == "cir":
        return 0.5 * x ** spec.mu * math.exp(-spec.kappa * x)
    u = x - spec.theta
    return (spec.kappa / spec.gamma1) * _exp_ext(-0.5 * spec.kappa * u * u)


def generator_coefficients(spec: ProcessSpec, x: float) -> tuple[float, float]:
    """(A, B) with the generator acting as A f'' + B f'."""
    _check_inside(spec, x)
    f = spec.family
    if f in ("bm", "dbm"):
        return 0.5, spec.mu
    if f == "gbm":
        return 0.5 * spec.sigma ** 2 * x * x, spec.mu * x
    if f == "sqb":
        return 2.0 * x, 2.0 * (spec.mu + 1.0)
    if f == "cir":
        return 2.0 * x, 2.0 * (spec.mu + 1.0 - spec.kappa * x)
    return spec.gamma1 / spec.kappa, -spec.gamma1 * (x - spec.theta)


def scale_function(spec: ProcessSpec, x: float, y: float) -> float:
    """S[x, y], the scale measure of [x, y]; one-sided limits allowed.

    Returns +inf where the defining integral diverges (natural and
    entrance boundaries).
    """
    f = _spectral_spec(spec).family
    if not x <= y:
        raise ValueError("scale_function needs x <= y")
    if x == y:
        return 0.0
    if f in ("bm", "dbm"):
        mu = spec.mu
        if mu == 0.0:
            return y - x
        return (_exp_ext(-2.0 * mu * x) - _exp_ext(-2.0 * mu * y)) / (2.0 * mu)
    if f == "sqb":
        mu = spec.mu
        if mu == 0.0:
            if x == 0.0 or y == _INF:
                return _INF
            return math.log(y / x)
        return (_pow_ext(x, -mu) - _pow_ext(y, -mu)) / mu
    if f == "cir":
        am = abs(spec.mu)
        ak = abs(spec.kappa)
        lo = specfun.gammainc_lower(am, ak * x) if x > 0.0 else 0.0
        hi = specfun.gammainc_lower(am, ak * y) if y < _INF else math.gamma(am)
        return ak ** spec.mu * (hi - lo)
    if x == -_INF or y == _INF:
        return _INF
    k, th = spec.kappa, spec.theta
    val, _ = scipy.integrate.quad(
        lambda u: math.exp(0.5 * k * (u - th) ** 2), x, y, epsabs=1e-12)
    return val


@dataclass(frozen=True)
class FundamentalPair:
    """Increasing/decreasing solutions on the resolvent ray and w_lam.

    phi_plus(lam, x) increases in x, phi_minus(lam, x) decreases, and
    phi_minus * phi_plus' - phi_plus * phi_minus' = wronskian_factor(lam)
    times the scale density.
    """

    phi_plus: Callable[[float, float], float]
    phi_minus: Callable[[float, float], float]
    wronskian_factor: Callable[[float], float]


def _sqb_nu(spec: ProcessSpec) -> float:
    """Index of the increasing solution: the boundary condition at 0 picks
    between the two Bessel branches when 0 is regular."""
    if spec.mu >= 0.0 or spec.bessel_boundary == "reflect":
        return spec.mu
    return abs(spec.mu)


def fundamental_pair(spec: ProcessSpec) -> FundamentalPair:
    f = _spectral_spec(spec).family
    if f in ("bm", "dbm"):
        mu = spec.mu

        def plus(lam, x, mu=mu):
            return _exp_ext((math.sqrt(2.0 * lam + mu * mu) - mu) * x)

        def minus(lam, x, mu=mu):
            return _exp_ext(-(math.sqrt(2.0 * lam + mu * mu) + mu) * x)

        def wf(lam, mu=mu):
            return 2.0 * math.sqrt(2.0 * lam + mu * mu)

        return FundamentalPair(plus, minus, wf)
    if f == "sqb":
        mu, nu = spec.mu, _sqb_nu(spec)

        def plus(lam, x, mu=mu, nu=nu):
            return x ** (-0.5 * mu) * sc.iv(nu, math.sqrt(2.0 * lam * x))

        def minus(lam, x, mu=mu):
            return x ** (-0.5 * mu) * sc.kv(abs(mu), math.sqrt(2.0 * lam * x))

        return FundamentalPair(plus, minus, lambda lam: 0.5)
    if f == "cir":
        mu, ak = spec.mu, abs(spec.kappa)

        def plus(lam, x, mu=mu, ak=ak):
            a = 0.5 * lam / ak + 1.0
            return x ** (-mu) * math.exp(-ak * x) * specfun.kummer_m(a, 1.0 - mu, ak * x)

        def minus(lam, x, mu=mu, ak=ak):
            # resolvent-ray U (first argument > 0): mpmath is the accurate
            # evaluator there; this path is diagnostics-grade, not hot
            a = 0.5 * lam / ak + 1.0
            return x ** (-mu) * math.exp(-ak * x) * float(mpmath.hyperu(a, 1.0 - mu, ak * x))

        def wf(lam, mu=mu, ak=ak):
            return ak ** mu * math.exp(
                sc.gammaln(1.0 - mu) - sc.gammaln(0.5 * lam / ak + 1.0))

        return FundamentalPair(plus, minus, wf)
    k, g1, th = spec.kappa, spec.gamma1, spec.theta
    rk = math.sqrt(k)

    def plus(lam, x, g1=g1, rk=rk, th=th):
        u = x - th
        return math.exp(0.25 * k * u * u) * float(mpmath.pcfd(-lam / g1, -rk * u))

    def minus(lam, x, g1=g1, rk=rk, th=th):
        u = x - th
        return math.exp(0.25 * k * u * u) * float(mpmath.pcfd(-lam / g1, rk * u))

    def wf(lam, g1=g1, k=k):
        return math.sqrt(2.0 * math.pi * k) * sc.rgamma(lam / g1)

    return FundamentalPair(plus, minus, wf)


def cylinder(spec: ProcessSpec, x: float, y: float, lam: float) -> float:
    """Generalized cylinder phi(x, y; lam) for the pair above.

    Antisymmetric in (x, y).  Valid on the whole real lam line: negative
    lam is the spectral side, where the oscillatory closed forms take
    over (those are the characteristic functions of the two-barrier
    eigenvalue problems).
    """
    f = _spectral_spec(spec).family
    _check_inside(spec, x)
    _check_inside(spec, y)
    if f in ("bm", "dbm"):
        mu = spec.mu
        c = 2.0 * lam + mu * mu
        if c >= 0.0:
            s = math.sqrt(c)
            return (_exp_ext(s * (y - x) - mu * (x + y))
                    - _exp_ext(-s * (y - x) - mu * (x + y)))
        q = math.sqrt(-c)
        return 2.0 * _exp_ext(-mu * (x + y)) * math.sin(q * (y - x))
    if f == "sqb":
        mu = spec.mu
        if lam >= 0.0:
            am = abs(mu)
            zx = math.sqrt(2.0 * lam * x)
            zy = math.sqrt(2.0 * lam * y)
            pref = (x * y) ** (-0.5 * mu)
            return pref * (math.exp(zy - zx) * sc.kve(am, zx) * sc.ive(am, zy)
                           - math.exp(zx - zy) * sc.kve(am, zy) * sc.ive(am, zx))
        pref = 0.5 * math.pi * (x * y) ** (-0.5 * mu)
        return pref * specfun.cylinder_bessel(mu, x, y, -lam)
    if f == "cir":
        mu, ak = spec.mu, abs(spec.kappa)
        beta = 1.0 - mu
        pref = (x * y) ** (-mu) * math.exp(-ak * (x + y))
        if lam >= 0.0:
            a = 0.5 * lam / ak + 1.0
            mx = specfun.kummer_m(a, beta, ak * x)
            my = specfun.kummer_m(a, beta, ak * y)
            ux = float(mpmath.hyperu(a, beta, ak * x))
            uy = float(mpmath.hyperu(a, beta, ak * y))
            return pref * (ux * my - uy * mx)
        nu = -0.5 * lam / ak - 1.0
        return (pref * math.gamma(nu + 1.0)
                * specfun.cylinder_kummer_rescaled(nu, beta, ak * y, ak * x))
    rk = math.sqrt(spec.kappa)
    return specfun.cylinder_parabolic(
        lam / spec.gamma1, rk * (x - spec.theta), rk * (y - spec.theta))


def green(spec: ProcessSpec, killing: KillingConfig, lam: float,
          x: float, y: float) -> float:
    """Resolvent kernel G(lam; x, y) of the (possibly killed) process.

    Requires lam > 0; used by diagnostics and two-route checks, so it is
    written for clarity over speed.
    """
    if not lam > 0.0:
        raise ValueError("green needs lam > 0")
    lo_b, hi_b = killed_interval(spec, killing)
    levels = {killing.a, killing.b} - {None}
    for pt in (x, y):
        # kill levels themselves are allowed (G vanishes there)
        if not lo_b < pt < hi_b and pt not in levels:
            raise ValueError("point %g outside the killed interval" % pt)
    pair = fundamental_pair(spec)
    m = speed_density(spec, y)
    w = pair.wronskian_factor(lam)
    lo, hi = min(x, y), max(x, y)
    if killing.mode == "none":
        return m / w * pair.phi_plus(lam, lo) * pair.phi_minus(lam, hi)
    if killing.mode == "one":
        b = killing.b
        if killing.side == "below":
            return (m * pair.phi_plus(lam, lo) * cylinder(spec, hi, b, lam)
                    / (w * pair.phi_plus(lam, b)))
        return (m * cylinder(spec, b, lo, lam) * pair.phi_minus(lam, hi)
                / (w * pair.phi_minus(lam, b)))
    a, b = killing.a, killing.b
    return (m * cylinder(spec, a, lo, lam) * cylinder(spec, hi, b, lam)
            / (w * cylinder(spec, a, b, lam)))


def map_gbm(direction: str, value: float, f0: float, sigma: float) -> float:
    """Monotone log map between gbm and dbm coordinates.

    to_bm: x = ln(value / f0) / sigma (value must be positive);
    from_bm: value = f0 * exp(sigma * x).  Levels and interval endpoints
    map through the same function.
    """
    if sigma <= 0.0 or f0 <= 0.0:
        raise ValueError("map_gbm needs sigma > 0 and f0 > 0")
    if direction == "to_bm":
        if not value > 0.0:
            raise ValueError("gbm values are positive")
        return math.log(value / f0) / sigma
    if direction == "from_bm":
        return f0 * _exp_ext(sigma * value)
    raise ValueError("direction must be to_bm or from_bm")


def gbm_map_jacobian(value: float, sigma: float) -> float:
    """d/dz of the to_bm map: 1 / (sigma z).  Multiplies densities when a
    distribution is pushed from dbm coordinates back to gbm ones."""
    if not value > 0.0:
        raise ValueError("gbm values are positive")
    return 1.0 / (sigma * value)
