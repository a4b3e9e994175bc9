"""Eigenvalue enumeration for the killed diffusion problems.

Each spectral series in the package sums over one of these problems:

  * plus_at_level(k):  zeros in lam of phi_plus(-lam, k)   (process on (l, k))
  * minus_at_level(k): zeros in lam of phi_minus(-lam, k)  (process on (k, r))
  * interval(a, b):    zeros in lam of phi(a, b; -lam)     (process on (a, b))
  * unkilled():        the discrete spectrum of the free process where one
                       exists (OU and CIR; closed form, no root search)

Eigenvalues are simple, strictly increasing and unbounded.  Initial guesses
come from the large-order asymptotics of each characteristic function; each
root is then bracketed by scanning between consecutive seeds (with an
8-panel rescan when a seed pair straddles no sign change) and polished by
Brent iteration to machine tightness.

The Kummer and parabolic cylinder pairs degenerate at integer order (their
Wronskian 1/Gamma(-nu) vanishes), so the raw two-barrier characteristic
S-tilde vanishes identically at every integer nu regardless of the barriers.
Those spurious zeros are removed by scanning S-tilde / sin(pi nu), which is
finite and nonzero at the degenerate points and keeps the genuine sign
changes.  (A genuine eigenvalue sitting exactly on an integer order would
make the downstream expansion coefficients singular; such configurations
are rejected by the bracketing guard.)

Results are cached per (problem, n_max); extensions reuse every previously
computed root and only search above the last one.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import scipy.optimize
import scipy.special as sc

from lasthit import model, specfun


class MissedRoot(RuntimeError):
    """A bracket expected to contain exactly one eigenvalue did not."""


class NonConvergence(RuntimeError):
    """Root refinement failed to meet its tolerance within the budget."""


_KINDS = ("plus_at_level", "minus_at_level", "interval", "no_killing")


@dataclass(frozen=True)
class EigenProblem:
    spec: model.ProcessSpec
    kind: str
    k: float | None = None
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError("unknown eigenproblem kind %r" % (self.kind,))
        l, r = self.spec.interval
        if self.kind in ("plus_at_level", "minus_at_level"):
            if self.k is None or self.a is not None or self.b is not None:
                raise ValueError("level problems take a single level k")
            if not l < self.k < r:
                raise ValueError("level outside the state interval")
        elif self.kind == "interval":
            if self.a is None or self.b is None or self.k is not None:
                raise ValueError("interval problems take levels a and b")
            if not (l < self.a < self.b < r):
                raise ValueError("interval problems need l < a < b < r")
        elif self.k is not None or self.a is not None or self.b is not None:
            raise ValueError("the unkilled spectrum takes no levels")


def plus_at_level(spec: model.ProcessSpec, k: float) -> EigenProblem:
    return EigenProblem(spec, "plus_at_level", k=k)


def minus_at_level(spec: model.ProcessSpec, k: float) -> EigenProblem:
    return EigenProblem(spec, "minus_at_level", k=k)


def interval(spec: model.ProcessSpec, a: float, b: float) -> EigenProblem:
    return EigenProblem(spec, "interval", a=a, b=b)


def unkilled(spec: model.ProcessSpec) -> EigenProblem:
    return EigenProblem(spec, "no_killing")


@dataclass(frozen=True)
class EigenSequence:
    """Ordered eigenvalues with their convergence certificates.

    residuals[n] is |characteristic| at the returned root divided by its
    magnitude at the bracketing panel points; the characteristic's overall
    scale is arbitrary (any multiple has the same zeros), so only this
    relative residual is meaningful.  Closed-form spectra carry 0.0.
    """

    problem: EigenProblem
    values: tuple
    residuals: tuple
    seeds_used: tuple

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("eigenvalues must be strictly increasing")

    def __len__(self):
        return len(self.values)


def _require_discrete(problem: EigenProblem) -> None:
    f = problem.spec.family
    if problem.kind == "interval":
        return
    if f in ("bm", "dbm") or (f == "sqb" and problem.kind == "minus_at_level"):
        raise ValueError(
            "%s %s has no discrete spectrum (continuous band); the formulas "
            "use closed forms or quadrature there" % (f, problem.kind))


def characteristic(problem: EigenProblem, lam: float) -> float:
    """Root function of the problem, in its overflow-safe rescaled form.

    Continuous in lam > 0 with sign changes exactly at the eigenvalues.
    """
    spec = problem.spec
    f = spec.family
    if problem.kind == "no_killing":
        raise ValueError("the unkilled spectrum is closed form; no root function")
    _require_discrete(problem)
    if f in ("bm", "dbm"):
        return model.cylinder(spec, problem.a, problem.b, -lam)
    if f == "sqb":
        if problem.kind == "plus_at_level":
            return sc.jv(_sqb_index(spec), math.sqrt(2.0 * lam * problem.k))
        return specfun.cylinder_bessel(spec.mu, problem.a, problem.b, lam)
    if f == "cir":
        ak = abs(spec.kappa)
        beta = 1.0 - spec.mu
        if problem.kind == "plus_at_level":
            return specfun.kummer_m(1.0 - 0.5 * lam / ak, beta, ak * problem.k)
        if problem.kind == "minus_at_level":
            return specfun.kummer_u_rescaled(0.5 * lam / ak - 1.0, beta,
                                             ak * problem.k)
        nu = _off_integer(0.5 * lam / ak - 1.0)
        return (specfun.cylinder_kummer_rescaled(nu, beta, ak * problem.a,
                                                 ak * problem.b)
                / specfun.sinpi(nu))
    rk = math.sqrt(spec.kappa)
    if problem.kind == "plus_at_level":
        return specfun.parabolic_d_rescaled(lam / spec.gamma1,
                                            -rk * (problem.k - spec.theta))
    if problem.kind == "minus_at_level":
        return specfun.parabolic_d_rescaled(lam / spec.gamma1,
                                            rk * (problem.k - spec.theta))
    nu = _off_integer(lam / spec.gamma1)
    return (specfun.cylinder_parabolic_rescaled(
        nu, rk * (problem.a - spec.theta), rk * (problem.b - spec.theta))
        / specfun.sinpi(nu))


def _off_integer(nu: float, eps: float = 1e-9) -> float:
    # the degenerate-order guard: S-tilde/sin(pi nu) is 0/0 exactly on
    # integers, so evaluation points are nudged off them
    if abs(nu - round(nu)) < eps:
        return round(nu) + (eps if nu >= round(nu) else -eps)
    return nu


def _sqb_index(spec: model.ProcessSpec) -> float:
    if spec.mu >= 0.0 or spec.bessel_boundary == "reflect":
        return spec.mu
    return abs(spec.mu)


# ---------------------------------------------------------------------------
# seeds


def _seed_formula(problem: EigenProblem, n: int) -> float:
    """Asymptotic initial guess for the n-th eigenvalue (1-based)."""
    spec = problem.spec
    f = spec.family
    if f in ("bm", "dbm"):
        d = problem.b - problem.a
        return (n * math.pi / d) ** 2 / 2.0 + 0.5 * spec.mu ** 2
    if f == "sqb":
        if problem.kind == "plus_at_level":
            j = (n + 0.5 * _sqb_index(spec) - 0.25) * math.pi
            return j * j / (2.0 * problem.k)
        d = math.sqrt(problem.b) - math.sqrt(problem.a)
        return (n * math.pi / d) ** 2 / 2.0
    if f == "cir":
        ak = abs(spec.kappa)
        beta = 1.0 - spec.mu
        if problem.kind == "plus_at_level":
            z = ak * problem.k
            th = (n - 0.5) * math.pi + 0.5 * math.pi * beta - 0.25 * math.pi
            return 2.0 * ak * ((th * th / z - 2.0 * beta) / 4.0 + 1.0)
        if problem.kind == "minus_at_level":
            z = ak * problem.k
            nu = float(n)
            for _ in range(40):
                nu = ((n - 0.5) * math.pi + math.sqrt((2.0 * beta + 4.0 * nu) * z)
                      - 0.5 * math.pi * beta + 0.25 * math.pi) / math.pi
            return 2.0 * ak * (nu + 1.0)
        # interval: mean reversion is subdominant at large lam, so the
        # squared Bessel two-barrier asymptotic applies
        d = math.sqrt(problem.b) - math.sqrt(problem.a)
        return (n * math.pi / d) ** 2 / 2.0
    # ou level problems: zeros in nu of D-tilde_nu(z) satisfy
    # pi nu / 2 - z sqrt((1+2nu)/2) = (n - 1/2) pi asymptotically, which
    # is a quadratic in m = sqrt(1+2nu)
    if problem.kind == "interval":
        raise AssertionError("ou interval seeds are bootstrapped")  # pragma: no cover
    rk = math.sqrt(spec.kappa)
    z = (-1.0 if problem.kind == "plus_at_level" else 1.0) * rk * (problem.k - spec.theta)
    qa = 0.25 * math.pi
    qb = -z / math.sqrt(2.0)
    qc = -0.25 * math.pi - (n - 0.5) * math.pi
    m = (-qb + math.sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa)
    return spec.gamma1 * max(0.5 * (m * m - 1.0), 1e-3)


def _closed_form(problem: EigenProblem, n_max: int):
    """Exact spectra that need no search, or None."""
    spec = problem.spec
    if problem.kind == "no_killing":
        if spec.family == "ou":
            step = spec.gamma1
        elif spec.family == "cir":
            step = 2.0 * abs(spec.kappa)
        else:
            raise ValueError("the unkilled %s spectrum is continuous"
                             % spec.family)
        vals = tuple(step * n for n in range(n_max))
        return EigenSequence(problem, vals, (0.0,) * n_max, vals)
    return None


# ---------------------------------------------------------------------------
# search machinery

_PANELS = 8
_MAX_ITER = 200
# certificate ceiling: a sign change through a pole or a regularization
# artifact leaves a normalized residual of order one, while a genuine
# simple zero resolves to the evaluation noise floor (<= 1e-11 observed)
_CERTIFY = 1e-8


def _sign(v: float) -> int:
    return 1 if v > 0.0 else (-1 if v < 0.0 else 0)


def _bracket_in(f, lo: float, hi: float, panels: int):
    """First sign-change subinterval of [lo, hi] over a uniform panel scan."""
    xs = [lo + (hi - lo) * i / panels for i in range(panels + 1)]
    vs = [f(x) for x in xs]
    for i in range(panels):
        si, sj = _sign(vs[i]), _sign(vs[i + 1])
        if si == 0:
            return xs[i], xs[i], vs[i], vs[i]
        if si != sj:
            return xs[i], xs[i + 1], vs[i], vs[i + 1]
    if _sign(vs[-1]) == 0:
        return xs[-1], xs[-1], vs[-1], vs[-1]
    return None


def _refine(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    if lo == hi:
        return lo, abs(f(lo))
    try:
        root = scipy.optimize.brentq(f, lo, hi, xtol=1e-300, rtol=8.9e-16,
                                     maxiter=_MAX_ITER)
    except RuntimeError as exc:  # pragma: no cover
        raise NonConvergence(str(exc))
    resid = abs(f(root))
    return root, resid


def _find_root(f, window_lo: float, window_hi: float, floor: float,
               gap: float, tol: float) -> tuple[float, float]:
    """One eigenvalue inside [window_lo, window_hi], above floor."""
    lo = max(window_lo, floor)
    br = _bracket_in(f, lo, window_hi, _PANELS)
    if br is None:
        # seed-miss recovery: rescan a widened window more finely
        br = _bracket_in(f, floor, window_hi + 0.75 * gap, 8 * _PANELS)
    if br is None:
        raise MissedRoot(
            "no sign change in (%g, %g); seeds inconsistent with the "
            "characteristic" % (floor, window_hi))
    blo, bhi, vlo, vhi = br
    scale = max(abs(vlo), abs(vhi))
    root, resid = _refine(f, blo, bhi, tol)
    return root, (resid / scale if scale > 0.0 else 0.0)


def _bootstrap_step(problem: EigenProblem) -> float:
    spec = problem.spec
    d = problem.b - problem.a
    return 0.5 * spec.gamma1 * math.pi ** 2 / (spec.kappa * d * d)


def _compute(problem: EigenProblem, n_max: int, tol: float,
             prior: EigenSequence | None) -> EigenSequence:
    f = lambda lam: characteristic(problem, lam)
    values = list(prior.values) if prior else []
    resids = list(prior.residuals) if prior else []
    seeds = list(prior.seeds_used) if prior else []
    boot = problem.kind == "interval" and problem.spec.family == "ou"

    while len(values) < n_max:
        n = len(values) + 1
        floor = values[-1] * (1.0 + 1e-10) + 1e-12 if values else 1e-12
        if boot and n <= 3 and len(values) < 3:
            # no usable closed asymptotic near the bottom: walk upward in
            # small steps until the characteristic flips sign
            step = _bootstrap_step(problem)
            # start clear of lam=0 (a touch point of the regularized
            # characteristic) and of the previous root's noise basin
            lo = values[-1] + 0.25 * step if values else step * 1e-3
            v_lo = f(lo)
            hi = lo + step
            for _ in range(100000):
                v_hi = f(hi)
                if _sign(v_lo) != _sign(v_hi):
                    break
                lo, v_lo = hi, v_hi
                hi += step
            else:  # pragma: no cover
                raise MissedRoot("bootstrap scan found no eigenvalue")
            root, resid = _refine(f, lo, hi, tol)
            scale = max(abs(v_lo), abs(v_hi))
            resid = resid / scale if scale > 0.0 else 0.0
            seed = hi
        else:
            if boot:
                # quadratic-in-n extrapolation from the last two roots:
                # lam_n ~ c n^2 + d matches the large-n Laplacian growth
                c = (values[-1] - values[-2]) / (2 * n - 3)
                d = values[-1] - c * (n - 1) ** 2
                seed = c * n * n + d
                nxt = c * (n + 1) ** 2 + d
            else:
                seed = _seed_formula(problem, n)
                nxt = _seed_formula(problem, n + 1)
            if values:
                lo = max(floor, 0.5 * (values[-1] + seed))
            else:
                lo = max(floor, 0.05 * seed)
            hi = 0.5 * (seed + nxt)
            root, resid = _find_root(f, lo, hi, floor, nxt - seed, tol)
        values.append(root)
        resids.append(resid)
        seeds.append(seed)
    return EigenSequence(problem, tuple(values), tuple(resids), tuple(seeds))


_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def eigenvalues(problem: EigenProblem, n_max: int = 64,
                tol: float = 1e-12) -> EigenSequence:
    """First n_max eigenvalues of the problem, smallest first.

    Results are cached; a request larger than any cached sequence extends
    the longest one upward from its last root.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    closed = _closed_form(problem, n_max)
    if closed is not None:
        return closed
    _require_discrete(problem)
    key = (problem, n_max)
    with _CACHE_LOCK:
        seq = _CACHE.get(key)
        best = None
        if seq is None:
            for (p, m), s in _CACHE.items():
                if p == problem and (best is None or m > len(best)):
                    best = s
    if seq is not None:
        return seq
    if best is not None and len(best) >= n_max:
        seq = EigenSequence(problem, best.values[:n_max],
                            best.residuals[:n_max], best.seeds_used[:n_max])
    else:
        seq = _compute(problem, n_max, tol, best)
    gate = max(tol, _CERTIFY)
    bad = [r for r in seq.residuals if not r < gate]
    if bad:  # pragma: no cover
        raise NonConvergence("%d residuals above %g (worst %g)"
                             % (len(bad), gate, max(bad)))
    with _CACHE_LOCK:
        _CACHE[key] = seq
    return seq
