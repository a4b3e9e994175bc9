"""Transition density tests.

Frozen reference values come from tests/oracles/transition_oracle.py,
which rebuilds each number from mpmath primitives (image-formula
arithmetic, direct Dirichlet sums, quadrature-normalized eigenfunction
sums).  Everything else is a structural property: symmetry in the speed
measure, Chapman-Kolmogorov, sub-stochasticity, route equality.
"""

import math

import pytest
from scipy.integrate import quad

from lasthit import model, transition
from lasthit.transition import SeriesControl, TransitionResult

BM_IMAGE = 0.34495131388824463
DIRICHLET_STRIP = 0.3932039898432947
OU_STATIONARY = 0.39894228040143268
SQB_MU0_CLOSED = 0.17472016746112834
OU_KILLED_BELOW = 0.1807026294325811

OU = model.ou(1.0, 2.0)
CIR = model.cir(-0.5, -1.0)


def test_bm_standard_normal():
    r = transition.p(model.bm(), 1.0, 0.0, 0.0)
    assert r.value == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), rel=1e-15)


def test_ou_stationary_limit():
    r = transition.p(OU, 50.0, 1.3, 0.0)
    assert r.value == pytest.approx(OU_STATIONARY, rel=1e-12)
    r = transition.p(OU, 50.0, -0.7, 0.5)
    assert r.value == pytest.approx(OU_STATIONARY * math.exp(-0.125), rel=1e-12)


def test_sqb_closed_vs_quadrature():
    closed = transition.p(model.sqb(0.0), 1.0, 1.0, 2.0)
    spectral = transition.p(model.sqb(0.0), 1.0, 1.0, 2.0, route="spectral")
    assert closed.value == pytest.approx(SQB_MU0_CLOSED, rel=1e-12)
    assert spectral.value == pytest.approx(closed.value, rel=1e-6)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("x", [-2.0, 0.0, 2.0])
def test_ou_hermite_vs_mehler(t, x):
    for y in (-2.0, 0.0, 2.0):
        closed = transition.p(OU, t, x, y)
        spectral = transition.p(OU, t, x, y, route="spectral")
        assert spectral.value == pytest.approx(closed.value, rel=1e-8)


@pytest.mark.parametrize("t", [0.5, 1.5])
def test_cir_laguerre_vs_closed(t):
    for x, y in [(0.8, 1.1), (2.0, 0.5), (1.5, 3.0)]:
        closed = transition.p(CIR, t, x, y)
        spectral = transition.p(CIR, t, x, y, route="spectral")
        assert spectral.value == pytest.approx(closed.value, rel=1e-8)


def test_bm_image_frozen():
    r = transition.p_killed_one(model.bm(), 0.0, "below", 1.0, -1.0, -1.0)
    assert r.value == pytest.approx(BM_IMAGE, rel=1e-13)


def test_dirichlet_strip_frozen():
    r = transition.p_killed_two(model.dbm(0.0), 0.0, math.pi, 1.0,
                                math.pi / 2.0, math.pi / 2.0)
    assert r.value == pytest.approx(DIRICHLET_STRIP, rel=1e-12)


def test_ou_killed_below_integer_order():
    # b=1 puts the n=1 eigenvalue exactly on integer order (He_2(1)=0),
    # exercising the reflection-limit branch of the residue weights
    r = transition.p_killed_one(OU, 1.0, "below", 0.7, 0.0, 0.2)
    assert r.value == pytest.approx(OU_KILLED_BELOW, rel=1e-9)


def test_boundary_is_exact_zero():
    assert transition.p_killed_one(model.dbm(0.2), 1.0, "below", 0.5, 0.0, 1.0).value == 0.0
    assert transition.p_killed_one(model.sqb(0.5), 2.0, "above", 0.5, 3.0, 2.0).value == 0.0
    two = transition.p_killed_two(CIR, 1.0, 5.0, 0.5, 2.0, 5.0)
    assert two.value == 0.0 and two.tail_estimate == 0.0
    assert transition.p_killed_two(OU, -1.0, 1.0, 0.5, 0.0, -1.0).value == 0.0


@pytest.mark.parametrize("spec,kill,pts", [
    (model.dbm(0.15), ("one", 2.0, "below"), (0.3, 0.9)),
    (model.sqb(0.7), ("one", 4.0, "below"), (1.0, 2.5)),
    (model.sqb(-0.5, "kill"), ("two", 1.0, 5.0), (2.0, 3.5)),
    (CIR, ("one", 3.0, "below"), (1.0, 2.0)),
    (CIR, ("two", 1.0, 5.0), (2.0, 3.0)),
    (OU, ("one", 1.0, "below"), (-0.5, 0.4)),
    (OU, ("two", -1.0, 1.0), (-0.3, 0.6)),
])
def test_speed_symmetry(spec, kill, pts):
    x, y = pts
    t = 0.6
    if kill[0] == "one":
        f = lambda u, v: transition.p_killed_one(spec, kill[1], kill[2], t, u, v).value
    else:
        f = lambda u, v: transition.p_killed_two(spec, kill[1], kill[2], t, u, v).value
    lhs = f(x, y) / model.speed_density(spec, y)
    rhs = f(y, x) / model.speed_density(spec, x)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_chapman_kolmogorov_dbm():
    spec = model.dbm(0.1)
    a, b, x, y = 0.0, 3.0, 1.0, 1.8
    pf = lambda t, u, v: transition.p_killed_two(spec, a, b, t, u, v).value
    conv = quad(lambda z: pf(0.5, x, z) * pf(0.5, z, y), a, b, limit=200)[0]
    assert conv == pytest.approx(pf(1.0, x, y), rel=1e-6)


def test_sub_stochastic():
    spec = model.dbm(-0.2)
    mass = quad(lambda z: transition.p_killed_one(spec, 1.5, "below", 0.8, 0.5, z).value,
                -10.0, 1.5, limit=200)[0]
    assert mass <= 1.0 + 1e-8
    mass2 = quad(lambda z: transition.p_killed_two(OU, -1.0, 1.0, 0.4, 0.2, z).value,
                 -1.0, 1.0, limit=200)[0]
    assert mass2 <= 1.0 + 1e-8


def test_two_kill_to_one_kill_limit():
    # receding lower level: interval kernel approaches the single-kill one
    two = transition.p_killed_two(OU, -6.0, 1.0, 0.7, 0.0, 0.3)
    one = transition.p_killed_one(OU, 1.0, "below", 0.7, 0.0, 0.3)
    assert two.value == pytest.approx(one.value, rel=1e-4)


def test_gbm_transfer_matches_dbm():
    g = model.gbm(0.1, 0.2, 100.0)
    eq = model.dbm_equivalent(g)
    m = lambda v: model.map_gbm("to_bm", v, 100.0, 0.2)
    r = transition.p_killed_one(g, 150.0, "below", 2.0, 100.0, 120.0)
    base = transition.p_killed_one(eq, m(150.0), "below", 2.0, m(100.0), m(120.0))
    assert r.value == pytest.approx(base.value / (0.2 * 120.0), rel=1e-14)


def test_underflow_returns_zero():
    r = transition.p(model.bm(), 1e-8, 0.0, 10.0)
    assert r.value == 0.0 and r.tail_estimate == 0.0


def test_result_invariant():
    with pytest.raises(ValueError):
        TransitionResult(value=-1.0, terms_used=3, tail_estimate=1e-12)
    TransitionResult(value=-1e-13, terms_used=3, tail_estimate=1e-12)


def test_series_control_invariants():
    with pytest.raises(ValueError):
        SeriesControl(n_terms=0)
    with pytest.raises(ValueError):
        SeriesControl(tail_tol=-1.0)


def test_domain_validation():
    with pytest.raises(ValueError):
        transition.p_killed_one(model.bm(), 0.0, "below", 1.0, 1.0, -1.0)
    with pytest.raises(ValueError):
        transition.p_killed_two(CIR, 1.0, 5.0, 1.0, 0.5, 2.0)
    with pytest.raises(ValueError):
        transition.p(model.bm(), -1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        transition.p(model.bm(), 1.0, 0.0, 0.0, route="fancy")
    with pytest.raises(ValueError):
        transition.p(model.dbm(0.3), 1.0, 0.0, 0.0, route="spectral")


def test_negative_values_stay_within_tail():
    # far tails of oscillatory series: certificate must cover any sign slips
    for y in [1.001, 2.5, 4.0, 4.9, 4.999]:
        r = transition.p_killed_two(model.sqb(0.7), 1.0, 5.0, 3.0, 2.0, y)
        assert r.value >= -r.tail_estimate
