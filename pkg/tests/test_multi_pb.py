# Tests for the Poisson-field energy model: Laplace transform, derivative
# ladders, and the series-based supply probability.

import math

import pytest
from hypothesis import given, settings, strategies as st

from wplink.multi_pb import (
    LaplaceDerivs,
    NetworkParams,
    achievable_rate_mp,
    energy_supply_prob_mp,
    f_deriv,
    laplace_derivs,
    laplace_derivs_bell,
    laplace_z,
    mean_harvested,
)
from wplink.single_pb import BlocklengthPlan, LinkParams, achievable_rate_fbl
from wplink.specfun import DomainError

NET = NetworkParams(density=1e-3, p_pb=1e3, mu=1.0, eta=3.6)
NET_DENSE = NetworkParams(density=5e-3, p_pb=1e3, mu=1.0, eta=3.6)


# ----------------------------------------------------------------
# Parameter types


def test_network_params_validation():
    with pytest.raises(DomainError):
        NetworkParams(density=0.0, p_pb=1e3)
    with pytest.raises(DomainError):
        NetworkParams(density=1e-3, p_pb=-1.0)
    with pytest.raises(DomainError):
        NetworkParams(density=1e-3, p_pb=1e3, mu=1.5)
    with pytest.raises(DomainError):
        NetworkParams(density=1e-3, p_pb=1e3, eta=2.0)


def test_laplace_derivs_container_enforces_alternation():
    d = LaplaceDerivs(s=1.0, values=(0.5, -0.3, 0.2))
    assert d.order == 2
    with pytest.raises(DomainError):
        LaplaceDerivs(s=1.0, values=(0.5, 0.3))  # first derivative positive
    with pytest.raises(DomainError):
        LaplaceDerivs(s=1.0, values=())
    with pytest.raises(DomainError):
        LaplaceDerivs(s=1.0, values=(1.5,))


# ----------------------------------------------------------------
# Radial functional


def test_f_deriv_reference_values():
    # frozen: mpmath 2F1 closed forms at 40 digits
    assert f_deriv(0, 3.0, 3.6) == pytest.approx(2.3623169403864835, rel=1e-12)
    assert f_deriv(4, 3.0, 3.6) == pytest.approx(-0.019902094186392630, rel=1e-10)


def test_f_deriv_sign_pattern():
    # the functional is positive and increasing with concave corrections:
    # derivative k >= 1 carries sign (-1)^(k+1)
    for u in (0.2, 3.0, 80.0):
        assert f_deriv(0, u, 3.6) > 0.0
        for k in range(1, 9):
            assert (-1.0) ** (k + 1) * f_deriv(k, u, 3.6) > 0.0


def test_f_deriv_branches_agree_at_switchover():
    # the series path (u <= 500) and asymptotic path (u > 500) must meet
    for k in (0, 1, 3):
        below = f_deriv(k, 500.0, 3.6)
        above = f_deriv(k, 500.0000001, 3.6)
        assert above == pytest.approx(below, rel=1e-9)


# ----------------------------------------------------------------
# Laplace transform of the per-slot energy


def test_laplace_reference_value():
    # frozen: mpmath 40-digit evaluation of exp(g(s)) at s = 1
    assert laplace_z(1.0, NET) == pytest.approx(0.77226486573342029, rel=1e-12)


def test_laplace_basics():
    assert laplace_z(0.0, NET) == 1.0
    values = [laplace_z(s, NET) for s in (0.1, 1.0, 10.0, 100.0)]
    assert all(0.0 < v <= 1.0 for v in values)
    assert values == sorted(values, reverse=True)  # decreasing in s
    with pytest.raises(DomainError):
        laplace_z(-1.0, NET)


def test_mean_harvested_closed_form():
    # pi * density * eta/(eta-2) * mu * p_pb
    assert mean_harvested(NET) == pytest.approx(7.0685834705770345, rel=1e-14)
    # consistency: -d/ds L at s=0 equals the mean
    h = 1e-9
    fd = (1.0 - laplace_z(h, NET)) / h
    assert fd == pytest.approx(mean_harvested(NET), rel=1e-6)


# ----------------------------------------------------------------
# Derivative ladders


def test_laplace_derivs_reference_values():
    # frozen: mpmath mp.taylor of exp(g) at 40 digits, s = 1
    d = laplace_derivs(1.0, 8, NET_DENSE)
    assert d.values[0] == pytest.approx(laplace_z(1.0, NET_DENSE), rel=1e-13)
    assert d.values[1] == pytest.approx(-0.19718661262632497, rel=1e-11)
    assert d.values[8] == pytest.approx(625.75641108854256, rel=1e-11)


def test_laplace_derivs_order_zero():
    d = laplace_derivs(2.5, 0, NET)
    assert d.order == 0
    assert d.values == (laplace_z(2.5, NET),)


def test_laplace_derivs_alternate_in_sign():
    d = laplace_derivs(0.7, 10, NET)
    for k, v in enumerate(d.values):
        assert (-1.0) ** k * v > 0.0


def test_laplace_derivs_order_cap():
    with pytest.raises(DomainError):
        laplace_derivs(1.0, 65, NET)
    with pytest.raises(DomainError):
        laplace_derivs(0.0, 2, NET)


def test_derivative_paths_agree_on_reference_nets():
    for net in (NET, NET_DENSE):
        for s in (0.05, 1.0, 2.0):
            a = laplace_derivs(s, 8, net)
            b = laplace_derivs_bell(s, 8, net)
            for va, vb in zip(a.values, b.values):
                assert vb == pytest.approx(va, rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=1e-3, max_value=5.0),
    st.integers(min_value=1, max_value=6),
    st.floats(min_value=1e-4, max_value=1e-2),
    st.floats(min_value=1.0, max_value=100.0),
    st.floats(min_value=2.2, max_value=5.0),
)
def test_derivative_paths_agree_property(s, order, density, p_pb, eta):
    # scaled argument u = p_pb*s capped at 500, inside the audit path's
    # documented series budget
    net = NetworkParams(density=density, p_pb=p_pb, mu=1.0, eta=eta)
    a = laplace_derivs(s, order, net)
    b = laplace_derivs_bell(s, order, net)
    scale = max(abs(v) for v in a.values)
    for va, vb in zip(a.values, b.values):
        assert abs(va - vb) <= 1e-9 * scale


def test_audit_path_rejects_oversized_arguments():
    # the reference ladder switches to the asymptotic expansion, while the
    # audit path declares defeat loudly rather than degrade silently
    from wplink.specfun import ConvergenceError

    assert laplace_derivs(20.0, 8, NET).order == 8  # u = 2e4: fine here
    with pytest.raises(ConvergenceError):
        laplace_derivs_bell(20.0, 8, NET)


# ----------------------------------------------------------------
# Supply probability over the beacon field


def test_supply_mp_matches_laplace_identities():
    # n = 2: exactly one series term, so supply = 1 - L(m / (2 p_t))
    m, p_t = 40, 1.3
    s = m / (2.0 * p_t)
    expected = 1.0 - laplace_z(s, NET)
    assert energy_supply_prob_mp(m, 2, p_t, NET) == pytest.approx(expected, rel=1e-12)
    # n = 4 adds the first-derivative term: supply = 1 - (L - s L')
    d = laplace_derivs(s, 1, NET)
    expected4 = 1.0 - (d.values[0] - s * d.values[1])
    assert energy_supply_prob_mp(m, 4, p_t, NET) == pytest.approx(expected4, rel=1e-12)


def test_supply_mp_reference_value():
    # frozen: mpmath high-precision series at the chart baseline point
    assert energy_supply_prob_mp(1500, 1000, 1.0, NET) == pytest.approx(
        0.1664847072741914, rel=1e-11
    )


def test_supply_mp_edge_cases_and_validation():
    assert energy_supply_prob_mp(10, 1000, 0.0, NET) == 1.0
    with pytest.raises(DomainError):
        energy_supply_prob_mp(0, 2, 1.0, NET)
    with pytest.raises(DomainError):
        energy_supply_prob_mp(10, 3, 1.0, NET)
    with pytest.raises(DomainError):
        energy_supply_prob_mp(10, 2, -1.0, NET)


def test_supply_mp_monotonicities():
    base = energy_supply_prob_mp(1500, 1000, 1.0, NET)
    assert 0.0 < base < 1.0
    assert energy_supply_prob_mp(3000, 1000, 1.0, NET) > base  # more harvest
    assert energy_supply_prob_mp(1500, 1200, 1.0, NET) < base  # longer codeword
    assert energy_supply_prob_mp(1500, 1000, 2.0, NET) < base  # hungrier codeword
    denser = NetworkParams(density=2e-3, p_pb=1e3, mu=1.0, eta=3.6)
    assert energy_supply_prob_mp(1500, 1000, 1.0, denser) > base  # more beacons


def test_supply_mp_extreme_scale_saturates():
    # an astronomically long harvest phase cannot fail to cover two slots
    assert energy_supply_prob_mp(10**12, 2, 1e-9, NET) == 1.0


# ----------------------------------------------------------------
# Rate with the field-powered feasibility gate


def test_rate_mp_matches_single_beacon_formula():
    plan = BlocklengthPlan(m=1500, n=2026, epsilon=0.05)
    res = achievable_rate_mp(plan, 1.0, 1.0, NET)
    ref = achievable_rate_fbl(plan, LinkParams(p_t=1.0, p_e=1e9, sigma2=1.0))
    assert res.rate_nats == pytest.approx(ref.rate_nats, rel=1e-14)
    assert res.rate_bits == pytest.approx(ref.rate_bits, rel=1e-14)


def test_rate_mp_feasibility_gate():
    eps = 0.05
    # below the transmit floor: never feasible no matter the energy
    short = BlocklengthPlan(m=10**6, n=1000, epsilon=eps)
    assert not achievable_rate_mp(short, 1e-6, 1.0, NET).feasible
    # at the floor with a generous harvest phase: feasible
    from wplink import planner

    n = planner.min_transmit_blocklength(eps)
    m = planner.min_harvest_blocklength_mp(n, 1.0, NET, eps)
    good = BlocklengthPlan(m=m, n=n, epsilon=eps)
    assert achievable_rate_mp(good, 1.0, 1.0, NET).feasible
    # one slot short of the supply target: infeasible
    tight = BlocklengthPlan(m=m - 1, n=n, epsilon=eps)
    assert not achievable_rate_mp(tight, 1.0, 1.0, NET).feasible


def test_rate_mp_validation():
    plan = BlocklengthPlan(m=10, n=100, epsilon=0.1)
    with pytest.raises(DomainError):
        achievable_rate_mp(plan, -1.0, 1.0, NET)
    with pytest.raises(DomainError):
        achievable_rate_mp(plan, 1.0, 0.0, NET)
