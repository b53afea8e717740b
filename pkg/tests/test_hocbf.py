import numpy as np
import pytest

from swarmsafe.dynamics import AgentState, RelativeState
from swarmsafe.hocbf import (
    Behavior,
    HocbfParams,
    barrier,
    barrier_rate,
    build_constraint,
    c_offset,
    psi_values,
)


def rel(r, v):
    return RelativeState(r_ij=np.asarray(r, dtype=float), v_ij=np.asarray(v, dtype=float))


def random_rel(rng, dim=2):
    return rel(rng.normal(scale=1.5, size=dim), rng.normal(scale=1.0, size=dim))


def test_barrier_zero_on_safety_boundary():
    params = HocbfParams(r_s=0.4)
    assert np.isclose(barrier(rel([0.4, 0.0], [0.0, 0.0]), params), 0.0)


def test_barrier_paper_safety_radius():
    # r_s = 0.4 m: |r|^2 - r_s^2 = 1 - 0.16
    params = HocbfParams(r_s=0.4)
    assert np.isclose(barrier(rel([1.0, 0.0], [0.0, 0.0]), params), 0.84)


def test_barrier_swap_invariant():
    rng = np.random.default_rng(2)
    params = HocbfParams()
    for _ in range(100):
        r = random_rel(rng)
        swapped = rel(-r.r_ij, -r.v_ij)
        assert barrier(r, params) == barrier(swapped, params)
        assert c_offset(r, params) == c_offset(swapped, params)


def test_c_offset_vanishes_at_static_boundary():
    params = HocbfParams(gamma1=1.7, gamma2=0.3, r_s=0.4)
    assert np.isclose(c_offset(rel([0.4, 0.0], [0.0, 0.0]), params), 0.0)


def test_c_offset_hand_value_gamma_one():
    # gamma1 = gamma2 = 1: -2*1 - 2*2*(-1) - 1*0.84 = 1.16
    params = HocbfParams(gamma1=1.0, gamma2=1.0, r_s=0.4)
    assert np.isclose(c_offset(rel([1.0, 0.0], [-1.0, 0.0]), params), 1.16)


def test_c_offset_consistent_with_recursion_expansion():
    # recursion-based oracle: psi2 = (2r).(a_i - a_j) - c_ij for any inputs,
    # so c recovered from psi_values must match c_offset term by term
    rng = np.random.default_rng(3)
    params = HocbfParams(gamma1=2.3, gamma2=0.8, r_s=0.4)
    for _ in range(300):
        r = random_rel(rng)
        a_i = rng.normal(size=2)
        a_j = rng.normal(size=2)
        _, _, psi2 = psi_values(r, a_i, a_j, params)
        c_from_recursion = 2.0 * np.dot(r.r_ij, a_i - a_j) - psi2
        assert np.isclose(c_from_recursion, c_offset(r, params), atol=1e-10)


def test_psi_zero_at_static_boundary():
    params = HocbfParams(r_s=0.4)
    psi = psi_values(rel([0.4, 0.0], [0.0, 0.0]), np.zeros(2), np.zeros(2), params)
    assert np.allclose(psi, 0.0)


def test_psi2_sign_matches_halfspace_both_behaviors():
    rng = np.random.default_rng(4)
    params = HocbfParams(gamma1=1.4, gamma2=2.1, r_s=0.4)
    for _ in range(1000):
        p_i = rng.normal(scale=1.5, size=2)
        p_j = rng.normal(scale=1.5, size=2)
        if np.linalg.norm(p_i - p_j) < 1e-6:
            continue
        i = AgentState(id=0, p=p_i, v=rng.normal(size=2), target=np.zeros(2))
        j = AgentState(id=1, p=p_j, v=rng.normal(size=2), target=np.zeros(2))
        a_i = rng.normal(scale=3.0, size=2)
        has_comm = bool(rng.integers(0, 2))
        con = build_constraint(i, j, params, has_comm)
        a_j = -a_i if con.behavior is Behavior.COOPERATIVE else np.zeros(2)
        _, _, psi2 = psi_values(rel(p_i - p_j, i.v - j.v), a_i, a_j, params)
        n, rhs = con.halfspace()
        margin = np.dot(n, a_i) - rhs
        assert np.isclose(psi2, margin, atol=1e-9 * max(1.0, abs(psi2)))


def test_psi1_finite_difference_along_trajectory():
    # drift the pair at constant relative velocity and difference the barrier
    params = HocbfParams(gamma1=1.2, gamma2=1.0, r_s=0.4)
    rng = np.random.default_rng(5)
    delta = 1e-5
    for _ in range(100):
        r0 = rng.normal(scale=1.5, size=2)
        v = rng.normal(size=2)
        h0 = barrier(rel(r0, v), params)
        h1 = barrier(rel(r0 + delta * v, v), params)
        _, psi1, _ = psi_values(rel(r0, v), np.zeros(2), np.zeros(2), params)
        fd = (h1 - h0) / delta + params.gamma1 * h0
        assert np.isclose(psi1, fd, atol=1e-4)


def test_gamma2_monotone_feasibility_margin():
    # with h > 0 and hdot >= 0, d(margin)/d(gamma2) = hdot + gamma1*h >= 0
    rng = np.random.default_rng(6)
    for _ in range(300):
        r = rng.normal(scale=2.0, size=2)
        if np.linalg.norm(r) <= 0.45:
            continue
        v = rng.normal(size=2)
        if 2.0 * np.dot(r, v) < 0:
            v = -v
        a_nom = rng.normal(size=2)
        g2_lo, g2_hi = sorted(rng.uniform(0.1, 5.0, size=2))
        margins = []
        for g2 in (g2_lo, g2_hi):
            params = HocbfParams(gamma1=1.0, gamma2=g2, r_s=0.4)
            c = c_offset(rel(r, v), params)
            margins.append(np.dot(2.0 * r, a_nom) - c)
        assert margins[1] >= margins[0] - 1e-10


def test_build_constraint_normals_and_rhs():
    params = HocbfParams()
    i = AgentState(id=0, p=[1.0, 0.0], v=[0.0, 0.0], target=np.zeros(2))
    j = AgentState(id=1, p=[0.0, 0.0], v=[0.0, 0.0], target=np.zeros(2))
    coop = build_constraint(i, j, params, has_comm_link=True)
    n, rhs = coop.halfspace()
    assert np.allclose(n, [4.0, 0.0])
    assert coop.behavior is Behavior.COOPERATIVE
    assert np.isclose(rhs, coop.c_ij)
    assert np.isclose(coop.b_ij, 0.5 * coop.c_ij)

    solo = build_constraint(i, j, params, has_comm_link=False)
    n, rhs = solo.halfspace()
    assert np.allclose(n, [2.0, 0.0])
    assert np.isclose(rhs, solo.c_ij)
    assert np.isclose(solo.b_ij, solo.c_ij)
    assert np.allclose(solo.normal, [2.0, 0.0])


def test_build_constraint_coincident_agents_error():
    params = HocbfParams()
    i = AgentState(id=0, p=[1.0, 1.0], v=[0.0, 0.0], target=np.zeros(2))
    j = AgentState(id=1, p=[1.0, 1.0], v=[1.0, 0.0], target=np.zeros(2))
    with pytest.raises(ValueError):
        build_constraint(i, j, params, has_comm_link=True)


def test_cooperative_and_nonadversarial_halfspaces_share_geometry():
    # same point set: (4r)^T a >= c  <=>  (2r)^T a >= c/2
    rng = np.random.default_rng(7)
    params = HocbfParams()
    for _ in range(100):
        i = AgentState(id=0, p=rng.normal(size=2), v=rng.normal(size=2), target=np.zeros(2))
        j = AgentState(id=1, p=rng.normal(size=2), v=rng.normal(size=2), target=np.zeros(2))
        if np.linalg.norm(i.p - j.p) < 1e-6:
            continue
        coop = build_constraint(i, j, params, True)
        a = rng.normal(scale=4.0, size=2)
        n, rhs = coop.halfspace()
        assert (np.dot(n, a) >= rhs) == (np.dot(coop.normal, a) >= coop.b_ij)


def test_hdot_definition():
    r = rel([1.0, 2.0], [3.0, -1.0])
    assert np.isclose(barrier_rate(r), 2.0 * (1.0 * 3.0 + 2.0 * -1.0))


def test_param_validation():
    with pytest.raises(ValueError):
        HocbfParams(gamma1=0.0)
    with pytest.raises(ValueError):
        HocbfParams(gamma2=-1.0)
    with pytest.raises(ValueError):
        HocbfParams(r_s=0.0)
