import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trustnet.game import (
    GameParams,
    NeighborhoodCounts,
    Strategy,
    all_payoffs,
    global_net_wealth,
    local_counts,
    payoff,
)
from trustnet.topology import build_from_edges, build_lattice

from conftest import random_connected_graph

I, T, U = Strategy.I, Strategy.T, Strategy.U


def oracle_payoffs(net, state, r_t, r_ut):
    """Brute-force per-node recomputation of the payoff rule.

    Kept independent of trustnet.game: counts by hand, same operation order.
    """
    out = []
    for i in range(net.node_count):
        group = [int(state[i])] + [int(state[j]) for j in net.neighbors(i)]
        k_i = group.count(1)
        k_t = group.count(2)
        k_u = group.count(3)
        k_tu = k_t + k_u
        if k_tu == 0:
            out.append(0.0)
        elif state[i] == 1:
            out.append(r_t * k_t / k_tu - 1.0)
        elif state[i] == 2:
            out.append(r_t * k_i / k_tu)
        else:
            out.append((1.0 + r_ut) * r_t * k_i / k_tu)
    return np.array(out)


class TestParams:
    def test_r_u_ordering(self):
        p = GameParams(r_t=6.0, r_ut=0.33)
        assert 1 < p.r_t < p.r_u < 2 * p.r_t

    @pytest.mark.parametrize("bad", [0.0, 1.0, 1.5, -0.2])
    def test_rejects_r_ut_outside_unit_interval(self, bad):
        with pytest.raises(ValueError, match=r"r_UT must lie in \(0, 1\)"):
            GameParams(r_t=6.0, r_ut=bad)

    def test_rejects_small_r_t(self):
        with pytest.raises(ValueError, match="R_T"):
            GameParams(r_t=1.0, r_ut=0.33)


class TestLocalCounts:
    def test_focal_investor_with_ttuu(self, star5):
        state = np.array([I, T, T, U, U], dtype=np.int64)
        c = local_counts(star5, state, 0)
        assert (c.k_i_star, c.k_t_star, c.k_u_star) == (1, 2, 2)

    def test_all_untrustworthy(self, star5):
        state = np.full(5, U, dtype=np.int64)
        c = local_counts(star5, state, 0)
        assert (c.k_i_star, c.k_t_star, c.k_u_star) == (0, 0, 5)

    def test_counts_partition_closed_neighborhood(self, lattice4):
        rng = np.random.default_rng(3)
        state = rng.integers(1, 4, size=16)
        for i in range(16):
            assert local_counts(lattice4, state, i).total == lattice4.degree(i) + 1


class TestPayoff:
    def test_investor_among_trustworthy(self):
        c = NeighborhoodCounts(1, 4, 0)
        assert payoff(GameParams(6.0, 0.33), c, I) == 6.0 * 4 / 4 - 1.0 == 5.0

    def test_zero_when_no_trustee(self):
        c = NeighborhoodCounts(5, 0, 0)
        for s in (I, T, U):
            assert payoff(GameParams(6.0, 0.11), c, s) == 0.0

    def test_untrustworthy_with_four_investors(self):
        c = NeighborhoodCounts(4, 0, 1)
        got = payoff(GameParams(6.0, 0.33), c, U)
        assert got == pytest.approx(31.92, abs=1e-12)

    def test_bounds_over_all_degree4_neighborhoods(self):
        params = GameParams(6.0, 0.66)
        for k_i in range(6):
            for k_t in range(6 - k_i):
                k_u = 5 - k_i - k_t
                c = NeighborhoodCounts(k_i, k_t, k_u)
                for s, present in ((I, k_i), (T, k_t), (U, k_u)):
                    if not present:
                        continue
                    w = payoff(params, c, s)
                    assert -1.0 <= w <= (1.0 + params.r_ut) * params.r_t * 4

    def test_lower_bound_attained_by_lone_investor_among_u(self):
        c = NeighborhoodCounts(1, 0, 4)
        assert payoff(GameParams(6.0, 0.33), c, I) == -1.0

    def test_u_dominates_t_pointwise(self):
        params = GameParams(6.0, 0.33)
        c = NeighborhoodCounts(2, 2, 1)
        assert payoff(params, c, U) == pytest.approx((1 + 0.33) * payoff(params, c, T))
        assert payoff(params, c, U) > payoff(params, c, T)

    @settings(max_examples=100, deadline=None)
    @given(
        k_i=st.integers(0, 8),
        k_t=st.integers(0, 8),
        k_u=st.integers(1, 8),
        r_ut=st.floats(0.01, 0.99),
    )
    def test_u_payoff_increases_with_investors(self, k_i, k_t, k_u, r_ut):
        params = GameParams(6.0, r_ut)
        c1 = NeighborhoodCounts(k_i, k_t, k_u)
        c2 = NeighborhoodCounts(k_i + 1, k_t, k_u)
        assert payoff(params, c2, U) > payoff(params, c1, U)


class TestAllPayoffs:
    def test_all_investors_earn_nothing(self, lattice4):
        state = np.full(16, I, dtype=np.int64)
        assert (all_payoffs(lattice4, state, GameParams(6.0, 0.33)) == 0).all()

    def test_all_trustworthy_earn_nothing(self, lattice4):
        state = np.full(16, T, dtype=np.int64)
        assert (all_payoffs(lattice4, state, GameParams(6.0, 0.33)) == 0).all()

    def test_matches_scalar_composition(self, lattice4):
        rng = np.random.default_rng(11)
        params = GameParams(6.0, 0.66)
        state = rng.integers(1, 4, size=16)
        w = all_payoffs(lattice4, state, params)
        for i in range(16):
            assert w[i] == payoff(params, local_counts(lattice4, state, i), Strategy(state[i]))

    def test_oracle_equivalence_random_graphs(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            n = int(rng.integers(4, 21))
            net = random_connected_graph(n, rng)
            state = rng.integers(1, 4, size=n)
            for r_ut in (0.11, 0.33, 0.66):
                params = GameParams(6.0, r_ut)
                got = all_payoffs(net, state, params)
                want = oracle_payoffs(net, state, 6.0, r_ut)
                assert (got == want).all(), "payoffs must match the oracle exactly"


class TestGlobalNetWealth:
    def test_zero_vector(self):
        assert global_net_wealth(np.zeros(10)) == 0.0

    def test_checkerboard_investors_earn_exactly_5(self):
        net = build_lattice(32)
        rows, cols = np.divmod(np.arange(1024), 32)
        state = np.where((rows + cols) % 2 == 0, I, T).astype(np.int64)
        w = all_payoffs(net, state, GameParams(6.0, 0.33))
        assert (w[state == I] == 5.0).all()
        assert global_net_wealth(w) == 512 * 5.0 + float(np.sum(w[state == T]))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-1, 40, allow_nan=False), min_size=1, max_size=50))
    def test_permutation_invariance(self, values):
        w = np.array(values)
        rng = np.random.default_rng(0)
        assert global_net_wealth(w) == global_net_wealth(w[rng.permutation(len(w))])
