import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lvic import lp
from lvic.errors import GridNotClosed, GridTooLarge
from lvic.ldic import DeterministicGains, view
from lvic.verifier import (SLACK, build_dominance_lp, close_grid, collision_blocks, ic_dominance,
                           lvmac_dominance, recheck_witness, solve_lp, state_rates, tau_var,
                           witness_feasible)

RUNNING = DeterministicGains(7, 3, 2, 2)


def grid(values):
    return [DeterministicGains(*g) for g in itertools.product(values, repeat=4)]


def test_view7_one_realization_per_direct_gain():
    problem = build_dominance_lp(7, grid((1, 2)))
    levels = [v for v in problem.variables if v.startswith("x_")]
    # a: g_aa in {1, 2} -> 1 + 2 levels; same for b
    assert len(levels) == 6
    assert problem.variable_count == 6 + 1 + 1
    assert {v.split("]")[0] for v in levels} == {"x_a[aa=1", "x_a[aa=2", "x_b[bb=1", "x_b[bb=2"}


def test_view2_keys_and_tau_cells():
    problem = build_dominance_lp(2, [RUNNING])
    assert "x_a[aa=7,ab=3,ba=2][1]" in problem.variables
    assert tau_var(view(2), RUNNING) == "tau_a[ab=3,ba=2]"


def test_view5_shared_keys():
    assert view(5).realization(RUNNING, "a") == view(5).realization(RUNNING, "b")
    assert tau_var(view(5), RUNNING) == "tau_a[aa=7,bb=2]"
    assert tau_var(view(7), RUNNING) == "tau_a[]"


def test_collision_blocks_running_example():
    # receiver b: a's levels 2,3 over b's 1,2; receiver a: b's 1,2 under a's 6,7
    assert collision_blocks(RUNNING) == [((2, 3), (1, 2), 2), ((6, 7), (1, 2), 2)]
    assert collision_blocks(DeterministicGains(3, 0, 0, 2)) == []


def test_caps():
    with pytest.raises(GridTooLarge):
        build_dominance_lp(7, grid((1, 2)), variable_cap=5)
    with pytest.raises(GridNotClosed):
        close_grid(4, [RUNNING], range(1, 8), state_cap=100)


def test_closure_view3():
    closed = close_grid(3, [RUNNING], range(1, 8))
    assert len(closed) == 49
    assert {(G.g_aa, G.g_bb) for G in closed} == {(7, 2)}


@given(st.sampled_from(range(8)), st.lists(st.integers(1, 3), min_size=1, max_size=3, unique=True),
       st.builds(DeterministicGains, *(st.integers(1, 3),) * 4))
def test_closure_is_idempotent(k, values, G):
    closed = close_grid(k, [G], values)
    assert close_grid(k, closed, values) == closed


@pytest.mark.parametrize("K, values", [(2, [1]), (2, [1, 2]), (2, [1, 2, 3]), (3, [1, 2, 3])])
def test_lvmac_slack_zero_and_pinned(K, values):
    sol = lvmac_dominance(K, values)
    assert sol.status == lp.OPTIMAL and sol.optimal_slack == 0
    assert sol.pinned
    if K == 2 and values == [1, 2]:
        w = sol.witness
        assert w["r_a(1)"] / 1 == w["r_a(2)"] / 2


def test_lvmac_rejects_bad_input():
    with pytest.raises(ValueError):
        lvmac_dominance(1, [1])
    with pytest.raises(ValueError):
        lvmac_dominance(2, [0, 1])


@given(st.sampled_from(range(8)), st.builds(DeterministicGains, *(st.integers(0, 3),) * 4),
       st.lists(st.integers(1, 2), min_size=1, max_size=2, unique=True))
def test_feasibility_floor_and_soundness(k, G, values):
    problem, sol = ic_dominance(k, [G], values)
    assert sol.status == lp.OPTIMAL and sol.optimal_slack >= 0
    assert recheck_witness(problem, sol) == []


@given(st.sampled_from([1, 2, 3, 5]), st.builds(DeterministicGains, *(st.integers(1, 3),) * 4))
def test_enlarging_grid_never_increases_slack(k, G):
    small = close_grid(k, [G], [1, 2])
    large = close_grid(k, [G], [1, 2, 3])
    s_small = solve_lp(build_dominance_lp(k, small, strict_at=[G])).optimal_slack
    s_large = solve_lp(build_dominance_lp(k, large, strict_at=[G])).optimal_slack
    assert s_large <= s_small


def test_view2_target_slack_and_witness():
    problem, sol = ic_dominance(2, [RUNNING], [2, 3, 7], strict_at=[RUNNING])
    assert sol.optimal_slack == Fraction(2, 7)
    rates = state_rates(problem, sol, RUNNING)
    assert rates["r_ap"] + rates["r_ac"] == 2 and rates["r_bp"] + rates["r_bc"] == 2
    assert witness_feasible(2, problem.gain_grid, RUNNING, (2, 2))
    assert recheck_witness(problem, sol) == []


def test_uniform_slack_is_zero_for_view2():
    # both users' rows carry the slack: (2, 2) ties TDM in one coordinate
    _, sol = ic_dominance(2, [RUNNING], [2, 3, 7])
    assert sol.optimal_slack == 0


def test_full_view_single_state():
    _, sol = ic_dominance(0, [RUNNING], strict_at=[RUNNING])
    assert sol.optimal_slack == Fraction(3, 7)


@pytest.mark.parametrize("k", [4, 6, 7])
def test_no_view_knowledge_beats_tdm(k):
    _, sol = ic_dominance(k, [DeterministicGains(3, 2, 2, 2)], [1, 2, 3],
                          strict_at=[DeterministicGains(3, 2, 2, 2)])
    assert sol.optimal_slack == 0


def test_witness_pinning_rejects_impossible_rates():
    closed = close_grid(3, [RUNNING], range(1, 8))
    assert not witness_feasible(3, closed, RUNNING, (3, 2))
    assert witness_feasible(3, closed, RUNNING, (7, 0))
