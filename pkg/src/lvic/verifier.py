"""Exact LP oracle: can any view-consistent policy strictly beat TDM on a
finite family of channel states?

Each transmitter picks, per realization of its local view, a fractional
load ``x_k in [0, 1]`` on each of its ``g_ii`` input levels (most significant
first). In a given state the levels that reach the other receiver form the
common component and the rest form the private one; both must satisfy the
HK component constraints of that state. In addition, at each receiver the
bottom block where both users' levels overlap carries at most one bit per
received level, loads being read as entropies conditioned on higher levels. Loading levels rather than fixing component rates keeps TDM feasible
when a transmitter does not know its own outgoing gain.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .errors import GridNotClosed, GridTooLarge
from .geometry import LinearConstraint, ge, le
from .ldic import (LINKS, DeterministicGains, ViewId, hk_component_constraints,
                   lvmac_capacity, mac_rate_names, min_performance, view)

DEFAULT_VARIABLE_CAP = 5000
DEFAULT_STATE_CAP = 2000
SLACK = "s"


@dataclass(frozen=True)
class LPSolution:
    status: str
    optimal_slack: Fraction | None
    witness: dict = field(default_factory=dict)
    time_divisions: dict | None = None   # lvmac only: user -> r_k(d)/d if pinned

    @property
    def pinned(self) -> bool:
        return self.time_divisions is not None


@dataclass(frozen=True)
class DominanceLP:
    view: ViewId
    gain_grid: tuple[DeterministicGains, ...]
    variables: tuple[str, ...]
    constraints: tuple[LinearConstraint, ...]
    objective: str = SLACK

    @property
    def variable_count(self) -> int:
        return len(self.variables)


def _key(realization: tuple) -> str:
    return ",".join(f"{link}={g}" for link, g in realization)


def level_var(transmitter: str, realization: tuple, level: int) -> str:
    return f"x_{transmitter}[{_key(realization)}][{level}]"


def tau_var(view_id: ViewId, G: DeterministicGains) -> str:
    common = tuple((l, G.gain(l)) for l in LINKS if l in view_id.common_knowledge())
    return f"tau_a[{_key(common)}]"


def _component_sums(view_id: ViewId, G: DeterministicGains):
    """Map each HK component name to the level variables it sums in ``G``."""
    ra = view_id.realization(G, "a")
    rb = view_id.realization(G, "b")
    a_levels = [level_var("a", ra, k) for k in range(1, G.g_aa + 1)]
    b_levels = [level_var("b", rb, k) for k in range(1, G.g_bb + 1)]
    return {
        "r_ac": a_levels[:G.g_ab], "r_ap": a_levels[G.g_ab:],
        "r_bc": b_levels[:G.g_ba], "r_bp": b_levels[G.g_ba:],
    }, a_levels, b_levels


def collision_blocks(G: DeterministicGains) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """Per receiver, the data levels of each user that land in the shared
    bottom block, and the block height. Levels are numbered from the MSB;
    only levels that carry data (a: 1..g_aa, b: 1..g_bb) are listed."""
    blocks = []
    # receiver b: a's visible levels 1..g_ab, b's 1..g_bb, bottoms aligned
    h = min(G.g_ab, G.g_bb)
    if h:
        a_lv = tuple(i for i in range(G.g_ab - h + 1, G.g_ab + 1) if i <= G.g_aa)
        b_lv = tuple(range(G.g_bb - h + 1, G.g_bb + 1))
        blocks.append((a_lv, b_lv, h))
    h = min(G.g_ba, G.g_aa)
    if h:
        b_lv = tuple(j for j in range(G.g_ba - h + 1, G.g_ba + 1) if j <= G.g_bb)
        a_lv = tuple(range(G.g_aa - h + 1, G.g_aa + 1))
        blocks.append((a_lv, b_lv, h))
    return blocks


def build_dominance_lp(view_id, gain_grid: Iterable[DeterministicGains],
                       variable_cap: int = DEFAULT_VARIABLE_CAP,
                       strict_at: Sequence[DeterministicGains] | None = None) -> DominanceLP:
    """Dominance LP over ``gain_grid``.

    By default the slack enters both dominance rows of every state. With
    ``strict_at`` every state only needs weak dominance and the slack is the
    minimum-performance excess ``r_a/g_aa + r_b/g_bb - 1`` at the listed states.
    """
    v = view_id if isinstance(view_id, ViewId) else view(int(view_id))
    grid = tuple(sorted(set(gain_grid), key=lambda g: g.as_tuple()))
    strict = None if strict_at is None else set(strict_at)
    names: dict[str, None] = {}
    rows: list[LinearConstraint] = []
    for G in grid:
        sums, a_levels, b_levels = _component_sums(v, G)
        for name in a_levels + b_levels:
            names.setdefault(name, None)
        t = tau_var(v, G)
        names.setdefault(t, None)
        for con in hk_component_constraints(G):
            coeffs: dict[str, Fraction] = {}
            for comp, c in con.coeffs:
                for name in sums[comp]:
                    coeffs[name] = coeffs.get(name, 0) + c
            rows.append(LinearConstraint.make(coeffs, con.bound, con.sense))
        for a_lv, b_lv, height in collision_blocks(G):
            block = {a_levels[i - 1]: 1 for i in a_lv}
            block.update({b_levels[j - 1]: 1 for j in b_lv})
            rows.append(le(block, height))
        # sum x_a - g_aa * tau_a (- s) >= 0 ; sum x_b + g_bb * tau_a (- s) >= g_bb
        row_a = {n: 1 for n in a_levels}
        row_a[t] = row_a.get(t, 0) - G.g_aa
        row_b = {n: 1 for n in b_levels}
        row_b[t] = row_b.get(t, 0) + G.g_bb
        if strict is None:
            row_a[SLACK] = -1
            row_b[SLACK] = -1
        rows.append(ge(row_a, 0))
        rows.append(ge(row_b, G.g_bb))
        if strict is not None and G in strict:
            # r_a/g_aa + r_b/g_bb >= 1 + s
            perf = {n: Fraction(1, G.g_aa) for n in a_levels}
            perf.update({n: Fraction(1, G.g_bb) for n in b_levels})
            perf[SLACK] = -1
            rows.append(ge(perf, 1))
    names.setdefault(SLACK, None)
    variables = tuple(names)
    if len(variables) > variable_cap:
        raise GridTooLarge(f"{len(variables)} variables exceed the cap of {variable_cap}")
    for name in variables:
        if name != SLACK:
            rows.append(le({name: 1}, 1))
    return DominanceLP(v, grid, variables, tuple(rows))


def solve_lp(problem: DominanceLP) -> LPSolution:
    index = {n: i for i, n in enumerate(problem.variables)}
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for con in problem.constraints:
        for row in con.as_le():
            vec = [0] * len(index)
            for name, c in row.coeffs:
                vec[index[name]] = c
            A_ub.append(vec)
            b_ub.append(row.bound)
    c = [0] * len(index)
    c[index[problem.objective]] = 1
    res = lp.solve(c, A_ub, b_ub, A_eq, b_eq, maximize=True)
    if res.status != lp.OPTIMAL:
        return LPSolution(res.status, None)
    witness = dict(zip(problem.variables, res.x))
    return LPSolution(res.status, res.objective, witness)


def state_rates(problem: DominanceLP, solution: LPSolution, G: DeterministicGains):
    """Component rates ``(r_ap, r_ac, r_bp, r_bc)`` the witness uses in ``G``."""
    sums, _, _ = _component_sums(problem.view, G)
    w = solution.witness
    return {comp: sum((w[n] for n in names), Fraction(0)) for comp, names in sums.items()}


def recheck_witness(problem: DominanceLP, solution: LPSolution) -> list[str]:
    """Re-evaluate the witness state by state, outside the solver.

    Returns a list of violations (empty when sound)."""
    from .ldic import hk_component_polytope
    problems = []
    w = solution.witness
    s = solution.optimal_slack
    for name, value in w.items():
        if value < 0 or (name != SLACK and value > 1):
            problems.append(f"{name}={value} out of range")
    for G in problem.gain_grid:
        comps = state_rates(problem, solution, G)
        if not hk_component_polytope(G).contains_point(comps):
            problems.append(f"{G}: components {comps} not achievable")
        _, a_levels, b_levels = _component_sums(problem.view, G)
        for a_lv, b_lv, height in collision_blocks(G):
            load = sum(w[a_levels[i - 1]] for i in a_lv) + sum(w[b_levels[j - 1]] for j in b_lv)
            if load > height:
                problems.append(f"{G}: shared block of height {height} carries {load}")
        t = w[tau_var(problem.view, G)]
        ra = comps["r_ap"] + comps["r_ac"]
        rb = comps["r_bp"] + comps["r_bc"]
        if ra < G.g_aa * t or rb < G.g_bb * (1 - t):
            problems.append(f"{G}: ({ra},{rb}) below the TDM point")
        if G.g_aa and G.g_bb and min_performance((ra, rb), G) < 1:
            problems.append(f"{G}: minimum performance below 1")
    if s is not None and s < 0:
        problems.append("negative slack")
    return problems


# ---------------------------------------------------------------------------
# grid closure


def _unknown_links(view_id: ViewId, transmitter: str) -> tuple[str, ...]:
    known = view_id.known_to_a if transmitter == "a" else view_id.known_to_b
    return tuple(l for l in LINKS if l not in known)


def close_grid(view_id, base: Iterable[DeterministicGains], unknown_values: Iterable[int],
               state_cap: int = DEFAULT_STATE_CAP) -> tuple[DeterministicGains, ...]:
    """Smallest superset of ``base`` closed under each transmitter's
    uncertainty, with unknown gains ranging over ``unknown_values``."""
    v = view_id if isinstance(view_id, ViewId) else view(int(view_id))
    values = sorted(set(int(x) for x in unknown_values))
    seen = set(base)
    frontier = list(seen)
    while frontier:
        nxt = []
        for G in frontier:
            for t in ("a", "b"):
                links = _unknown_links(v, t)
                for combo in itertools.product(values, repeat=len(links)):
                    d = dict(zip(LINKS, G.as_tuple()))
                    d.update(zip(links, combo))
                    H = DeterministicGains(*(d[l] for l in LINKS))
                    if H not in seen:
                        seen.add(H)
                        nxt.append(H)
                        if len(seen) > state_cap:
                            raise GridNotClosed(f"closure exceeds {state_cap} states")
        frontier = nxt
    return tuple(sorted(seen, key=lambda g: g.as_tuple()))


def ic_dominance(view_id, gain_grid: Iterable[DeterministicGains],
                 unknown_values: Iterable[int] | None = None,
                 strict_at: Sequence[DeterministicGains] | None = None,
                 variable_cap: int = DEFAULT_VARIABLE_CAP,
                 state_cap: int = DEFAULT_STATE_CAP) -> tuple[DominanceLP, LPSolution]:
    grid = tuple(gain_grid)
    if unknown_values is not None:
        grid = close_grid(view_id, grid, unknown_values, state_cap)
    problem = build_dominance_lp(view_id, grid, variable_cap, strict_at)
    return problem, solve_lp(problem)


def witness_feasible(view_id, gain_grid: Iterable[DeterministicGains], G: DeterministicGains,
                     rates: Sequence, variable_cap: int = DEFAULT_VARIABLE_CAP) -> bool:
    """Is there a view-consistent policy, weakly TDM-dominating on the grid,
    that delivers exactly ``rates`` in state ``G``?"""
    problem = build_dominance_lp(view_id, gain_grid, variable_cap, strict_at=())
    sums, _, _ = _component_sums(problem.view, G)
    ra, rb = (Fraction(r) for r in rates)
    extra = (
        LinearConstraint.make({n: 1 for n in sums["r_ap"] + sums["r_ac"]}, ra, "=="),
        LinearConstraint.make({n: 1 for n in sums["r_bp"] + sums["r_bc"]}, rb, "=="),
        le({SLACK: 1}, 0),
    )
    pinned = DominanceLP(problem.view, problem.gain_grid, problem.variables,
                         problem.constraints + extra)
    return solve_lp(pinned).status == lp.OPTIMAL


# ---------------------------------------------------------------------------
# local-view MAC


def lvmac_dominance(K: int, gain_values: Iterable[int]) -> LPSolution:
    if K < 2:
        raise ValueError("need at least two users")
    values = sorted(set(int(d) for d in gain_values))
    if not values or values[0] <= 0:
        raise ValueError("gain values must be positive integers")
    users = mac_rate_names(K)
    names = [f"{u}({d})" for u in users for d in values] + [SLACK]
    index = {n: i for i, n in enumerate(names)}
    A, b = [], []
    for combo in itertools.product(values, repeat=K):
        cap = lvmac_capacity(combo)
        local = {u: f"{u}({d})" for u, d in zip(users, combo)}
        for con in cap.constraints:
            for row in con.as_le():
                vec = [0] * len(names)
                for var, c in row.coeffs:
                    vec[index[local[var]]] += c
                A.append(vec)
                b.append(row.bound)
        # -(sum r_k/d_k) + s <= -1
        vec = [0] * len(names)
        for u, d in zip(users, combo):
            vec[index[local[u]]] = -Fraction(1, d)
        vec[index[SLACK]] = 1
        A.append(vec)
        b.append(-1)
    c = [0] * len(names)
    c[index[SLACK]] = 1
    res = lp.solve(c, A, b, maximize=True)
    if res.status != lp.OPTIMAL:
        return LPSolution(res.status, None)
    witness = dict(zip(names, res.x))
    divisions = {}
    for u in users:
        shares = {witness[f"{u}({d})"] / d for d in values}
        if len(shares) != 1:
            divisions = None
            break
        divisions[u] = shares.pop()
    return LPSolution(res.status, res.objective, witness, divisions)
