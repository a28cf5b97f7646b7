"""Gaussian interference channel: gain map to the deterministic model,
Gaussian TDM and simple-HK regions, per-view gap table and GDoF regions.

Gaussian constants are doubles; comparisons use ``TOL``. Gaussian polytopes
are only ever queried through LPs (membership, support functions).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import UndefinedGap
from .geometry import Q, RateRegion
from .ldic import (COMPONENTS, DeterministicGains, ViewId, hk_component_polytope,
                   lcm, pos, tdm_dominating_region, view)

TOL = 1e-9
LOG_GUARD = 1e-12
LOG2_6 = math.log2(6)


@dataclass(frozen=True)
class GaussianGains:
    h_aa: complex
    h_ab: complex
    h_ba: complex
    h_bb: complex

    def __post_init__(self):
        for name in ("h_aa", "h_ab", "h_ba", "h_bb"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)

    @classmethod
    def from_powers(cls, powers: Sequence[float], phases: Sequence[float] = (0, 0, 0, 0)):
        """Build from squared magnitudes ``|h|^2`` and phases in radians."""
        return cls(*(cmath.rect(math.sqrt(p), ph) for p, ph in zip(powers, phases)))

    def power(self, link: str) -> float:
        h = getattr(self, "h_" + link)
        return h.real * h.real + h.imag * h.imag

    def phase(self, link: str) -> float:
        return cmath.phase(getattr(self, "h_" + link))

    @property
    def powers(self) -> tuple[float, float, float, float]:
        return tuple(self.power(l) for l in ("aa", "ab", "ba", "bb"))


def _floor_log2(x: float) -> int:
    """``floor(log2 x)``, snapping to an integer within ``LOG_GUARD``."""
    if x <= 0:
        return -1
    m, e = math.frexp(x)  # x = m * 2**e exactly, 0.5 <= m < 1
    if m == 0.5:
        return e - 1
    value = math.log2(x)
    k = round(value)
    if abs(value - k) < LOG_GUARD:
        return k
    return e - 1


def gauss_to_ldic(H: GaussianGains) -> DeterministicGains:
    return DeterministicGains(*(max(_floor_log2(p), 0) for p in H.powers))


# ---------------------------------------------------------------------------
# float polytopes


@dataclass(frozen=True)
class FloatPolytope:
    """``A x <= b`` with double data; variables are non-negative."""

    variables: tuple[str, ...]
    rows: tuple[tuple[Mapping[str, float], float, str], ...] = field(default_factory=tuple)

    def matrix(self):
        idx = {v: i for i, v in enumerate(self.variables)}
        A = np.zeros((len(self.rows), len(self.variables)))
        b = np.zeros(len(self.rows))
        for r, (coeffs, bound, _) in enumerate(self.rows):
            for v, c in coeffs.items():
                A[r, idx[v]] = c
            b[r] = bound
        return A, b

    def contains_point(self, point: Sequence[float], tol: float = TOL) -> bool:
        if any(x < -tol for x in point):
            return False
        A, b = self.matrix()
        return bool(np.all(A @ np.asarray(point, dtype=float) <= b + tol))

    def support(self, direction: Mapping[str, float]) -> float:
        """``max direction . x`` over the polytope (LP)."""
        A, b = self.matrix()
        c = np.array([-float(direction.get(v, 0.0)) for v in self.variables])
        res = linprog(c, A_ub=A, b_ub=b, bounds=[(0, None)] * len(self.variables),
                      method="highs")
        if res.status != 0:
            raise RuntimeError(f"support LP failed: {res.message}")
        return float(-res.fun)

    def bound_of(self, label: str) -> float:
        for _, bound, name in self.rows:
            if name == label:
                return bound
        raise KeyError(label)


def gaussian_capacities(H: GaussianGains) -> tuple[float, float]:
    return math.log2(1 + H.power("aa")), math.log2(1 + H.power("bb"))


def gaussian_tdm_region(H: GaussianGains) -> FloatPolytope:
    """TDM hull with single-user capacities and no power scaling."""
    ca, cb = gaussian_capacities(H)
    rows = [({"r_a": 1.0}, ca, "r_a"), ({"r_b": 1.0}, cb, "r_b"),
            ({"r_a": cb, "r_b": ca}, ca * cb, "tdm")]
    return FloatPolytope(("r_a", "r_b"), tuple(rows))


def gaussian_tdm_boundary(H: GaussianGains, tau: float) -> tuple[float, float]:
    ca, cb = gaussian_capacities(H)
    return ((1 - tau) * ca, tau * cb)


def _private_share(direct: float, cross: float) -> float:
    # min{|h_ii|^2 / |h_ij|^2, |h_ii|^2}: direct power of the private codebook
    return direct if cross <= 1 else direct / cross


def gaussian_hk_rows(H: GaussianGains) -> list[tuple[dict, float, str]]:
    x_aa, x_ab, x_ba, x_bb = H.powers
    log2 = math.log2
    pa = _private_share(x_aa, x_ab)
    pb = _private_share(x_bb, x_ba)
    na = 1 + min(x_ba, 1.0)  # noise plus b's private at receiver a
    nb = 1 + min(x_ab, 1.0)
    ca_at_b = x_ab - min(1.0, x_ab)
    cb_at_a = x_ba - min(1.0, x_ba)
    return [
        ({"r_ap": 1}, log2(1 + pa / na), "ap"),
        ({"r_ac": 1}, min(log2(1 + (x_aa - pa) / na), log2(1 + ca_at_b / nb)), "ac"),
        ({"r_ap": 1, "r_ac": 1}, log2(1 + x_aa / na), "ap+ac"),
        ({"r_ap": 1, "r_bc": 1}, log2(1 + (pa + cb_at_a) / na), "ap+bc"),
        ({"r_ap": 1, "r_ac": 1, "r_bc": 1}, log2(1 + (x_aa + cb_at_a) / na), "ap+ac+bc"),
        ({"r_bp": 1}, log2(1 + pb / nb), "bp"),
        ({"r_bc": 1}, min(log2(1 + (x_bb - pb) / nb), log2(1 + cb_at_a / na)), "bc"),
        ({"r_bp": 1, "r_bc": 1}, log2(1 + x_bb / nb), "bp+bc"),
        ({"r_bp": 1, "r_ac": 1}, log2(1 + (pb + ca_at_b) / nb), "bp+ac"),
        ({"r_bp": 1, "r_bc": 1, "r_ac": 1}, log2(1 + (x_bb + ca_at_b) / nb), "bp+bc+ac"),
        ({"r_ac": 1, "r_bc": 1}, min(log2(1 + (x_aa - pa + cb_at_a) / na),
                                     log2(1 + (x_bb - pb + ca_at_b) / nb)), "ac+bc"),
    ]


def gaussian_hk_component_polytope(H: GaussianGains) -> FloatPolytope:
    return FloatPolytope(COMPONENTS, tuple(gaussian_hk_rows(H)))


@dataclass(frozen=True)
class CodegapReport:
    G: DeterministicGains
    direction_gaps: dict       # component -> |support difference| in bits
    constraint_gaps: dict      # row label -> support gap along the row / number of components

    @property
    def deviation(self) -> float:
        return max(self.direction_gaps.values())

    @property
    def worst_constraint_gap(self) -> float:
        return max(self.constraint_gaps.values())


def codegap_report(H: GaussianGains) -> CodegapReport:
    G = gauss_to_ldic(H)
    gpoly = gaussian_hk_component_polytope(H)
    dpoly = hk_component_polytope(G)
    directions = {}
    for comp in COMPONENTS:
        exact = dpoly.maximize({comp: 1}).objective
        directions[comp] = abs(gpoly.support({comp: 1.0}) - float(exact))
    rows = {}
    for coeffs, _, label in gaussian_hk_rows(H):
        exact = dpoly.maximize(coeffs).objective
        rows[label] = abs(gpoly.support(coeffs) - float(exact)) / len(coeffs)
    return CodegapReport(G, directions, rows)


def codegap_check(H: GaussianGains) -> float:
    """Largest per-component support-function gap (bits) between the Gaussian
    and deterministic HK component polytopes."""
    return codegap_report(H).deviation


# ---------------------------------------------------------------------------
# gap table


@dataclass(frozen=True)
class GapReport:
    view: ViewId
    delta_bits: float
    formula_terms: dict

    def rounded(self, places: int = 6) -> str:
        from decimal import ROUND_HALF_EVEN, Decimal
        return str(Decimal(repr(self.delta_bits)).quantize(Decimal(1).scaleb(-places),
                                                           rounding=ROUND_HALF_EVEN))


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def gap_delta(view_id, G: DeterministicGains) -> GapReport:
    """Per-user gap between the Gaussian and deterministic TDM-dominating
    regions for one view. ``formula_terms`` holds the exact pieces: the
    coefficients of each ``log2(k)`` plus an integer ``const``."""
    v = view_id if isinstance(view_id, ViewId) else view(int(view_id))
    if G.g_aa < G.g_bb:
        G = G.swapped()
    aa, ab, ba, bb = G.as_tuple()
    k = v.id
    if k == 0:
        raise UndefinedGap("the full view has no entry in the gap table")
    if k == 1:
        if aa == bb:
            terms = {"log2(6)": 1, "const": 4}
        else:
            d = aa - bb
            first = 2 * _ceil_div(bb, d) + 1
            second = _ceil_div(ba, d) + _ceil_div(pos(bb - ba), d)
            terms = {"log2(9)": 1, "const": 2 * max(first, second) + 4,
                     "ceil(g_bb/delta)": _ceil_div(bb, d),
                     "ceil(g_ba/delta)": _ceil_div(ba, d),
                     "ceil((g_bb-g_ba)^+/delta)": _ceil_div(pos(bb - ba), d),
                     "max_term": max(first, second)}
    elif k == 2:
        terms = {"log2(6)": 2, "log2(3)": 1, "const": 4}
    elif k in (3, 5):
        if aa == 0 or bb == 0:
            raise UndefinedGap("lcm formula needs both direct gains positive")
        m = lcm(aa, bb)
        terms = {"log2(6)": m // aa + m // bb - 1, "const": 0, "lcm": m}
    else:
        terms = {"log2(6)": 1, "const": 0}
    bits = float(terms["const"])
    for base in (3, 6, 9):
        bits += terms.get(f"log2({base})", 0) * math.log2(base)
    return GapReport(v, bits, terms)


# ---------------------------------------------------------------------------
# GDoF


@dataclass(frozen=True)
class GdofAlpha:
    alpha1: Fraction   # g_bb / g_aa
    alpha2: Fraction   # g_ba / g_aa
    alpha3: Fraction   # g_ab / g_aa

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "alpha3"):
            v = Q(getattr(self, name))
            if v <= 0:
                raise ValueError(f"{name} must be a positive rational")
            object.__setattr__(self, name, v)

    def realization(self, multiple: int = 1) -> DeterministicGains:
        """Smallest integer state with these ratios, times ``multiple``."""
        base = lcm(lcm(self.alpha1.denominator, self.alpha2.denominator), self.alpha3.denominator)
        g_aa = base * multiple
        return DeterministicGains(g_aa, int(self.alpha3 * g_aa), int(self.alpha2 * g_aa),
                                  int(self.alpha1 * g_aa))


def gdof_region(view_id, alpha: GdofAlpha, multiple: int = 1) -> RateRegion:
    """Normalized region; coordinates are ``(d_a, d_b) = (r_a/g_aa, r_b/g_bb)``."""
    G = alpha.realization(multiple)
    region = tdm_dominating_region(view_id, G)
    return region.scaled(Fraction(1, G.g_aa), Fraction(1, G.g_bb))
