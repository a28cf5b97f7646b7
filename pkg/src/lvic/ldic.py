"""Linear deterministic interference channel: I/O model, local views and the
TDM-dominating rate regions of every view."""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import WidthMismatch, ZeroCapacityViolation, DegenerateInterference
from .geometry import (RATE_VARS, Polytope, Q, RateRegion, ge, le, nonneg,
                       project, union_over_parameter)

LINKS = ("aa", "ab", "ba", "bb")
COMPONENTS = ("r_ap", "r_ac", "r_bp", "r_bc")


def pos(x):
    return x if x > 0 else 0


@dataclass(frozen=True)
class DeterministicGains:
    """Channel state ``G``; link ``ij`` runs from transmitter i to receiver j."""

    g_aa: int
    g_ab: int
    g_ba: int
    g_bb: int

    def __post_init__(self):
        for name in ("g_aa", "g_ab", "g_ba", "g_bb"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")

    @classmethod
    def of(cls, values: Sequence[int]) -> "DeterministicGains":
        return cls(*(int(v) for v in values))

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.g_aa, self.g_ab, self.g_ba, self.g_bb)

    def gain(self, link: str) -> int:
        return getattr(self, "g_" + link)

    @property
    def delta(self) -> int:
        return self.g_aa - self.g_bb

    @property
    def q_a(self) -> int:
        return max(self.g_aa, self.g_ba)

    @property
    def q_b(self) -> int:
        return max(self.g_bb, self.g_ab)

    @property
    def u_a_plus(self) -> int:
        return pos(self.g_aa - self.g_ba)

    @property
    def u_a_minus(self) -> int:
        return pos(self.g_ba - self.g_aa)

    @property
    def u_b_plus(self) -> int:
        return pos(self.g_bb - self.g_ab)

    @property
    def u_b_minus(self) -> int:
        return pos(self.g_ab - self.g_bb)

    def swapped(self) -> "DeterministicGains":
        """Relabel the users (a <-> b)."""
        return DeterministicGains(self.g_bb, self.g_ba, self.g_ab, self.g_aa)

    def scaled(self, c: int) -> "DeterministicGains":
        return DeterministicGains(*(c * g for g in self.as_tuple()))

    def __str__(self) -> str:
        return "({},{},{},{})".format(*self.as_tuple())


@dataclass(frozen=True)
class ViewId:
    id: int
    known_to_a: frozenset
    known_to_b: frozenset

    def realization(self, G: DeterministicGains, transmitter: str) -> tuple:
        """What the transmitter sees of ``G``: sorted ``(link, gain)`` pairs."""
        known = self.known_to_a if transmitter == "a" else self.known_to_b
        return tuple((link, G.gain(link)) for link in LINKS if link in known)

    def common_knowledge(self) -> frozenset:
        return self.known_to_a & self.known_to_b

    def is_symmetric(self) -> bool:
        mirror = {"aa": "bb", "ab": "ba", "ba": "ab", "bb": "aa"}
        return {mirror[link] for link in self.known_to_a} == set(self.known_to_b)


def _view(k, a, b):
    return ViewId(k, frozenset(a), frozenset(b))


VIEWS = {
    0: _view(0, LINKS, LINKS),
    1: _view(1, ("aa", "ab", "bb"), ("aa", "ba", "bb")),
    2: _view(2, ("aa", "ab", "ba"), ("ab", "ba", "bb")),
    3: _view(3, ("aa", "ba", "bb"), ("aa", "ab", "bb")),
    4: _view(4, ("aa", "ab"), ("ba", "bb")),
    5: _view(5, ("aa", "bb"), ("aa", "bb")),
    6: _view(6, ("aa", "ba"), ("ab", "bb")),
    7: _view(7, ("aa",), ("bb",)),
}


def view(k: int) -> ViewId:
    if k not in VIEWS:
        raise ValueError(f"view must be in 0..7, got {k}")
    return VIEWS[k]


def view_order_edges() -> list[tuple[int, int]]:
    """Hasse diagram of the views ordered by knowledge: ``(more, less)`` pairs
    where each transmitter loses exactly one link."""
    edges = []
    for i, j in itertools.permutations(VIEWS, 2):
        vi, vj = VIEWS[i], VIEWS[j]
        if (vj.known_to_a < vi.known_to_a and vj.known_to_b < vi.known_to_b
                and len(vi.known_to_a) - len(vj.known_to_a) == 1
                and len(vi.known_to_b) - len(vj.known_to_b) == 1):
            edges.append((i, j))
    return sorted(edges)


# ---------------------------------------------------------------------------
# channel I/O


@dataclass(frozen=True)
class BitVectorWord:
    """Signal levels, most significant first."""

    levels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(b) for b in self.levels))
        if any(b not in (0, 1) for b in self.levels):
            raise ValueError("levels must be bits")

    @classmethod
    def parse(cls, text: str) -> "BitVectorWord":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ValueError(f"not a bit string: {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def zeros(cls, width: int) -> "BitVectorWord":
        return cls((0,) * width)

    @property
    def width(self) -> int:
        return len(self.levels)

    def __xor__(self, other: "BitVectorWord") -> "BitVectorWord":
        if self.width != other.width:
            raise WidthMismatch(f"cannot xor widths {self.width} and {other.width}")
        return BitVectorWord(tuple(x ^ y for x, y in zip(self.levels, other.levels)))

    def __str__(self) -> str:
        return "".join(map(str, self.levels))


def input_widths(G: DeterministicGains) -> tuple[int, int]:
    """Input width of each transmitter: its strongest outgoing link."""
    return max(G.g_aa, G.g_ab), max(G.g_bb, G.g_ba)


def _received(x: BitVectorWord, gain: int, q: int) -> list[int]:
    # S^(q-gain): the top `gain` input levels land on the bottom `gain` output levels
    out = [0] * q
    for k in range(gain):
        out[q - gain + k] = x.levels[k]
    return out


def ldic_transmit(G: DeterministicGains, x_a: BitVectorWord, x_b: BitVectorWord):
    """One channel use: returns ``(y_a, y_b)`` of widths ``q_a`` and ``q_b``."""
    w_a, w_b = input_widths(G)
    if x_a.width != w_a or x_b.width != w_b:
        raise WidthMismatch(f"inputs must have widths ({w_a}, {w_b}), got ({x_a.width}, {x_b.width})")
    qa, qb = G.q_a, G.q_b
    ya = [p ^ q for p, q in zip(_received(x_a, G.g_aa, qa), _received(x_b, G.g_ba, qa))]
    yb = [p ^ q for p, q in zip(_received(x_b, G.g_bb, qb), _received(x_a, G.g_ab, qb))]
    return BitVectorWord(tuple(ya)), BitVectorWord(tuple(yb))


# ---------------------------------------------------------------------------
# TDM baseline


def _quadrant():
    return nonneg(RATE_VARS)


def tdm_polytope(g_aa, g_bb) -> Polytope:
    g_aa, g_bb = Q(g_aa), Q(g_bb)
    cons = [le({"r_a": 1}, g_aa), le({"r_b": 1}, g_bb),
            le({"r_a": g_bb, "r_b": g_aa}, g_aa * g_bb)] + _quadrant()
    return Polytope(RATE_VARS, cons)


def tdm_region(g_aa, g_bb) -> RateRegion:
    """Lower-left hull of the TDM segment: ``r_a/g_aa + r_b/g_bb <= 1``."""
    return RateRegion.single(tdm_polytope(g_aa, g_bb))


def tdm_boundary(g_aa, g_bb, tau) -> tuple[Fraction, Fraction]:
    tau = Q(tau)
    return ((1 - tau) * g_aa, tau * g_bb)


def min_performance(rates, G: DeterministicGains) -> Fraction:
    """``r_a/g_aa + r_b/g_bb``; a zero-capacity user contributes 0."""
    total = Fraction(0)
    for r, c, name in ((rates[0], G.g_aa, "a"), (rates[1], G.g_bb, "b")):
        r = Q(r)
        if c == 0:
            if r > 0:
                raise ZeroCapacityViolation(f"user {name} has zero capacity but rate {r}")
            continue
        total += r / c
    return total


# ---------------------------------------------------------------------------
# Han-Kobayashi


def hk_component_constraints(G: DeterministicGains):
    aa, ab, ba, bb = G.as_tuple()
    return [
        le({"r_ap": 1}, pos(aa - ab)),
        le({"r_ac": 1}, min(aa, ab)),
        le({"r_ap": 1, "r_ac": 1}, aa),
        le({"r_ap": 1, "r_bc": 1}, max(aa - ab, ba)),
        le({"r_ap": 1, "r_ac": 1, "r_bc": 1}, max(aa, ba)),
        le({"r_bp": 1}, pos(bb - ba)),
        le({"r_bc": 1}, min(bb, ba)),
        le({"r_bp": 1, "r_bc": 1}, bb),
        le({"r_bp": 1, "r_ac": 1}, max(bb - ba, ab)),
        le({"r_bp": 1, "r_bc": 1, "r_ac": 1}, max(bb, ab)),
        le({"r_ac": 1, "r_bc": 1}, min(max(aa, ba), max(bb, ab))),
    ]


def hk_component_polytope(G: DeterministicGains) -> Polytope:
    return Polytope(COMPONENTS, nonneg(COMPONENTS) + hk_component_constraints(G))


def _rate_split():
    return [le({"r_a": 1, "r_ap": -1, "r_ac": -1}, 0),
            le({"r_b": 1, "r_bp": -1, "r_bc": -1}, 0)]


def hk_lifted(G: DeterministicGains) -> Polytope:
    """HK component polytope together with the rate pair it supports."""
    return Polytope(RATE_VARS + COMPONENTS,
                    _quadrant() + nonneg(COMPONENTS) + hk_component_constraints(G) + _rate_split())


def hk_region_ldic(G: DeterministicGains) -> RateRegion:
    return RateRegion.single(project(hk_lifted(G), RATE_VARS))


def audit_mode_enabled() -> bool:
    return os.environ.get("LVIC_PAPER_MODE", "").lower() == "strict"


def fullview_polytope(G: DeterministicGains, audit_mode: bool | None = None) -> Polytope:
    """Concise full-view region. ``audit_mode`` caps ``r_b`` by ``g_aa``
    instead of ``g_bb`` (the LVIC_PAPER_MODE=strict variant)."""
    if audit_mode is None:
        audit_mode = audit_mode_enabled()
    aa, ab, ba, bb = G.as_tuple()
    cons = [
        le({"r_a": 1}, aa),
        le({"r_b": 1}, aa if audit_mode else bb),
        le({"r_a": 1, "r_b": 1}, pos(aa - ba) + max(bb, ba)),
        le({"r_a": 1, "r_b": 1}, pos(bb - ab) + max(aa, ab)),
        le({"r_a": 1, "r_b": 1}, max(ab, pos(aa - ba)) + max(ba, pos(bb - ab))),
        le({"r_a": 2, "r_b": 1}, max(aa, ab) + pos(aa - ba) + max(ba, pos(bb - ab))),
        le({"r_a": 1, "r_b": 2}, max(bb, ba) + pos(bb - ab) + max(ab, pos(aa - ba))),
    ]
    return Polytope(RATE_VARS, cons + _quadrant())


def fullview_region(G: DeterministicGains, audit_mode: bool | None = None) -> RateRegion:
    return RateRegion.single(fullview_polytope(G, audit_mode))


# ---------------------------------------------------------------------------
# View 1


@dataclass(frozen=True)
class EllTerm:
    """``min over l >= 0 of max{A - l*delta, B} + c0 + (l*delta + c1) * tau``.

    For ``delta > 0`` the minimiser lies in ``0..ceil((A-B)^+/delta)``: past
    that index the max is pinned at ``B`` and the term only grows with ``l``.
    """

    A: int
    B: int
    delta: int
    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)

    def cap(self) -> int:
        if self.delta <= 0:
            return 0
        return -(-pos(self.A - self.B) // self.delta)

    def branches(self) -> list[tuple[Fraction, Fraction]]:
        """Affine branches ``(intercept, slope)`` in tau, one per l."""
        out = []
        for ell in range(self.cap() + 1):
            out.append((Fraction(max(self.A - ell * self.delta, self.B)) + self.c0,
                        Fraction(ell * self.delta) + self.c1))
        return out

    def value(self, tau) -> Fraction:
        tau = Q(tau)
        return min(i + s * tau for i, s in self.branches())

    def breakpoints(self) -> list[Fraction]:
        """Points in (0, 1) where the minimising branch switches."""
        br = self.branches()
        out = set()
        for (i1, s1), (i2, s2) in itertools.combinations(br, 2):
            if s1 == s2:
                continue
            t = (i2 - i1) / (s1 - s2)
            if 0 < t < 1 and i1 + s1 * t == self.value(t):
                out.add(t)
        return sorted(out)


def _view1_terms(G: DeterministicGains) -> dict[str, EllTerm]:
    aa, ab, ba, bb = G.as_tuple()
    d = aa - bb
    return {
        "3": EllTerm(bb, ab, d, c1=Fraction(-bb)),
        "6": EllTerm(ba, pos(ba - aa), d),
        "7": EllTerm(bb, ab, d),
        "9": EllTerm(ba - d, pos(ba - aa), d, c1=Fraction(aa)),
        "10": EllTerm(bb - ba, ab, d),
        "11": EllTerm(ba, max(pos(aa - ab), ba - ab, ba - aa), d),
        "12": EllTerm(bb, pos(aa - ab), d, c1=Fraction(-bb)),
        "14": EllTerm(bb - ba, 0, d),
    }


VIEW1_VARS = RATE_VARS + COMPONENTS


def view1_polytope(G: DeterministicGains, tau_b, with_hk: bool = True) -> Polytope:
    """Lifted View-1 system over rates and components for one value of
    ``tau_b``; assumes ``g_aa >= g_bb``.

    ``with_hk`` adds the HK component bounds of the state itself, which the
    parametrized family leaves implicit (they keep e.g. ``r_b <= g_bb``)."""
    tau = Q(tau_b)
    aa, ab, ba, bb = G.as_tuple()
    t = _view1_terms(G)
    cons = _quadrant() + nonneg(COMPONENTS) + _rate_split() + [
        le({"r_a": 1}, aa - bb * tau),
        le({"r_b": 1}, aa * tau),
        le({"r_ac": 1}, t["3"].value(tau)),
        le({"r_ac": 1}, ab),
        le({"r_bc": 1}, aa * tau),
        le({"r_bc": 1}, t["6"].value(tau)),
        le({"r_ac": 1, "r_b": 1}, t["7"].value(tau)),
        le({"r_bc": 1, "r_a": 1}, max(ba, aa)),
        le({"r_bc": 1, "r_b": 1}, t["9"].value(tau)),
        le({"r_ac": 1, "r_bp": 1}, t["10"].value(tau)),
        le({"r_bc": 1, "r_ap": 1}, t["11"].value(tau)),
        le({"r_ap": 1}, t["12"].value(tau)),
        le({"r_ap": 1}, pos(aa - ab)),
        le({"r_bp": 1}, t["14"].value(tau)),
    ]
    if with_hk:
        cons += hk_component_constraints(G)
    return Polytope(VIEW1_VARS, cons)


def view1_breakpoints(G: DeterministicGains) -> list[Fraction]:
    return sorted({b for term in _view1_terms(G).values() for b in term.breakpoints()})


def view1_region(G: DeterministicGains, tau_b, with_hk: bool = True) -> RateRegion:
    """Rate pairs allowed by one View-1 time division ``tau_b``."""
    if G.g_aa < G.g_bb:
        return view1_region(G.swapped(), 1 - Q(tau_b), with_hk).swapped()
    return RateRegion.single(project(view1_polytope(G, tau_b, with_hk), RATE_VARS))


def view1_union(G: DeterministicGains, with_hk: bool = True) -> RateRegion:
    if G.g_aa < G.g_bb:
        return view1_union(G.swapped(), with_hk).swapped()
    return union_over_parameter(lambda t: view1_polytope(G, t, with_hk), (0, 1),
                                view1_breakpoints(G), keep=RATE_VARS, parameter="tau_b")


# ---------------------------------------------------------------------------
# View 2


def view2_polytope(G: DeterministicGains, tau_a) -> Polytope:
    tau_a = Q(tau_a)
    tau_b = 1 - tau_a
    aa, ab, ba, bb = G.as_tuple()
    cons = [
        le({"r_a": 1}, aa),
        le({"r_a": 1}, pos(aa - ab) + ab * tau_a),
        le({"r_a": 1}, pos(aa - ba) + ba * tau_a),
        le({"r_a": 1}, pos(aa - ab - ba) + (ab + ba) * tau_a),
        le({"r_b": 1}, bb),
        le({"r_b": 1}, pos(bb - ba) + ba * tau_b),
        le({"r_b": 1}, pos(bb - ab) + ab * tau_b),
        le({"r_b": 1}, pos(bb - ab - ba) + (ab + ba) * tau_b),
    ]
    return Polytope(RATE_VARS, cons + _quadrant())


def view2_region(G: DeterministicGains, tau_a) -> RateRegion:
    return RateRegion.single(view2_polytope(G, tau_a))


def view2_union(G: DeterministicGains) -> RateRegion:
    return union_over_parameter(lambda t: view2_polytope(G, t), (0, 1), (),
                                keep=RATE_VARS, parameter="tau_a")


def view2_fm(G: DeterministicGains) -> RateRegion:
    """Closed-form (tau-eliminated) View-2 region; needs both cross gains > 0."""
    aa, ab, ba, bb = G.as_tuple()
    if ab == 0 or ba == 0:
        raise DegenerateInterference("closed form divides by g_ab and g_ba; use view2_union")
    s = Fraction(ab + ba)
    cons = [
        le({"r_a": 1}, aa),
        le({"r_b": 1}, bb),
        le({"r_a": 1, "r_b": 1}, pos(aa - ba) + max(bb, ba)),
        le({"r_a": 1, "r_b": 1}, pos(bb - ab) + max(aa, ab)),
        le({"r_a": 1, "r_b": 1}, max(ab, aa - ba) + max(ba, bb - ab)),
        le({"r_a": s / ba, "r_b": 1}, Fraction(ab, ba) * max(aa, ba) + pos(aa - ba) + max(ba, bb - ab)),
        le({"r_a": 1, "r_b": s / ba}, Fraction(ab, ba) * max(bb, ba) + pos(bb - ba) + max(ba, aa - ab)),
        le({"r_a": s / ab, "r_b": 1}, Fraction(ba, ab) * max(aa, ab) + pos(aa - ab) + max(ab, bb - ba)),
        le({"r_a": 1, "r_b": s / ab}, Fraction(ba, ab) * max(bb, ab) + pos(bb - ab) + max(ab, aa - ba)),
    ]
    return RateRegion.single(Polytope(RATE_VARS, cons + _quadrant()))


# ---------------------------------------------------------------------------
# Views 3-7


def _tdm_family(G: DeterministicGains):
    def family(tau_a):
        tau_a = Q(tau_a)
        return Polytope(RATE_VARS, [le({"r_a": 1}, G.g_aa * tau_a),
                                    le({"r_b": 1}, G.g_bb * (1 - tau_a))] + _quadrant())
    return family


def views35_region(G: DeterministicGains) -> RateRegion:
    # tau may depend on (g_aa, g_bb); for a single state that changes nothing
    return union_over_parameter(_tdm_family(G), (0, 1), (), keep=RATE_VARS, parameter="tau_a")


def views467_region(G: DeterministicGains) -> RateRegion:
    return union_over_parameter(_tdm_family(G), (0, 1), (), keep=RATE_VARS, parameter="tau_a")


def tdm_dominating_region(view_id, G: DeterministicGains,
                          audit_mode: bool | None = None) -> RateRegion:
    k = view_id.id if isinstance(view_id, ViewId) else int(view_id)
    view(k)
    if k == 0:
        return fullview_region(G, audit_mode)
    if k == 1:
        return view1_union(G)
    if k == 2:
        return view2_union(G)
    if k in (3, 5):
        return views35_region(G)
    return views467_region(G)


# ---------------------------------------------------------------------------
# local-view multiple-access channel


def mac_rate_names(K: int) -> tuple[str, ...]:
    return RATE_VARS if K == 2 else tuple(f"r_{k + 1}" for k in range(K))


def lvmac_capacity(gains: Sequence[int]) -> Polytope:
    """Deterministic MAC region: every subset's sum rate is at most its
    strongest gain."""
    K = len(gains)
    if K < 2:
        raise ValueError("need at least two users")
    names = mac_rate_names(K)
    cons = nonneg(names)
    for size in range(1, K + 1):
        for subset in itertools.combinations(range(K), size):
            cons.append(le({names[k]: 1 for k in subset}, max(gains[k] for k in subset)))
    return Polytope(names, cons)


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b) if a and b else 0
