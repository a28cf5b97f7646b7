"""Exact rational polyhedra: constraint systems, Fourier-Motzkin projection,
vertex enumeration, containment of planar unions and parametrized unions.

Everything here works on :class:`fractions.Fraction`; no floats are used.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from . import lp
from .errors import BreakpointMiss, UnboundedRegion

LE = "<="
EQ = "=="
GE = ">="

RATE_VARS = ("r_a", "r_b")

Point = tuple[Fraction, ...]


def Q(value) -> Fraction:
    """Coerce ints, strings like ``"3/7"`` and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted in exact geometry")
    return Fraction(value)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@dataclass(frozen=True, order=True)
class LinearConstraint:
    """``sum(coeffs[v] * v) <sense> bound`` with rational data.

    ``coeffs`` is stored as a sorted tuple of ``(name, value)`` pairs with
    zero coefficients dropped, so equal constraints compare and hash equal.
    """

    coeffs: tuple[tuple[str, Fraction], ...]
    bound: Fraction
    sense: str = LE

    @classmethod
    def make(cls, coeffs: Mapping[str, object], bound, sense: str = LE) -> "LinearConstraint":
        if sense not in (LE, EQ, GE):
            raise ValueError(f"unknown sense {sense!r}")
        items = tuple(sorted((v, Q(c)) for v, c in coeffs.items() if Q(c) != 0))
        return cls(items, Q(bound), sense)

    def coefficient(self, var: str) -> Fraction:
        for v, c in self.coeffs:
            if v == var:
                return c
        return Fraction(0)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.coeffs)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs

    def lhs(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((c * Q(point.get(v, 0)) for v, c in self.coeffs), Fraction(0))

    def satisfied_by(self, point: Mapping[str, Fraction]) -> bool:
        value = self.lhs(point)
        if self.sense == LE:
            return value <= self.bound
        if self.sense == GE:
            return value >= self.bound
        return value == self.bound

    def tight_at(self, point: Mapping[str, Fraction]) -> bool:
        return self.lhs(point) == self.bound

    def as_le(self) -> list["LinearConstraint"]:
        """Equivalent list of ``<=`` constraints."""
        if self.sense == LE:
            return [self]
        neg = tuple((v, -c) for v, c in self.coeffs)
        flipped = LinearConstraint(neg, -self.bound, LE)
        if self.sense == GE:
            return [flipped]
        return [LinearConstraint(self.coeffs, self.bound, LE), flipped]

    def normalized(self) -> "LinearConstraint":
        """Scale to coprime integer coefficients; ``>=`` becomes ``<=``."""
        con = self
        if con.sense == GE:
            con = con.as_le()[0]
        if not con.coeffs:
            return con
        den = 1
        for _, c in con.coeffs:
            den = _lcm(den, c.denominator)
        num = 0
        for _, c in con.coeffs:
            num = math.gcd(num, (c * den).numerator)
        factor = Fraction(den, num)
        if con.sense == EQ and con.coeffs[0][1] < 0:
            factor = -factor
        return LinearConstraint(tuple((v, c * factor) for v, c in con.coeffs),
                                con.bound * factor, con.sense)

    def substitute(self, var: str, expr: Mapping[str, Fraction], const: Fraction) -> "LinearConstraint":
        """Replace ``var`` by ``sum(expr) + const``."""
        a = self.coefficient(var)
        if a == 0:
            return self
        new = {v: c for v, c in self.coeffs if v != var}
        for v, c in expr.items():
            new[v] = new.get(v, Fraction(0)) + a * c
        return LinearConstraint.make(new, self.bound - a * const, self.sense)

    def renamed(self, mapping: Mapping[str, str]) -> "LinearConstraint":
        return LinearConstraint.make({mapping.get(v, v): c for v, c in self.coeffs},
                                     self.bound, self.sense)

    def __str__(self) -> str:
        if not self.coeffs:
            lhs = "0"
        else:
            lhs = " + ".join(f"{_fmt(c)}*{v}" for v, c in self.coeffs)
        return f"{lhs} {self.sense} {_fmt(self.bound)}"


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def le(coeffs: Mapping[str, object], bound) -> LinearConstraint:
    return LinearConstraint.make(coeffs, bound, LE)


def ge(coeffs: Mapping[str, object], bound) -> LinearConstraint:
    return LinearConstraint.make(coeffs, bound, GE)


def eq(coeffs: Mapping[str, object], bound) -> LinearConstraint:
    return LinearConstraint.make(coeffs, bound, EQ)


INFEASIBLE = LinearConstraint((), Fraction(-1), LE)


def nonneg(variables: Iterable[str]) -> list[LinearConstraint]:
    return [ge({v: 1}, 0) for v in variables]


@dataclass(frozen=True)
class Polytope:
    variables: tuple[str, ...]
    constraints: tuple[LinearConstraint, ...]
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        known = set(self.variables)
        for con in self.constraints:
            extra = set(con.variables) - known
            if extra:
                raise ValueError(f"constraint {con} uses undeclared variables {sorted(extra)}")

    @property
    def dim(self) -> int:
        return len(self.variables)

    def with_constraints(self, *extra: LinearConstraint) -> "Polytope":
        return Polytope(self.variables, self.constraints + tuple(extra))

    def with_variables(self, *names: str) -> "Polytope":
        added = tuple(n for n in names if n not in self.variables)
        return Polytope(self.variables + added, self.constraints)

    def renamed(self, mapping: Mapping[str, str]) -> "Polytope":
        return Polytope(tuple(mapping.get(v, v) for v in self.variables),
                        tuple(c.renamed(mapping) for c in self.constraints))

    def scaled(self, factors: Mapping[str, object]) -> "Polytope":
        """Image under ``x_v -> factors[v] * x_v`` (factors must be positive)."""
        out = []
        for con in self.constraints:
            coeffs = {v: c / Q(factors.get(v, 1)) for v, c in con.coeffs}
            out.append(LinearConstraint.make(coeffs, con.bound, con.sense))
        return Polytope(self.variables, out)

    def point(self, values: Sequence) -> dict[str, Fraction]:
        return dict(zip(self.variables, (Q(v) for v in values)))

    def contains_point(self, values) -> bool:
        if not isinstance(values, Mapping):
            values = self.point(values)
        return all(c.satisfied_by(values) for c in self.constraints)

    def has_false_constant(self) -> bool:
        return any(c.is_constant() and not c.satisfied_by({}) for c in self.constraints)

    def is_empty(self) -> bool:
        if self.has_false_constant():
            return True
        return _optimize(self, {}, maximize=True).status == lp.INFEASIBLE

    def vertices(self) -> list[Point]:
        if "vertices" not in self._cache:
            self._cache["vertices"] = vertices(self)
        return list(self._cache["vertices"])

    def minimized(self) -> "Polytope":
        return remove_redundant(self)

    def maximize(self, objective: Mapping[str, object]) -> lp.LPResult:
        return _optimize(self, objective, maximize=True)

    def __str__(self) -> str:
        body = "\n  ".join(str(c) for c in self.constraints)
        return f"Polytope[{', '.join(self.variables)}]:\n  {body}"


def _optimize(poly: Polytope, objective: Mapping[str, object], maximize: bool) -> lp.LPResult:
    """LP over a polytope with free variables (split as x = x+ - x-)."""
    idx = {v: i for i, v in enumerate(poly.variables)}
    n = len(idx)

    def row(con):
        r = [Fraction(0)] * (2 * n)
        for v, c in con.coeffs:
            r[idx[v]] = c
            r[n + idx[v]] = -c
        return r

    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for con in poly.constraints:
        if con.is_constant():
            if not con.satisfied_by({}):
                return lp.LPResult(lp.INFEASIBLE)
            continue
        if con.sense == EQ:
            A_eq.append(row(con))
            b_eq.append(con.bound)
        else:
            for c in con.as_le():
                A_ub.append(row(c))
                b_ub.append(c.bound)
    cvec = [Fraction(0)] * (2 * n)
    for v, c in objective.items():
        cvec[idx[v]] = Q(c)
        cvec[n + idx[v]] = -Q(c)
    res = lp.solve(cvec, A_ub, b_ub, A_eq, b_eq, maximize=maximize)
    if res.status != lp.OPTIMAL:
        return res
    x = tuple(res.x[i] - res.x[n + i] for i in range(n))
    return lp.LPResult(res.status, res.objective, x)


def _clean(variables: Sequence[str], constraints: Iterable[LinearConstraint]) -> Polytope:
    """Normalize, deduplicate, drop trivially true rows, keep the tightest of
    parallel ``<=`` rows, and collapse to the infeasible marker when a constant
    row is false."""
    tightest: dict[tuple, LinearConstraint] = {}
    eqs: dict[tuple, LinearConstraint] = {}
    for con in constraints:
        con = con.normalized()
        if con.is_constant():
            if not con.satisfied_by({}):
                return Polytope(variables, (INFEASIBLE,))
            continue
        if con.sense == EQ:
            prev = eqs.get(con.coeffs)
            if prev is not None and prev.bound != con.bound:
                return Polytope(variables, (INFEASIBLE,))
            eqs[con.coeffs] = con
        else:
            prev = tightest.get(con.coeffs)
            if prev is None or con.bound < prev.bound:
                tightest[con.coeffs] = con
    rows = sorted(eqs.values()) + sorted(tightest.values())
    return Polytope(variables, rows)


def remove_redundant(poly: Polytope) -> Polytope:
    """Drop every ``<=`` row implied by the others (exact LP per row)."""
    poly = _clean(poly.variables, poly.constraints)
    if poly.has_false_constant():
        return poly
    if poly.dim == 2 and not any(c.sense == EQ for c in poly.constraints):
        fast = _remove_redundant_2d(poly)
        if fast is not None:
            return fast
    kept = list(poly.constraints)
    i = 0
    while i < len(kept):
        con = kept[i]
        if con.sense == EQ:
            i += 1
            continue
        others = kept[:i] + kept[i + 1:]
        # cap the objective so the LP stays bounded
        probe = Polytope(poly.variables, others + [LinearConstraint(con.coeffs, con.bound + 1, LE)])
        res = _optimize(probe, con.as_dict(), maximize=True)
        if res.status == lp.INFEASIBLE:
            return Polytope(poly.variables, (INFEASIBLE,))
        if res.status == lp.OPTIMAL and res.objective <= con.bound:
            kept.pop(i)
        else:
            i += 1
    return Polytope(poly.variables, kept)


def _remove_redundant_2d(poly: Polytope) -> Polytope | None:
    """Planar shortcut: in a full-dimensional bounded polygon a row is a facet
    iff it is tight at two distinct vertices. Returns None when the shortcut
    does not apply."""
    try:
        verts = vertices(poly)
    except UnboundedRegion:
        return None
    if len(verts) < 3 or _collinear(verts):
        return None
    names = poly.variables
    pts = [dict(zip(names, v)) for v in verts]
    kept = [c for c in poly.constraints if sum(1 for p in pts if c.tight_at(p)) >= 2]
    out = Polytope(poly.variables, kept)
    out._cache["vertices"] = verts
    return out


def _collinear(points: Sequence[Point]) -> bool:
    p0 = points[0]
    for p1 in points[1:]:
        if p1 != p0:
            break
    else:
        return True
    return all(_cross(p0, p1, p) == 0 for p in points)


def fm_eliminate(system: Polytope, var: str) -> Polytope:
    """Project ``var`` out of ``system`` exactly (Fourier-Motzkin).

    Equalities involving ``var`` are used for substitution first. The result
    is over the remaining variables; an empty projection comes back as the
    single constant row ``0 <= -1``.
    """
    if var not in system.variables:
        raise ValueError(f"{var!r} is not a variable of the system")
    rest = tuple(v for v in system.variables if v != var)
    pivot = next((c for c in system.constraints
                  if c.sense == EQ and c.coefficient(var) != 0), None)
    if pivot is not None:
        a = pivot.coefficient(var)
        expr = {v: -c / a for v, c in pivot.coeffs if v != var}
        const = pivot.bound / a
        out = [c.substitute(var, expr, const) for c in system.constraints if c is not pivot]
        return _finish(rest, out)

    pos, neg, keep = [], [], []
    for con in system.constraints:
        a = con.coefficient(var)
        if a == 0:
            keep.append(con)
            continue
        for c in con.as_le():
            (pos if c.coefficient(var) > 0 else neg).append(c)
    for p in pos:
        ap = p.coefficient(var)
        for n in neg:
            an = -n.coefficient(var)
            coeffs: dict[str, Fraction] = {}
            for v, c in p.coeffs:
                if v != var:
                    coeffs[v] = coeffs.get(v, Fraction(0)) + c / ap
            for v, c in n.coeffs:
                if v != var:
                    coeffs[v] = coeffs.get(v, Fraction(0)) + c / an
            keep.append(LinearConstraint.make(coeffs, p.bound / ap + n.bound / an, LE))
    return _finish(rest, keep)


# rows beyond which intermediate systems are pruned by LP
_PRUNE_THRESHOLD = 16


def _finish(variables: tuple[str, ...], constraints: list[LinearConstraint]) -> Polytope:
    poly = _clean(variables, constraints)
    if len(poly.constraints) > _PRUNE_THRESHOLD or len(variables) <= 2:
        poly = remove_redundant(poly)
    return poly


def project(system: Polytope, keep: Sequence[str]) -> Polytope:
    """Eliminate every variable not in ``keep`` (greedy min-fill order)."""
    poly = system
    while True:
        todo = [v for v in poly.variables if v not in keep]
        if not todo:
            break

        def cost(v):
            if any(c.sense == EQ and c.coefficient(v) != 0 for c in poly.constraints):
                return (-1, v)
            p = sum(1 for c in poly.constraints for r in c.as_le() if r.coefficient(v) > 0)
            n = sum(1 for c in poly.constraints for r in c.as_le() if r.coefficient(v) < 0)
            return (p * n - p - n, v)

        poly = fm_eliminate(poly, min(todo, key=cost))
    order = [v for v in keep if v in poly.variables]
    return Polytope(tuple(order), poly.constraints)


def _solve_square(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """Gaussian elimination; None when singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    m = [list(r) for r in rows]
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def _null_vector(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Fraction] | None:
    """A nonzero vector spanning a one-dimensional null space, else None."""
    m = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        m[rank] = [x / pv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    if len(free) != 1:
        return None
    f = free[0]
    vec = [Fraction(0)] * ncols
    vec[f] = Fraction(1)
    for r, col in enumerate(pivots):
        vec[col] = -m[r][f]
    return vec


def _le_rows(poly: Polytope) -> list[tuple[list[Fraction], Fraction]]:
    idx = {v: i for i, v in enumerate(poly.variables)}
    out = []
    for con in poly.constraints:
        if con.is_constant():
            continue
        for c in con.as_le():
            r = [Fraction(0)] * poly.dim
            for v, a in c.coeffs:
                r[idx[v]] = a
            out.append((r, c.bound))
    return out


def is_bounded(poly: Polytope) -> bool:
    """True iff the recession cone ``{y : A y <= 0}`` is trivial."""
    rows = [r for r, _ in _le_rows(poly)]
    d = poly.dim
    if d == 0:
        return True
    if _rank(rows, d) < d:
        return False
    # pointed cone: any nonzero cone has an extreme ray cut out by d-1 rows
    distinct = sorted({tuple(r) for r in rows})
    for combo in itertools.combinations(distinct, d - 1):
        y = _null_vector(combo, d)
        if y is None:
            continue
        for direction in (y, [-x for x in y]):
            if all(sum(a * b for a, b in zip(r, direction)) <= 0 for r in rows):
                return False
    return True


def vertices(poly: Polytope) -> list[Point]:
    """Exact vertex set, lexicographically sorted, without duplicates.

    Enumerates every d-subset of constraint hyperplanes, which is fine for the
    small dimensions used here (rate pairs and component-rate tuples).
    Raises :class:`UnboundedRegion` for a nonempty unbounded polyhedron.
    """
    if poly.has_false_constant():
        return []
    d = poly.dim
    rows = _le_rows(poly)
    if d == 0:
        return [()] if all(b >= 0 for _, b in rows) else []
    hyperplanes = sorted({(tuple(r), b) for r, b in rows if any(r)})
    found = set()
    for combo in itertools.combinations(hyperplanes, d):
        sol = _solve_square([h[0] for h in combo], [h[1] for h in combo])
        if sol is None:
            continue
        if all(sum(a * x for a, x in zip(r, sol)) <= b for r, b in rows):
            found.add(tuple(sol))
    if found and not is_bounded(poly):
        raise UnboundedRegion(f"polyhedron over {poly.variables} is unbounded")
    if not found:
        # no vertex: either empty or a pointless (hence unbounded) polyhedron
        if _optimize(poly, {}, maximize=True).status != lp.INFEASIBLE:
            raise UnboundedRegion(f"polyhedron over {poly.variables} has no vertices")
    return sorted(found)


# ---------------------------------------------------------------------------
# planar helpers


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Counter-clockwise hull vertices (monotone chain), collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def _clip(poly_pts: list[Point], a: tuple[Fraction, Fraction], b: Fraction) -> list[Point]:
    """Convex polygon (ccw vertex list, possibly a segment or point) clipped to a.x <= b."""
    def val(p):
        return a[0] * p[0] + a[1] * p[1] - b

    inside = [p for p in poly_pts if val(p) <= 0]
    if len(inside) == len(poly_pts):
        return poly_pts
    if len(poly_pts) == 2:
        edges = [(poly_pts[0], poly_pts[1])]
    else:
        edges = list(zip(poly_pts, poly_pts[1:] + poly_pts[:1]))
    extra = []
    for p, q in edges:
        vp, vq = val(p), val(q)
        if (vp < 0 < vq) or (vq < 0 < vp):
            t = vp / (vp - vq)
            extra.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return convex_hull(inside + extra)


def _polygon(piece: Polytope) -> list[Point]:
    return convex_hull(piece.vertices())


def _probe_points(cell: list[Point]) -> list[Point]:
    pts = list(cell)
    n = len(cell)
    if n >= 2:
        pairs = [(cell[0], cell[1])] if n == 2 else list(zip(cell, cell[1:] + cell[:1]))
        pts += [((p[0] + q[0]) / 2, (p[1] + q[1]) / 2) for p, q in pairs]
    if n >= 3:
        pts.append((sum(p[0] for p in cell) / n, sum(p[1] for p in cell) / n))
    return pts


@dataclass(frozen=True)
class RateRegion:
    """Finite union of polytopes over ``(r_a, r_b)``; no convexification."""

    pieces: tuple[Polytope, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        for p in self.pieces:
            if p.variables != RATE_VARS:
                raise ValueError(f"rate region pieces must be over {RATE_VARS}, got {p.variables}")

    @classmethod
    def single(cls, poly: Polytope) -> "RateRegion":
        return cls((poly,))

    def nonempty_pieces(self) -> list[Polytope]:
        return [p for p in self.pieces if p.vertices()]

    def piece_vertices(self) -> list[list[Point]]:
        return [p.vertices() for p in self.pieces]

    def degenerate(self) -> list[bool]:
        """Per piece: True when the piece is empty or lower-dimensional."""
        return [len(convex_hull(p.vertices())) < 3 for p in self.pieces]

    def hull_vertices(self) -> list[Point]:
        """Vertices of the convex hull of the union, lexicographically sorted."""
        pts = [v for p in self.pieces for v in p.vertices()]
        return sorted(convex_hull(pts))

    def contains_point(self, point: Sequence) -> bool:
        return any(p.contains_point(point) for p in self.pieces)

    def scaled(self, fa, fb) -> "RateRegion":
        return RateRegion(tuple(p.scaled({"r_a": fa, "r_b": fb}) for p in self.pieces))

    def swapped(self) -> "RateRegion":
        m = {"r_a": "r_b", "r_b": "r_a"}
        return RateRegion(tuple(Polytope(RATE_VARS, p.renamed(m).constraints)
                                for p in self.pieces))

    def minimized(self) -> "RateRegion":
        return RateRegion(tuple(remove_redundant(p) for p in self.pieces))

    def max_weighted(self, wa, wb) -> Fraction | None:
        """Support function ``max wa*r_a + wb*r_b`` over the union."""
        vals = [wa * v[0] + wb * v[1] for v in self.hull_vertices()]
        return max(vals) if vals else None


def find_uncovered(outer: RateRegion, inner: RateRegion) -> Point | None:
    """A point of ``inner`` outside ``outer``, or None when inner is covered.

    Each inner piece is cut by every constraint line of every outer piece.
    On the relative interior of each resulting cell the membership in every
    outer piece is constant, so testing the cell's vertices, edge midpoints
    and centroid decides coverage exactly.
    """
    lines = set()
    for piece in outer.pieces:
        for con in piece.constraints:
            if con.is_constant():
                continue
            c = con.normalized()
            lines.add(((c.coefficient("r_a"), c.coefficient("r_b")), c.bound))
    lines = sorted(lines)

    def covered(p):
        return outer.contains_point(p)

    for piece in inner.pieces:
        poly = _polygon(piece)
        if not poly:
            continue
        for v in sorted(poly):
            if not covered(v):
                return v
        cells = [poly]
        for a, b in lines:
            nxt = []
            for cell in cells:
                lo = _clip(cell, a, b)
                hi = _clip(cell, (-a[0], -a[1]), -b)
                if lo == cell or hi == cell:
                    nxt.append(cell)
                    continue
                for part in (lo, hi):
                    if part:
                        nxt.append(part)
            cells = nxt
        for cell in cells:
            for p in _probe_points(cell):
                if not covered(p):
                    return p
    return None


def contains(outer: RateRegion, inner: RateRegion) -> bool:
    return find_uncovered(outer, inner) is None


def regions_equal(a: RateRegion, b: RateRegion) -> bool:
    return contains(a, b) and contains(b, a)


def union_over_parameter(family: Callable[[Fraction], Polytope],
                         tau_range: tuple = (0, 1),
                         tau_breakpoints: Iterable = (),
                         keep: Sequence[str] = RATE_VARS,
                         parameter: str = "tau") -> RateRegion:
    """Exact union of ``family(tau)`` over ``tau`` in ``tau_range``.

    On each subinterval between consecutive breakpoints the family's
    right-hand sides must be affine in ``tau`` with fixed coefficients; tau is
    then lifted to a variable and projected out together with every variable
    not in ``keep``. Each subinterval contributes one piece.
    """
    lo, hi = Q(tau_range[0]), Q(tau_range[1])
    pts = sorted({lo, hi} | {Q(t) for t in tau_breakpoints if lo < Q(t) < hi})
    if len(pts) == 1:
        return RateRegion((project(family(lo), keep),))
    pieces = []
    for t0, t1 in zip(pts, pts[1:]):
        p0, p1 = family(t0), family(t1)
        pm = family((t0 + t1) / 2)
        if not (p0.variables == p1.variables == pm.variables) or not (
                len(p0.constraints) == len(p1.constraints) == len(pm.constraints)):
            raise BreakpointMiss(f"family changes shape inside [{t0}, {t1}]")
        if parameter in p0.variables:
            raise ValueError(f"parameter name {parameter!r} clashes with a variable")
        lifted = []
        for c0, c1, cm in zip(p0.constraints, p1.constraints, pm.constraints):
            if not (c0.coeffs == c1.coeffs == cm.coeffs and c0.sense == c1.sense == cm.sense):
                raise BreakpointMiss(f"constraint {c0} changes form inside [{t0}, {t1}]")
            if cm.bound * 2 != c0.bound + c1.bound:
                raise BreakpointMiss(f"bound of {c0} is not affine on [{t0}, {t1}]")
            slope = (c1.bound - c0.bound) / (t1 - t0)
            coeffs = c0.as_dict()
            coeffs[parameter] = -slope
            lifted.append(LinearConstraint.make(coeffs, c0.bound - slope * t0, c0.sense))
        lifted += [ge({parameter: 1}, t0), le({parameter: 1}, t1)]
        system = Polytope(p0.variables + (parameter,), lifted)
        pieces.append(project(system, keep))
    return RateRegion(tuple(pieces))
