"""Exact two-phase simplex over the rationals.

Dense tableau, Dantzig pricing with a switch to Bland's rule once a run of
degenerate pivots is seen, so the method always terminates and the pivot
sequence is a deterministic function of the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    _Q = Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# degenerate pivots tolerated under Dantzig pricing before switching to Bland
_DEGENERACY_SWITCH = 50


@dataclass(frozen=True)
class LPResult:
    status: str
    objective: Fraction | None = None
    x: tuple[Fraction, ...] = field(default_factory=tuple)


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class _Tableau:
    def __init__(self, rows, basis):
        self.rows = rows
        self.basis = basis
        self.cost = None

    def pivot(self, r, col):
        rows = self.rows
        prow = rows[r]
        piv = prow[col]
        if piv != 1:
            inv = 1 / piv
            for j, v in enumerate(prow):
                if v:
                    prow[j] = v * inv
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[col]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        f = self.cost[col]
        if f:
            cost = self.cost
            for j in nz:
                cost[j] -= f * prow[j]
        self.basis[r] = col

    def run(self, allowed):
        """Minimise the current cost row. Returns OPTIMAL or UNBOUNDED."""
        cost = self.cost
        rows = self.rows
        degenerate = 0
        while True:
            bland = degenerate >= _DEGENERACY_SWITCH
            col = -1
            best = 0
            for j in allowed:
                cj = cost[j]
                if cj < 0:
                    if bland:
                        col = j
                        break
                    if cj < best:
                        best = cj
                        col = j
            if col < 0:
                return OPTIMAL
            r = -1
            ratio = None
            for i, row in enumerate(rows):
                a = row[col]
                if a > 0:
                    q = row[-1] / a
                    if (ratio is None or q < ratio
                            or (q == ratio and self.basis[i] < self.basis[r])):
                        ratio = q
                        r = i
            if r < 0:
                return UNBOUNDED
            degenerate = degenerate + 1 if ratio == 0 else 0
            self.pivot(r, col)


def solve(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
          A_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
          maximize: bool = True) -> LPResult:
    """Optimise ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    All data must be exact (int or Fraction). The returned point satisfies
    every constraint exactly.
    """
    n = len(c)
    m_ub = len(A_ub)
    m_eq = len(A_eq)
    m = m_ub + m_eq
    sign = -1 if maximize else 1
    cvec = [_Q(sign * Fraction(v)) for v in c]

    # columns: originals | ub slacks | artificials | rhs
    n_art = 0
    needs_art = []
    for i in range(m_ub):
        needs_art.append(Fraction(b_ub[i]) < 0)
    for i in range(m_eq):
        needs_art.append(True)
    n_art = sum(needs_art)
    width = n + m_ub + n_art + 1
    rows = []
    basis = []
    art = n + m_ub
    for i in range(m):
        row = [_Q(0)] * width
        if i < m_ub:
            coeffs, rhs = A_ub[i], Fraction(b_ub[i])
        else:
            coeffs, rhs = A_eq[i - m_ub], Fraction(b_eq[i - m_ub])
        flip = rhs < 0
        s = -1 if flip else 1
        for j, v in enumerate(coeffs):
            if v:
                row[j] = _Q(s * Fraction(v))
        if i < m_ub:
            row[n + i] = _Q(s)
        row[-1] = _Q(s * rhs)
        if needs_art[i]:
            row[art] = _Q(1)
            basis.append(art)
            art += 1
        else:
            basis.append(n + i)
        rows.append(row)

    tab = _Tableau(rows, basis)
    art_cols = range(n + m_ub, n + m_ub + n_art)
    if n_art:
        cost = [_Q(0)] * width
        for i, b in enumerate(basis):
            if b >= n + m_ub:
                row = rows[i]
                for j, v in enumerate(row):
                    if v:
                        cost[j] -= v
        for j in art_cols:
            cost[j] = _Q(0)
        tab.cost = cost
        tab.run(range(width - 1))
        if cost[-1] != 0:
            return LPResult(INFEASIBLE)
        # drive remaining (zero-level) artificials out of the basis
        keep = []
        for i in range(len(rows)):
            if basis[i] >= n + m_ub:
                col = next((j for j in range(n + m_ub) if rows[i][j]), -1)
                if col >= 0:
                    tab.pivot(i, col)
                    keep.append(i)
            else:
                keep.append(i)
        rows = [rows[i] for i in keep]
        basis = [basis[i] for i in keep]
        tab.rows, tab.basis = rows, basis

    allowed = range(n + m_ub)
    cost = [_Q(0)] * width
    for j in range(n):
        cost[j] = cvec[j]
    for i, b in enumerate(basis):
        cb = cost[b] if b < n else 0
        if cb:
            for j, v in enumerate(rows[i]):
                if v:
                    cost[j] -= cb * v
    tab.cost = cost
    status = tab.run(allowed)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = _to_fraction(rows[i][-1])
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, value, tuple(x))
