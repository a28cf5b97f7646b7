"""Command-line front end (``lvic``)."""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .errors import LVICError, UndefinedGap, WidthMismatch
from .geometry import RATE_VARS, LinearConstraint, RateRegion, regions_equal
from .ldic import (BitVectorWord, DeterministicGains, ldic_transmit, audit_mode_enabled,
                   tdm_dominating_region, tdm_region, view)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3
SVG_WIDTH, SVG_HEIGHT, SVG_MARGIN = 640, 480, 40


class UsageError(Exception):
    pass


class Unsupported(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def fmt_q(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_q(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational: {text!r}") from exc


def parse_int_gains(text: str) -> DeterministicGains:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("--gains needs four comma-separated values")
    try:
        values = [int(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"gains must be integers: {text!r}") from exc
    try:
        return DeterministicGains(*values)
    except (ValueError, LVICError) as exc:
        raise UsageError(str(exc)) from exc


def parse_float_gains(text: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("--gains needs four comma-separated values")
    try:
        values = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"gains must be numbers: {text!r}") from exc
    if any(v < 0 or v != v for v in values):
        raise UsageError("gains must be non-negative")
    return values


def parse_int_set(text: str) -> list[int]:
    """``1,2,3`` or ``1..7`` (inclusive), or a mix such as ``1..3,7``."""
    out: set[int] = set()
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.update(range(int(lo), int(hi) + 1))
            else:
                out.add(int(part))
    except ValueError as exc:
        raise UsageError(f"bad integer set: {text!r}") from exc
    if not out:
        raise UsageError("empty integer set")
    return sorted(out)


_TERM = re.compile(r"^\s*(-?[0-9]+(?:/[0-9]+)?)\*([A-Za-z_][A-Za-z0-9_]*)\s*$")


def parse_constraint(text: str) -> LinearConstraint:
    for sense in ("<=", ">=", "=="):
        if sense in text:
            lhs, rhs = text.split(sense)
            break
    else:
        raise UsageError(f"no relation in constraint {text!r}")
    coeffs = {}
    if lhs.strip() != "0":
        for term in lhs.split(" + "):
            m = _TERM.match(term)
            if not m:
                raise UsageError(f"bad term {term!r} in {text!r}")
            coeffs[m.group(2)] = parse_q(m.group(1))
    return LinearConstraint.make(coeffs, parse_q(rhs), sense)


# ---------------------------------------------------------------------------
# documents


@dataclass
class RegionDocument:
    view: int
    gains: list
    pieces: list = field(default_factory=list)   # [{"constraints": [...], "vertices": [[p/q, p/q]]}]
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_region(cls, view_id: int, gains, region: RateRegion, metadata: dict):
        pieces = []
        for piece in region.minimized().nonempty_pieces():
            pieces.append({
                "constraints": [str(c) for c in piece.constraints],
                "vertices": [[fmt_q(x) for x in v] for v in piece.vertices()],
            })
        return cls(view_id, list(gains), pieces, metadata)

    def to_json(self) -> str:
        body = {"view": self.view, "gains": self.gains, "pieces": self.pieces,
                "metadata": self.metadata}
        return json.dumps(body, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RegionDocument":
        data = json.loads(text)
        doc = cls(data["view"], data["gains"], data["pieces"], data["metadata"])
        doc.check()
        return doc

    def vertex_list(self) -> list[list[tuple[Fraction, Fraction]]]:
        return [[tuple(parse_q(x) for x in v) for v in p["vertices"]] for p in self.pieces]

    def check(self) -> None:
        """Every listed vertex must satisfy every listed constraint of its piece."""
        if self.metadata.get("mode") == "gaussian":
            return
        for piece, verts in zip(self.pieces, self.vertex_list()):
            cons = [parse_constraint(c) for c in piece["constraints"]]
            for v in verts:
                point = dict(zip(RATE_VARS, v))
                bad = [str(c) for c in cons if not c.satisfied_by(point)]
                if bad:
                    raise ValueError(f"vertex {v} violates {bad}")

    def to_csv(self) -> str:
        blocks = []
        for p in self.pieces:
            blocks.append("\n".join(f"{x},{y}" for x, y in p["vertices"]))
        return "r_a,r_b\n" + "\n\n".join(blocks) + "\n"

    def to_svg(self, extent: float, tdm_ends: tuple[float, float] | None) -> str:
        sx = (SVG_WIDTH - 2 * SVG_MARGIN) / extent
        sy = (SVG_HEIGHT - 2 * SVG_MARGIN) / extent

        def xy(a, b):
            return f"{SVG_MARGIN + float(a) * sx:.3f},{SVG_HEIGHT - SVG_MARGIN - float(b) * sy:.3f}"

        out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" '
               f'width="{SVG_WIDTH}" height="{SVG_HEIGHT}">',
               f'<line x1="{SVG_MARGIN}" y1="{SVG_HEIGHT - SVG_MARGIN}" x2="{SVG_WIDTH - SVG_MARGIN}" '
               f'y2="{SVG_HEIGHT - SVG_MARGIN}" stroke="black"/>',
               f'<line x1="{SVG_MARGIN}" y1="{SVG_MARGIN}" x2="{SVG_MARGIN}" '
               f'y2="{SVG_HEIGHT - SVG_MARGIN}" stroke="black"/>']
        for verts in self._float_vertices():
            hull = _hull_order(verts)
            pts = " ".join(xy(a, b) for a, b in hull)
            out.append(f'<polygon points="{pts}" fill="steelblue" fill-opacity="0.4" stroke="navy"/>')
        if tdm_ends:
            a_end, b_end = tdm_ends
            (x1, y1), (x2, y2) = (xy(a_end, 0).split(","), xy(0, b_end).split(","))
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="crimson" '
                       f'stroke-dasharray="6,4"/>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def _float_vertices(self):
        return [[tuple(float(parse_q(x)) for x in v) for v in p["vertices"]] for p in self.pieces]


def _hull_order(points):
    """Counter-clockwise order around the centroid (points are hull vertices)."""
    import math
    if len(points) < 3:
        return points
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return sorted(points, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def _float_str(x: float) -> str:
    return repr(float(x))


def gaussian_document(view_id: int, powers) -> RegionDocument:
    from .gaussian import GaussianGains, gaussian_capacities
    if view_id not in (3, 4, 5, 6, 7):
        raise Unsupported(f"view {view_id} has no Gaussian region here; "
                          "only the TDM-optimal views 3-7 are exported")
    H = GaussianGains.from_powers(powers)
    ca, cb = gaussian_capacities(H)
    piece = {
        "constraints": [f"1*r_a <= {_float_str(ca)}", f"1*r_b <= {_float_str(cb)}",
                        f"{_float_str(cb)}*r_a + {_float_str(ca)}*r_b <= {_float_str(ca * cb)}",
                        "-1*r_a <= 0", "-1*r_b <= 0"],
        "vertices": [["0", "0"], ["0", _float_str(cb)], [_float_str(ca), "0"]],
    }
    meta = {"tool_version": __version__, "mode": "gaussian", "paper_mode_flags": {}}
    return RegionDocument(view_id, [_float_str(p) for p in powers], [piece], meta)


def _metadata(mode: str, strict: bool, **extra) -> dict:
    meta = {"tool_version": __version__, "mode": mode,
            "paper_mode_flags": {"strict_fullview": strict}}
    meta.update(extra)
    return meta


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(doc: RegionDocument, fmt: str, extent: float, tdm_ends) -> str:
    if fmt == "json":
        return doc.to_json()
    if fmt == "csv":
        return doc.to_csv()
    return doc.to_svg(extent, tdm_ends)


# ---------------------------------------------------------------------------
# commands


def cmd_region(args) -> int:
    k = _view_arg(args.view)
    if args.gaussian:
        powers = parse_float_gains(args.gains)
        doc = gaussian_document(k, powers)
        verts = [float(x) for p in doc.pieces for v in p["vertices"] for x in v]
        extent = max(verts) + 1
        tdm = (float(doc.pieces[0]["vertices"][2][0]), float(doc.pieces[0]["vertices"][1][1]))
        _emit(_render(doc, args.format, extent, tdm), args.out)
        return EXIT_OK
    G = parse_int_gains(args.gains)
    strict = args.strict_paper_fullview or audit_mode_enabled()
    region = tdm_dominating_region(k, G, audit_mode=strict)
    doc = RegionDocument.from_region(k, G.as_tuple(), region, _metadata("deterministic", strict))
    doc.check()
    extent = max(G.as_tuple()) + 1
    _emit(_render(doc, args.format, extent, (G.g_aa, G.g_bb)), args.out)
    return EXIT_OK


def cmd_gap(args) -> int:
    from .gaussian import gap_delta
    k = _view_arg(args.view)
    G = parse_int_gains(args.gains)
    try:
        report = gap_delta(k, G)
    except UndefinedGap as exc:
        raise Unsupported(str(exc)) from exc
    if args.format == "json":
        terms = {key: (str(v) if isinstance(v, Fraction) else v)
                 for key, v in report.formula_terms.items()}
        row = {"view": k, "gains": list(G.as_tuple()), "delta_bits": report.rounded(),
               "formula_terms": terms}
        _emit(json.dumps({"rows": [row]}, indent=2) + "\n", args.out)
    else:
        _emit(report.rounded() + "\n", args.out)
    return EXIT_OK


def cmd_gdof(args) -> int:
    from .gaussian import GdofAlpha, gdof_region
    k = _view_arg(args.view)
    parts = args.alpha.split(",")
    if len(parts) != 3:
        raise UsageError("--alpha needs three comma-separated rationals")
    try:
        alpha = GdofAlpha(*(parse_q(p) for p in parts))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    region = gdof_region(k, alpha)
    simplex = tdm_region(1, 1)
    same = regions_equal(region, simplex)
    G = alpha.realization()
    meta = _metadata("deterministic", False, normalized=True, coordinates=["d_a", "d_b"],
                     integer_realization=list(G.as_tuple()), coincides_with_tdm=same)
    doc = RegionDocument.from_region(k, [fmt_q(a) for a in (alpha.alpha1, alpha.alpha2,
                                                            alpha.alpha3)], region, meta)
    doc.check()
    _emit(_render(doc, args.format, 2, (1, 1)), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import verifier
    if args.suite == "mac":
        values = parse_int_set(args.gain_set)
        if args.users < 2 or values[0] <= 0:
            raise UsageError("need --users >= 2 and positive gains")
        sol = verifier.lvmac_dominance(args.users, values)
        ok = sol.optimal_slack == 0 and sol.pinned
        print(f"slack {fmt_q(sol.optimal_slack)}")
        if sol.pinned:
            shares = ", ".join(f"{u}={fmt_q(v)}" for u, v in sol.time_divisions.items())
            print(f"time divisions: {shares}")
        else:
            print("time divisions: not pinned")
        print("PASS" if ok else "FAIL")
        return EXIT_OK if ok else EXIT_FAIL
    k = _view_arg(args.view)
    G = parse_int_gains(args.gains)
    unknown = parse_int_set(args.unknown_set) if args.unknown_set else None
    strict_at = None if args.objective == "uniform" else [G]
    problem, sol = verifier.ic_dominance(k, [G], unknown, strict_at=strict_at,
                                         variable_cap=args.max_vars)
    issues = verifier.recheck_witness(problem, sol)
    comps = verifier.state_rates(problem, sol, G)
    ra, rb = comps["r_ap"] + comps["r_ac"], comps["r_bp"] + comps["r_bc"]
    print(f"states {len(problem.gain_grid)}, variables {problem.variable_count}")
    print(f"slack {fmt_q(sol.optimal_slack)}")
    print(f"witness rates at {G}: ({fmt_q(ra)}, {fmt_q(rb)})")
    expect_positive = k in (0, 1, 2)
    if expect_positive:
        ok = sol.optimal_slack > 0
    else:
        ok = sol.optimal_slack == 0
    ok = ok and not issues
    for msg in issues:
        print(f"re-check: {msg}")
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_simulate(args) -> int:
    G = parse_int_gains(args.gains)
    try:
        xa, xb = BitVectorWord.parse(args.xa), BitVectorWord.parse(args.xb)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        ya, yb = ldic_transmit(G, xa, xb)
    except WidthMismatch as exc:
        raise UsageError(str(exc)) from exc
    print(f"y_a = {ya}")
    print(f"y_b = {yb}")
    return EXIT_OK


def _view_arg(k: int) -> int:
    try:
        view(k)
    except (ValueError, KeyError, LVICError) as exc:
        raise UsageError(f"unknown view {k}") from exc
    return k


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lvic", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("region", help="TDM-dominating region for a view")
    r.add_argument("--view", type=int, required=True)
    r.add_argument("--gains", required=True, help="g_aa,g_ab,g_ba,g_bb (or |h|^2 with --gaussian)")
    r.add_argument("--gaussian", action="store_true")
    r.add_argument("--format", choices=("csv", "json", "svg"), default="json")
    r.add_argument("--strict-paper-fullview", action="store_true")
    r.add_argument("--out")
    r.set_defaults(func=cmd_region)

    g = sub.add_parser("gap", help="per-user gap between Gaussian and deterministic regions")
    g.add_argument("--view", type=int, required=True)
    g.add_argument("--gains", required=True)
    g.add_argument("--format", choices=("text", "json"), default="text")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gap)

    d = sub.add_parser("gdof", help="normalized (GDoF) region")
    d.add_argument("--view", type=int, required=True)
    d.add_argument("--alpha", required=True, help="g_bb/g_aa, g_ba/g_aa, g_ab/g_aa")
    d.add_argument("--format", choices=("csv", "json", "svg"), default="json")
    d.add_argument("--out")
    d.set_defaults(func=cmd_gdof)

    v = sub.add_parser("verify", help="exact LP dominance checks")
    v.add_argument("suite", choices=("mac", "dominance"))
    v.add_argument("--users", type=int, default=2)
    v.add_argument("--gain-set", default="1,2")
    v.add_argument("--view", type=int)
    v.add_argument("--gains")
    v.add_argument("--unknown-set")
    v.add_argument("--objective", choices=("target", "uniform"), default="target")
    v.add_argument("--max-vars", type=int, default=5000)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="one use of the deterministic channel")
    s.add_argument("--gains", required=True)
    s.add_argument("--xa", required=True)
    s.add_argument("--xb", required=True)
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "verify" and args.suite == "dominance" and (args.view is None or not args.gains):
        print("verify dominance needs --view and --gains", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Unsupported as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except LVICError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
