"""Real semialgebraic data inside the series field.

The Puiseux field stands in for an ultrapower of the reals: both are models
of the same theory with the convex hull of the reals as valuation ring.  A
nonstandard point infinitely close to a real point ``p`` is a series arc
``u(t)`` through a chart, and limits of tangent spaces and secants are read
off leading terms, so Whitney conditions are decided exactly on those arcs.

The exponential demo is different in kind: ``x^y`` with an infinite exponent
is not a Puiseux series, so it runs in floating point on a logarithmic scale
and is reported as evidence, not proof.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .errors import DomainError, TconvexError, UnsupportedFormula
from .formula import DefinablePiece, PolyExpr, parse_formula
from .report import Report, RunConfig
from .rv import res, val_tuple
from .sampling import Grid, make_rng, random_coeff, sample_piece, solve_towards
from .series import INF, ONE, ZERO, PuiseuxSeries, series
from .tstrat import (Chart, ResidueSubspace, Stratum, TStratCandidate, nearest_stratum_point,
                     tstrat_verify)

RATIONAL_GRID = Grid(max_den=1, max_abs_exp=0, coeff_range=3)


# ---------------------------------------------------------------------------
# lifting
# ---------------------------------------------------------------------------

def _is_rational_piece(p: DefinablePiece) -> bool:
    return all(a.kind == "sign" and a.poly.is_rational() for a in p.atoms)


def star_lift(X) -> DefinablePiece:
    """The same conditions read over the series field (rational data only)."""
    if isinstance(X, str):
        X = parse_formula(X)
    if not _is_rational_piece(X):
        raise UnsupportedFormula(f"not a real semialgebraic piece: {X}")
    return X


class RealStratification(TStratCandidate):
    """A candidate whose strata and charts use rational constants only."""

    @classmethod
    def from_json(cls, obj) -> "RealStratification":
        base = TStratCandidate.from_json(obj)
        rs = cls(base.vars, base.strata, base.domain, base.name)
        rs.validate()
        return rs

    @classmethod
    def of(cls, cand: TStratCandidate) -> "RealStratification":
        rs = cls(cand.vars, cand.strata, cand.domain, cand.name)
        rs.validate()
        return rs

    def validate(self) -> None:
        for S in self.strata:
            for p in list(S.pieces) + list(S.exclude):
                star_lift(p)
            for ch in S.charts:
                if not all(m.is_rational() for m in ch.map):
                    raise UnsupportedFormula("chart maps must have rational coefficients")
        if self.domain is not None:
            star_lift(self.domain)


def lift_candidate(rs: TStratCandidate) -> TStratCandidate:
    strata = [Stratum([star_lift(p) for p in S.pieces], S.declared_dim,
                      [star_lift(p) for p in S.exclude], S.charts, S.vars) for S in rs.strata]
    dom = star_lift(rs.domain) if rs.domain is not None else None
    return TStratCandidate(rs.vars, strata, dom, rs.name)


def archimedean_tstrat_check(rs: TStratCandidate, config: RunConfig | None = None,
                             balls: int = 24) -> Report:
    lifted = lift_candidate(RealStratification.of(rs) if not isinstance(rs, RealStratification) else rs)
    rep = tstrat_verify(lifted, balls=balls, config=config)
    rep.check = "arch-tstrat"
    rep.details["lifted"] = True
    return rep


# ---------------------------------------------------------------------------
# Whitney conditions on series arcs
# ---------------------------------------------------------------------------

def residue_limit(columns: Sequence[Sequence[PuiseuxSeries]]) -> ResidueSubspace:
    """Residue of the span of ``columns``: the limit of the subspace at ``t -> 0``.

    Valuation-pivoted elimination: scale the column holding the entry of least
    valuation so that entry becomes 1, clear its row from the other columns,
    repeat.  The residues of the scaled columns span the limit.
    """
    cols = [list(c) for c in columns]
    n = len(cols[0]) if cols else 0
    basis = []
    while cols:
        best = None
        for ci, col in enumerate(cols):
            for ri, e in enumerate(col):
                if e.terms:
                    v = e.terms[0][0]
                    if best is None or v < best[0]:
                        best = (v, ci, ri)
        if best is None:
            break
        _, ci, ri = best
        col = cols.pop(ci)
        inv = col[ri].inv()
        norm = [e * inv for e in col]
        norm[ri] = ONE
        basis.append([res(e) for e in norm])
        cols = [[a - c[ri] * b for a, b in zip(c, norm)] for c in cols]
    return ResidueSubspace.span(basis, n)


def direction_residue(v: Sequence[PuiseuxSeries]) -> list:
    """Residue of ``v / t^val(v)``: the limit direction of a nonzero vector."""
    g = val_tuple(v)
    return [res(c.shift(-g)) for c in v]


def tangent_at(lower: Stratum, p: tuple) -> ResidueSubspace:
    """Tangent space of a smooth stratum at a rational point.

    From a chart through ``p`` when one exists, else from the kernel of the
    gradients of the equations of the piece containing ``p``.
    """
    n = len(p)
    if lower.declared_dim == 0:
        return ResidueSubspace((), (), n)
    for ch in lower.charts:
        for u0 in chart_preimages(ch, p):
            J = ch.jacobian(u0)
            cols = [[J[i][l] for i in range(n)] for l in range(len(ch.params))]
            return residue_limit(cols)
    for pc in lower.pieces:
        if not pc.contains(p, approx=True):
            continue
        rows = []
        for a in pc.equations():
            rows.append([res(g.evaluate(p)) for g in a.poly.gradient()])
        R = ResidueSubspace.span(rows, n)
        return _kernel(R, n)
    raise DomainError("base point is not on the lower stratum")


def _kernel(R: ResidueSubspace, n: int) -> ResidueSubspace:
    free = [j for j in range(n) if j not in R.pivots]
    vecs = []
    for f in free:
        v = [mpq(0)] * n
        v[f] = mpq(1)
        for row, pc in zip(R.basis, R.pivots):
            v[pc] = -row[f]
        vecs.append(v)
    return ResidueSubspace.span(vecs, n)


def chart_preimages(ch: Chart, p: tuple, limit: int = 2) -> list[tuple]:
    """Rational parameters ``u`` with ``chart(u) = p`` (small grid search)."""
    d = len(ch.params)
    out = []
    vals = [mpq(k) for k in (0, 1, -1, 2, -2)]
    for u in itertools.product(vals, repeat=d):
        us = tuple(PuiseuxSeries.const(c) for c in u)
        if ch.domain is not None and not ch.domain.contains(us):
            continue
        if all((a - b).is_zero() for a, b in zip(ch.evaluate(us), p)):
            out.append(us)
            if len(out) >= limit:
                break
    return out


@dataclass
class WhitneyReport:
    pair: tuple
    base_point: tuple
    curves_tested: int = 0
    a: str = "holds"
    b: str = "holds"
    witnesses: list = field(default_factory=list)
    incident: bool = True

    @property
    def ok(self) -> bool:
        return self.a == "holds" and self.b == "holds"

    @property
    def verdict(self) -> str:
        if not self.incident:
            return "skipped"
        return "holds" if self.ok else "fails"

    def to_json(self):
        return {"pair": list(self.pair), "base_point": list(self.base_point),
                "curves_tested": self.curves_tested, "a": self.a, "b": self.b,
                "verdict": self.verdict, "witnesses": self.witnesses,
                "limits": "exact leading-term residues"}


def _identity_chart(n: int, vars: Sequence[str]) -> Chart:
    params = tuple(f"u{i + 1}" for i in range(n))
    return Chart(params, tuple(PolyExpr.var(v, params) for v in params))


def _arcs(ch: Chart, u0: tuple, rng: random.Random, count: int) -> list[tuple]:
    d = len(ch.params)
    arcs = []
    for l in range(d):
        arcs.append(tuple(u0[i] + (PuiseuxSeries.monomial(1, 1) if i == l else ZERO)
                          for i in range(d)))
    while len(arcs) < count:
        e = rng.choice((mpq(1), mpq(1, 2), mpq(2)))
        a = [mpq(0) if rng.random() < 0.25 else random_coeff(rng) for _ in range(d)]
        if all(c == 0 for c in a):
            continue
        b = [random_coeff(rng) if rng.random() < 0.5 else mpq(0) for _ in range(d)]
        arcs.append(tuple(u0[i] + PuiseuxSeries.monomial(a[i], e) + PuiseuxSeries.monomial(b[i], 2 * e)
                          if a[i] or b[i] else u0[i] for i in range(d)))
    return arcs


def whitney_check(upper: Stratum, lower: Stratum, p, curves: int = 8, seed: int = 0,
                  pair: tuple = (None, None)) -> WhitneyReport:
    """Whitney (a) and (b) for ``upper`` over ``lower`` at the real point ``p``.

    Arcs ``u(t)`` through a chart preimage of ``p`` give points ``x`` of
    ``upper`` infinitely close to ``p``.  (a): the tangent space of ``lower``
    at ``p`` lies in the limit of the tangent spaces at ``x``.  (b): the limit
    direction of ``x - y`` lies in that limit too, for ``y = p`` and for the
    nearest point of ``lower`` found.
    """
    from .cones import _point

    p = _point(p)
    n = len(p)
    rng = make_rng(seed)
    rep = WhitneyReport(pair, p)
    if not lower.contains(p, approx=True):
        raise DomainError("base point is not on the lower stratum")
    charts = list(upper.charts)
    if not charts and upper.declared_dim == n:
        charts = [_identity_chart(n, upper.vars)]
    if not charts:
        raise DomainError("the upper stratum needs a chart")
    Tlow = tangent_at(lower, p)
    found_any = False
    for ch in charts:
        for u0 in chart_preimages(ch, p):
            for u in _arcs(ch, u0, rng, curves):
                try:
                    x = ch.evaluate(u)
                    if not upper.contains(x, approx=True):
                        continue
                    if all(c.is_zero() for c in (a - b for a, b in zip(x, p))):
                        continue
                    J = ch.jacobian(u)
                    cols = [[J[i][l] for i in range(n)] for l in range(len(ch.params))]
                    L = residue_limit(cols)
                except TconvexError:
                    continue
                if L.dim != upper.declared_dim:
                    continue
                found_any = True
                rep.curves_tested += 1
                arc = {"arc": [str(c) for c in u], "point": [str(c) for c in x],
                       "tangent_limit": L.to_json()}
                if not Tlow.issubspace(L):
                    rep.a = "fails"
                    rep.witnesses.append(dict(arc, condition="a",
                                              lower_tangent=Tlow.to_json()))
                ys = [p]
                y = nearest_stratum_point(x, lower)
                if y is not None:
                    ys.append(y)
                for y in ys:
                    sec = [a - b for a, b in zip(x, y)]
                    try:
                        if all(c.is_zero() for c in sec):
                            continue
                        dr = direction_residue(sec)
                    except TconvexError:
                        continue
                    if not L.contains(dr):
                        rep.b = "fails"
                        rep.witnesses.append(dict(arc, condition="b",
                                                  secant_from=[str(c) for c in y],
                                                  secant_limit=dr))
                        break
    if not found_any:
        rep.incident = False
    return rep


# ---------------------------------------------------------------------------
# the implication suite
# ---------------------------------------------------------------------------

def base_points(S: Stratum, count: int, seed) -> list[tuple]:
    n = len(S.vars)
    out = []
    origin = tuple(ZERO for _ in range(n))
    if S.contains(origin, approx=False):
        out.append(origin)
    for pc in S.pieces:
        try:
            pts = sample_piece(pc, 10 * count, seed, 500, grid=RATIONAL_GRID)
        except TconvexError:
            continue
        out.extend(y for y in pts if S.contains(y) and all(c.is_constant() for c in y))
    return list(dict.fromkeys(out))[: count + 1]


def whitney_suite(rs: TStratCandidate, curves: int = 8, seed: int = 0,
                  points: int = 2) -> tuple[bool, list[WhitneyReport]]:
    reports = []
    for i, up in enumerate(rs.strata):
        for j in range(i):
            low = rs.strata[j]
            if up.is_empty or low.is_empty:
                continue
            if not up.charts and up.declared_dim != rs.n:
                continue
            for p in base_points(low, points, seed):
                r = whitney_check(up, low, p, curves, seed, pair=(i, j))
                if r.incident:
                    reports.append(r)
    return all(r.ok for r in reports), reports


def theorem_main4_suite(rs: TStratCandidate, config: RunConfig | None = None,
                        curves: int = 8) -> Report:
    """t-stratification pass must imply Whitney pass; a violation is flagged
    as an inconsistency of high severity."""
    seed = config.seed if config is not None else 0
    t = archimedean_tstrat_check(rs, config)
    w_ok, reps = whitney_suite(rs, curves, seed)
    if not t.ok:
        implication = "vacuous"
    elif w_ok:
        implication = "holds"
    else:
        implication = "violated"
    details = {
        "candidate": rs.name,
        "tstrat": t.verdict,
        "whitney": "holds" if w_ok else "fails",
        "implication": implication,
        "whitney_reports": reps,
    }
    if implication == "violated":
        details["severity"] = "high"
        return Report("main4", "inconsistent", details, config)
    return Report("main4", "holds", details, config)


# ---------------------------------------------------------------------------
# exponential demo (floating point, log scale)
# ---------------------------------------------------------------------------

DEMO_DELTA = 0.25   # a standard positive amount: the strict inequality needs margin < -DELTA
Z_STEPS = range(-8, 9)


def _log_abs_combination(terms: Sequence[tuple[int, float]]) -> float:
    """``ln |sum s_i e^{l_i}|`` for signs ``s_i`` and logs ``l_i``."""
    terms = [(s, l) for s, l in terms if s != 0 and l != -math.inf]
    if not terms:
        return -math.inf
    m = max(l for _, l in terms)
    acc = math.fsum(s * math.exp(l - m) for s, l in terms)
    if acc == 0:
        return -math.inf
    return m + math.log(abs(acc))


def _exp_fiber(c: float, y0: float, N: float, points: int) -> dict:
    """Margins on the fiber ``y0 (1 +- N^-1/2)`` of ``y -> c^y``."""
    lnN = math.log(N)
    lc = math.log(c)
    r = y0 / math.sqrt(N)
    ys = [y0 - r + 2 * r * k / (points - 1) for k in range(points)]
    per_z = []
    for k in Z_STEPS:
        lz = y0 * lc + math.log(lc) + k / 4 * lnN
        worst = -math.inf
        for y, y2 in itertools.combinations(ys, 2):
            d = y - y2
            lhs = _log_abs_combination([(1, y * lc), (-1, y2 * lc),
                                        (-1 if d > 0 else 1, lz + math.log(abs(d)))])
            m = (lhs - lz - math.log(abs(d))) / lnN
            worst = max(worst, m)
        per_z.append(worst)
    return {"y0": y0, "max_margin_per_z": per_z}


def _control_fiber(kind: str, c0: tuple, N: float, points: int) -> dict:
    lnN = math.log(N)
    s = 1 / math.sqrt(N)
    if kind == "xy":
        x0, y0 = c0
        grid = [(x0 * (1 - s + 2 * s * i / (points - 1)), y0 * (1 - s + 2 * s * j / (points - 1)))
                for i in range(points) for j in range(points)]
        g = lambda q: q[0] * q[1]
        grad = (y0, x0)
    else:
        x0 = c0[0]
        grid = [(x0 * (1 - s + 2 * s * i / (points - 1)),) for i in range(points * 4)]
        g = lambda q: math.sqrt(q[0])
        grad = (0.5 / math.sqrt(x0),)
    per_z = []
    for k in Z_STEPS:
        z = tuple(v * N ** (k / 4) for v in grad)
        nz = max(abs(v) for v in z)
        worst = -math.inf
        for q, q2 in itertools.combinations(grid, 2):
            d = tuple(a - b for a, b in zip(q, q2))
            nd = max(abs(v) for v in d)
            lhs = g(q) - g(q2) - sum(a * b for a, b in zip(z, d))
            m = (math.log(abs(lhs)) - math.log(nz) - math.log(nd)) / lnN if lhs else -math.inf
            worst = max(worst, m)
        per_z.append(worst)
    return {"centre": list(c0), "max_margin_per_z": per_z}


def exponential_demo(a=2, b=3, N_list: Sequence = (10 ** 3, 10 ** 6), fibers: int = 4,
                     points: int = 24, seed: int = 0, config: RunConfig | None = None) -> Report:
    """Log-scale probe of the first-order inequality for ``g(x, y) = x^y``.

    With ``val_N(x) = -ln|x| / ln N``, fibers are relative neighbourhoods
    ``y0 (1 +- N^-1/2)`` of centres in ``[N, N^2]`` on the curves ``x = a`` and
    ``x = b``; candidate slopes ``z`` range over ``g'(y0) N^(k/4)``,
    ``|k| <= 8``.  The margin of a pair is
    ``val_N(z) + val_N(y - y') - val_N(g(y) - g(y') - z (y - y'))`` with signs
    flipped so that the inequality holds iff the margin is below
    ``-DEMO_DELTA``.  Controls ``xy`` and ``x^(1/2)`` run on the same scales.
    """
    a, b = mpq(a), mpq(b)
    if a <= 1 or b <= 1 or a == b:
        raise DomainError("exponential_demo needs rationals a != b, both > 1")
    if config is not None:
        seed = config.seed
    rng = random.Random(seed)
    levels = []
    for N in N_list:
        N = float(N)
        lnN = math.log(N)
        centres = [math.exp(lnN * (1 + rng.random())) for _ in range(fibers)]
        exp_rows = []
        for c in (float(a), float(b)):
            for y0 in centres:
                exp_rows.append(dict(_exp_fiber(c, y0, N, points), base=c))
        every_z = all(m >= -DEMO_DELTA for row in exp_rows for m in row["max_margin_per_z"])
        exp_margin = min(min(row["max_margin_per_z"]) for row in exp_rows)
        controls = {}
        for kind in ("xy", "sqrt"):
            rows = []
            for _ in range(fibers):
                c0 = (math.exp(lnN * (1 + rng.random())), math.exp(lnN * (1 + rng.random())))
                rows.append(_control_fiber(kind, c0 if kind == "xy" else c0[:1], N, 7))
            bad = sum(1 for row in rows if min(row["max_margin_per_z"]) >= -DEMO_DELTA)
            best = max(min(row["max_margin_per_z"]) for row in rows)
            controls[kind] = {"fibers": len(rows), "violations": bad,
                              "worst_best_margin": round(best, 6)}
        levels.append({
            "N": int(N),
            "exponential": {"fibers": len(exp_rows), "violation_at_every_z": every_z,
                            "min_violation_margin": round(exp_margin, 6)},
            "controls": controls,
        })
    margins = [lv["exponential"]["min_violation_margin"] for lv in levels]
    increasing = all(m2 > m1 for m1, m2 in zip(margins, margins[1:]))
    exp_ok = all(lv["exponential"]["violation_at_every_z"] for lv in levels)
    ctrl_ok = all(c["violations"] == 0 for lv in levels for c in lv["controls"].values())
    verdict = "pass" if (exp_ok and increasing and ctrl_ok) else "fail"
    details = {
        "kind": "evidence, not proof",
        "arithmetic": "floating point, log domain",
        "a": a, "b": b, "delta": DEMO_DELTA,
        "z_grid": "g'(y0) * N^(k/4), k = -8..8",
        "levels": levels,
        "margins_increasing": increasing,
    }
    return Report("exp-demo", verdict, details, config)


__all__ = [
    "star_lift",
    "RealStratification",
    "lift_candidate",
    "archimedean_tstrat_check",
    "residue_limit",
    "tangent_at",
    "chart_preimages",
    "WhitneyReport",
    "whitney_check",
    "whitney_suite",
    "theorem_main4_suite",
    "exponential_demo",
]
