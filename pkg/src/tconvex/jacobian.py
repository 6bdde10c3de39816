"""The Jacobian property, checked on sampled fibers.

For a polynomial ``f`` in ``n`` variables the map ``chi`` used here sends ``x``
to the classes ``rvo(x_i - s)`` for ``s`` in a finite centre set ``S_i`` of
each coordinate, together with ``rvo(D^alpha f(x))`` for every non-constant
partial derivative.  The centre sets collect the real roots (and the real
parts of expansions of complex roots) of those derivatives that involve a
single variable, so that a fiber never straddles two critical points.

A fiber is kept as a :class:`JpFiber`: its defining piece plus the base point
it was built from.  Points of a fiber are drawn as ``x0 + delta`` with
``val(delta_i)`` above the coordinate radius, then filtered by membership.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .errors import SamplingExhausted, TconvexError, TruncationError
from .formula import Atom, DefinablePiece, PolyExpr, domain_piece, parse_poly
from .newton import newton_polygon_roots
from .report import Report, RunConfig, min_value
from .rv import ZERO_RV, res, rvo, rvo_n, val_tuple
from .sampling import DEFAULT_GRID, Grid, make_rng, random_series, sample_piece
from .series import INF, ZERO, PuiseuxSeries, diff_val_bound, series, val_of_combination


class PreconditionError(TconvexError):
    pass


def _margin_comb(items, offset):
    v = val_of_combination(items)
    if isinstance(v, tuple):
        bound = v[1] - offset
        if bound > 0:
            return bound
        raise TruncationError("margin sign not resolved at this truncation")
    if v == INF:
        return INF
    return v - offset


def _dist(a, b):
    """``val(a - b)`` for points (or scalars) without forming the difference."""
    if isinstance(a, PuiseuxSeries):
        a, b = (a,), (b,)
    if all(c.is_exact for c in a) and all(c.is_exact for c in b):
        return min(diff_val_bound(x, y) for x, y in zip(a, b))
    return val_tuple([x - y for x, y in zip(a, b)])


# ---------------------------------------------------------------------------
# Lemma: mean value inequality for g with constant res(g')
# ---------------------------------------------------------------------------

def sample_OR(count: int, rng, grid: Grid = DEFAULT_GRID) -> list[PuiseuxSeries]:
    out: list = []
    seen: set = set()
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        x = random_series(rng, grid, at_least=mpq(0), zero_prob=0.02)
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def mean_value_check(g, samples: int = 200, seed: int = 0, pairs: int | None = None,
                     config: RunConfig | None = None) -> Report:
    if isinstance(g, str):
        g = parse_poly(g)
    if len(g.vars) != 1:
        raise ValueError("mean_value_check needs a univariate polynomial")
    rng = make_rng(seed)
    dg = g.partial(0)
    xs = sample_OR(samples, rng)
    residues = set()
    gx = []
    for x in xs:
        v = g.evaluate((x,))
        d = dg.evaluate((x,))
        if v.val() < 0 or d.val() < 0:
            return Report("mean-value", "precondition-error",
                          {"reason": "g or g' leaves O_R", "point": x}, config)
        residues.add(res(d))
        gx.append(v)
    if len(residues) > 1:
        return Report("mean-value", "precondition-error",
                      {"reason": "res(g') is not constant on samples",
                       "residues": sorted(residues)[:5]}, config)
    g0 = dg.evaluate((ZERO,))
    worst = INF
    witness = None
    checked = 0
    limit = pairs if pairs is not None else len(xs) * (len(xs) - 1) // 2
    # g(x) - g(x') - g'(0)(x - x') = L(x) - L(x') with L = g - g'(0) x
    lx = [v - g0 * x for v, x in zip(gx, xs)]
    for i, j in itertools.combinations(range(len(xs)), 2):
        if checked >= limit:
            break
        m = _margin_comb([(1, lx[i]), (-1, lx[j])], _dist(xs[i], xs[j]))
        checked += 1
        if m < worst:
            worst = m
            witness = (xs[i], xs[j])
    verdict = "holds" if worst > 0 else "violated"
    det = {"g": str(g), "pairs": checked, "min_margin": worst, "samples": len(xs)}
    if verdict == "violated":
        det["violating_pair"] = witness
    return Report("mean-value", verdict, det, config)


# ---------------------------------------------------------------------------
# partitions with constant rvo(jac f)
# ---------------------------------------------------------------------------

def derivative_components(f: PolyExpr) -> list[PolyExpr]:
    """All non-constant partial derivatives of order >= 1, deduplicated."""
    n = len(f.vars)
    out: list = []
    seen: set = set()
    frontier = [f]
    while frontier:
        nxt = []
        for p in frontier:
            for i in range(n):
                d = p.partial(i)
                if d.is_zero():
                    continue
                key = str(d)
                if key in seen:
                    continue
                seen.add(key)
                if not d.is_constant():
                    out.append(d)
                    nxt.append(d)
        frontier = nxt
    return out


def coordinate_centres(f: PolyExpr) -> list[list[PuiseuxSeries]]:
    n = len(f.vars)
    S: list[list] = [[ZERO] for _ in range(n)]
    for comp in [f] + derivative_components(f):
        used = comp.used_vars()
        if len(used) != 1:
            continue
        i = used[0]
        try:
            roots = newton_polygon_roots(comp.univariate_coeffs(i))
        except TconvexError:
            continue
        for nr in roots:
            r = PuiseuxSeries(nr.root.terms)  # exact prefix
            if all(r != s for s in S[i]):
                S[i].append(r)
    return S


@dataclass
class JpFiber:
    piece: DefinablePiece
    base: tuple
    radii: tuple
    full_dim: bool
    code: tuple
    index: int = 0

    def __str__(self):
        return str(self.piece)

    def to_json(self):
        return {"id": self.index, "piece": str(self.piece), "base": list(self.base),
                "full_dim": self.full_dim}


@dataclass
class JpPartition:
    f: PolyExpr
    domain: DefinablePiece
    centres: list
    components: list
    pieces: list = field(default_factory=list)

    def code(self, x) -> tuple:
        out = []
        for i, S in enumerate(self.centres):
            out.extend(rvo(x[i] - s) for s in S)
        out.extend(rvo(c.evaluate(x)) for c in self.components)
        return tuple(out)

    def fiber_of(self, x) -> JpFiber:
        x = tuple(series(c) for c in x)
        vars = self.f.vars
        atoms = list(self.domain.atoms)
        radii = []
        eq = False
        for i, S in enumerate(self.centres):
            xi = PolyExpr.var(vars[i], vars)
            best = -INF
            for s in S:
                cls = rvo(x[i] - s)
                atoms.append(Atom("rv", xi - s, "=", cls))
                if cls.is_zero:
                    eq = True
                best = max(best, cls.gamma)
            radii.append(best)
        for c in self.components:
            cls = rvo(c.evaluate(x))
            atoms.append(Atom("rv", c, "=", cls))
            if cls.is_zero:
                eq = True
        eq = eq or any(a.kind == "sign" and a.op == "=" for a in self.domain.atoms)
        piece = DefinablePiece(tuple(dict.fromkeys(atoms)), vars)
        return JpFiber(piece, x, tuple(radii), not eq, self.code(x))

    def locate(self, x) -> list[int]:
        c = self.code(x)
        return [k for k, p in enumerate(self.pieces) if p.code == c]

    def to_json(self):
        return {"f": str(self.f), "domain": str(self.domain),
                "centres": [[str(s) for s in S] for S in self.centres],
                "pieces": [p.to_json() for p in self.pieces]}


def jp_partition_build(f, domain=None, count: int = 8, seed: int = 0,
                       budget: int = 1000) -> JpPartition:
    if isinstance(f, str):
        f = parse_poly(f)
    domain = domain_piece(domain, f.vars)
    part = JpPartition(f, domain, coordinate_centres(f), derivative_components(f))
    anchors = [list(S) for S in part.centres]
    base = sample_piece(domain, count * 4, seed, budget, extra=anchors)
    codes = set()
    for x in base:
        try:
            fib = part.fiber_of(x)
        except TruncationError:
            continue
        if fib.code in codes:
            continue
        codes.add(fib.code)
        fib.index = len(part.pieces)
        part.pieces.append(fib)
        if len(part.pieces) >= count:
            break
    return part


def sample_fiber(fib: JpFiber, count: int, seed=0, budget: int = 1000,
                 grid: Grid = DEFAULT_GRID) -> list[tuple]:
    """Points ``x0 + delta`` of a fiber with ``val(delta_i) > radius_i``."""
    if isinstance(fib, DefinablePiece):
        return sample_piece(fib, count, seed, budget)
    rng = make_rng(seed)
    out = [fib.base]
    seen = {fib.base}
    attempts = 0
    limit = budget + 50 * count
    while len(out) < count and attempts < limit:
        attempts += 1
        x = tuple(
            b if (r == INF or rng.random() < 0.1) else b + random_series(rng, grid, above=r)
            for b, r in zip(fib.base, fib.radii)
        )
        if x in seen:
            continue
        try:
            if not fib.piece.contains(x):
                continue
        except TruncationError:
            continue
        seen.add(x)
        out.append(x)
    if len(out) < 2 and count >= 2 and fib.full_dim:
        raise SamplingExhausted(f"fiber {fib.piece} yielded too few points", attempts)
    return out


def jp_witness(f, piece, seed: int = 0, samples: int = 24) -> tuple:
    """Leading data of the gradient, after checking it is constant on samples."""
    if isinstance(f, str):
        f = parse_poly(f)
    grad = f.gradient()
    pts = sample_fiber(piece, samples, seed)
    classes = {rvo_n([g.evaluate(x) for g in grad]) for x in pts}
    if len(classes) != 1:
        raise TconvexError(f"rvo(jac f) is not constant on {piece}: {len(classes)} classes")
    cls = classes.pop()
    if cls.is_zero:
        raise TconvexError("zero Jacobian class: nothing to witness")
    return tuple(PuiseuxSeries.monomial(c, cls.gamma) if c != 0 else ZERO for c in cls.lead_vec)


@dataclass
class JpReport:
    piece: str
    z: tuple
    pairs_checked: int
    min_margin: object
    verdict: str
    violating_pair: tuple | None = None
    piece_id: int = 0

    @property
    def ok(self) -> bool:
        return self.verdict in ("holds", "skipped")

    def to_json(self):
        out = {"piece": self.piece, "piece_id": self.piece_id, "z": list(self.z),
               "pairs": self.pairs_checked, "min_margin": self.min_margin,
               "verdict": self.verdict}
        if self.violating_pair is not None:
            out["violating_pair"] = self.violating_pair
        return out


def points_for_pairs(pairs: int) -> int:
    return max(2, math.ceil((1 + math.sqrt(1 + 8 * pairs)) / 2))


def jp_check(f, piece, z, pairs: int = 10_000, seed: int = 0, budget: int = 1000) -> JpReport:
    if isinstance(f, str):
        f = parse_poly(f)
    pid = getattr(piece, "index", 0)
    if isinstance(piece, JpFiber) and not piece.full_dim:
        return JpReport(str(piece), tuple(z), 0, INF, "skipped", None, pid)
    if isinstance(piece, DefinablePiece) and piece.equations():
        return JpReport(str(piece), tuple(z), 0, INF, "skipped", None, pid)
    z = tuple(series(c) for c in z)
    vz = val_tuple(z)
    m = points_for_pairs(pairs)
    pts = sample_fiber(piece, m, seed, budget)
    n = len(z)
    # f(x) - f(x') - <z, x - x'> = L(x) - L(x') with L = f - <z, .>
    lx = []
    for x in pts:
        v = f.evaluate(x)
        for k in range(n):
            if not z[k].is_zero():
                v = v - z[k] * x[k]
        lx.append(v)
    worst = INF
    witness = None
    checked = 0
    for i, j in itertools.combinations(range(len(pts)), 2):
        if checked >= pairs:
            break
        a, b = pts[i], pts[j]
        mg = _margin_comb([(1, lx[i]), (-1, lx[j])], vz + _dist(a, b))
        checked += 1
        if mg < worst:
            worst = mg
            witness = (a, b)
    verdict = "holds" if worst > 0 else "violated"
    return JpReport(str(piece), z, checked, worst, verdict,
                    witness if verdict == "violated" else None, pid)


def jp_run(f, domain=None, pieces: int = 6, pairs: int = 10_000, seed: int = 0,
           budget: int = 1000, config: RunConfig | None = None) -> Report:
    """Build the partition, then witness and check every full-dimensional piece."""
    part = jp_partition_build(f, domain, pieces, seed, budget)
    reports = []
    for fib in part.pieces:
        if not fib.full_dim:
            reports.append(JpReport(str(fib), (), 0, INF, "skipped", None, fib.index))
            continue
        try:
            z = jp_witness(part.f, fib, seed)
        except TconvexError as exc:
            if "zero Jacobian" in str(exc):
                reports.append(JpReport(str(fib), (), 0, INF, "skipped", None, fib.index))
                continue
            raise
        reports.append(jp_check(part.f, fib, z, pairs, seed, budget))
    checked = [r for r in reports if r.verdict != "skipped"]
    verdict = "holds" if all(r.verdict == "holds" for r in checked) else "violated"
    if not checked:
        verdict = "skipped"
    return Report("jp-check", verdict, {
        "f": str(part.f),
        "centres": [[str(s) for s in S] for S in part.centres],
        "pieces": reports,
        "min_margin": min_value(r.min_margin for r in checked),
        "pairs": sum(r.pairs_checked for r in checked),
    }, config)


__all__ = [
    "mean_value_check",
    "jp_partition_build",
    "jp_witness",
    "jp_check",
    "jp_run",
    "JpReport",
    "JpPartition",
    "JpFiber",
    "sample_fiber",
    "coordinate_centres",
    "derivative_components",
    "PreconditionError",
]
