"""Stratification vocabulary as sample-based checks.

Risometries, rainbow codes, affine directions and exhibitions, graph fits,
straightening, and :func:`tstrat_verify`, which tests the two defining
conditions of a t-stratification on sampled balls.  Every positive verdict is
``"necessary-conditions-pass"``: sampling can refute, never prove.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

from gmpy2 import mpq

from .errors import DomainError, ParseError, SamplingExhausted, TconvexError, TruncationError
from .formula import (Atom, DefinablePiece, Partition, PolyExpr, domain_piece, natural_key,
                      parse_formula, parse_map, parse_poly)
from .report import DEFAULT_CONFIG, Report, RunConfig
from .rv import RvNElement, res, rvo_n, val_tuple
from .sampling import (DEFAULT_GRID, Grid, exponent_grid, make_rng, nearest, random_coeff,
                       random_series, sample_piece, solve_towards)
from .series import INF, ONE, ZERO, PuiseuxSeries, diff_val_bound, series


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------

def _as_map(phi, vars=None) -> tuple:
    if callable(phi) and not isinstance(phi, PolyExpr):
        return phi
    if isinstance(phi, str):
        phi = [s for s in phi.split(";") if s.strip()]
    if isinstance(phi, PolyExpr):
        phi = (phi,)
    if all(isinstance(p, PolyExpr) for p in phi):
        return tuple(phi)
    return parse_map(list(phi), vars)


def apply_map(phi, x: Sequence) -> tuple:
    if callable(phi) and not isinstance(phi, tuple):
        return tuple(phi(x))
    return tuple(p.evaluate(x) for p in phi)


def compose_maps(phi: Sequence[PolyExpr], psi: Sequence[PolyExpr]) -> tuple:
    """``phi o psi`` as polynomials (``phi`` in as many variables as ``psi`` has components)."""
    out = []
    vars = psi[0].vars
    for p in phi:
        acc = PolyExpr.const(ZERO, vars)
        cache: dict = {}
        for m, c in p.terms.items():
            term = PolyExpr.const(c, vars)
            for i, k in enumerate(m):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = psi[i] ** k
                    term = term * cache[(i, k)]
            acc = acc + term
        out.append(acc)
    return tuple(out)


def _diff(a: Sequence, b: Sequence) -> tuple:
    return tuple(series(x) - series(y) for x, y in zip(a, b))


def _dist(a: Sequence, b: Sequence):
    """``val(a - b)``, or its known lower bound when truncation hides it."""
    return min((diff_val_bound(series(x), series(y)) for x, y in zip(a, b)), default=INF)


def risometry_check(phi, X, pairs: int = 1000, seed: int = 0, budget: int = 1000,
                    points: Sequence | None = None, config: RunConfig | None = None) -> Report:
    """Sampled test of ``rvo(phi(x) - phi(y)) = rvo(x - y)`` on ``X``."""
    if isinstance(X, str):
        vars = None
        if not callable(phi) or isinstance(phi, (str, list, tuple)):
            m = _as_map(phi)
            if not callable(m):
                vars = m[0].vars
        X = domain_piece(X, vars or ("x",))
    phi = _as_map(phi, X.vars)
    if not callable(phi):
        phi = tuple(p.with_vars(X.vars) for p in phi)
        if len(phi) != X.dim:
            raise DomainError(f"map has {len(phi)} components on a {X.dim}-dimensional set")
    if points is None:
        k = 2
        while k * (k - 1) // 2 < pairs and k < 400:
            k += 1
        points = sample_piece(X, k, seed, budget)
    images = [apply_map(phi, x) for x in points]
    checked = 0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if checked >= pairs:
                break
            checked += 1
            lhs = rvo_n(_diff(images[i], images[j]))
            rhs = rvo_n(_diff(points[i], points[j]))
            if lhs != rhs:
                return Report("risometry", "violated", {
                    "pairs_checked": checked,
                    "violating_pair": [list(points[i]), list(points[j])],
                    "rv_of_image_difference": str(lhs),
                    "rv_of_difference": str(rhs),
                }, config)
    return Report("risometry", "holds", {"pairs_checked": checked, "points": len(points)}, config)


# ---------------------------------------------------------------------------
# residue linear algebra
# ---------------------------------------------------------------------------

def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over the residue field; drops zero rows."""
    m = [[mpq(v) if isinstance(v, (int, float)) else v for v in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c] if not hasattr(m[r][c], "inverse") else m[r][c].inverse()
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


@dataclass(frozen=True)
class ResidueSubspace:
    """Subspace of the residue field ``R^n`` in reduced row echelon form."""

    basis: tuple
    pivots: tuple
    n: int

    @classmethod
    def span(cls, vectors: Sequence[Sequence], n: int) -> "ResidueSubspace":
        rows, piv = rref(vectors)
        return cls(tuple(tuple(r) for r in rows), tuple(piv), n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return ResidueSubspace.span(list(self.basis) + [list(v)], self.n).dim == self.dim

    def issubspace(self, other: "ResidueSubspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def to_json(self):
        return {"dim": self.dim, "basis": [list(b) for b in self.basis]}


def residue_differences(sample: Sequence[Sequence], scale=None) -> list[list]:
    """Residues of ``(x - x_0) / t^scale`` for ``x`` in the sample."""
    if not sample:
        return []
    x0 = sample[0]
    out = []
    for x in sample[1:]:
        d = _diff(x, x0)
        if scale is not None:
            d = tuple(c.shift(-scale) for c in d)
        out.append([res(c) for c in d])
    return out


def affine_direction(sample: Sequence[Sequence], scale=None) -> ResidueSubspace:
    """Span of the residues of pairwise differences of a sample in ``O^n``.

    Differences to the first point span the same space as all pairwise ones.
    ``scale`` rescales differences by ``t^-scale`` first (sets inside a ball).
    """
    n = len(sample[0]) if sample else 0
    return ResidueSubspace.span(residue_differences(sample, scale), n)


def exhibition_find(V: ResidueSubspace) -> tuple[int, ...]:
    """Coordinates whose projection is an isomorphism on ``V`` (the pivots)."""
    return tuple(V.pivots)


def graph_fit(sample: Sequence[Sequence], coords: Sequence[int]) -> tuple[list, str]:
    """Table ``(pi(x), x_perp)`` and whether ``pi`` is injective on the sample."""
    coords = tuple(coords)
    table: dict = {}
    rows = []
    verdict = "holds"
    for x in sample:
        key = tuple(x[i] for i in coords)
        rest = tuple(x[i] for i in range(len(x)) if i not in coords)
        if key in table and table[key] != rest:
            verdict = "fails"
        table.setdefault(key, rest)
        rows.append((key, rest))
    return rows, verdict


# ---------------------------------------------------------------------------
# straightening
# ---------------------------------------------------------------------------

def _det(m: list[list]):
    n = len(m)
    if n == 0:
        return ONE
    if n == 1:
        return m[0][0]
    acc = None
    for j in range(n):
        if m[0][j] == 0 if not isinstance(m[0][j], PuiseuxSeries) else m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return ZERO if acc is None else acc


def _matrix(M) -> list[list[PuiseuxSeries]]:
    return [[series(c) if not isinstance(c, str) else parse_poly(c, ()).constant() for c in row]
            for row in M]


def _solve_linear(M: list[list[PuiseuxSeries]], y: Sequence) -> tuple:
    """``M^-1 y`` by Cramer's rule (small n)."""
    d = _det(M)
    dinv = d.inv()
    out = []
    for j in range(len(M)):
        Mj = [row[:j] + [y[i]] + row[j + 1:] for i, row in enumerate(M)]
        out.append(_det(Mj) * dinv)
    return tuple(out)


def straightening_check(h, M, X, pairs: int = 1000, seed: int = 0, budget: int = 1000,
                        config: RunConfig | None = None) -> Report:
    """Does ``h`` factor as a risometry after the matrix ``M`` with unit determinant?

    Tests that ``h o M^-1`` is a risometry on ``M(X)`` by sampling ``x`` in ``X``
    and comparing ``h(x), h(y)`` against ``M x, M y``.
    """
    Mm = _matrix(M)
    d = _det(Mm)
    if d.is_zero() or d.val() != 0:
        raise DomainError("straightening matrix must have unit determinant (val(det) = 0)")
    if isinstance(X, str):
        hm = _as_map(h)
        X = domain_piece(X, hm[0].vars if not callable(hm) else ("x",))
    hm = _as_map(h, X.vars)
    k = 2
    while k * (k - 1) // 2 < pairs and k < 400:
        k += 1
    pts = sample_piece(X, k, seed, budget)

    def lin(x):
        return tuple(sum((Mm[i][j] * series(x[j]) for j in range(len(x))), ZERO)
                     for i in range(len(Mm)))

    images = {lin(x): apply_map(hm, x) for x in pts}

    def composed(y):
        return images[tuple(y)]

    rep = risometry_check(composed, DefinablePiece((), X.vars), pairs, seed,
                          points=list(images), config=config)
    return Report("straightening", rep.verdict, dict(rep.details, det_val=0), config)


# ---------------------------------------------------------------------------
# strata and candidates
# ---------------------------------------------------------------------------

@dataclass
class Chart:
    """Polynomial parametrisation ``u -> map(u)`` of a stratum."""

    params: tuple
    map: tuple
    domain: DefinablePiece | None = None

    def evaluate(self, u: Sequence) -> tuple:
        return tuple(p.evaluate(u) for p in self.map)

    def jacobian(self, u: Sequence) -> list[list[PuiseuxSeries]]:
        return [[p.partial(l).evaluate(u) for l in range(len(self.params))] for p in self.map]

    def rank_at(self, u: Sequence) -> int:
        J = self.jacobian(u)
        n, d = len(J), len(self.params)
        for r in range(min(n, d), 0, -1):
            for rows in itertools.combinations(range(n), r):
                for cols in itertools.combinations(range(d), r):
                    m = [[J[i][j] for j in cols] for i in rows]
                    if not _det(m).is_zero():
                        return r
        return 0

    def sample_params(self, rng, count: int, grid=DEFAULT_GRID) -> list[tuple]:
        dom = self.domain or DefinablePiece((), self.params)
        return sample_piece(dom, count, rng, grid=grid)

    def to_json(self):
        out = {"params": list(self.params), "map": [str(p) for p in self.map]}
        if self.domain is not None and self.domain.atoms:
            out["domain"] = str(self.domain)
        return out


@dataclass
class Stratum:
    """A union of pieces minus excluded pieces, with a declared dimension."""

    pieces: list
    declared_dim: int
    exclude: list = field(default_factory=list)
    charts: list = field(default_factory=list)
    vars: tuple = ()

    @property
    def chart(self) -> Chart | None:
        return self.charts[0] if self.charts else None

    @property
    def piece(self) -> DefinablePiece | None:
        return self.pieces[0] if len(self.pieces) == 1 else None

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    def contains(self, x, approx: bool = False) -> bool:
        if not any(p.contains(x, approx) for p in self.pieces):
            return False
        return not any(e.contains(x, approx) for e in self.exclude)

    __contains__ = contains

    def equation_pieces(self) -> list[DefinablePiece]:
        return [DefinablePiece(tuple(p.equations()), p.vars) for p in self.pieces]

    def to_json(self):
        out = {"dim": self.declared_dim, "pieces": [str(p) for p in self.pieces]}
        if self.exclude:
            out["exclude"] = [str(p) for p in self.exclude]
        if self.charts:
            out["charts"] = [c.to_json() for c in self.charts]
        return out

    def __str__(self):
        if not self.pieces:
            return "empty"
        body = " | ".join(f"({p})" for p in self.pieces)
        if self.exclude:
            body += " minus " + " | ".join(f"({p})" for p in self.exclude)
        return body


def _pieces_of(raw, vars) -> list[DefinablePiece]:
    if raw is None:
        return []
    if isinstance(raw, (str, DefinablePiece)):
        raw = [raw]
    return [s if isinstance(s, DefinablePiece) else parse_formula(s, vars) for s in raw]


def stratum_from_json(obj: dict, vars: Sequence[str], slot: int) -> Stratum:
    pieces = _pieces_of(obj.get("pieces", obj.get("piece")), vars)
    exclude = _pieces_of(obj.get("exclude"), vars)
    raw = obj.get("charts") or ([obj["chart"]] if obj.get("chart") else [])
    charts = []
    for c in raw:
        params = tuple(c["params"])
        cmap = tuple(parse_poly(s, params) for s in c["map"])
        if len(cmap) != len(vars):
            raise ParseError(f"chart map needs {len(vars)} components", 0, json.dumps(c))
        dom = parse_formula(c["domain"], params) if c.get("domain") else None
        charts.append(Chart(params, cmap, dom))
    dim = obj.get("dim", slot)
    return Stratum(pieces, int(dim), exclude, charts, tuple(vars))


@dataclass
class TStratCandidate:
    """Strata ``S_0 .. S_n`` of a domain ``B_0`` in ``n`` variables."""

    vars: tuple
    strata: list
    domain: DefinablePiece | None = None
    name: str = ""

    @property
    def n(self) -> int:
        return len(self.vars)

    def label(self, x, approx: bool = True) -> tuple:
        return tuple(i for i, S in enumerate(self.strata) if S.contains(x, approx))

    def in_domain(self, x, approx: bool = True) -> bool:
        return self.domain is None or self.domain.contains(x, approx)

    @classmethod
    def from_json(cls, obj) -> "TStratCandidate":
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", exc.pos, obj) from None
        vars = tuple(obj.get("vars") or ())
        if not vars:
            raise ParseError("candidate needs a 'vars' list", 0, json.dumps(obj))
        raw = obj["strata"]
        strata = [stratum_from_json(s or {}, vars, i) for i, s in enumerate(raw)]
        while len(strata) < len(vars) + 1:
            strata.append(Stratum([], len(strata), vars=vars))
        dom = obj.get("domain")
        domain = None if dom in (None, "", "R", "true") else domain_piece(dom, vars)
        return cls(vars, strata, domain, obj.get("name", ""))

    def to_json(self):
        return {"name": self.name, "vars": list(self.vars),
                "domain": str(self.domain) if self.domain is not None else "true",
                "strata": [S.to_json() for S in self.strata]}


def candidate(vars: Sequence[str], strata: Sequence, domain=None, name: str = "") -> TStratCandidate:
    """Shorthand: ``strata[d]`` is a formula, a list of formulas, a dict or ``None``."""
    objs = []
    for d, s in enumerate(strata):
        if s is None:
            objs.append({"pieces": [], "dim": d})
        elif isinstance(s, dict):
            objs.append(dict({"dim": d}, **s))
        else:
            objs.append({"pieces": s, "dim": d})
    return TStratCandidate.from_json({"vars": list(vars), "strata": objs,
                                      "domain": domain, "name": name})


# ---------------------------------------------------------------------------
# rainbow
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RainbowCode:
    """Per stratum: ``(val(x - p), rvo_n(x - p))`` for the nearest found ``p``.

    ``None`` marks an empty stratum (or one with no point found near ``x``).
    """

    entries: tuple

    def distances(self) -> tuple:
        return tuple(None if e is None else e[0] for e in self.entries)

    def to_json(self):
        return [None if e is None else {"val": e[0], "rv": str(e[1])} for e in self.entries]


def nearest_stratum_point(x: Sequence, S: Stratum, pool: Sequence = (), rng=None,
                          tries: int = 2) -> tuple | None:
    """Closest point of ``S`` found among ``pool`` and coordinate-wise projections."""
    cands = list(pool)
    n = len(x)
    orders = [list(range(n)), list(reversed(range(n)))]
    for p in S.equation_pieces():
        for order in orders[:tries]:
            y = solve_towards(p, x, order=order)
            if y is not None:
                cands.append(y)
    best, bv = None, None
    for y in cands:
        try:
            if not S.contains(y, approx=True):
                continue
        except TconvexError:
            continue
        v = _dist(x, y)
        if bv is None or v > bv:
            best, bv = y, v
    return best


def rainbow_code(x: Sequence, cand: TStratCandidate, pools: Sequence | None = None,
                 upto: int | None = None) -> RainbowCode:
    x = tuple(series(c) for c in x)
    entries = []
    for i, S in enumerate(cand.strata):
        if upto is not None and i >= upto:
            break
        if S.is_empty:
            entries.append(None)
            continue
        if S.contains(x, approx=True):
            entries.append((INF, rvo_n([ZERO] * len(x))))
            continue
        pool = pools[i] if pools else ()
        y = nearest_stratum_point(x, S, pool)
        if y is None:
            entries.append(None)
            continue
        d = _diff(x, y)
        try:
            entries.append((val_tuple(d), rvo_n(d)))
        except TruncationError:
            entries.append(None)
    return RainbowCode(tuple(entries))


# ---------------------------------------------------------------------------
# verifier
# ---------------------------------------------------------------------------

RADII = (mpq(-1), mpq(0), mpq(1, 2), mpq(1), mpq(2), mpq(3))
# coarse exponents keep Newton roots of sampled points short and within the
# denominator limit
VERIFY_GRID = Grid(max_den=2, max_abs_exp=3, coeff_range=5)


@dataclass
class _Ball:
    center: tuple
    radius: object

    def contains(self, x) -> bool:
        return _dist(x, self.center) > self.radius

    def __str__(self):
        return "B((" + ", ".join(str(c) for c in self.center) + f"), >{self.radius})"


def _random_in_ball(rng, ball: _Ball, zero_prob: float = 0.25) -> tuple:
    out = []
    for c in ball.center:
        if rng.random() < zero_prob:
            out.append(c)
        else:
            out.append(c + random_series(rng, VERIFY_GRID, above=ball.radius, max_terms=2))
    return tuple(out)


def _pools(cand: TStratCandidate, rng, count: int, budget: int) -> list[list]:
    pools = []
    for S in cand.strata:
        pts: list = []
        for p in S.pieces:
            try:
                got = sample_piece(p, count, rng, budget, grid=VERIFY_GRID, approx=True,
                                   shuffle=True)
            except SamplingExhausted:
                got = []
            pts.extend(x for x in got if S.contains(x, approx=True))
        for ch in S.charts:
            try:
                for u in ch.sample_params(rng, count, VERIFY_GRID):
                    y = ch.evaluate(u)
                    if S.contains(y, approx=True):
                        pts.append(y)
            except TconvexError:
                pass
        pools.append(pts)
    return pools


def _check_dims(cand: TStratCandidate, rng) -> list[dict]:
    issues = []
    for d, S in enumerate(cand.strata):
        if S.is_empty:
            continue
        if S.declared_dim > d or S.declared_dim > cand.n:
            issues.append({"stratum": d, "issue": f"declared dim {S.declared_dim} exceeds {d}"})
            continue
        for ch in S.charts:
            if len(ch.params) != S.declared_dim:
                issues.append({"stratum": d, "issue": "chart has the wrong number of parameters"})
                break
            for u in ch.sample_params(rng, 5):
                r = ch.rank_at(u)
                if r != S.declared_dim and S.contains(ch.evaluate(u), approx=True):
                    issues.append({"stratum": d, "issue": f"chart rank {r} at {list(u)}"})
                    break
    return issues


def _graph_value(x: tuple, I: tuple, pieces: Sequence[DefinablePiece]):
    """Nearest point of the equation set over ``x_I`` (solving the other coordinates)."""
    J = [j for j in range(len(x)) if j not in I]
    best, bv = None, None
    for p in pieces:
        if not p.atoms:
            continue
        y = solve_towards(p, x, order=J, fixed=I)
        if y is None:
            continue
        v = _dist(x, y)
        if bv is None or v > bv:
            best, bv = (y, p), v
    return best


def straightened_move(x: tuple, w: dict, I: tuple, pieces: Sequence[DefinablePiece]) -> tuple:
    """Translate ``x_I`` by ``w`` and carry the other coordinates along the graph
    of the stratum over ``I``; falls back to a plain translation."""
    n = len(x)
    moved = list(x)
    for i, v in w.items():
        moved[i] = x[i] + v
    if len(I) == n:
        return tuple(moved)
    g = _graph_value(x, I, pieces)
    if g is None:
        return tuple(moved)
    y, p = g
    J = [j for j in range(n) if j not in I]
    if any((x[j] - y[j]).is_truncated_zero() for j in J) and not p.contains(x, approx=True):
        # x is off the graph by less than the truncation can see
        raise TruncationError("offset from the graph lost at this truncation")
    start = list(y)
    for i in I:
        start[i] = moved[i]
    y2 = solve_towards(p, start, order=J, fixed=I)
    if y2 is None:
        return tuple(moved)
    for j in J:
        moved[j] = x[j] - y[j] + y2[j]
    return tuple(moved)


def _labels(cand, reflected, x) -> tuple:
    lab = cand.label(x, approx=True)
    refl = tuple(tuple(P.locate(x, approx=True)) for P in reflected)
    return lab, refl


def _ball_check(cand, reflected, ball: _Ball, pools, rng, points: int, moves: int) -> dict:
    n = cand.n
    pts: list = []
    for _ in range(points):
        pts.append(_random_in_ball(rng, ball))
    for S in cand.strata:
        for p in S.equation_pieces():
            if not p.atoms:
                continue
            for _ in range(3):
                y = solve_towards(p, _random_in_ball(rng, ball), rng)
                if y is not None:
                    pts.append(y)
    for pool in pools:
        pts.extend(y for y in pool if ball.contains(y))
    pts = [y for y in dict.fromkeys(pts) if ball.contains(y) and cand.in_domain(y)]
    labelled = []
    for y in pts:
        try:
            labelled.append((y, _labels(cand, reflected, y)))
        except TconvexError:
            continue
    for y, (lab, _) in labelled:
        if len(lab) != 1:
            return {"status": "fail", "condition": "partition", "point": list(y),
                    "strata_containing": list(lab)}
    if not labelled:
        return {"status": "skip"}
    dB = min(lab[0] for _, (lab, _) in labelled)
    if dB == 0:
        return {"status": "pass", "d": 0, "exhibition": []}
    S = cand.strata[dB]
    pieces = S.equation_pieces()
    fiber = [y for y, (lab, _) in labelled if lab[0] == dB]
    # candidate translatability spaces: afd of the rescaled fiber first
    cands: list = []
    try:
        mu = min(_dist(y, fiber[0]) for y in fiber[1:]) if len(fiber) > 1 else None
        if mu is not None and mu != INF:
            V = affine_direction(fiber, scale=mu)
            if V.dim >= dB:
                cands.append(exhibition_find(V)[:dB])
    except TconvexError:
        pass
    for I in itertools.combinations(range(n), dB):
        if I not in cands:
            cands.append(I)
    codes: dict = {}
    for y in fiber:
        try:
            codes.setdefault(rainbow_code(y, cand, pools, upto=dB), []).append(y)
        except TconvexError:
            continue
    tried = []
    for I in cands:
        why = None
        for code, members in codes.items():
            _, verdict = graph_fit(members, I)
            if verdict != "holds":
                why = {"reason": "rainbow fiber is not a graph over the exhibition",
                       "fiber_size": len(members)}
                break
        if why is None:
            for y, labs in labelled:
                for _ in range(moves):
                    w = {i: random_series(rng, VERIFY_GRID, above=ball.radius, max_terms=2)
                         for i in I}
                    try:
                        y2 = straightened_move(y, w, I, pieces)
                        if not ball.contains(y2) or not cand.in_domain(y2):
                            continue
                        labs2 = _labels(cand, reflected, y2)
                    except TconvexError:
                        continue
                    if labs2 != labs:
                        why = {"reason": "labels change under translation",
                               "point": list(y), "moved": list(y2),
                               "labels": [list(labs[0]), list(labs2[0])]}
                        break
                if why is not None:
                    break
        if why is None:
            return {"status": "pass", "d": dB, "exhibition": list(I)}
        tried.append(dict(why, exhibition=list(I)))
    return {"status": "fail", "condition": "translatability", "d": dB, "tried": tried}


def tstrat_verify(cand: TStratCandidate, reflected: Sequence[Partition] = (),
                  balls: int = 24, seed: int = 0, budget: int = 1000, points: int = 8,
                  moves: int = 2, config: RunConfig | None = None) -> Report:
    """Necessary conditions of a t-stratification, tested on sampled balls.

    (a) declared dimensions and chart ranks; (b) on each ball, with ``d`` the
    least index of a stratum meeting it, some ``d`` coordinates exhibit a
    direction space along which all strata and reflected pieces are invariant
    after straightening by the graph of ``S_d``.
    """
    if isinstance(cand, (str, dict)):
        cand = TStratCandidate.from_json(cand)
    if config is not None:
        seed = config.seed
        budget = config.budget
    rng = make_rng(seed)
    details: dict = {"candidate": cand.name or "unnamed", "balls": balls,
                     "rainbow": "coarsened: (distance, RV class) per stratum"}
    dim_issues = _check_dims(cand, rng)
    details["dimension_check"] = "pass" if not dim_issues else dim_issues
    if dim_issues:
        return Report("tstrat-verify", "fail", dict(details, witness=dim_issues[0]), config)
    pools = _pools(cand, rng, 6, budget)
    centres = [y for pool in pools for y in pool]
    if not centres:
        raise SamplingExhausted("no stratum points found", budget)
    per_level: dict = {}
    origin = tuple(ZERO for _ in range(cand.n))
    # the origin with every radius first, then random centres and radii
    plan = [(origin, r) for r in RADII]
    for b in range(balls):
        c = rng.choice(centres)
        if b % 3 == 2:
            c = _random_in_ball(rng, _Ball(c, rng.choice(RADII)), zero_prob=0.5)
        plan.append((c, rng.choice(RADII)))
    for b, (c, r) in enumerate(plan):
        ball = _Ball(c, r)
        out = _ball_check(cand, reflected, ball, pools, rng, points, moves)
        if out["status"] == "fail":
            details["witness"] = dict(out, ball=str(ball))
            details["balls_checked"] = b + 1
            return Report("tstrat-verify", "fail", details, config)
        if out["status"] == "pass":
            key = str(out["d"])
            per_level[key] = per_level.get(key, 0) + 1
    details["balls_checked"] = len(plan)
    details["balls_per_level"] = per_level
    return Report("tstrat-verify", "necessary-conditions-pass", details, config)


__all__ = [
    "apply_map",
    "compose_maps",
    "risometry_check",
    "rref",
    "ResidueSubspace",
    "affine_direction",
    "exhibition_find",
    "graph_fit",
    "straightening_check",
    "Chart",
    "Stratum",
    "TStratCandidate",
    "candidate",
    "RainbowCode",
    "rainbow_code",
    "straightened_move",
    "tstrat_verify",
]
