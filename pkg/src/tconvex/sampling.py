"""Seeded generators of series and of points in definable pieces.

Random series live on a finite grid: exponents with denominator at most
``max_den`` and absolute value at most ``max_abs_exp``, integer coefficients
in ``[-coeff_range, coeff_range]``.  A uniform grid almost never lands on a
thin set (a curve, a small ball), so :func:`sample_piece` also proposes points
built from anchors read off the atoms: ball centres, roots of univariate
atoms, and exact solutions of equations in the last coordinate.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from gmpy2 import mpq

from .errors import SamplingExhausted, TconvexError
from .formula import Atom, DefinablePiece, PolyExpr
from .series import INF, ZERO, PuiseuxSeries


@dataclass(frozen=True)
class Grid:
    max_den: int = 6
    max_abs_exp: int = 4
    coeff_range: int = 10


DEFAULT_GRID = Grid()


@lru_cache(maxsize=None)
def exponent_grid(max_den: int = 6, max_abs_exp: int = 4) -> tuple:
    vals = {mpq(p, q) for q in range(1, max_den + 1)
            for p in range(-max_abs_exp * q, max_abs_exp * q + 1)}
    return tuple(sorted(vals))


def make_rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


def random_coeff(rng: random.Random, grid: Grid = DEFAULT_GRID) -> mpq:
    c = 0
    while c == 0:
        c = rng.randint(-grid.coeff_range, grid.coeff_range)
    if rng.random() < 0.2:
        return mpq(c, rng.choice((2, 3)))
    return mpq(c)


def random_series(rng: random.Random, grid: Grid = DEFAULT_GRID, *, above=None,
                  at_least=None, below=None, max_terms: int = 3,
                  zero_prob: float = 0.0) -> PuiseuxSeries:
    """Random exact series; ``above`` / ``at_least`` bound the valuation."""
    if zero_prob and rng.random() < zero_prob:
        return ZERO
    exps = exponent_grid(grid.max_den, grid.max_abs_exp)
    lo = exps[0]
    if above is not None and above != -INF:
        exps = [e for e in exps if e > above] or [above + k for k in (mpq(1, 2), 1, 2)]
    if at_least is not None:
        exps = [e for e in exps if e >= at_least] or [at_least + k for k in (0, mpq(1, 2), 1)]
    if below is not None:
        exps = [e for e in exps if e < below] or [lo]
    n = rng.randint(1, max_terms)
    chosen = sorted(set(rng.choice(exps) for _ in range(n)))
    return PuiseuxSeries(tuple((e, random_coeff(rng, grid)) for e in chosen))


def random_unit(rng: random.Random, grid: Grid = DEFAULT_GRID) -> PuiseuxSeries:
    """Random element with valuation exactly 0."""
    tail = random_series(rng, grid, above=mpq(0), max_terms=2)
    return PuiseuxSeries.const(random_coeff(rng, grid)) + tail


def random_point(rng: random.Random, n: int, grid: Grid = DEFAULT_GRID,
                 anchors: Sequence[Sequence[PuiseuxSeries]] | None = None) -> tuple:
    pts = []
    for i in range(n):
        if anchors and anchors[i] and rng.random() < 0.5:
            a = rng.choice(anchors[i])
            pts.append(perturb(rng, a, grid))
        else:
            pts.append(random_series(rng, grid, zero_prob=0.05))
    return tuple(pts)


def perturb(rng: random.Random, a: PuiseuxSeries, grid: Grid = DEFAULT_GRID,
            gamma=None) -> PuiseuxSeries:
    """``a`` plus a random term of valuation above ``gamma`` (or exactly ``a``)."""
    r = rng.random()
    if r < 0.15:
        return a
    if gamma is None:
        exps = exponent_grid(grid.max_den, grid.max_abs_exp)
        gamma = rng.choice(exps[len(exps) // 4:])
    return a + random_series(rng, grid, above=gamma, max_terms=2)


# ---------------------------------------------------------------------------
# anchors and proposals
# ---------------------------------------------------------------------------

def _linear_centre(poly: PolyExpr, i: int):
    """For ``c*x_i + d`` with monomial ``c``: return ``(-d/c, c)``."""
    if poly.degree_in(i) != 1 or poly.degree() != 1:
        return None
    coeffs = poly.coeffs_in(i)
    if not all(cf.is_constant() for cf in coeffs):
        return None
    c = coeffs[1].constant()
    if not c.is_monomial():
        return None
    d = coeffs[0].constant()
    return (-d) * c.inv(), c


def atom_anchors(atom: Atom, i: int, poly: PolyExpr | None = None) -> list[tuple]:
    """Anchors ``(centre, gamma)`` for coordinate ``i`` from one atom.

    ``poly`` is the atom polynomial after substituting earlier coordinates.
    ``gamma`` is the valuation above which a perturbation keeps the class.
    """
    p = atom.poly if poly is None else poly
    used = p.used_vars()
    if used != (i,):
        return []
    out = []
    if atom.kind == "val":
        lc = _linear_centre(p, i)
        if lc is not None:
            a, c = lc
            g = atom.rhs - c.val()
            if atom.op in (">", ">="):
                out.append((a, g if atom.op == ">" else g - mpq(1, 1000)))
            else:
                out.append((a, None))
        return out
    if atom.kind == "rv":
        lc = _linear_centre(p, i)
        if lc is not None:
            a, c = lc
            xi = atom.rhs
            if xi.is_zero:
                out.append((a, INF))
            else:
                rel = xi / _rv_of(c)
                ctr = a + PuiseuxSeries.monomial(rel.lead, rel.gamma)
                out.append((ctr, rel.gamma))
                out.append((a, None))
            return out
    from .newton import real_roots

    try:
        roots = real_roots(p.univariate_coeffs(i))
    except TconvexError:
        return []
    for r in roots:
        out.append((r, None))
    return out


def _rv_of(c: PuiseuxSeries):
    from .rv import rvo

    return rvo(c)


def propose(piece: DefinablePiece, rng: random.Random, grid: Grid = DEFAULT_GRID,
            extra: Sequence[Sequence] | None = None, solve_prob: float = 0.7,
            shuffle: bool = False) -> tuple | None:
    """One candidate point, built coordinate by coordinate."""
    n = piece.dim
    order = list(range(n))
    if shuffle:
        rng.shuffle(order)
    pt: dict = {}
    for i in order:
        anchors: list = []
        if extra and extra[i]:
            anchors.extend((a, None) for a in extra[i])
        eq_roots: list = []
        for atom in piece.atoms:
            p = atom.poly
            if pt and any(p.degree_in(j) > 0 for j in pt):
                p = p.substitute(pt)
            used = p.used_vars()
            if used != (i,):
                continue
            # remaining coordinates absent: the atom constrains x_i directly
            anchors_i = atom_anchors(atom, i, p)
            if atom.kind == "sign" and atom.op == "=":
                eq_roots.extend(a for a, _ in anchors_i)
            anchors.extend(anchors_i)
        if eq_roots and rng.random() < solve_prob:
            pt[i] = rng.choice(eq_roots)
            continue
        if anchors and rng.random() < 0.75:
            a, g = rng.choice(anchors)
            if g == INF:
                pt[i] = a
            else:
                pt[i] = perturb(rng, a, grid, g)
        else:
            pt[i] = random_series(rng, grid, zero_prob=0.05)
    return tuple(pt[i] for i in range(n))


def nearest(cands: Sequence[PuiseuxSeries], x: PuiseuxSeries) -> PuiseuxSeries:
    """The candidate ``r`` maximising ``val(r - x)`` (first one on ties)."""
    best, bv = None, None
    for r in cands:
        d = r - x
        v = d.val_lower_bound()
        if bv is None or v > bv:
            best, bv = r, v
    return best


def solve_towards(piece: DefinablePiece, q: Sequence, rng: random.Random | None = None,
                  order: Sequence[int] | None = None, passes: int = 2,
                  fixed: Sequence[int] = ()) -> tuple | None:
    """Move ``q`` onto the equations of ``piece`` one coordinate at a time.

    Each step substitutes every other coordinate and replaces ``x_j`` by the
    real root of an equation atom nearest to the current value.  Returns the
    new point when it satisfies ``piece`` (truncated zeros count as zero),
    otherwise ``None``.
    """
    from .newton import real_roots

    cur = list(q)
    n = len(cur)
    eqs = piece.equations()
    if order is None:
        order = list(range(n))
        if rng is not None:
            rng.shuffle(order)
    order = [j for j in order if j not in fixed]
    for _ in range(passes if eqs else 0):
        for j in order:
            vals = {k: cur[k] for k in range(n) if k != j}
            for atom in eqs:
                try:
                    if atom.holds_at(cur, approx=True):
                        continue
                    p = atom.poly.substitute(vals)
                    if p.used_vars() != (j,):
                        continue
                    roots = real_roots(p.univariate_coeffs(j))
                except TconvexError:
                    continue
                if roots:
                    try:
                        cur[j] = nearest(roots, cur[j])
                    except TconvexError:
                        continue
                    break
        try:
            if all(a.holds_at(cur, approx=True) for a in eqs):
                break
        except TconvexError:
            return None
    try:
        return tuple(cur) if piece.contains(cur, approx=True) else None
    except TconvexError:
        return None


def sample_piece(piece: DefinablePiece, count: int, seed=0, budget: int = 1000,
                 grid: Grid = DEFAULT_GRID, extra=None, distinct: bool = True,
                 approx: bool = False, shuffle: bool = False) -> list[tuple]:
    """Up to ``count`` points of ``piece``.  Raises when none can be found."""
    rng = make_rng(seed)
    out: list = []
    seen: set = set()
    attempts = 0
    limit = budget + 50 * count
    while len(out) < count and attempts < limit:
        attempts += 1
        try:
            pt = propose(piece, rng, grid, extra, shuffle=shuffle)
            ok = pt is not None and piece.contains(pt, approx)
        except TconvexError:
            ok = False
        if not ok:
            continue
        if distinct:
            if pt in seen:
                continue
            seen.add(pt)
        out.append(pt)
    if not out:
        raise SamplingExhausted(f"no sample found in {piece}", attempts)
    return out


def sample_line(count: int, seed=0, anchors: Sequence[PuiseuxSeries] = (),
                grid: Grid = DEFAULT_GRID) -> list[PuiseuxSeries]:
    """Points of the line, concentrated around ``anchors``."""
    rng = make_rng(seed)
    out = []
    exps = exponent_grid(grid.max_den, grid.max_abs_exp)
    for _ in range(count):
        r = rng.random()
        if anchors and r < 0.7:
            a = rng.choice(list(anchors))
            g = rng.choice(exps)
            out.append(perturb(rng, a, grid, g))
        else:
            out.append(random_series(rng, grid, zero_prob=0.05))
    return out


__all__ = [
    "Grid",
    "DEFAULT_GRID",
    "exponent_grid",
    "make_rng",
    "random_series",
    "random_unit",
    "random_coeff",
    "random_point",
    "perturb",
    "sample_piece",
    "sample_line",
    "propose",
    "solve_towards",
    "nearest",
]
