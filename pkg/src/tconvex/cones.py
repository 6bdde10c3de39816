"""Tangent cones: lowest forms, a curve-search membership oracle, and the
partition a stratification induces on the tangent cone at a point."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .errors import DomainError, TconvexError
from .formula import Atom, DefinablePiece, PolyExpr, parse_constant, parse_poly
from .rv import val_tuple
from .sampling import make_rng, random_coeff, solve_towards
from .series import INF, ZERO, PuiseuxSeries, precision, series, working_precision
from .tstrat import Stratum, TStratCandidate


def _point(p, n=None) -> tuple:
    if isinstance(p, str):
        p = [s for s in p.replace(";", ",").split(",") if s.strip()]
    return tuple(parse_constant(c) if isinstance(c, str) else series(c) for c in p)


def tangent_cone_hypersurface(f, p) -> PolyExpr:
    """Lowest-degree homogeneous part of ``y -> f(p + y)``."""
    if isinstance(f, str):
        f = parse_poly(f)
    p = _point(p)
    if not f.evaluate(p).is_zero():
        raise DomainError(f"f(p) = {f.evaluate(p)} is not zero")
    k, lf = f.shift(p).lowest_form()
    return lf


@dataclass
class ConeMembership:
    """Result of the curve search; ``found`` is ``False`` for "not found within budget"."""

    found: bool
    direction: tuple
    gamma: object
    witness: tuple | None = None
    scale_exponent: object = None
    levels: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "found" if self.found else "not-found-within-budget"

    def __bool__(self):
        return self.found

    def to_json(self):
        out = {"status": self.status, "direction": list(self.direction), "gamma": self.gamma,
               "levels_tried": self.levels}
        if self.found:
            out["x"] = list(self.witness)
            out["r"] = f"t^({-self.scale_exponent})"
        return out


def _as_set(X, n_vars=None):
    if isinstance(X, PolyExpr):
        return DefinablePiece((Atom("sign", X, "="),), X.vars)
    if isinstance(X, str):
        from .formula import parse_formula

        if not any(op in X for op in "<=>!"):
            # a bare polynomial names its zero set
            return _as_set(parse_poly(X))
        return parse_formula(X)
    return X


def _eq_piece(X) -> list[DefinablePiece]:
    if isinstance(X, Stratum):
        return X.equation_pieces()
    return [DefinablePiece(tuple(X.equations()), X.vars)]


def tangent_cone_membership(X, p, y, gamma=3, levels: int = 4, seed: int = 0) -> ConeMembership:
    gamma = mpq(gamma)
    # roots at depth e * (degree) must stay above the truncation
    order = max(precision().order, 3 * (levels * gamma + 1))
    with working_precision(order):
        return _cone_search(X, p, y, gamma, levels, seed)


def _cone_search(X, p, y, gamma, levels, seed) -> ConeMembership:
    """Search ``x in X`` and ``r > 0`` with ``val(x - p) > gamma`` and
    ``val(r(x - p) - y) > gamma``.

    Candidates are ``x = p + t^e (y + delta)`` for ``e`` in
    ``gamma + 1, 2 gamma + 1, ...`` where ``delta`` is found by moving the point
    ``p + t^e y`` onto the equations of ``X`` (nearest Newton roots), one
    coordinate order at a time.  For ``y = 0`` any ``x != p`` close to ``p``
    will do.
    """
    X = _as_set(X)
    p = _point(p)
    y = _point(y)
    n = len(p)
    rng = make_rng(seed)
    eq_pieces = _eq_piece(X)
    zero_dir = all(c.is_zero() for c in y)
    orders = [[j] for j in range(n)] + [list(range(n)), list(reversed(range(n)))]
    tried = []
    for k in range(1, levels + 1):
        e = k * gamma + 1
        tried.append(e)
        eps = PuiseuxSeries.monomial(1, e)
        dirs = [y]
        if zero_dir:
            dirs = [tuple(PuiseuxSeries.const(random_coeff(rng)) for _ in range(n))
                    for _ in range(4)] + [tuple(PuiseuxSeries.const(1 if i == j else 0)
                                                for i in range(n)) for j in range(n)]
        for d in dirs:
            base = tuple(pi + eps * di for pi, di in zip(p, d))
            cands = [base]
            for ep in eq_pieces:
                if not ep.atoms:
                    continue
                for order in orders:
                    x = solve_towards(ep, base, order=order)
                    if x is not None:
                        cands.append(x)
            for x in cands:
                try:
                    if not X.contains(x, approx=True):
                        continue
                    diff = tuple(a - b for a, b in zip(x, p))
                    v = val_tuple(diff)
                    if v <= gamma:
                        continue
                    if zero_dir:
                        if v == INF:
                            continue
                        return ConeMembership(True, y, gamma, x, -(gamma + 1), tried)
                    delta = tuple(c.shift(-e) - yc for c, yc in zip(diff, y))
                    if val_tuple(delta) > gamma:
                        return ConeMembership(True, y, gamma, x, e, tried)
                except TconvexError:
                    continue
    return ConeMembership(False, y, gamma, None, None, tried)


# ---------------------------------------------------------------------------
# induced partition
# ---------------------------------------------------------------------------

_CLOSE = {"<": "<=", ">": ">=", "<=": "<=", ">=": ">=", "=": "="}


def piece_cone(piece: DefinablePiece, p: tuple) -> DefinablePiece | None:
    """Lowest-form description of the cone of ``piece`` at ``p``.

    ``None`` when the piece stays away from ``p``.  Equations become the
    vanishing of their lowest forms; inequalities vanishing at ``p`` become the
    closed inequality of their lowest form; ``!=`` and atoms strictly true at
    ``p`` are dropped.  Exact for complete intersections whose lowest forms are
    independent; an over-approximation otherwise.
    """
    atoms = []
    for a in piece.atoms:
        if a.kind != "sign":
            raise DomainError("cone of rv/val atoms is not supported")
        v = a.poly.evaluate(p)
        if not v.is_zero():
            if a.op == "=" or not a.holds_at(p):
                return None
            continue
        if a.op == "!=":
            continue
        _, lf = a.poly.shift(p).lowest_form()
        if lf.is_constant():
            continue
        atoms.append(Atom("sign", lf, _CLOSE[a.op]))
    return DefinablePiece(tuple(atoms), piece.vars)


def induced_cone_partition(cand: TStratCandidate, p) -> TStratCandidate:
    """Pieces ``C_{p,i} = C_p(S_0 u .. u S_i) minus C_p(S_0 u .. u S_{i-1})``.

    Exclusions of the strata are ignored: the cone of a union is taken as the
    union of cones of its pieces, which is right when the frontier condition
    holds (every excluded part lies in lower strata).
    """
    p = _point(p)
    cones: list[list[DefinablePiece]] = []
    for S in cand.strata:
        got = []
        for pc in S.pieces:
            c = piece_cone(pc, p)
            if c is not None:
                got.append(c)
        cones.append(got)
    strata = []
    acc: list[DefinablePiece] = []
    for i, got in enumerate(cones):
        prev = list(acc)
        acc = acc + [g for g in got if str(g) not in {str(a) for a in acc}]
        new = [g for g in acc if str(g) not in {str(a) for a in prev}]
        dim = cand.strata[i].declared_dim
        strata.append(Stratum(new, dim, exclude=prev if new else [], vars=cand.vars))
    name = f"cone of {cand.name or 'candidate'} at ({', '.join(str(c) for c in p)})"
    return TStratCandidate(cand.vars, strata, None, name)


__all__ = [
    "tangent_cone_hypersurface",
    "tangent_cone_membership",
    "ConeMembership",
    "piece_cone",
    "induced_cone_partition",
]
