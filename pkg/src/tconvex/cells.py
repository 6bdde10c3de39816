"""One-variable cells, the rv normal form and the ball decomposition with centres.

Every one-variable atom handled here cuts the line at *cuts* of two sorts:
just below / just above a point ``a``, or just below / just above a ball
``B(d, >g)``.  A convex set is the region between a lower and an upper cut.
A cut is recorded as a :class:`Bound`: a centre ``a``, a class ``xi`` and a
strictness flag, meaning ``rvo(x - a) > xi`` (lower, strict), ``>= xi``
(lower), ``< xi`` or ``<= xi`` (upper).  With ``xi = 0`` these are the usual
order conditions on ``x - a``.

Membership in a :class:`Cell1` is decided geometrically (position of ``x``
relative to points and balls), while :class:`NormalForm1` decides it through
rv comparisons only.  The two routes share no code beyond series arithmetic,
which is what the equivalence tests exploit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Sequence

from gmpy2 import mpq

from .errors import TruncationError, UnsupportedFormula, UndecidableError
from .formula import Atom, DefinablePiece, PolyExpr, parse_formula
from .newton import real_root_data
from .quadratic import coeff_sign
from .rv import (Ball, RvElement, ZERO_RV, holds, rv_compare, rvo)
from .series import INF, ZERO, PuiseuxSeries, series


# ---------------------------------------------------------------------------
# bounds and cuts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Bound:
    center: PuiseuxSeries
    xi: RvElement
    strict: bool

    def to_json(self) -> dict:
        return {"center": str(self.center), "xi": str(self.xi), "strict": self.strict}


def _obj(b: Bound):
    if b.xi.is_zero:
        return ("pt", b.center)
    return ("ball", b.center + b.xi.representative(), b.xi.gamma)


def _in_ball(x: PuiseuxSeries, d: PuiseuxSeries, g) -> bool:
    if x is d:
        return True
    diff = x - d
    if diff.terms:
        return diff.terms[0][0] > g
    if diff.trunc == INF or diff.trunc > g:
        return True
    raise UndecidableError(f"cannot decide whether {x} lies in B({d}, >{g})")


def x_minus(c: PuiseuxSeries, var: str = "x") -> str:
    """Render ``var - c`` readably."""
    if c.is_zero():
        return var
    if len(c.terms) == 1 and c.is_exact:
        if c.sign() < 0:
            return f"{var} + {-c}"
        return f"{var} - {c}"
    return f"{var} - ({c})"


def _rep(o):
    return o[1]


def _relation(o1, o2) -> str:
    """'same', 'in' (o1 inside o2), 'contains' or 'disjoint'."""
    if o1[0] == "pt" and o2[0] == "pt":
        # the same computed root may be truncated, so r - r is not exactly zero
        if o1[1] is o2[1]:
            return "same"
        return "same" if o1[1].compare(o2[1]) == 0 else "disjoint"
    if o1[0] == "pt":
        return "in" if _in_ball(o1[1], o2[1], o2[2]) else "disjoint"
    if o2[0] == "pt":
        return "contains" if _in_ball(o2[1], o1[1], o1[2]) else "disjoint"
    g1, g2 = o1[2], o2[2]
    if g1 == g2:
        return "same" if _in_ball(o1[1], o2[1], g2) else "disjoint"
    if g1 > g2:
        return "in" if _in_ball(o1[1], o2[1], g2) else "disjoint"
    return "contains" if _in_ball(o2[1], o1[1], g1) else "disjoint"


NEG_INF_CUT = ("-inf",)
POS_INF_CUT = ("+inf",)


def lower_cut(b: Bound | None):
    if b is None:
        return NEG_INF_CUT
    return (_obj(b), 1 if b.strict else -1)


def upper_cut(b: Bound | None):
    if b is None:
        return POS_INF_CUT
    return (_obj(b), -1 if b.strict else 1)


def compare_cuts(c1, c2) -> int:
    if c1 is NEG_INF_CUT or c1 == NEG_INF_CUT:
        return 0 if c2 == NEG_INF_CUT else -1
    if c1 == POS_INF_CUT:
        return 0 if c2 == POS_INF_CUT else 1
    if c2 == NEG_INF_CUT:
        return 1
    if c2 == POS_INF_CUT:
        return -1
    (o1, s1), (o2, s2) = c1, c2
    rel = _relation(o1, o2)
    if rel == "same":
        return (s1 > s2) - (s1 < s2)
    if rel == "in":
        return -s2
    if rel == "contains":
        return s1
    return int(_rep(o1).compare(_rep(o2)))


def point_above_cut(x: PuiseuxSeries, cut) -> bool:
    if cut == NEG_INF_CUT:
        return True
    if cut == POS_INF_CUT:
        return False
    o, s = cut
    if o[0] == "pt":
        c = x.compare(o[1])
        return c > 0 or (c == 0 and s < 0)
    if _in_ball(x, o[1], o[2]):
        return s < 0
    return x.compare(o[1]) > 0


# ---------------------------------------------------------------------------
# cells
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cell1:
    lo: Bound | None
    hi: Bound | None

    @property
    def kind(self) -> str:
        lo, hi = self.lo, self.hi
        if (lo is not None and hi is not None and lo.xi.is_zero and hi.xi.is_zero
                and not lo.strict and not hi.strict and lo.center.compare(hi.center) == 0):
            return "point"
        if all(b is None or b.xi.is_zero for b in (lo, hi)):
            return "interval"
        if lo is None or hi is None or lo.center.compare(hi.center) == 0:
            return "vdisc"
        return "band"

    def contains(self, x) -> bool:
        x = series(x)
        return point_above_cut(x, lower_cut(self.lo)) and not point_above_cut(x, upper_cut(self.hi))

    __contains__ = contains

    def contains_rv(self, x) -> bool:
        """Membership through the rv conditions of the bounds."""
        x = series(x)
        if self.lo is not None:
            c = rv_compare(rvo(x - self.lo.center), self.lo.xi)
            if not holds(c, ">" if self.lo.strict else ">="):
                return False
        if self.hi is not None:
            c = rv_compare(rvo(x - self.hi.center), self.hi.xi)
            if not holds(c, "<" if self.hi.strict else "<="):
                return False
        return True

    def to_json(self) -> dict:
        k = self.kind
        lo, hi = self.lo, self.hi
        if k == "point":
            data = {"a": str(lo.center)}
        elif k == "interval":
            data = {
                "a": None if lo is None else str(lo.center),
                "b": None if hi is None else str(hi.center),
                "open": [lo is None or lo.strict, hi is None or hi.strict],
            }
        elif k == "vdisc":
            a = (lo or hi).center
            data = {
                "a": str(a),
                "xi1": None if lo is None else str(lo.xi),
                "xi2": None if hi is None else str(hi.xi),
                "strict": [lo is None or lo.strict, hi is None or hi.strict],
            }
        else:
            data = {"lower": lo.to_json(), "upper": hi.to_json()}
        return {"kind": k, "data": data}

    def __str__(self):
        k = self.kind
        lo, hi = self.lo, self.hi
        if k == "point":
            return "{" + str(lo.center) + "}"
        if k == "interval":
            left = "(-inf" if lo is None else ("(" if lo.strict else "[") + str(lo.center)
            right = "+inf)" if hi is None else str(hi.center) + (")" if hi.strict else "]")
            return f"{left}, {right}"
        parts = []
        if lo is not None:
            parts.append(f"rv({x_minus(lo.center)}) {'>' if lo.strict else '>='} {lo.xi}")
        if hi is not None:
            parts.append(f"rv({x_minus(hi.center)}) {'<' if hi.strict else '<='} {hi.xi}")
        if (lo is not None and hi is not None and k == "vdisc" and lo.xi == hi.xi
                and not lo.strict and not hi.strict):
            return f"rv({x_minus(lo.center)}) = {lo.xi}"
        return " & ".join(parts)

    def sample_interior(self) -> list[PuiseuxSeries]:
        """A few points of the cell (used to certify monotonicity)."""
        lo, hi = self.lo, self.hi
        if self.kind == "point":
            return [lo.center]
        pts: list = []
        if self.kind == "interval":
            t = PuiseuxSeries.monomial(1, 1)
            if lo is None and hi is None:
                pts = [series(0), series(1), series(-1), t, -t]
            elif lo is None:
                b = hi.center
                pts = [b - 1, b - t, b - PuiseuxSeries.monomial(1, -1)]
            elif hi is None:
                a = lo.center
                pts = [a + 1, a + t, a + PuiseuxSeries.monomial(1, -1)]
            else:
                a, b = lo.center, hi.center
                w = b - a
                pts = [a + w * mpq(1, 2), a + w * mpq(1, 3), a + w * t, b - w * t]
        return [p for p in pts if self.contains(p)]


def _cell_lo_cut(c: Cell1):
    return lower_cut(c.lo)


def _sort_cells(cells: list[Cell1]) -> list[Cell1]:
    return sorted(cells, key=cmp_to_key(lambda a, b: compare_cuts(lower_cut(a.lo), lower_cut(b.lo))))


def _intersect(a: tuple, b: tuple) -> tuple | None:
    lo = a[0] if compare_cuts(lower_cut(a[0]), lower_cut(b[0])) >= 0 else b[0]
    hi = a[1] if compare_cuts(upper_cut(a[1]), upper_cut(b[1])) <= 0 else b[1]
    if compare_cuts(lower_cut(lo), upper_cut(hi)) < 0:
        return (lo, hi)
    return None


def _merge(cells: list[Cell1]) -> list[Cell1]:
    cells = _sort_cells(cells)
    out: list[Cell1] = []
    for c in cells:
        if out and compare_cuts(upper_cut(out[-1].hi), lower_cut(c.lo)) == 0:
            out[-1] = Cell1(out[-1].lo, c.hi)
        else:
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# atoms -> convex pieces
# ---------------------------------------------------------------------------

def _univariate(atom: Atom) -> list[PuiseuxSeries]:
    used = atom.poly.used_vars()
    if len(used) > 1:
        raise UnsupportedFormula(f"atom {atom} is not in one variable")
    return atom.poly.univariate_coeffs(used[0] if used else 0)


def _sign_atom_pieces(atom: Atom) -> list[tuple]:
    cs = _univariate(atom)
    while cs and cs[-1].is_zero():
        cs.pop()
    if len(cs) <= 1:
        s = cs[0].sign() if cs else 0
        return [(None, None)] if holds(s, atom.op) else []
    roots = real_root_data(cs)
    lead_sign = cs[-1].sign()
    # signs on the open regions, right to left
    region_sign = [0] * (len(roots) + 1)
    s = lead_sign
    region_sign[-1] = s
    for k in range(len(roots) - 1, -1, -1):
        if roots[k].multiplicity % 2 == 1:
            s = -s
        region_sign[k] = s
    pieces = []
    for k in range(len(roots) + 1):
        if holds(region_sign[k], atom.op):
            lo = None if k == 0 else Bound(roots[k - 1].root, ZERO_RV, True)
            hi = None if k == len(roots) else Bound(roots[k].root, ZERO_RV, True)
            pieces.append((lo, hi))
        if k < len(roots) and holds(0, atom.op):
            r = roots[k].root
            pieces.append((Bound(r, ZERO_RV, False), Bound(r, ZERO_RV, False)))
    return pieces


def _rv_atom_pieces(atom: Atom) -> list[tuple]:
    cs = _univariate(atom)
    while cs and cs[-1].is_zero():
        cs.pop()
    if len(cs) <= 1:
        c = cs[0] if cs else ZERO
        return [(None, None)] if holds(rv_compare(rvo(c), atom.rhs), atom.op) else []
    if len(cs) != 2 or not cs[1].is_monomial():
        raise UnsupportedFormula(
            f"rv atom {atom} must be rv(c*x + d) with a monomial coefficient c"
        )
    c, d = cs[1], cs[0]
    a = -d * c.inv()
    rc = rvo(c)
    eta = atom.rhs / rc
    op = atom.op
    if coeff_sign(rc.lead) < 0:
        op = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "=": "=", "!=": "!="}[op]
    if op == "=":
        return [(Bound(a, eta, False), Bound(a, eta, False))]
    if op == "<":
        return [(None, Bound(a, eta, True))]
    if op == "<=":
        return [(None, Bound(a, eta, False))]
    if op == ">":
        return [(Bound(a, eta, True), None)]
    if op == ">=":
        return [(Bound(a, eta, False), None)]
    return [(None, Bound(a, eta, True)), (Bound(a, eta, True), None)]


def atom_pieces(atom: Atom) -> list[tuple]:
    if atom.kind == "sign":
        return _sign_atom_pieces(atom)
    return _rv_atom_pieces(atom)


def _as_piece(formula) -> DefinablePiece:
    if isinstance(formula, str):
        formula = parse_formula(formula)
    if formula.dim > 1:
        raise UnsupportedFormula(f"{formula} has more than one variable")
    return formula


def cell_decompose_1var(formula) -> list[Cell1]:
    """Pairwise disjoint cells whose union is the set defined by ``formula``."""
    f = _as_piece(formula)
    current: list[tuple] = [(None, None)]
    for atom in f.atoms:
        ps = atom_pieces(atom)
        nxt = []
        for a in current:
            for b in ps:
                c = _intersect(a, b)
                if c is not None:
                    nxt.append(c)
        current = nxt
        if not current:
            break
    return _merge([Cell1(lo, hi) for lo, hi in current])


# ---------------------------------------------------------------------------
# normal form
# ---------------------------------------------------------------------------

@dataclass
class NormalForm1:
    centers: list
    rv_params: list
    table: list  # rows: list of (center index, op, param index); OR of ANDs

    def evaluate(self, x) -> bool:
        x = series(x)
        classes: dict = {}
        for row in self.table:
            ok = True
            for ci, op, pi in row:
                if ci not in classes:
                    classes[ci] = rvo(x - self.centers[ci])
                if not holds(rv_compare(classes[ci], self.rv_params[pi]), op):
                    ok = False
                    break
            if ok:
                return True
        return False

    __contains__ = evaluate

    def to_json(self) -> dict:
        return {
            "centers": [str(c) for c in self.centers],
            "rv_params": [str(e) for e in self.rv_params],
            "table": [[{"center": ci, "op": op, "param": pi} for ci, op, pi in row]
                      for row in self.table],
        }

    def __str__(self):
        if not self.table:
            return "false"
        rows = []
        for row in self.table:
            if not row:
                rows.append("true")
                continue
            rows.append(" & ".join(
                f"rv({x_minus(self.centers[ci])}) {op} {self.rv_params[pi]}" for ci, op, pi in row))
        return " | ".join(f"({r})" for r in rows)


def normal_form_1var(formula) -> NormalForm1:
    cells = cell_decompose_1var(formula)
    centers: list = [ZERO]
    params: list = [ZERO_RV]

    def cidx(c):
        for i, e in enumerate(centers):
            if e == c:
                return i
        centers.append(c)
        return len(centers) - 1

    def pidx(xi):
        for i, e in enumerate(params):
            if e == xi:
                return i
        params.append(xi)
        return len(params) - 1

    table = []
    for cell in cells:
        lo, hi = cell.lo, cell.hi
        if (lo is not None and hi is not None and not lo.strict and not hi.strict
                and lo.xi == hi.xi and lo.center == hi.center):
            table.append([(cidx(lo.center), "=", pidx(lo.xi))])
            continue
        row = []
        if lo is not None:
            row.append((cidx(lo.center), ">" if lo.strict else ">=", pidx(lo.xi)))
        if hi is not None:
            row.append((cidx(hi.center), "<" if hi.strict else "<=", pidx(hi.xi)))
        table.append(row)
    return NormalForm1(centers, params, table)


# ---------------------------------------------------------------------------
# monotonicity
# ---------------------------------------------------------------------------

def monotone_decomposition(f) -> list[tuple[Cell1, str]]:
    if isinstance(f, str):
        from .formula import parse_poly

        f = parse_poly(f)
    if len(f.used_vars()) > 1:
        raise UnsupportedFormula("monotone_decomposition needs a univariate polynomial")
    if f.is_constant():
        return [(Cell1(None, None), "constant")]
    i = f.used_vars()[0]
    df = f.partial(i)
    dcs = df.univariate_coeffs(i) if df.terms else []
    while dcs and dcs[-1].is_zero():
        dcs.pop()
    if not dcs:
        return [(Cell1(None, None), "constant")]
    roots = real_root_data(dcs) if len(dcs) > 1 else []
    s = dcs[-1].sign()
    signs = [0] * (len(roots) + 1)
    signs[-1] = s
    for k in range(len(roots) - 1, -1, -1):
        if roots[k].multiplicity % 2 == 1:
            s = -s
        signs[k] = s
    name = {1: "strictly_increasing", -1: "strictly_decreasing"}
    out = []
    for k in range(len(roots) + 1):
        lo = None if k == 0 else Bound(roots[k - 1].root, ZERO_RV, True)
        hi = None if k == len(roots) else Bound(roots[k].root, ZERO_RV, True)
        cell = Cell1(lo, hi)
        for x in cell.sample_interior():
            try:
                pt = [ZERO] * len(f.vars)
                pt[i] = x
                v = df.evaluate(pt).sign()
            except TruncationError:
                continue
            if v != signs[k]:
                raise AssertionError(f"sign of f' at {x} disagrees on {cell}")
        out.append((cell, name[signs[k]]))
        if k < len(roots):
            r = roots[k].root
            out.append((Cell1(Bound(r, ZERO_RV, False), Bound(r, ZERO_RV, False)), "constant"))
    return out


# ---------------------------------------------------------------------------
# ball decomposition with centres
# ---------------------------------------------------------------------------

@dataclass
class BallDecomposition:
    S0: list
    X: DefinablePiece | None = None

    def code(self, b) -> tuple:
        b = series(b)
        return tuple(rvo(b - s) for s in self.S0)

    def centre_index(self, b) -> int:
        return self.centre_index_of_code(self.code(b))

    def centre_index_of_code(self, code: Sequence[RvElement]) -> int:
        best = 0
        for i, xi in enumerate(code):
            if xi.gamma > code[best].gamma:
                best = i
        return best

    def centre(self, code_or_point) -> PuiseuxSeries:
        if isinstance(code_or_point, tuple) and code_or_point and isinstance(code_or_point[0], RvElement):
            return self.S0[self.centre_index_of_code(code_or_point)]
        return self.S0[self.centre_index(code_or_point)]

    def fiber_code(self, b):
        """Index into S0 when ``b`` is a centre, otherwise ``rvo(b - c(b))``."""
        code = self.code(b)
        i = self.centre_index_of_code(code)
        if code[i].is_zero:
            return i
        return code[i]

    def fiber(self, b) -> Ball:
        b = series(b)
        c = self.centre(b)
        d = b - c
        if d.is_zero():
            return Ball((c,), INF, closed=True)
        return Ball((b,), d.val(), closed=False)


def ball_decomposition_with_centres(S0: Sequence, X=None) -> BallDecomposition:
    if X is not None and isinstance(X, str):
        X = parse_formula(X)
    if S0 is None:
        if X is None:
            raise ValueError("need S0 or X")
        S0 = normal_form_1var(X).centers
    S0 = [series(s) for s in S0]
    if not S0:
        raise ValueError("S0 must be nonempty")
    return BallDecomposition(S0, X)


__all__ = [
    "Bound",
    "Cell1",
    "NormalForm1",
    "BallDecomposition",
    "cell_decompose_1var",
    "normal_form_1var",
    "monotone_decomposition",
    "ball_decomposition_with_centres",
    "compare_cuts",
    "atom_pieces",
]
