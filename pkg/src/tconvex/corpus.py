"""Acceptance scenarios, one per criterion, shared by the CLI and the tests.

Each scenario takes a :class:`RunConfig` and returns ``(passed, details)``.
Details are plain data and carry no timings, so that two runs with the same
configuration serialise to identical bytes.  Timings are reported separately
by :func:`run_corpus`.
"""
from __future__ import annotations

import time
from typing import Callable, Sequence

from gmpy2 import mpq

from .archimedean import base_points, exponential_demo, theorem_main4_suite, whitney_check
from .cells import ball_decomposition_with_centres, cell_decompose_1var, normal_form_1var
from .cones import induced_cone_partition, tangent_cone_hypersurface, tangent_cone_membership
from .errors import TconvexError
from .formula import parse_formula, parse_map, parse_poly
from .jacobian import jp_run, mean_value_check
from .newton import newton_polygon_roots, sturm_count
from .report import DEFAULT_CONFIG, Report, RunConfig, dump_json, jsonable
from .rv import rv_mul, rvo
from .sampling import make_rng, random_coeff, random_series, sample_line
from .series import INF, PuiseuxSeries, parse_series
from .tstrat import TStratCandidate, candidate, compose_maps, risometry_check, tstrat_verify


# ---------------------------------------------------------------------------
# 1. valued-field laws
# ---------------------------------------------------------------------------

def _pair(rng):
    x = random_series(rng, zero_prob=0.02)
    r = rng.random()
    if r < 0.4 or x.is_zero():
        y = random_series(rng, zero_prob=0.02)
    elif r < 0.7:
        # near x: rvo(y) = rvo(x) exactly when the perturbation is small
        y = x + random_series(rng, above=x.val() - 2, zero_prob=0.05)
    else:
        # cancellation in x + y
        y = -x + random_series(rng, above=x.val(), zero_prob=0.05)
    return x, y


def valued_field_laws(config: RunConfig) -> tuple[bool, dict]:
    rng = make_rng(config.seed)
    fails: dict = {"ultrametric": 0, "val_mul": 0, "rv_mul": 0, "rv_criterion": 0}
    first = None
    rv_equal = 0
    for _ in range(config.pairs):
        x, y = _pair(rng)
        vx, vy, vs = x.val(), y.val(), (x + y).val()
        bad = []
        if vs < min(vx, vy) or (vx != vy and vs != min(vx, vy)):
            bad.append("ultrametric")
        if (x * y).val() != vx + vy:
            bad.append("val_mul")
        if rvo(x * y) != rv_mul(rvo(x), rvo(y)):
            bad.append("rv_mul")
        if not x.is_zero():
            same = rvo(x) == rvo(y)
            rv_equal += same
            if same != ((x - y).val() > vx):
                bad.append("rv_criterion")
        for b in bad:
            fails[b] += 1
        if bad and first is None:
            first = {"x": x, "y": y, "laws": bad}
    ok = not any(fails.values())
    out = {"pairs": config.pairs, "failures": fails, "rv_equal_pairs": rv_equal}
    if first is not None:
        out["first_failure"] = first
    return ok, out


# ---------------------------------------------------------------------------
# 2. Newton polygon soundness
# ---------------------------------------------------------------------------

NEWTON_CORPUS = [
    "x^2 - t",
    "x^2 - 2",
    "x^2 - 2 - t",
    "x^2 + 1",
    "x^2 + t",
    "x^2 - 3*t^2",
    "x^2 - (2+t)*x + (1+t)",
    "x^2 - 2*t*x + t^2 - t^3",
    "x^2 + x + t",
    "x^3 - t",
    "x^3 - 3*x",
    "x^3 - t^2*x",
    "x^4 - 5*x^2 + 6",
    "x^4 + t",
    "x^5 - t",
    "t*x^2 - x + 1",
    "(x - t)^2*(x + 1)",
    "(x - 1/2)^3",
    "(x^2 + 1)*(x - t^(1/3))",
    "x*(x - 1)*(x - 1 - t)",
    "(x - 1)*(x - 2)*(x - 3)",
    "(x - t)*(x + t^(1/2))*(x - 1 - t^2)",
    "(x^2 - t)*(x^2 - 2*t)",
]


def _newton_case(text: str, order) -> dict:
    p = parse_poly(text)
    cs = p.univariate_coeffs(0)
    roots = newton_polygon_roots(cs, order)
    eps = PuiseuxSeries.monomial(1, order - mpq(1, 2))
    real, deg, issues = 0, 0, []
    for nr in roots:
        if nr.realness == "complex-pair":
            deg += 2 * nr.multiplicity
            continue
        deg += nr.multiplicity
        if nr.realness != "real":
            issues.append(f"unresolved cluster at {nr.root}")
            continue
        real += 1
        r = nr.root
        v = p.evaluate((r,)).val_lower_bound()
        if v < nr.residual_bound:
            issues.append(f"val(p({r})) = {v} below bound {nr.residual_bound}")
        lo, hi = p.evaluate((r - eps,)).sign(), p.evaluate((r + eps,)).sign()
        if (lo != hi) != (nr.multiplicity % 2 == 1):
            issues.append(f"sign change at {r} disagrees with multiplicity {nr.multiplicity}")
    sturm = sturm_count(cs)
    if sturm != real:
        issues.append(f"{real} real roots flagged, Sturm count {sturm}")
    if deg != len(cs) - 1:
        issues.append(f"multiplicities sum to {deg}, degree {len(cs) - 1}")
    return {"poly": text, "real_roots": real, "sturm": sturm, "issues": issues}


def newton_soundness(config: RunConfig) -> tuple[bool, dict]:
    with config.precision():
        cases = [_newton_case(s, config.truncation) for s in NEWTON_CORPUS]
    ok = all(not c["issues"] for c in cases)
    return ok, {"polynomials": len(cases), "cases": cases}


# ---------------------------------------------------------------------------
# 3. cells and normal forms
# ---------------------------------------------------------------------------

CELL_CORPUS = [
    "0 < x & x < 1",
    "rv(x) = t",
    "x^2 < t",
    "x^2 - t <= 0",
    "x = 2",
    "rv(x + 1) = 1 & x < 0",
    "x != 0",
    "rv(x - 1) < t & x > 1",
    "rv(2*x) > t^2",
    "x^3 - 3*x > 0",
    "(x - 1)*(x - 1 - t) <= 0 & rv(x - 1) >= t^2",
    "rv(x) != 3*t^(1/2)",
    "rv(x) <= t & x > 0",
    "x^2 - 2 > 0 & rv(x) = 1",
    "(x - t)*(x + t) < 0 & x != 0",
    "rv(x - t) >= -t^2 & x^2 < 4",
]

_EXTRA_ANCHORS = ["1 + t^2", "3*t^(1/2)", "-1", "t"]


def cells_agreement(config: RunConfig, points: int = 1000) -> tuple[bool, dict]:
    rows = []
    extra = [parse_series(s) for s in _EXTRA_ANCHORS]
    with config.precision():
        for k, text in enumerate(CELL_CORPUS):
            f = parse_formula(text)
            cells = cell_decompose_1var(f)
            nf = normal_form_1var(f)
            bad, inside, first = 0, 0, None
            for x in sample_line(points, config.seed * 1000 + k, list(nf.centers) + extra):
                a = f.contains((x,))
                hits = sum(c.contains(x) for c in cells)
                b = nf.evaluate(x)
                inside += a
                if hits > 1 or a != (hits == 1) or a != b:
                    bad += 1
                    if first is None:
                        first = {"x": x, "formula": a, "cells": hits, "normal_form": b}
            row = {"formula": text, "cells": len(cells), "normal_form": str(nf),
                   "points": points, "inside": inside, "disagreements": bad}
            if first is not None:
                row["first_disagreement"] = first
            rows.append(row)
    return all(r["disagreements"] == 0 for r in rows), {"formulas": rows}


# ---------------------------------------------------------------------------
# 4. the ball law for centres
# ---------------------------------------------------------------------------

BALL_CORPUS = [
    ["0"],
    ["0", "1"],
    ["0", "t", "1 + t^2"],
    ["t", "-t", "t^2", "1"],
]


def ball_law(config: RunConfig, points: int = 1000, partners: int = 20) -> tuple[bool, dict]:
    rows = []
    for k, S in enumerate(BALL_CORPUS):
        S0 = [parse_series(s) for s in S]
        bd = ball_decomposition_with_centres(S0)
        rng = make_rng(config.seed * 1000 + k)
        xs = sample_line(points, rng, S0)
        codes = [bd.code(b) for b in xs]
        cls = [rvo(b - bd.centre(b)) for b in xs]
        fails = {"same_code": 0, "different_code": 0, "tie_break": 0}
        ties = 0
        for i, b in enumerate(xs):
            # every centre at the top level of the code describes the same ball
            top = max(xi.gamma for xi in codes[i])
            alts = [j for j, xi in enumerate(codes[i]) if xi.gamma == top]
            ties += len(alts) > 1
            ball = bd.fiber(b)
            ci = bd.centre(b)
            for _ in range(partners):
                j = rng.randrange(len(xs))
                same = codes[i] == codes[j]
                inside = ball.contains(xs[j])
                if same and cls[i] != cls[j]:
                    fails["same_code"] += 1
                if not same and (inside or (ci == bd.centre(xs[j]) and cls[i] == cls[j])):
                    fails["different_code"] += 1
                # codes hold rvo(b - s) for every s in S0
                if any((codes[j][s] == codes[i][s]) != inside for s in alts):
                    fails["tie_break"] += 1
        rows.append({"S0": S, "points": points, "tied_points": ties,
                     "distinct_codes": len(set(codes)), "failures": fails})
    return all(not any(r["failures"].values()) for r in rows), {"sets": rows}


# ---------------------------------------------------------------------------
# 5. the Jacobian property
# ---------------------------------------------------------------------------

JP_CORPUS = [
    "x^2",
    "x*y",
    "x^2 + y^3",
    "x^4 - x^2*y + y^2",
    "x^3 - 3*x",
    "x*y*z",
    "x^2 + y^2 + z^2",
    "x^2*y - t*z",
    "(x - 1)^2*(y + t)",
    "x^3 + x*y^2 - y",
    "x^2 - t^(1/2)*y^2 + z",
    "x*y + y*z + x*z",
]

MEAN_VALUE_CORPUS = ["x + t*x^2", "x + t*x^3 - 2*t*x", "x + t", "x + t*(x^4 - x)", "x + t^(1/2)*x^2"]


def jacobian_property(config: RunConfig, pieces: int = 4) -> tuple[bool, dict]:
    maps, lemma = [], []
    with config.precision():
        for f in JP_CORPUS:
            r = jp_run(f, pieces=pieces, pairs=config.pairs, seed=config.seed,
                       budget=config.budget)
            checked = [p for p in r["pieces"] if p.verdict != "skipped"]
            maps.append({"f": f, "verdict": r.verdict, "pieces_checked": len(checked),
                         "pairs": r["pairs"], "min_margin": r["min_margin"]})
        for g in MEAN_VALUE_CORPUS:
            r = mean_value_check(g, config.samples, config.seed)
            lemma.append({"g": g, "verdict": r.verdict, "min_margin": r.details.get("min_margin")})
    ok = (all(m["verdict"] == "holds" and m["min_margin"] > 0 and m["pieces_checked"] > 0
              for m in maps)
          and all(m["verdict"] == "holds" for m in lemma))
    return ok, {"maps": maps, "mean_value": lemma}


# ---------------------------------------------------------------------------
# 6. risometries
# ---------------------------------------------------------------------------

RISOMETRIES = [(["x + 1"], "O"), (["x + t^(1/2)", "y - 3"], "O"), (["x + t*x^2"], "O"),
               (["x + t*y^2", "y + t*x"], "O")]
NON_RISOMETRIES = [(["2*x"], "O"), (["-x"], "O"), (["(1/2)*x"], "O"), (["(3 + t)*x"], "O"),
                   (["x", "2*y"], "O")]


def _random_risometry(rng):
    """A translation, or a shear by a term with positive valuation, in (x, y)."""
    c = random_series(rng, at_least=0)
    k = rng.choice((1, 2, 3))
    a = random_coeff(rng)
    kind = rng.choice(("translate", "shear-x", "shear-y"))
    if kind == "translate":
        return parse_map([f"x + {c}", "y"], ["x", "y"])
    if kind == "shear-x":
        return parse_map([f"x + {a}*t*y^{k}", "y"], ["x", "y"])
    return parse_map(["x", f"y + {a}*t*x^{k}"], ["x", "y"])


def risometry_discrimination(config: RunConfig, triples: int = 5) -> tuple[bool, dict]:
    good, bad, comp = [], [], []
    with config.precision():
        for m, dom in RISOMETRIES:
            r = risometry_check(m, dom, config.pairs, config.seed, config.budget)
            good.append({"map": m, "verdict": r.verdict, "pairs": r.details.get("pairs_checked")})
        for m, dom in NON_RISOMETRIES:
            r = risometry_check(m, dom, config.pairs, config.seed, config.budget)
            bad.append({"map": m, "verdict": r.verdict,
                        "violating_pair": r.details.get("violating_pair")})
        rng = make_rng(config.seed)
        for _ in range(triples):
            f, g, h = (_random_risometry(rng) for _ in range(3))
            fgh = compose_maps(f, compose_maps(g, h))
            r = risometry_check(fgh, "O", 1000, config.seed, config.budget)
            comp.append({"maps": [[str(p) for p in m] for m in (f, g, h)], "verdict": r.verdict})
    ok = (all(g["verdict"] == "holds" for g in good)
          and all(b["verdict"] == "violated" and b["violating_pair"] for b in bad)
          and all(c["verdict"] == "holds" for c in comp))
    return ok, {"risometries": good, "non_risometries": bad, "compositions": comp}


# ---------------------------------------------------------------------------
# shared candidates
# ---------------------------------------------------------------------------

def _line_chart(map_):
    return {"params": ["u"], "map": map_}


def corpus_candidates() -> dict[str, TStratCandidate]:
    xy = ["x", "y"]
    return {
        "axis": candidate(xy, [None, {"pieces": ["y = 0"], "charts": [_line_chart(["u", "0"])]},
                               "y != 0"], name="axis"),
        "cross": candidate(xy, ["x = 0 & y = 0",
                                {"pieces": ["x = 0 & y != 0", "y = 0 & x != 0"],
                                 "charts": [_line_chart(["0", "u"]), _line_chart(["u", "0"])]},
                                "x*y != 0"], name="cross"),
        "cross-no-origin": candidate(xy, [None,
                                          {"pieces": ["x*y = 0"],
                                           "charts": [_line_chart(["0", "u"]),
                                                      _line_chart(["u", "0"])]},
                                          "x*y != 0"], name="cross-no-origin"),
        "cusp": candidate(xy, ["x = 0 & y = 0",
                               {"pieces": ["y^2 - x^3 = 0 & x != 0"],
                                "charts": [_line_chart(["u^2", "u^3"])]},
                               "y^2 - x^3 != 0"], name="cusp"),
        "cone": candidate(["x", "y", "z"], [
            "x = 0 & y = 0 & z = 0", None,
            {"pieces": ["x^2 + y^2 - z^2 = 0 & z != 0"],
             "charts": [{"params": ["u", "v"], "map": ["u^2 - v^2", "2*u*v", "u^2 + v^2"]},
                        {"params": ["u", "v"], "map": ["u^2 - v^2", "2*u*v", "-u^2 - v^2"]}]},
            "x^2 + y^2 - z^2 != 0"], name="cone"),
        "whitney-cusp": candidate(["x", "y", "s"], [
            None,
            {"pieces": ["x = 0 & y = 0"], "charts": [{"params": ["s"], "map": ["0", "0", "s"]}]},
            {"pieces": ["y^2 - s^2*x^2 - x^3 = 0 & x != 0"],
             "charts": [{"params": ["u", "s"], "map": ["u^2 - s^2", "u*(u^2 - s^2)", "s"]}]},
            "y^2 - s^2*x^2 - x^3 != 0"], name="whitney-cusp"),
        "half-plane": candidate(xy, [None, {"pieces": ["y = 0"], "charts": [_line_chart(["u", "0"])]},
                                     "y > 0"], domain="y >= 0", name="half-plane"),
        "trivial": candidate(xy, [None, None, "true"], name="trivial"),
    }


# ---------------------------------------------------------------------------
# 7. the t-stratification verifier
# ---------------------------------------------------------------------------

def tstrat_discrimination(config: RunConfig) -> tuple[bool, dict]:
    cands = corpus_candidates()
    rows = {}
    with config.precision():
        for name in ("axis", "cross", "cross-no-origin"):
            r = tstrat_verify(cands[name], config=config)
            rows[name] = {"verdict": r.verdict, "balls_checked": r.details.get("balls_checked")}
            if "witness" in r.details:
                rows[name]["witness"] = jsonable(r.details["witness"])
    ok = (rows["axis"]["verdict"] == "necessary-conditions-pass"
          and rows["cross"]["verdict"] == "necessary-conditions-pass"
          and rows["cross-no-origin"]["verdict"] == "fail"
          and "ball" in rows["cross-no-origin"].get("witness", {}))
    return ok, rows


# ---------------------------------------------------------------------------
# 8. tangent cones
# ---------------------------------------------------------------------------

HYPERSURFACES = [
    ("cusp", "y^2 - x^3", "0,0"),
    ("circle", "x^2 + y^2 - 1", "1,0"),
    ("cone", "x^2 + y^2 - z^2", "0,0,0"),
    ("linear", "x + 2*y - 3*z", "0,0,0"),
]


def _directions(lf, n: int, count: int, rng) -> list[tuple]:
    """Half random rational directions, half on the zero set of ``lf``."""
    from .newton import real_roots

    out = []
    while len(out) < count // 2:
        out.append(tuple(PuiseuxSeries.const(rng.randint(-5, 5)) for _ in range(n)))
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        j = rng.randrange(n)
        if lf.degree_in(j) == 0:
            continue
        vals = {i: PuiseuxSeries.const(rng.randint(-5, 5)) for i in range(n) if i != j}
        try:
            roots = real_roots(lf.substitute(vals).univariate_coeffs(j))
        except (TconvexError, ValueError):
            continue
        if not roots:
            continue
        vals[j] = rng.choice(roots)
        out.append(tuple(vals[i] for i in range(n)))
    return out


def cone_agreement(lf, X, p, dirs, seed) -> dict:
    """Compare the lowest form with the curve search.

    ``lf(y) != 0`` must give "not found"; ``lf(y) = 0`` with a nonzero gradient
    of ``lf`` must give "found".  Where the gradient vanishes the lowest form
    does not decide real membership, and those directions are listed only.
    """
    grad = lf.gradient()
    agree, disagree, undecided = 0, [], []
    for y in dirs:
        val = lf.evaluate(y)
        if all(c.is_zero() for c in y):
            expect = True
        elif not val.is_zero():
            expect = False
        elif any(not g.evaluate(y).is_zero() for g in grad):
            expect = True
        else:
            expect = None
        got = tangent_cone_membership(X, p, y, seed=seed).found
        if expect is None:
            undecided.append({"y": list(y), "found": got})
        elif got == expect:
            agree += 1
        else:
            disagree.append({"y": list(y), "lowest_form_says": expect, "search_found": got})
    return {"agree": agree, "disagree": disagree, "lowest_form_singular": undecided}


def _cone_base_points(cand: TStratCandidate, seed, count: int = 3) -> list[tuple]:
    """Up to ``count`` real points, taken from the strata in turn, lowest first."""
    per = [base_points(S, count, seed) for S in cand.strata if not S.is_empty]
    out: list = []
    for k in range(count):
        for pts in per:
            if k < len(pts) and pts[k] not in out and len(out) < count:
                out.append(pts[k])
    return out


def tangent_cones(config: RunConfig, directions: int = 50) -> tuple[bool, dict]:
    rng = make_rng(config.seed)
    surfaces = []
    partitions = []
    with config.precision():
        for name, f, p in HYPERSURFACES:
            poly = parse_poly(f)
            lf = tangent_cone_hypersurface(poly, p)
            dirs = _directions(lf, len(poly.vars), directions, rng)
            row = cone_agreement(lf, poly, p, dirs, config.seed)
            surfaces.append(dict(row, name=name, f=f, p=p, lowest_form=str(lf),
                                 directions=len(dirs)))
        cands = corpus_candidates()
        for name in ("axis", "cross", "cusp", "cone"):
            for q in _cone_base_points(cands[name], config.seed):
                cp = induced_cone_partition(cands[name], q)
                r = tstrat_verify(cp, config=config)
                partitions.append({"candidate": name, "p": list(q), "verdict": r.verdict})
    ok = (all(not s["disagree"] and s["directions"] >= directions for s in surfaces)
          and all(r["verdict"] == "necessary-conditions-pass" for r in partitions))
    return ok, {"hypersurfaces": surfaces, "induced_partitions": partitions}


# ---------------------------------------------------------------------------
# 9. t-stratification against Whitney
# ---------------------------------------------------------------------------

def whitney_cusp_oracle() -> dict:
    """Classical (b)-failure of ``y^2 = s^2 x^2 + x^3`` along the s-axis.

    On the arc ``(-tau^2, 0, tau)`` of the surface, the angle between the
    normal and the secant to ``(0, 0, tau)`` is computed symbolically; a
    nonzero limit of their cosine means the secant is not in the limit of
    tangent planes.
    """
    import sympy as sp

    x, y, s, tau = sp.symbols("x y s tau", real=True)
    F = y ** 2 - s ** 2 * x ** 2 - x ** 3
    arc = {x: -tau ** 2, y: 0, s: tau}
    on_surface = sp.simplify(F.subs(arc)) == 0
    normal = [sp.diff(F, v).subs(arc) for v in (x, y, s)]
    secant = [-tau ** 2, 0, 0]
    dot = sum(a * b for a, b in zip(normal, secant))
    cos = dot / (sp.sqrt(sum(a ** 2 for a in normal)) * sp.sqrt(sum(b ** 2 for b in secant)))
    lim = sp.limit(sp.simplify(cos), tau, 0, "+")
    return {"on_surface": bool(on_surface), "cosine_limit": str(lim),
            "b_fails": bool(on_surface and lim != 0)}


def main4_implication(config: RunConfig) -> tuple[bool, dict]:
    cands = corpus_candidates()
    rows = {}
    with config.precision():
        for name, c in cands.items():
            r = theorem_main4_suite(c, config)
            rows[name] = {"tstrat": r["tstrat"], "whitney": r["whitney"],
                          "implication": r["implication"]}
        oracle = whitney_cusp_oracle()
        wc = cands["whitney-cusp"]
        w = whitney_check(wc.strata[2], wc.strata[1], "0,0,0", seed=config.seed, pair=(2, 1))
        arcs = [wit for wit in w.witnesses if wit.get("condition") == "b"]
    ok = (all(r["implication"] != "violated" for r in rows.values())
          and rows["cone"]["tstrat"] == "necessary-conditions-pass"
          and rows["cone"]["whitney"] == "holds")
    if oracle["b_fails"]:
        ok = ok and w.b == "fails" and bool(arcs)
    return ok, {"candidates": rows, "whitney_cusp_oracle": oracle,
                "whitney_cusp_check": {"a": w.a, "b": w.b,
                                       "arc_witness": arcs[0] if arcs else None}}


# ---------------------------------------------------------------------------
# 10. exponential demonstrator
# ---------------------------------------------------------------------------

def exp_demonstrator(config: RunConfig) -> tuple[bool, dict]:
    r = exponential_demo(2, 3, config=config)
    d = r.to_json()
    d.pop("config", None)
    d.pop("seed", None)
    return r.verdict == "pass", d


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

SCENARIOS: list[tuple[int, str, Callable]] = [
    (1, "valued-field-laws", valued_field_laws),
    (2, "newton-soundness", newton_soundness),
    (3, "cells-normal-form", cells_agreement),
    (4, "ball-law", ball_law),
    (5, "jacobian-property", jacobian_property),
    (6, "risometry", risometry_discrimination),
    (7, "tstrat-verifier", tstrat_discrimination),
    (8, "tangent-cones", tangent_cones),
    (9, "main4-implication", main4_implication),
    (10, "exp-demo", exp_demonstrator),
]
DETERMINISM = (11, "determinism")
LIMITS = {1: 5, 2: 10, 3: 10, 4: 5, 5: 60, 6: 5, 7: 30, 8: 60, 9: 60, 10: 10}


def run_scenario(cid: int, config: RunConfig = DEFAULT_CONFIG) -> tuple[dict, float]:
    for k, name, fn in SCENARIOS:
        if k == cid:
            t0 = time.perf_counter()
            try:
                ok, details = fn(config)
            except TconvexError as exc:
                ok, details = False, {"error": f"{type(exc).__name__}: {exc}"}
            row = {"id": k, "name": name, "verdict": "pass" if ok else "fail",
                   "details": jsonable(details)}
            return row, time.perf_counter() - t0
    raise KeyError(cid)


def _determinism(config: RunConfig, first: list[dict]) -> tuple[dict, float]:
    t0 = time.perf_counter()
    ids = [k for k, _, _ in SCENARIOS]
    base = {r["id"]: r for r in first}
    again = [run_scenario(k, config)[0] for k in ids]
    base_rows = [base[k] if k in base else run_scenario(k, config)[0] for k in ids]
    identical = dump_json(base_rows) == dump_json(again)
    moved = config.with_(seed=config.seed + 1)
    other = [run_scenario(k, moved)[0] for k in ids]
    changed = [r["id"] for r, o in zip(base_rows, other) if r["verdict"] != o["verdict"]]
    samples_moved = [r["id"] for r, o in zip(base_rows, other)
                     if dump_json(r["details"]) != dump_json(o["details"])]
    ok = identical and not changed
    row = {"id": DETERMINISM[0], "name": DETERMINISM[1], "verdict": "pass" if ok else "fail",
           "details": {"byte_identical": identical, "other_seed": moved.seed,
                       "verdict_changes": changed, "details_changed": samples_moved}}
    return row, time.perf_counter() - t0


def run_corpus(config: RunConfig = DEFAULT_CONFIG, only: Sequence[int] | None = None,
               progress: Callable | None = None) -> tuple[list[dict], dict]:
    """Rows for the selected criteria (all by default) and their timings."""
    wanted = [k for k, _, _ in SCENARIOS] + [DETERMINISM[0]] if only is None else list(only)
    rows, times = [], {}
    for k, name, _ in SCENARIOS:
        if k in wanted:
            row, dt = run_scenario(k, config)
            rows.append(row)
            times[k] = dt
            if progress:
                progress(row, dt)
    if DETERMINISM[0] in wanted:
        row, dt = _determinism(config, rows)
        rows.append(row)
        times[DETERMINISM[0]] = dt
        if progress:
            progress(row, dt)
    return rows, times


def corpus_report(config: RunConfig = DEFAULT_CONFIG, only=None, progress=None) -> tuple[Report, dict]:
    rows, times = run_corpus(config, only, progress)
    verdict = "pass" if all(r["verdict"] == "pass" for r in rows) else "fail"
    return Report("corpus", verdict, {"rows": rows}, config), times


__all__ = [
    "SCENARIOS",
    "LIMITS",
    "run_scenario",
    "run_corpus",
    "corpus_report",
    "corpus_candidates",
    "whitney_cusp_oracle",
    "cone_agreement",
]
