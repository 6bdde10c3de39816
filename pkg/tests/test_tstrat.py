from __future__ import annotations

import pytest
from gmpy2 import mpq

from tconvex.corpus import corpus_candidates
from tconvex.errors import DomainError
from tconvex.formula import parse_formula
from tconvex.sampling import make_rng
from tconvex.series import INF, PuiseuxSeries
from tconvex.tstrat import (ResidueSubspace, affine_direction, candidate, exhibition_find,
                            graph_fit, rainbow_code, risometry_check, straightening_check,
                            tstrat_verify)

from conftest import S


def _units(n, seed=0):
    # elements of O with pairwise distinct residues
    rng = make_rng(seed)
    return [S(f"{k} + {rng.randint(-9, 9)}*t^(1/2)") for k in rng.sample(range(-20, 20), n)]


def test_risometry_examples():
    assert risometry_check("x + 3 - t", "R", pairs=200).verdict == "holds"
    bad = risometry_check("2*x", "O", pairs=200)
    assert bad.verdict == "violated" and "violating_pair" in bad.details
    # x + t x^2 - (y + t y^2) = (x - y)(1 + t(x + y)), a unit factor in 1 + M
    assert risometry_check("x + t*x^2", "O", pairs=400).verdict == "holds"


def test_risometry_two_dim():
    assert risometry_check(["x", "y + t*x^2"], "O", pairs=300).verdict == "holds"
    assert risometry_check(["y", "x"], "O", pairs=300).verdict == "violated"


def test_rainbow_distance_to_point():
    cand = candidate(["x"], ["x = 0", "x != 0"])
    a = rainbow_code((S("1+t"),), cand)
    b = rainbow_code((S("1+t^2"),), cand)
    assert a.entries[0][0] == 0
    assert a.entries[0] == b.entries[0]
    assert a.entries[1][0] == INF


def test_rainbow_on_own_stratum():
    axis = corpus_candidates()["axis"]
    code = rainbow_code((S("3 - t"), S("0")), axis)
    assert code.entries[0] is None
    assert code.entries[1][0] == INF


def test_affine_direction_graph():
    # C = graph of a -> a t over O: differences have residue (r, 0)
    sample = [(a, a * S("t")) for a in _units(12, seed=3)]
    V = affine_direction(sample)
    assert V == ResidueSubspace.span([[1, 0]], 2)
    assert exhibition_find(V) == (0,)


def test_affine_direction_plane_and_point():
    pts = list(zip(_units(10, 1), _units(10, 2)))
    assert affine_direction(pts).dim == 2
    assert affine_direction([(S("1"), S("t"))] * 3).dim == 0
    assert exhibition_find(ResidueSubspace.span([], 2)) == ()


def test_exhibition_diagonal():
    assert exhibition_find(ResidueSubspace.span([[1, 1]], 2)) == (0,)
    assert exhibition_find(ResidueSubspace.span([[0, 3]], 2)) == (1,)


def test_graph_fit():
    c = S("t")
    sample = [(a, a * c) for a in _units(10, 4)]
    rows, verdict = graph_fit(sample, (0,))
    assert verdict == "holds"
    assert all(rest[0] == key[0] * c for key, rest in rows)
    plane = [(S("1"), S("2")), (S("1"), S("3"))]
    assert graph_fit(plane, (0,))[1] == "fails"
    assert graph_fit([(S("1"), S("1"))], (0,))[1] == "holds"


def test_straightening():
    ident = [[1, 0], [0, 1]]
    assert straightening_check(["x", "y"], ident, "O", pairs=200).verdict == "holds"
    assert straightening_check(["x", "y + t*x^2"], ident, "O", pairs=300).verdict == "holds"
    with pytest.raises(DomainError):
        straightening_check(["x", "y"], [[1, 0], [0, "t"]], "O")


@pytest.mark.parametrize("name,verdict", [
    ("axis", "necessary-conditions-pass"),
    ("cross", "necessary-conditions-pass"),
    ("cross-no-origin", "fail"),
    ("trivial", "necessary-conditions-pass"),
])
def test_tstrat_verify(name, verdict):
    rep = tstrat_verify(corpus_candidates()[name], balls=12)
    assert rep.verdict == verdict
    if verdict == "fail":
        assert "ball" in rep.details["witness"]


def test_afd_monotone_under_subsamples():
    pts = [(a, b * S("t^(1/2)") + a) for a, b in zip(_units(12, 5), _units(12, 6))]
    full = affine_direction(pts)
    for k in (2, 4, 8):
        assert affine_direction(pts[:k]).issubspace(full)


def test_risometry_composition_closure():
    from tconvex.tstrat import compose_maps
    from tconvex.formula import parse_map

    phi = parse_map(["x + t*y^2", "y"], ("x", "y"))
    psi = parse_map(["x", "y - 3*t*x"], ("x", "y"))
    for m in (phi, psi, compose_maps(phi, psi)):
        assert risometry_check(m, "O", pairs=300).verdict == "holds"
