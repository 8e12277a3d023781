import numpy as np
import pytest

from sheafstatics import fixtures
from sheafstatics.complex import (CellComplex, Diagram, dual_id, euler_characteristic, genus, poincare_dual,
                                  validate, validate_diagram)
from sheafstatics.errors import DegenerateEdge, NotClosedSurface

CLOSED = sorted(fixtures.CLOSED)


def test_square_validates():
    assert validate(fixtures.square().complex).ok


def test_boxed_validates():
    cx = fixtures.boxed().complex
    assert validate(cx).ok
    assert cx.counts() == (5, 8, 5)


def test_same_signed_edge_is_flagged():
    cx = CellComplex(["a", "b"], ["e"], [], [("a", "e", 1), ("b", "e", 1)], closed=False)
    assert "directed edges" in validate(cx).rules()


def test_mismatched_face_orientation_is_flagged():
    sq = fixtures.square().complex
    inc = [(lo, hi, s if hi != "f1" else -s) for (lo, hi), s in sq.incidence.items()]
    bad = CellComplex(sq.vertices, sq.edges, sq.faces, inc)
    assert "orientation" in validate(bad).rules()


def test_regularity_failure_is_flagged():
    sq = fixtures.square().complex
    inc = [(lo, hi, -s if (lo, hi) == ("e0", "f1") else s) for (lo, hi), s in sq.incidence.items()]
    assert "regularity" in validate(CellComplex(sq.vertices, sq.edges, sq.faces, inc)).rules()


def test_open_edge_not_allowed_when_closed():
    cx = CellComplex(["a"], ["e"], [], [("a", "e", -1)], closed=True)
    assert "closed surface" in validate(cx).rules()


@pytest.mark.parametrize("name", CLOSED)
def test_closed_fixtures_validate(name):
    d = fixtures.CLOSED[name]()
    assert validate_diagram(d).ok


@pytest.mark.parametrize("name", sorted(fixtures.OPEN))
def test_open_fixtures_validate(name):
    assert validate_diagram(fixtures.OPEN[name]()).ok


@pytest.mark.parametrize("name", CLOSED)
def test_regularity_sums_vanish(name):
    cx = fixtures.CLOSED[name]().complex
    for f in cx.faces:
        total = {}
        for e, s in cx.boundary(f):
            for v, t in cx.boundary(e):
                total[v] = total.get(v, 0) + s * t
        assert all(x == 0 for x in total.values())


@pytest.mark.parametrize("name", CLOSED)
def test_dual_twice_is_identity(name):
    cx = fixtures.CLOSED[name]().complex
    dual = poincare_dual(cx)
    assert dual.counts() == cx.counts()[::-1]
    assert len(dual.incidence) == len(cx.incidence)
    assert poincare_dual(dual) == cx


def test_dual_ids_round_trip():
    assert dual_id(dual_id("e7")) == "e7"
    assert dual_id("e7") == "~e7"


def test_dual_of_boxed_and_torus_counts():
    assert poincare_dual(fixtures.boxed().complex).counts() == (5, 8, 5)
    assert poincare_dual(fixtures.torus_grid().complex).counts() == (9, 18, 9)


def test_dual_requires_closed_surface():
    with pytest.raises(NotClosedSurface):
        poincare_dual(fixtures.open_truss().complex)


@pytest.mark.parametrize("name,chi,g", [("boxed", 2, 0), ("torus_grid", 0, 1), ("genus_two", -2, 2),
                                         ("torus_diagonals", 0, 1), ("triangulated_sphere", 2, 0)])
def test_euler_and_genus(name, chi, g):
    cx = fixtures.CLOSED[name]().complex
    assert euler_characteristic(cx) == chi
    assert genus(cx) == g


def test_open_truss_euler_counts_present_cells():
    cx = fixtures.open_truss().complex
    assert cx.counts() == (3, 6, 4)
    assert euler_characteristic(cx) == 1
    with pytest.raises(NotClosedSurface):
        genus(cx)


def test_zero_length_edge():
    cx = CellComplex(["a", "b"], ["e"], [], [("a", "e", -1), ("b", "e", 1)], closed=False)
    d = Diagram(cx, {"a": (1.0, 1.0), "b": (1.0, 1.0)})
    with pytest.raises(DegenerateEdge):
        d.edge_vector("e")
    assert {"edge length", "injective realization"} <= validate_diagram(d).rules()


def test_face_cycles_follow_orientation():
    d = fixtures.boxed()
    for f in d.complex.faces[1:]:
        P = np.array([d.point(v) for v in d.complex.face_cycle(f)])
        x, y = P[:, 0], P[:, 1]
        area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        assert area > 0
