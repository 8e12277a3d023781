import numpy as np
import pytest
from hypothesis import given, settings

from conftest import cosine, wheels
from oracles import rigidity_matrix, stress_and_freedom_dims
from sheafstatics import fixtures, statics
from sheafstatics.errors import Infeasible, ValidationError
from sheafstatics.sheaf import betti

EXPECTED = {
    "boxed": (3, 1, 0), "square": (4, 0, 0), "triangle": (3, 0, 0), "prism": (4, 1, 0),
    "triangulated_sphere": (3, 3, 0), "torus_grid": (3, 3, 0), "torus_triangulated": (3, 12, 0),
    "torus_diagonals": (3, 9, 0), "torus_pentagon": (3, 5, 0), "genus_two": (3, 7, 0),
    "single_edge": (3, 0, 0), "open_truss": (1, 1, 0),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_force_cosheaf_betti(name):
    assert betti(statics.force_cosheaf(fixtures.ALL[name]())) == EXPECTED[name]


@pytest.mark.parametrize("name", sorted(fixtures.ALL))
def test_agrees_with_rigidity_matrix(name):
    d = fixtures.ALL[name]()
    S, free = stress_and_freedom_dims(d)
    b = betti(statics.force_cosheaf(d))
    assert (b[1], b[0]) == (S, free)


@pytest.mark.parametrize("name", sorted(fixtures.ALL))
def test_self_stresses_are_in_rigidity_cokernel(name):
    d = fixtures.ALL[name]()
    R = rigidity_matrix(d)
    for s in statics.self_stresses(d):
        assert np.abs(R.T @ s.vector).max() < 1e-10
        assert statics.equilibrium_residual(d, s) < 1e-10


def test_boxed_stress_shape():
    d = fixtures.boxed()
    (s,) = statics.self_stresses(d)
    r2 = np.sqrt(2)
    target = np.array([1, 1, 1, 1, -r2, -r2, -r2, -r2])
    assert cosine(s.vector, target) > 1 - 1e-12


@pytest.mark.parametrize("name", sorted(fixtures.ALL))
def test_maxwell_rule(name):
    rep = statics.maxwell_rule_report(fixtures.ALL[name]())
    assert rep["holds"]
    assert rep["lhs"] == 2 * rep["V"] - rep["E"]


@pytest.mark.parametrize("name,M,S", [("boxed", 0, 1), ("square", 1, 0), ("triangle", 0, 0), ("prism", 1, 1)])
def test_maxwell_counts_on_spheres(name, M, S):
    rep = statics.maxwell_rule_report(fixtures.ALL[name]())
    assert (rep["rigid_motions"], rep["mechanisms"], rep["self_stresses"]) == (3, M, S)


def test_open_truss_counts_members():
    rep = statics.maxwell_rule_report(fixtures.open_truss())
    assert (rep["V"], rep["E"], rep["rigid_motions"], rep["mechanisms"], rep["self_stresses"]) == (3, 3, 3, 0, 0)
    full = rep["with_open_edges"]
    assert full["holds"] and (full["E"], full["rigid_motions"], full["self_stresses"]) == (6, 1, 1)


def test_member_diagram_drops_open_edges():
    m = statics.member_diagram(fixtures.open_truss())
    assert m.complex.counts() == (3, 3, 0)
    assert betti(statics.force_cosheaf(m)) == (3, 0, 0)


def test_square_mechanism_is_a_shear():
    d = fixtures.square()
    (m,) = statics.mechanisms(d)
    assert statics.classify_mode(m.vector, d) == "mechanism"
    assert not statics.is_rigid(d)
    assert statics.is_rigid(fixtures.boxed())


def test_mode_classification_order():
    labels = [m.classification for m in statics.freedom_modes(fixtures.prism())]
    assert labels == ["translation", "translation", "rotation", "mechanism"]


def test_rigid_motions_are_infinitesimal_flexes():
    d = fixtures.boxed()
    R = rigidity_matrix(d)
    assert np.abs(R @ statics.rigid_motions(d)).max() < 1e-12


@settings(max_examples=20, deadline=None)
@given(wheels)
def test_wheels_have_one_stress_and_are_rigid(d):
    rep = statics.maxwell_rule_report(d)
    assert rep["holds"] and rep["self_stresses"] == 1 and rep["mechanisms"] == 0
    assert stress_and_freedom_dims(d) == (1, 3)


@settings(max_examples=20, deadline=None)
@given(wheels)
def test_stress_invariant_under_similarity(d):
    (s,) = statics.self_stresses(d)
    c, sn = np.cos(0.7), np.sin(0.7)
    moved = d.with_positions({v: 2.5 * np.array([[c, -sn], [sn, c]]) @ d.point(v) + [3.0, -1.0]
                              for v in d.complex.vertices})
    (t,) = statics.self_stresses(moved)
    assert cosine(s.vector, t.vector) > 1 - 1e-9


def test_position_sheaf_dims():
    assert betti(statics.position_sheaf(fixtures.square()))[:2] == (4, 0)
    assert betti(statics.position_sheaf(fixtures.boxed()))[:2] == (3, 1)


def test_solve_equilibrium_open_truss():
    d = fixtures.open_truss()
    sol = statics.solve_equilibrium(d, {"lC": 1.0})
    assert sol.residual < 1e-12
    assert sol.reactions["rA"] == pytest.approx(0.5) and sol.reactions["rB"] == pytest.approx(0.5)
    assert sol.internal["eAB"] < 0 < sol.internal["eBC"]
    assert statics.equilibrium_residual(d, sol.as_vector(d.complex.edges)) < 1e-12


def test_solve_equilibrium_rejects_bad_input():
    with pytest.raises(ValidationError):
        statics.solve_equilibrium(fixtures.boxed(), {"e0": 1.0})
    with pytest.raises(ValidationError):
        statics.solve_equilibrium(fixtures.open_truss(), {"eAB": 1.0})


def test_solve_equilibrium_infeasible():
    # a single horizontal pull on a lone bar cannot be balanced
    from sheafstatics.complex import CellComplex, Diagram
    cx = CellComplex(["a", "b"], ["e", "l"], [], [("a", "e", -1), ("b", "e", 1), ("b", "l", -1)], closed=False)
    d = Diagram(cx, {"a": (0.0, 0.0), "b": (1.0, 0.0)}, {"l": (0.0, 1.0)})
    with pytest.raises(Infeasible):
        statics.solve_equilibrium(d, {"l": 1.0})
