import numpy as np
import pytest
from hypothesis import given, settings

from conftest import wheels
from oracles import betti_numbers
from sheafstatics import fixtures, statics
from sheafstatics.errors import BoundarySquareNonzero, CommutativityError, NotInjective
from sheafstatics.sheaf import (Cosheaf, CosheafMapData, assemble_chain_complex, betti, constant_cosheaf,
                               exactness_defects, homology, linear_dual, long_exact_sequence,
                               poincare_dual_cosheaf, quotient_cosheaf, short_exact_sequence)


def sheaves_of(d):
    return [statics.force_cosheaf(d), statics.linkage_sheaf(d), statics.position_sheaf(d),
            statics.position_dual_cosheaf(d), constant_cosheaf(d.complex, 1), constant_cosheaf(d.complex, 2)]


@pytest.mark.parametrize("name", sorted(fixtures.ALL))
def test_constant_cosheaf_matches_incidence_ranks(name):
    cx = fixtures.ALL[name]().complex
    assert betti(constant_cosheaf(cx, 1)) == betti_numbers(cx)


def test_constant_r2_doubles_betti():
    cx = fixtures.torus_grid().complex
    assert betti(constant_cosheaf(cx, 2)) == (2, 4, 2)


def test_boundary_squares_to_zero(any_diagram):
    for S in sheaves_of(any_diagram):
        data = assemble_chain_complex(S)
        if S.is_sheaf:
            prod = data.outgoing(1) @ data.outgoing(0)
        else:
            prod = data.outgoing(1) @ data.outgoing(2)
        assert prod.size == 0 or np.abs(prod).max() < 1e-12


def test_nonzero_square_is_rejected():
    cx = fixtures.triangle().complex
    maps = {pair: np.eye(1) * (2.0 if pair == ("v0", "e0") else 1.0) for pair in cx.incidence}
    with pytest.raises(BoundarySquareNonzero):
        assemble_chain_complex(Cosheaf(cx, {c: 1 for c in cx.cells()}, maps))


def test_missing_map_is_rejected():
    cx = fixtures.triangle().complex
    with pytest.raises(ValueError):
        Cosheaf(cx, {c: 1 for c in cx.cells()}, {})


def test_linear_duality(any_diagram):
    for S in sheaves_of(any_diagram):
        D = linear_dual(S)
        assert D.is_sheaf != S.is_sheaf
        assert betti(D) == betti(S)
        assert linear_dual(D).maps.keys() == S.maps.keys()


def test_poincare_duality(closed_diagram):
    for S in sheaves_of(closed_diagram):
        P = poincare_dual_cosheaf(S)
        b, bp = betti(S), betti(P)
        assert all(b[k] == bp[2 - k] for k in range(3))


def test_euler_characteristic_of_force_cosheaf(any_diagram):
    F = statics.force_cosheaf(any_diagram)
    b = betti(F)
    V, E, _ = any_diagram.complex.counts()
    assert b[0] - b[1] + b[2] == 2 * V - E


def test_homology_basis_is_orthonormal_cycles():
    F = statics.force_cosheaf(fixtures.torus_diagonals())
    data = assemble_chain_complex(F)
    H = homology(data, 1)
    assert np.allclose(H.basis.T @ H.basis, np.eye(H.dimension))
    assert np.abs(data.outgoing(1) @ H.basis).max() < 1e-12


def test_quotient_requires_injective_map():
    cx = fixtures.triangle().complex
    one = constant_cosheaf(cx, 1)
    zero = CosheafMapData(one, constant_cosheaf(cx, 2), {})
    with pytest.raises(NotInjective):
        quotient_cosheaf(zero)


def test_noncommuting_map_is_rejected():
    cx = fixtures.triangle().complex
    comps = {c: np.array([[1.0], [0.0]]) if c != "e0" else np.array([[0.0], [1.0]]) for c in cx.cells()}
    phi = CosheafMapData(constant_cosheaf(cx, 1), constant_cosheaf(cx, 2), comps)
    with pytest.raises(CommutativityError):
        short_exact_sequence(phi)


@pytest.mark.parametrize("name", ["boxed", "square", "prism", "triangulated_sphere", "torus_diagonals",
                                  "torus_pentagon", "open_truss"])
def test_force_sequence_long_exact(name):
    seq = statics.force_sequence(fixtures.ALL[name]())
    assert exactness_defects(long_exact_sequence(seq)) == []


@settings(max_examples=15, deadline=None)
@given(wheels)
def test_wheel_force_sequence_exact(d):
    seq = statics.force_sequence(d)
    assert exactness_defects(long_exact_sequence(seq)) == []
    assert betti(statics.force_cosheaf(d)) == (3, 1, 0)
