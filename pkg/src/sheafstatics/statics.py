"""Force cosheaf, linkage and position sheaves, and their mechanical readings."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .complex import CellComplex, Diagram, quarter_turn_vec
from .errors import Infeasible, ValidationError
from .numerics import DEFAULT_TOL, Tolerance
from .sheaf import (Cosheaf, CosheafMapData, ShortExactSequence, assemble_chain_complex,
                    constant_cosheaf, homology, linear_dual, short_exact_sequence)

MECHANISM_THRESHOLD = 1e-6


@dataclass
class SelfStress:
    """Axial edge forces in equilibrium; tension is positive."""
    values: dict
    vector: np.ndarray
    index: int = 0

    def __getitem__(self, e):
        return self.values[e]


@dataclass
class FreedomMode:
    vertex_forces: dict
    vector: np.ndarray
    classification: str  # "translation" | "rotation" | "mechanism"


def force_cosheaf(diagram: Diagram) -> Cosheaf:
    cx = diagram.complex
    stalks = {v: 2 for v in cx.vertices}
    stalks.update({e: 1 for e in cx.edges})
    maps = {}
    for e in cx.edges:
        d, _ = diagram.edge_vector(e)
        for v, _ in cx.boundary(e):
            maps[(v, e)] = d.reshape(2, 1)
    return Cosheaf(cx, stalks, maps, name="force")


def linkage_sheaf(diagram: Diagram) -> Cosheaf:
    return linear_dual(force_cosheaf(diagram))


def position_sheaf(diagram: Diagram) -> Cosheaf:
    """Vertex stalks (R^2)^*, edge stalks the covectors normal to the edge."""
    cx = diagram.complex
    stalks = {v: 2 for v in cx.vertices}
    stalks.update({e: 1 for e in cx.edges})
    maps = {}
    for e in cx.edges:
        n = diagram.edge_normal(e)
        for v, _ in cx.boundary(e):
            maps[(v, e)] = n.reshape(1, 2)
    return Cosheaf(cx, stalks, maps, is_sheaf=True, name="position")


def position_dual_cosheaf(diagram: Diagram) -> Cosheaf:
    return linear_dual(position_sheaf(diagram))


def force_embedding(diagram: Diagram) -> CosheafMapData:
    """Inclusion of the force cosheaf into the constant R^2 cosheaf."""
    F = force_cosheaf(diagram)
    R2 = constant_cosheaf(diagram.complex, 2)
    comps = {v: np.eye(2) for v in diagram.complex.vertices}
    comps.update({e: diagram.edge_vector(e)[0].reshape(2, 1) for e in diagram.complex.edges})
    return CosheafMapData(F, R2, comps)


def force_sequence(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> ShortExactSequence:
    """0 -> F -> R^2 -> G -> 0; G's homology holds reciprocal diagrams."""
    return short_exact_sequence(force_embedding(diagram), tol)


def rigid_motions(diagram: Diagram) -> np.ndarray:
    """Columns: x-translation, y-translation, rotation about the centroid."""
    P = diagram.coordinate_array()
    n = len(P)
    T = np.zeros((2 * n, 3))
    T[0::2, 0] = 1.0
    T[1::2, 1] = 1.0
    if n:
        rot = quarter_turn_vec(P - P.mean(axis=0))
        T[:, 2] = rot.reshape(-1)
    return T


def _boundary(diagram, tol):
    data = assemble_chain_complex(force_cosheaf(diagram), tol)
    return data, data.outgoing(1)


def self_stresses(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> list:
    data, D = _boundary(diagram, tol)
    H = homology(data, 1, tol)
    edges = diagram.complex.edges
    return [SelfStress({e: float(H.basis[i, j]) for i, e in enumerate(edges)}, H.basis[:, j].copy(), j)
            for j in range(H.dimension)]


def classify_mode(vec, diagram: Diagram, threshold: float = MECHANISM_THRESHOLD) -> str:
    """Translation, rotation, or mechanism by projection onto the rigid motions."""
    vec = np.asarray(vec, dtype=float)
    total = np.linalg.norm(vec)
    if total == 0:
        return "translation"
    R = rigid_motions(diagram)
    T = numerics.image_basis(R[:, :2])
    rigid = numerics.image_basis(R)
    off_rigid = np.linalg.norm(vec - rigid @ (rigid.T @ vec))
    if off_rigid > threshold * total:
        return "mechanism"
    off_trans = np.linalg.norm(vec - T @ (T.T @ vec))
    return "translation" if off_trans <= threshold * total else "rotation"


def _mode_basis(diagram, tol):
    """Orthonormal basis of H_0(F) ordered translations, rotation, mechanisms."""
    data, D = _boundary(diagram, tol)
    H = homology(data, 0, tol)
    K = H.basis
    R = rigid_motions(diagram)
    if K.shape[1] == 0:
        return K, []
    # rigid motions that are also free: R a with R a in span(K)
    outside = R - K @ (K.T @ R)
    A = numerics.kernel_basis(outside, numerics.Tolerance(1e-8, 1e-12))
    free_rigid = numerics.image_basis(R @ A) if A.shape[1] else np.zeros((K.shape[0], 0))
    T = R[:, :2]
    outside_t = T - free_rigid @ (free_rigid.T @ T) if free_rigid.shape[1] else T
    At = numerics.kernel_basis(outside_t, numerics.Tolerance(1e-8, 1e-12))
    trans = numerics.image_basis(T @ At) if At.shape[1] else np.zeros((K.shape[0], 0))
    rot = numerics.quotient_basis(free_rigid, trans) if free_rigid.shape[1] else free_rigid
    mech = numerics.quotient_basis(K, free_rigid) if free_rigid.shape[1] else K
    labels = ["translation"] * trans.shape[1] + ["rotation"] * rot.shape[1] + ["mechanism"] * mech.shape[1]
    return np.hstack([trans, rot, mech]), labels


def freedom_modes(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> list:
    B, labels = _mode_basis(diagram, tol)
    verts = diagram.complex.vertices
    return [FreedomMode({v: B[2 * i:2 * i + 2, j].copy() for i, v in enumerate(verts)}, B[:, j].copy(), lab)
            for j, lab in enumerate(labels)]


def mechanisms(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> list:
    return [m for m in freedom_modes(diagram, tol) if m.classification == "mechanism"]


def is_rigid(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> bool:
    return diagram.complex.is_connected() and not mechanisms(diagram, tol)


def member_diagram(diagram: Diagram) -> Diagram:
    """The free truss left after dropping open-ended load and reaction edges (and faces)."""
    cx = diagram.complex
    members = [e for e in cx.edges if not cx.is_open_edge(e)]
    keep = set(cx.vertices) | set(members)
    inc = [(lo, hi, s) for (lo, hi), s in cx.incidence.items() if lo in keep and hi in keep]
    sub = CellComplex(cx.vertices, members, [], inc, closed=False)
    return Diagram(sub, diagram.positions, springs=diagram.springs)


def _maxwell_counts(diagram, tol):
    modes = freedom_modes(diagram, tol)
    S = len(self_stresses(diagram, tol))
    M = sum(m.classification == "mechanism" for m in modes)
    rigid = len(modes) - M
    V, E, _ = diagram.complex.counts()
    lhs, rhs = 2 * V - E, rigid + M - S
    return {"V": V, "E": E, "rigid_motions": rigid, "mechanisms": M, "self_stresses": S,
            "lhs": lhs, "rhs": rhs, "holds": lhs == rhs}


def maxwell_rule_report(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> dict:
    """Integer check of 2|V| - |E| = 3 + |M| - |S| over the truss members.

    Open-ended load and reaction edges are external to the truss and are left
    out of the count. When present, ``with_open_edges`` repeats the count over
    every 1-cell, where the constant 3 becomes the number of rigid motions the
    reactions leave free.
    """
    cx = diagram.complex
    has_open = any(cx.is_open_edge(e) for e in cx.edges)
    out = _maxwell_counts(member_diagram(diagram) if has_open else diagram, tol)
    if has_open:
        out["with_open_edges"] = _maxwell_counts(diagram, tol)
    return out


@dataclass
class EquilibriumSolution:
    internal: dict
    reactions: dict
    loads: dict
    residual: float
    self_stress_basis: list = field(default_factory=list)

    def as_vector(self, edges) -> np.ndarray:
        merged = {**self.internal, **self.reactions, **self.loads}
        return np.array([merged[e] for e in edges])


def solve_equilibrium(diagram: Diagram, prescribed: dict, tol: Tolerance = DEFAULT_TOL,
                      gate: float = 1e-9) -> EquilibriumSolution:
    """Find a cycle of the force cosheaf matching prescribed open-edge values.

    Among all matching cycles the minimum-norm one is returned; the self-stress
    basis of the diagram (the freedom left in the answer) is reported alongside.
    """
    cx = diagram.complex
    if cx.closed:
        raise ValidationError("boundary conditions require an open complex")
    for e in prescribed:
        if e not in cx.edges or not cx.is_open_edge(e):
            raise ValidationError(f"prescribed edge {e} is not an open-ended edge")
    data, D = _boundary(diagram, tol)
    edges = list(cx.edges)
    known = [edges.index(e) for e in prescribed]
    unknown = [i for i in range(len(edges)) if i not in known]
    w_known = np.array([float(prescribed[edges[i]]) for i in known])
    rhs = -D[:, known] @ w_known if known else np.zeros(D.shape[0])
    x, _ = numerics.least_squares_solve(D[:, unknown], rhs, tol)
    w = np.zeros(len(edges))
    w[known] = w_known
    w[unknown] = x
    residual = float(np.linalg.norm(D @ w))
    scale = max(1.0, float(np.linalg.norm(w_known)))
    if residual > gate * scale:
        raise Infeasible(f"prescribed loads admit no equilibrium: residual {residual:.3e}")
    internal = {e: float(w[i]) for i, e in enumerate(edges) if not cx.is_open_edge(e)}
    reactions = {e: float(w[i]) for i, e in enumerate(edges) if cx.is_open_edge(e) and e not in prescribed}
    loads = {e: float(prescribed[e]) for e in prescribed}
    return EquilibriumSolution(internal, reactions, loads, residual, self_stresses(diagram, tol))


def stress_vector(diagram: Diagram, stress) -> np.ndarray:
    """Accept a SelfStress, a dict of edge values, or an array in edge order."""
    if isinstance(stress, SelfStress):
        return np.asarray(stress.vector, dtype=float)
    if isinstance(stress, dict):
        return np.array([float(stress.get(e, 0.0)) for e in diagram.complex.edges])
    return np.asarray(stress, dtype=float).reshape(-1)


def equilibrium_residual(diagram: Diagram, stress) -> float:
    _, D = _boundary(diagram, DEFAULT_TOL)
    return float(np.linalg.norm(D @ stress_vector(diagram, stress)))
