"""Reciprocal force diagrams, rotation transfer and the reciprocity dimension table."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import numerics
from .complex import CellComplex, Diagram, dual_id, genus, poincare_dual, quarter_turn_vec
from .errors import NotACycle, NotClosedSurface, ValidationError
from .numerics import DEFAULT_TOL, Tolerance
from .sheaf import (CosheafMapData, assemble_chain_complex, constant_cosheaf, homology)
from .statics import (FreedomMode, force_cosheaf, force_embedding, force_sequence, freedom_modes,
                      position_dual_cosheaf, position_sheaf, self_stresses, stress_vector)

CONVENTIONS = ("cremona", "maxwell")
NONTRIVIAL = 1e-8


def quarter_turn(obj):
    """Counterclockwise quarter turn of vectors, vector dicts or dual realizations."""
    if isinstance(obj, DualRealization):
        other = "maxwell" if obj.convention == "cremona" else "cremona"
        coords = {k: quarter_turn_vec(v) for k, v in obj.coordinates.items()}
        return DualRealization(obj.complex, coords, other, dict(obj.stress))
    if isinstance(obj, dict):
        return {k: quarter_turn_vec(v) for k, v in obj.items()}
    arr = np.asarray(obj, dtype=float)
    if arr.ndim == 1 and arr.shape[0] % 2 == 0 and arr.shape[0] != 2:
        return quarter_turn_vec(arr.reshape(-1, 2)).reshape(-1)
    return quarter_turn_vec(arr)


def force_position_isomorphism(diagram: Diagram) -> CosheafMapData:
    """Quarter turn on vertex stalks, identity on edges: force cosheaf to position dual."""
    F = force_cosheaf(diagram)
    J = position_dual_cosheaf(diagram)
    mu = np.array([[0.0, -1.0], [1.0, 0.0]])
    comps = {v: mu for v in diagram.complex.vertices}
    comps.update({e: np.eye(1) for e in diagram.complex.edges})
    return CosheafMapData(F, J, comps)


@dataclass
class DualRealization:
    """Positions of dual vertices (one per primal face) over the dual complex."""
    complex: object  # the dual CellComplex
    coordinates: dict  # dual vertex id -> R^2
    convention: str
    stress: dict  # primal edge id -> w_e

    def __getitem__(self, face):
        key = face if face in self.coordinates else dual_id(face)
        return self.coordinates[key]

    def edge_vector(self, dual_edge: str) -> np.ndarray:
        head, tail = self.complex.head_tail(dual_edge)
        return self.coordinates[head] - self.coordinates[tail]

    def edge_lengths(self) -> dict:
        return {e: float(np.linalg.norm(self.edge_vector(e))) for e in self.complex.edges}

    def max_edge_length(self) -> float:
        lengths = self.edge_lengths()
        return max(lengths.values()) if lengths else 0.0

    def is_nontrivial(self, primal_scale: float = 1.0) -> bool:
        return self.max_edge_length() > NONTRIVIAL * primal_scale

    def coordinate_array(self) -> np.ndarray:
        return np.array([self.coordinates[v] for v in self.complex.vertices])


def _edge_step(diagram, e, convention):
    d, _ = diagram.edge_vector(e)
    if convention == "cremona":
        return d
    if convention == "maxwell":
        return quarter_turn_vec(d)
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def _require_closed(diagram):
    if not diagram.complex.closed:
        raise NotClosedSurface("reciprocal diagrams need a closed oriented surface")


def _require_two_sided(diagram):
    """Open complexes are accepted when every edge still separates two faces."""
    cx = diagram.complex
    if cx.closed:
        return
    for e in cx.edges:
        cof = cx.coboundary(e)
        if len(cof) != 2 or cof[0][1] * cof[1][1] != -1:
            raise NotClosedSurface(f"edge {e} does not separate two oppositely oriented faces")


def _dual_complex(cx):
    if cx.closed:
        return poincare_dual(cx)
    inc = [(dual_id(hi), dual_id(lo), s) for (lo, hi), s in cx.incidence.items()]
    return CellComplex([dual_id(f) for f in cx.faces], [dual_id(e) for e in cx.edges],
                       [dual_id(v) for v in cx.vertices], inc, closed=False)


def reciprocal_diagram(diagram: Diagram, stress, convention: str = "cremona",
                       gate: float = 1e-9) -> DualRealization:
    """Integrate the dual positions from a self-stress over a spanning tree of faces.

    Open complexes work when every edge, loads and reactions included, lies
    between two faces; the dual then has no face for the missing outer vertex.

    Across edge e with faces f, g the rule is q_f - q_g = [e:f] w_e u_e, where u_e
    is the unit edge vector (cremona) or its quarter turn (maxwell). The face with
    the lowest id is pinned at the origin.
    """
    _require_two_sided(diagram)
    cx = diagram.complex
    w = stress_vector(diagram, stress)
    wd = dict(zip(cx.edges, w))
    steps = {e: _edge_step(diagram, e, convention) for e in cx.edges}
    q = {}
    if cx.faces:
        base = min(cx.faces)
        q[base] = np.zeros(2)
        queue = deque([base])
        while queue:
            f = queue.popleft()
            for e, s in cx.boundary(f):
                for g, _ in cx.coboundary(e):
                    if g not in q:
                        # q_g = q_f - [e:f] w_e u_e
                        q[g] = q[f] - s * wd[e] * steps[e]
                        queue.append(g)
        missing = [f for f in cx.faces if f not in q]
        if missing:
            raise ValidationError(f"faces {missing} are unreachable from {base}")
    scale = max(1.0, float(np.abs(w).max()) if w.size else 1.0)
    worst = 0.0
    for e in cx.edges:
        cof = cx.coboundary(e)
        if len(cof) != 2:
            continue
        (f, s), (g, _) = cof
        worst = max(worst, float(np.linalg.norm(q[f] - q[g] - s * wd[e] * steps[e])))
    if worst > gate * scale:
        raise NotACycle(f"dual positions fail to close: residual {worst:.3e}")
    dual = _dual_complex(cx)
    coords = {dual_id(f): q[f] for f in cx.faces}
    return DualRealization(dual, coords, convention, wd)


def oriented_length_residual(diagram: Diagram, dual: DualRealization) -> float:
    """Largest deviation from [e:f] <q_f - q_g, u_e> = w_e over interior edges."""
    cx = diagram.complex
    worst = 0.0
    for e in cx.edges:
        cof = cx.coboundary(e)
        if len(cof) != 2:
            continue
        (f, s), (g, _) = cof
        u = _edge_step(diagram, e, dual.convention)
        diff = dual[f] - dual[g]
        worst = max(worst, abs(s * diff @ u - dual.stress[e]),
                    abs(diff @ quarter_turn_vec(u)))
    return worst


def dual_chain(diagram: Diagram, dual: DualRealization, seq=None) -> np.ndarray:
    """The dual positions as a 2-chain of the quotient cosheaf G (cremona only)."""
    if dual.convention != "cremona":
        raise ValueError("the quotient-cosheaf chain uses the cremona convention")
    seq = seq or force_sequence(diagram)
    data = seq.data("quotient")
    return data.chain_from_cells(2, {f: dual[f] for f in diagram.complex.faces})


def stress_from_dual(diagram: Diagram, dual: DualRealization, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Connecting homomorphism H_2(G) -> H_1(F) applied to the dual positions."""
    from .sheaf import connecting_homomorphism
    seq = force_sequence(diagram, tol)
    z = dual_chain(diagram, dual, seq)
    return connecting_homomorphism(seq.inclusion, seq.projection, 2, z, tol)


def _stress_to_constant_map(diagram, tol):
    """Matrix of H_1(F) -> H_1(R^2) in harmonic bases, plus the stress basis."""
    phi = force_embedding(diagram)
    dF = assemble_chain_complex(phi.source, tol)
    dR = assemble_chain_complex(phi.target, tol)
    HF = homology(dF, 1, tol)
    HR = homology(dR, 1, tol)
    M = HR.basis.T @ phi.chain_map(1, dF, dR) @ HF.basis if HR.dimension and HF.dimension \
        else np.zeros((HR.dimension, HF.dimension))
    return M, HF


def reciprocal_stresses(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (edge order) of self-stresses that admit a closed reciprocal."""
    M, HF = _stress_to_constant_map(diagram, tol)
    if HF.dimension == 0:
        return HF.basis
    if M.shape[0] == 0:
        return HF.basis
    A = numerics.kernel_basis(M, tol)
    return HF.basis @ A if A.size else np.zeros((HF.basis.shape[0], 0))


def genus_existence_check(diagram: Diagram, convention: str = "cremona",
                          tol: Tolerance = DEFAULT_TOL) -> dict:
    """Compare dim H_1(F) with 4g and build a witness reciprocal when guaranteed."""
    _require_closed(diagram)
    g = genus(diagram.complex)
    S = len(self_stresses(diagram, tol))
    guaranteed = S > 4 * g
    out = {"genus": g, "dim_self_stress": S, "bound_4g": 4 * g, "reciprocal_guaranteed": guaranteed,
           "dim_reciprocal_stresses": 0, "witness": None}
    basis = reciprocal_stresses(diagram, tol)
    out["dim_reciprocal_stresses"] = basis.shape[1]
    for j in range(basis.shape[1]):
        dual = reciprocal_diagram(diagram, basis[:, j], convention)
        if dual.is_nontrivial(diagram.scale()):
            out["witness"] = dual
            break
    return out


class _DualDiagram(Diagram):
    """Realized dual complex whose edge directions are prescribed.

    Zero-length dual edges inherit the primal direction so the position
    and force structures stay defined on degenerate reciprocals.
    """

    def __init__(self, complex, positions, edge_dirs):
        super().__init__(complex, positions)
        self._edge_dirs = edge_dirs

    def edge_vector(self, e):
        head, tail = self.complex.head_tail(e)
        vec = self.positions[head] - self.positions[tail]
        return self._edge_dirs[e], float(np.linalg.norm(vec))


def dual_diagram(diagram: Diagram, dual: DualRealization) -> Diagram:
    cx = diagram.complex
    dirs = {}
    for e in cx.edges:
        u = _edge_step(diagram, e, dual.convention)
        vec = dual.edge_vector(dual_id(e))
        n = np.linalg.norm(vec)
        dirs[dual_id(e)] = vec / n if n > NONTRIVIAL * diagram.scale() else u
    return _DualDiagram(dual.complex, dual.coordinates, dirs)


@dataclass
class EdgeRotationCochain:
    """Rotation values on dual edges in the frame of the dual position sheaf."""
    values: dict
    vector: np.ndarray
    harmonic: np.ndarray
    class_coordinates: np.ndarray
    method: str

    def is_impossible(self, tol: float = 1e-8) -> bool:
        scale = max(1.0, float(np.linalg.norm(self.vector)))
        return float(np.linalg.norm(self.harmonic)) > tol * scale


def edge_rotations(diagram: Diagram, mode) -> np.ndarray:
    """Infinitesimal rotation rate of every closed edge under vertex velocities."""
    x = mode.vector if isinstance(mode, FreedomMode) else np.asarray(mode, dtype=float).reshape(-1)
    cx = diagram.complex
    idx = {v: i for i, v in enumerate(cx.vertices)}
    out = np.zeros(len(cx.edges))
    for k, e in enumerate(cx.edges):
        if cx.is_open_edge(e):
            continue
        head, tail = cx.head_tail(e)
        d, L = diagram.edge_vector(e)
        rel = x[2 * idx[head]:2 * idx[head] + 2] - x[2 * idx[tail]:2 * idx[tail] + 2]
        out[k] = quarter_turn_vec(d) @ rel / L
    return out


def _inverse_connecting(diagram, x, tol):
    """Solve sum_e [v:e](Q_e z_e + d_e w_e) = x_v; return z in G edge coordinates."""
    seq = force_sequence(diagram, tol)
    cx = diagram.complex
    dF = seq.data("sub")
    dG = seq.data("quotient")
    idx = {v: i for i, v in enumerate(cx.vertices)}
    nV, nE = len(cx.vertices), len(cx.edges)
    A = np.zeros((2 * nV, nE))
    for k, e in enumerate(cx.edges):
        Qe = seq.projection.components[e].T  # 2 x 1 complement basis
        for v, s in cx.boundary(e):
            A[2 * idx[v]:2 * idx[v] + 2, k] += s * Qe[:, 0]
    D = dF.outgoing(1)
    x = np.asarray(x, dtype=float).reshape(-1).copy()
    x[0::2] -= x[0::2].mean()
    x[1::2] -= x[1::2].mean()
    sol, res = numerics.least_squares_solve(np.hstack([A, D]), x, tol)
    if res > 1e-8 * max(1.0, np.linalg.norm(x)):
        raise NotACycle(f"mode has no preimage under the connecting map: residual {res:.3e}")
    return sol[:nE], seq, dG


def transfer_mechanism(diagram: Diagram, dual: DualRealization, mode, method: str = "connecting",
                       tol: Tolerance = DEFAULT_TOL) -> EdgeRotationCochain:
    """Carry a mechanism or global rotation of the form to dual edge rotations.

    ``connecting`` inverts the connecting map H_1(G) -> H_0(F) on the mode with
    its net translation removed. ``mirror`` transfers each edge's rotation rate
    onto the dual edge scaled by the force and with tension edges mirrored.
    Either way the returned harmonic part lives in H^1 of the dual position sheaf.
    """
    cx = diagram.complex
    dd = dual_diagram(diagram, dual)
    J = position_sheaf(dd)
    dJ = assemble_chain_complex(J, tol)
    H1 = homology(dJ, 1, tol)
    dual_normals = {e: quarter_turn_vec(dd.edge_vector(dual_id(e))[0]) for e in cx.edges}
    if method == "connecting":
        z, seq, _ = _inverse_connecting(diagram, mode.vector if isinstance(mode, FreedomMode) else mode, tol)
        c = np.array([z[k] * float(seq.projection.components[e][0] @ dual_normals[e])
                      for k, e in enumerate(cx.edges)])
    elif method == "mirror":
        omega = edge_rotations(diagram, mode)
        w = np.array([dual.stress[e] for e in cx.edges])
        # the dual edge of a tension member is drawn reversed, so its rotation is mirrored
        c = -w * omega
        if dual.convention == "maxwell":
            c = -c
    else:
        raise ValueError(f"unknown transfer method {method!r}")
    vec = np.zeros(dJ.dims[1])
    for k, e in enumerate(cx.edges):
        vec[dJ.block(dual_id(e))] = c[k]
    coords = H1.coordinates(vec) if H1.dimension else np.zeros(0)
    harm = H1.basis @ coords if H1.dimension else np.zeros_like(vec)
    values = {dual_id(e): float(c[k]) for k, e in enumerate(cx.edges)}
    return EdgeRotationCochain(values, vec, harm, coords, method)


def reciprocity_report(diagram: Diagram, dual: DualRealization, tol: Tolerance = DEFAULT_TOL) -> dict:
    """Dimensions of the five spaces that are isomorphic for a spherical pair."""
    _require_closed(diagram)
    modes = freedom_modes(diagram, tol)
    trans = sum(m.classification == "translation" for m in modes)
    dd = dual_diagram(diagram, dual)
    dims = {
        "mechanisms_and_rotations": len(modes) - trans,
        "parallel_deformations_mod_translation": homology(position_sheaf(diagram), 0, tol).dimension - 2,
        "dual_impossible_rotations": homology(position_sheaf(dd), 1, tol).dimension,
        "dual_self_shear": homology(position_dual_cosheaf(dd), 1, tol).dimension,
        "dual_self_stress": homology(force_cosheaf(dd), 1, tol).dimension,
    }
    vals = set(dims.values())
    return {"dimensions": dims, "all_equal": len(vals) == 1, "genus": genus(diagram.complex)}


def constant_homology_dims(diagram: Diagram, dim: int = 2, tol: Tolerance = DEFAULT_TOL) -> tuple:
    c = constant_cosheaf(diagram.complex, dim)
    data = assemble_chain_complex(c, tol)
    return tuple(homology(data, k, tol).dimension for k in range(3))
