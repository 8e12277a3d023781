"""Polyhedral lifts: zero-locus and affine cosheaves, lifts from stresses and back."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .complex import Diagram, genus, quarter_turn_vec
from .errors import CollinearProbePoint, DegenerateCell, GluingViolated, NotACycle, NotClosedSurface, ValidationError
from .numerics import DEFAULT_TOL, Tolerance
from .sheaf import (Cosheaf, CosheafMapData, ShortExactSequence, assemble_chain_complex,
                    connecting_homomorphism, constant_cosheaf, homology, short_exact_sequence)
from .statics import SelfStress, force_cosheaf, self_stresses, stress_vector


@dataclass(frozen=True)
class AffineFunction:
    """h(x, y) = a x + b y + c, stored as the covector (a, b, c)."""
    coefficients: tuple

    @classmethod
    def from_array(cls, arr):
        return cls(tuple(float(c) for c in np.asarray(arr, dtype=float).reshape(3)))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coefficients)

    @property
    def gradient(self) -> np.ndarray:
        return self.array[:2]

    def __call__(self, x, y=None) -> float:
        if y is None:
            x, y = np.asarray(x, dtype=float)[:2]
        a, b, c = self.coefficients
        return a * x + b * y + c


@dataclass
class LiftFunctionSet:
    faces: dict  # face id -> AffineFunction
    heights: dict = field(default_factory=dict)  # vertex id -> z

    def matrix(self, face_order) -> np.ndarray:
        return np.array([self.faces[f].array for f in face_order]).reshape(-1, 3)

    def is_flat(self, tol: float = 1e-12) -> bool:
        return all(np.abs(h.array).max() <= tol for h in self.faces.values())


def _cell_points(diagram, c):
    """Homogeneous points spanning a cell; open edges add their direction at infinity."""
    cx = diagram.complex
    dim = cx.dim(c)
    if dim == 0:
        verts, edges = [c], []
    elif dim == 1:
        verts, edges = cx.edge_vertices(c), [c]
    else:
        verts = cx.face_vertices(c)
        edges = [e for e, _ in cx.boundary(c)]
    pts = [diagram.homogeneous(v) for v in verts]
    for e in edges:
        if cx.is_open_edge(e):
            d = diagram.directions[e]
            pts.append(np.array([d[0], d[1], 0.0]))
    return np.array(pts).reshape(-1, 3)


def zero_locus_bases(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> dict:
    """Orthonormal basis of the affine functions vanishing on each cell."""
    cx = diagram.complex
    out = {}
    for c in cx.cells():
        P = _cell_points(diagram, c)
        r = numerics.rank(P, tol)
        if r != min(cx.dim(c) + 1, 3):
            raise DegenerateCell(f"cell {c} spans a rank {r} set of points (expected {min(cx.dim(c) + 1, 3)})")
        out[c] = numerics.kernel_basis(P, tol) if r < 3 else np.zeros((3, 0))
    return out


def zero_locus_cosheaf(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> Cosheaf:
    B = zero_locus_bases(diagram, tol)
    cx = diagram.complex
    stalks = {c: B[c].shape[1] for c in cx.cells()}
    maps = {(c, d): B[c].T @ B[d] for (c, d) in cx.incidence if stalks[c] and stalks[d]}
    return Cosheaf(cx, stalks, maps, name="zero locus")


def zero_locus_embedding(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> CosheafMapData:
    B = zero_locus_bases(diagram, tol)
    Z = zero_locus_cosheaf(diagram, tol)
    return CosheafMapData(Z, constant_cosheaf(diagram.complex, 3), B)


def affine_sequence(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> ShortExactSequence:
    """0 -> Z -> A R^2 -> A -> 0, with A R^2 the constant cosheaf of affine functions."""
    return short_exact_sequence(zero_locus_embedding(diagram, tol), tol)


def affine_cosheaf(diagram: Diagram, tol: Tolerance = DEFAULT_TOL):
    seq = affine_sequence(diagram, tol)
    return seq.quotient, seq


def edge_functional(diagram: Diagram, e: str) -> np.ndarray:
    """d x p for the unit edge direction d and any point p of the edge line."""
    cx = diagram.complex
    d, _ = diagram.edge_vector(e)
    if cx.is_open_edge(e):
        x = cx.edge_vertices(e)[0]
    else:
        _, x = cx.head_tail(e)
    return np.cross(np.array([d[0], d[1], 0.0]), diagram.homogeneous(x))


def tau_isomorphism(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> CosheafMapData:
    """Force cosheaf to zero-locus cosheaf: b at v goes to (b, 0) x p_v."""
    B = zero_locus_bases(diagram, tol)
    cx = diagram.complex
    comps = {}
    for v in cx.vertices:
        p = diagram.homogeneous(v)
        cols = [np.cross(np.array([1.0, 0.0, 0.0]), p), np.cross(np.array([0.0, 1.0, 0.0]), p)]
        comps[v] = B[v].T @ np.array(cols).T
    for e in cx.edges:
        comps[e] = B[e].T @ edge_functional(diagram, e).reshape(3, 1)
    return CosheafMapData(force_cosheaf(diagram), zero_locus_cosheaf(diagram, tol), comps)


def _scale(diagram):
    return max(1.0, float(np.abs(diagram.coordinate_array()).max()) if diagram.complex.vertices else 1.0)


def vertex_heights(diagram: Diagram, faces: dict, gate: float = 1e-9) -> dict:
    cx = diagram.complex
    heights = {}
    for v in cx.vertices:
        vals = []
        for e, _ in cx.coboundary(v):
            for f, _ in cx.coboundary(e):
                if f in faces:
                    vals.append(faces[f](diagram.point(v)))
        if vals:
            if max(vals) - min(vals) > gate * _scale(diagram) * max(1.0, max(abs(x) for x in vals)):
                raise GluingViolated(f"faces around {v} disagree on its height")
            heights[v] = float(np.mean(vals))
    return heights


def polyhedral_lift(diagram: Diagram, stress, gate: float = 1e-9) -> LiftFunctionSet:
    """Integrate face functions across edges: h_g = h_f - [e:f] w_e (d x p).

    The face with the lowest id is the zero function.
    """
    cx = diagram.complex
    zero_locus_bases(diagram)  # degenerate cells are rejected up front
    w = dict(zip(cx.edges, stress_vector(diagram, stress)))
    t = {e: edge_functional(diagram, e) for e in cx.edges}
    h = {}
    if cx.faces:
        base = min(cx.faces)
        h[base] = np.zeros(3)
        queue = deque([base])
        while queue:
            f = queue.popleft()
            for e, s in cx.boundary(f):
                for g, _ in cx.coboundary(e):
                    if g not in h:
                        h[g] = h[f] - s * w[e] * t[e]
                        queue.append(g)
        # faces in other components start from zero as well
        for f in cx.faces:
            if f not in h:
                raise ValidationError(f"face {f} is unreachable from {base}")
    wscale = max(1.0, max((abs(x) for x in w.values()), default=1.0)) * _scale(diagram)
    worst = 0.0
    for e in cx.edges:
        cof = cx.coboundary(e)
        if len(cof) != 2:
            continue
        (f, s), (g, _) = cof
        worst = max(worst, float(np.abs(h[f] - h[g] - s * w[e] * t[e]).max()))
    if worst > gate * wscale:
        raise NotACycle(f"lift fails to close around a vertex: residual {worst:.3e}")
    funcs = {f: AffineFunction.from_array(h[f]) for f in cx.faces}
    return LiftFunctionSet(funcs, vertex_heights(diagram, funcs))


def gluing_residual(diagram: Diagram, lift: LiftFunctionSet) -> float:
    """Largest height mismatch across an edge, at its endpoints (and along open edges)."""
    cx = diagram.complex
    worst = 0.0
    for e in cx.edges:
        cof = cx.coboundary(e)
        if len(cof) != 2:
            continue
        diff = lift.faces[cof[0][0]].array - lift.faces[cof[1][0]].array
        pts = [diagram.homogeneous(v) for v in cx.edge_vertices(e)]
        if cx.is_open_edge(e):
            d = diagram.directions[e]
            pts.append(np.array([d[0], d[1], 0.0]))
        worst = max(worst, max(abs(diff @ p) for p in pts))
    return worst


def _probe_candidates(diagram, e):
    cx = diagram.complex
    near = {f for f, _ in cx.coboundary(e)}
    out = []
    for f in cx.faces:
        if f in near:
            continue
        verts = cx.face_vertices(f)
        if verts:
            c = np.mean([diagram.point(v) for v in verts], axis=0)
            out.append(np.array([c[0], c[1], 1.0]))
    return out


def choose_probe(diagram: Diagram, e: str, min_det: float = 1e-10, retries: int = 3) -> np.ndarray:
    """Face centroid off the edge line maximizing |det[d, p_x, p*]|.

    Falls back to points pushed off the line along the edge normal.
    """
    t = edge_functional(diagram, e)
    cands = _probe_candidates(diagram, e)
    if cands:
        best = max(cands, key=lambda p: abs(t @ p))
        if abs(t @ best) >= min_det:
            return best
    _, x = (None, diagram.complex.edge_vertices(e)[0]) if diagram.complex.is_open_edge(e) \
        else diagram.complex.head_tail(e)
    n = quarter_turn_vec(diagram.edge_vector(e)[0])
    for k in range(1, retries + 1):
        p = diagram.point(x) + k * _scale(diagram) * n
        p3 = np.array([p[0], p[1], 1.0])
        if abs(t @ p3) >= min_det:
            return p3
    raise CollinearProbePoint(f"no probe point off the line of edge {e}")


def edge_force(diagram: Diagram, lift: LiftFunctionSet, e: str, probe=None) -> float:
    """w_e = [e:f] (h_f - h_g)(p*) / det[d, p_x, p*] for the two faces of e."""
    cof = diagram.complex.coboundary(e)
    if len(cof) != 2:
        raise ValidationError(f"edge {e} does not separate two faces")
    (f, s), (g, _) = cof
    p = choose_probe(diagram, e) if probe is None else np.asarray(
        [probe[0], probe[1], 1.0] if len(probe) == 2 else probe, dtype=float)
    det = edge_functional(diagram, e) @ p
    if abs(det) < 1e-10:
        raise CollinearProbePoint(f"probe point lies on the line of edge {e}")
    diff = lift.faces[f].array - lift.faces[g].array
    return float(s * diff @ p / det)


def verify_lift(diagram: Diagram, lift: LiftFunctionSet, gate: float = 1e-9) -> SelfStress:
    """Recover the stress whose lift this is, from gradient jumps across edges."""
    cx = diagram.complex
    coeff = max([1.0] + [float(np.abs(h.array).max()) for h in lift.faces.values()])
    r = gluing_residual(diagram, lift)
    if r > gate * coeff * _scale(diagram):
        raise GluingViolated(f"adjacent faces disagree on a shared edge: residual {r:.3e}")
    vals = {}
    for e in cx.edges:
        vals[e] = edge_force(diagram, lift, e) if len(cx.coboundary(e)) == 2 else 0.0
    vec = np.array([vals[e] for e in cx.edges])
    return SelfStress(vals, vec)


def lift_chain(diagram: Diagram, lift: LiftFunctionSet, seq: ShortExactSequence | None = None) -> np.ndarray:
    """The lift as a 2-chain of the affine cosheaf (face stalks are all of A R^2)."""
    seq = seq or affine_sequence(diagram)
    data = seq.data("quotient")
    proj = seq.projection.components
    return data.chain_from_cells(2, {f: proj[f] @ lift.faces[f].array for f in diagram.complex.faces})


def stress_from_lift(diagram: Diagram, lift: LiftFunctionSet, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Connecting map H_2(A) -> H_1(Z), pulled back to H_1(F) through tau."""
    seq = affine_sequence(diagram, tol)
    u = connecting_homomorphism(seq.inclusion, seq.projection, 2, lift_chain(diagram, lift, seq), tol)
    tau = tau_isomorphism(diagram, tol)
    dF = assemble_chain_complex(tau.source, tol)
    dZ = assemble_chain_complex(tau.target, tol)
    T = tau.chain_map(1, dF, dZ)
    return np.linalg.solve(T, u) if T.shape[0] == T.shape[1] else numerics.least_squares_solve(T, u, tol)[0]


def _global_affine_rank(seq, tol):
    data = seq.data("quotient")
    H = homology(data, 2, tol)
    if H.dimension == 0:
        return H, 0
    faces = seq.quotient.base.faces
    cols = []
    for a in np.eye(3):
        z = data.chain_from_cells(2, {f: seq.projection.components[f] @ a for f in faces})
        cols.append(H.coordinates(z))
    return H, numerics.rank(np.array(cols).T, tol)


def lift_space(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> dict:
    """dim H_2(A) and the dimension left after removing global affine functions."""
    seq = affine_sequence(diagram, tol)
    H, affine = _global_affine_rank(seq, tol)
    return {"dim_H2A": H.dimension, "global_affine_rank": affine, "mod_affine": H.dimension - affine}


def lift_stresses(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of self-stresses whose lifts close up (edge order)."""
    tau = tau_isomorphism(diagram, tol)
    emb = zero_locus_embedding(diagram, tol)
    dF = assemble_chain_complex(tau.source, tol)
    dZ = assemble_chain_complex(tau.target, tol)
    dA = assemble_chain_complex(emb.target, tol)
    HF = homology(dF, 1, tol)
    HA = homology(dA, 1, tol)
    if HF.dimension == 0 or HA.dimension == 0:
        return HF.basis
    M = HA.basis.T @ emb.chain_map(1, dZ, dA) @ tau.chain_map(1, dF, dZ) @ HF.basis
    K = numerics.kernel_basis(M, tol)
    return HF.basis @ K if K.size else np.zeros((HF.basis.shape[0], 0))


def lift_genus_check(diagram: Diagram, tol: Tolerance = DEFAULT_TOL) -> dict:
    """Compare dim H_1(F) with 6g and build a witness lift when guaranteed."""
    if not diagram.complex.closed:
        raise NotClosedSurface("the genus bound applies to closed surfaces")
    g = genus(diagram.complex)
    S = len(self_stresses(diagram, tol))
    space = lift_space(diagram, tol)
    out = {"genus": g, "dim_self_stress": S, "bound_6g": 6 * g, "lift_guaranteed": S > 6 * g,
           "lift_space_mod_affine": space["mod_affine"], "dim_H2A": space["dim_H2A"], "witness": None}
    basis = lift_stresses(diagram, tol)
    for j in range(basis.shape[1]):
        lift = polyhedral_lift(diagram, basis[:, j])
        if not lift.is_flat(1e-8):
            out["witness"] = lift
            break
    return out


def lift_to_obj(diagram: Diagram, lift: LiftFunctionSet) -> str:
    """Wavefront text: one ``v x y z`` line per vertex, faces fanned from the lowest-id vertex."""
    cx = diagram.complex
    index = {v: i + 1 for i, v in enumerate(cx.vertices)}
    lines = []
    for v in cx.vertices:
        x, y = diagram.point(v)
        lines.append(f"v {x:.17g} {y:.17g} {lift.heights.get(v, 0.0):.17g}")
    for f in cx.faces:
        if any(cx.is_open_edge(e) for e, _ in cx.boundary(f)):
            continue  # unbounded region
        cyc = cx.face_cycle(f)
        k = min(range(len(cyc)), key=lambda i: cx.vertices.index(cyc[i]))
        cyc = cyc[k:] + cyc[:k]
        for a, b in zip(cyc[1:-1], cyc[2:]):
            lines.append(f"f {index[cyc[0]]} {index[a]} {index[b]}")
    return "\n".join(lines) + "\n"
