"""Sheaf Laplacians, truss stiffness, and heat-flow diffusion to harmonic cochains."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .complex import Diagram
from .errors import NonPositiveWeight, UnstableStepSize
from .numerics import DEFAULT_TOL, Tolerance
from .sheaf import Cosheaf, assemble_chain_complex, homology
from .statics import linkage_sheaf, position_sheaf


HORIZON = 30.0  # default spectral run length in units of the slowest decay time; e^-30 ~ 1e-13


def _weights(sheaf: Cosheaf, weights) -> np.ndarray:
    cx = sheaf.base
    out = []
    for e in cx.edges:
        k = 1.0 if weights is None else float(weights.get(e, 1.0))
        if not k > 0:
            raise NonPositiveWeight(f"edge {e} has weight {k}; weights must be positive")
        out.extend([k] * sheaf.stalks[e])
    return np.array(out)


def coboundary(sheaf: Cosheaf, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """delta: C^0 -> C^1 (a cosheaf is read through its linear dual)."""
    data = assemble_chain_complex(sheaf, tol)
    return data.outgoing(0) if sheaf.is_sheaf else data.outgoing(1).T


def sheaf_laplacian(sheaf: Cosheaf, degree: int = 0, weights: dict | None = None,
                    tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """delta^T W delta on 0-cochains.

    Degree 1 returns the unweighted delta delta^T + delta^T delta on 1-cochains.
    """
    W = _weights(sheaf, weights)
    delta = coboundary(sheaf, tol)
    if degree == 0:
        return delta.T @ (W[:, None] * delta)
    if degree == 1:
        data = assemble_chain_complex(sheaf, tol)
        up = data.outgoing(1) if sheaf.is_sheaf else data.outgoing(2).T
        return delta @ delta.T + up.T @ up
    raise ValueError("degree must be 0 or 1")


def element_stiffness(theta: float, kappa: float) -> np.ndarray:
    """4 x 4 bar stiffness for an edge at angle theta, dofs (u_x, u_y, v_x, v_y)."""
    c, s = np.cos(theta), np.sin(theta)
    k = np.array([[c * c, c * s], [c * s, s * s]])
    return kappa * np.block([[k, -k], [-k, k]])


def assemble_stiffness(diagram: Diagram, springs: dict | None = None) -> np.ndarray:
    """Direct finite-element assembly of the bar elements, independent of the sheaf code."""
    cx = diagram.complex
    idx = {v: i for i, v in enumerate(cx.vertices)}
    K = np.zeros((2 * len(idx), 2 * len(idx)))
    springs = springs if springs is not None else diagram.springs
    for e in cx.edges:
        kappa = float(springs.get(e, 1.0)) if springs else 1.0
        if not kappa > 0:
            raise NonPositiveWeight(f"edge {e} has spring constant {kappa}")
        d, _ = diagram.edge_vector(e)
        theta = np.arctan2(d[1], d[0])
        verts = cx.edge_vertices(e)
        if cx.is_open_edge(e):
            # a grounded spring: only the vertex block survives
            i = idx[verts[0]]
            K[2 * i:2 * i + 2, 2 * i:2 * i + 2] += element_stiffness(theta, kappa)[:2, :2]
            continue
        head, tail = cx.head_tail(e)
        dofs = [2 * idx[tail], 2 * idx[tail] + 1, 2 * idx[head], 2 * idx[head] + 1]
        K[np.ix_(dofs, dofs)] += element_stiffness(theta, kappa)
    return K


def stiffness_matrix(diagram: Diagram, springs: dict | None = None, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    springs = springs if springs is not None else (diagram.springs or None)
    return sheaf_laplacian(linkage_sheaf(diagram), 0, springs, tol)


def dirichlet_energy(L: np.ndarray, x) -> float:
    x = np.asarray(x, dtype=float)
    return float(x @ L @ x)


def harmonic_projector(L: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    K = numerics.kernel_basis(L, tol)
    return K @ K.T if K.size else np.zeros_like(L)


@dataclass
class DiffusionTrace:
    times: list
    states: list
    energies: list
    final: np.ndarray
    scheme: str = "spectral"
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "energy", "state_norm"])
        for t, en, x in zip(self.times, self.energies, self.states):
            w.writerow([f"{t:.17g}", f"{en:.17g}", f"{np.linalg.norm(x):.17g}"])
        return buf.getvalue()

    def is_monotone(self, slack: float = 1e-12) -> bool:
        E = np.asarray(self.energies)
        return bool(np.all(np.diff(E) <= slack * max(1.0, E[0] if E.size else 1.0)))


def diffuse(L: np.ndarray, x0, alpha: float = 1.0, scheme: str = "spectral", steps: int = 100,
            dt: float | None = None, t_final: float | None = None, tol: Tolerance = DEFAULT_TOL) -> DiffusionTrace:
    """Heat flow dx/dt = -alpha L x.

    ``spectral`` evaluates the exact solution at ``steps + 1`` times up to
    ``t_final`` and reports the projection onto ker L as the limit.
    ``euler`` takes explicit steps of size ``dt`` (must be below 2/(alpha lambda_max)).
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    L = np.asarray(L, dtype=float)
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    lam, V = np.linalg.eigh(L)
    lam = np.where(lam < lam.max(initial=0.0) * tol.relative, 0.0, lam)
    lmax = float(lam.max(initial=0.0))
    positive = lam[lam > 0]
    lmin = float(positive.min()) if positive.size else 1.0
    P = harmonic_projector(L, tol)
    final = P @ x0
    if scheme == "spectral":
        T = t_final if t_final is not None else HORIZON / (alpha * lmin)
        times = list(np.linspace(0.0, T, steps + 1))
        c = V.T @ x0
        states = [V @ (np.exp(-alpha * lam * t) * c) for t in times]
    elif scheme == "euler":
        limit = 2.0 / (alpha * lmax) if lmax > 0 else np.inf
        if dt is None:
            dt = 0.9 * limit if np.isfinite(limit) else 1.0
        if dt >= limit:
            raise UnstableStepSize(f"dt = {dt:.3e} is not below 2/(alpha lambda_max) = {limit:.3e}")
        x = x0.copy()
        states, times = [x.copy()], [0.0]
        for k in range(steps):
            x = x - dt * alpha * (L @ x)
            states.append(x.copy())
            times.append((k + 1) * dt)
        final_state = states[-1]
        return DiffusionTrace(times, states, [dirichlet_energy(L, s) for s in states], final_state, "euler",
                              {"dt": dt, "alpha": alpha, "projection": final})
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return DiffusionTrace(times, states, [dirichlet_energy(L, s) for s in states], final, "spectral",
                          {"alpha": alpha, "t_final": times[-1]})


def nearest_parallel_realization(diagram: Diagram, perturbed: dict, tol: Tolerance = DEFAULT_TOL) -> dict:
    """p plus the projection of (perturbed - p) onto H^0 of the position sheaf."""
    J = position_sheaf(diagram)
    H0 = homology(J, 0, tol)
    verts = diagram.complex.vertices
    p = np.concatenate([diagram.point(v) for v in verts])
    x = np.concatenate([np.asarray(perturbed[v], dtype=float).reshape(2) for v in verts])
    xi = H0.basis @ (H0.basis.T @ (x - p)) if H0.dimension else np.zeros_like(p)
    out = p + xi
    return {v: out[2 * i:2 * i + 2] for i, v in enumerate(verts)}


def max_angle_change(diagram: Diagram, realization: dict) -> float:
    """Largest angle between an original edge and its redrawn counterpart."""
    other = diagram.with_positions(realization)
    worst = 0.0
    for e in diagram.complex.edges:
        if diagram.complex.is_open_edge(e):
            continue
        a, _ = diagram.edge_vector(e)
        head, tail = diagram.complex.head_tail(e)
        b = other.positions[head] - other.positions[tail]
        n = np.linalg.norm(b)
        if n == 0:
            continue
        # lines, not rays: a reversed edge still counts as parallel
        worst = max(worst, float(np.arcsin(min(1.0, abs(a[0] * b[1] - a[1] * b[0]) / n))))
    return worst


def random_perturbation(diagram: Diagram, seed: int = 0, amount: float = 0.05) -> dict:
    rng = np.random.default_rng(seed)
    s = amount * diagram.scale()
    return {v: diagram.point(v) + rng.normal(scale=s, size=2) for v in diagram.complex.vertices}
