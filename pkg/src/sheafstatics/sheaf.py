"""Cellular cosheaves and sheaves, their (co)chain complexes and homology.

One data type, :class:`Cosheaf`, carries both variances. For a cosheaf,
``maps[(c, d)]`` with ``c`` a face of ``d`` is the extension map from the
stalk over ``d`` to the stalk over ``c`` (shape ``dim c x dim d``). For a
sheaf (``is_sheaf=True``) the same key holds the restriction map from ``c``
to ``d`` (shape ``dim d x dim c``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import numerics
from .complex import CellComplex, dual_id, poincare_dual
from .errors import (BoundarySquareNonzero, CommutativityError, NotACycle, NotExact,
                     NotInjective, PreimageResidualTooLarge)
from .numerics import DEFAULT_TOL, Tolerance


@dataclass(frozen=True)
class Cosheaf:
    base: CellComplex
    stalks: Mapping[str, int]
    maps: Mapping[tuple, np.ndarray]
    is_sheaf: bool = False
    name: str = ""

    def __post_init__(self):
        stalks = {c: int(self.stalks.get(c, 0)) for c in self.base.cells()}
        maps = {}
        for (c, d), s in self.base.incidence.items():
            dc, dd = stalks.get(c, 0), stalks.get(d, 0)
            if dc == 0 or dd == 0:
                continue
            if (c, d) not in self.maps:
                raise ValueError(f"missing map for incident pair {(c, d)}")
            shape = (dd, dc) if self.is_sheaf else (dc, dd)
            M = np.asarray(self.maps[(c, d)], dtype=float).reshape(shape)
            maps[(c, d)] = M
        object.__setattr__(self, "stalks", stalks)
        object.__setattr__(self, "maps", maps)

    def map(self, c: str, d: str) -> np.ndarray:
        dc, dd = self.stalks[c], self.stalks[d]
        shape = (dd, dc) if self.is_sheaf else (dc, dd)
        return self.maps.get((c, d), np.zeros(shape))

    @property
    def kind(self) -> str:
        return "sheaf" if self.is_sheaf else "cosheaf"

    def total_dim(self, degree: int) -> int:
        return sum(self.stalks[c] for c in self.base.cells(degree))


@dataclass(frozen=True)
class ChainComplexData:
    """Chain (or cochain) spaces and differentials.

    ``differentials[i]`` is the map out of degree ``i``: the boundary
    C_i -> C_{i-1} for chains, the coboundary C^i -> C^{i+1} for cochains.
    """
    dims: dict
    offsets: dict
    differentials: dict
    is_cochain: bool = False

    def outgoing(self, degree: int) -> np.ndarray:
        if degree in self.differentials:
            return self.differentials[degree]
        return np.zeros((0, self.dims.get(degree, 0)))

    def incoming(self, degree: int) -> np.ndarray:
        src = degree - 1 if self.is_cochain else degree + 1
        if src in self.differentials:
            return self.differentials[src]
        return np.zeros((self.dims.get(degree, 0), 0))

    def block(self, cell: str) -> slice:
        a, b = self.offsets[cell]
        return slice(a, b)

    def chain_from_cells(self, degree: int, values: Mapping) -> np.ndarray:
        x = np.zeros(self.dims[degree])
        for c, val in values.items():
            x[self.block(c)] = val
        return x

    def cells_from_chain(self, degree: int, cells, x) -> dict:
        return {c: np.array(x[self.block(c)]) for c in cells}


@dataclass(frozen=True)
class HomologySpace:
    degree: int
    basis: np.ndarray

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    def coordinates(self, cycle) -> np.ndarray:
        """Class coordinates of a cycle; boundaries are orthogonal to the basis."""
        return self.basis.T @ np.asarray(cycle, dtype=float)

    def harmonic(self, cycle) -> np.ndarray:
        return self.basis @ self.coordinates(cycle)


def constant_cosheaf(base: CellComplex, dim: int) -> Cosheaf:
    if dim < 1:
        raise ValueError("stalk dimension must be at least 1")
    I = np.eye(dim)
    return Cosheaf(base, {c: dim for c in base.cells()},
                   {pair: I for pair in base.incidence}, name=f"constant R^{dim}")


def assemble_chain_complex(cosheaf: Cosheaf, tol: Tolerance = DEFAULT_TOL) -> ChainComplexData:
    cx = cosheaf.base
    offsets, dims = {}, {}
    for k in range(3):
        pos = 0
        for c in cx.cells(k):
            n = cosheaf.stalks[c]
            offsets[c] = (pos, pos + n)
            pos += n
        dims[k] = pos
    diffs = {}
    for k in (1, 2):
        # block (c, d) carries [c:d] times the map between the two stalks
        D = np.zeros((dims[k - 1], dims[k]) if not cosheaf.is_sheaf else (dims[k], dims[k - 1]))
        for d in cx.cells(k):
            for c, s in cx.boundary(d):
                if not (cosheaf.stalks[c] and cosheaf.stalks[d]):
                    continue
                rows, cols = slice(*offsets[c]), slice(*offsets[d])
                if cosheaf.is_sheaf:
                    D[cols, rows] = s * cosheaf.maps[(c, d)]
                else:
                    D[rows, cols] = s * cosheaf.maps[(c, d)]
        diffs[k - 1 if cosheaf.is_sheaf else k] = D
    data = ChainComplexData(dims, offsets, diffs, is_cochain=cosheaf.is_sheaf)
    _check_square_zero(data)
    return data


def _check_square_zero(data: ChainComplexData):
    if data.is_cochain:
        A, B = data.differentials[1], data.differentials[0]
    else:
        A, B = data.differentials[1], data.differentials[2]
    if A.size == 0 or B.size == 0:
        return
    prod = np.linalg.norm(A @ B)
    bound = 1e-12 * np.linalg.norm(A) * np.linalg.norm(B) + 1e-300
    if prod > bound:
        raise BoundarySquareNonzero(f"d o d has norm {prod:.3e} (bound {bound:.3e})")


def _chain_data(obj, tol) -> ChainComplexData:
    if isinstance(obj, ChainComplexData):
        return obj
    return assemble_chain_complex(obj, tol)


def homology(obj, degree: int, tol: Tolerance = DEFAULT_TOL) -> HomologySpace:
    """(Co)homology in ``degree`` with orthonormal harmonic representatives."""
    data = _chain_data(obj, tol)
    K = numerics.kernel_basis(data.outgoing(degree), tol)
    if data.dims.get(degree, 0) == 0:
        return HomologySpace(degree, np.zeros((0, 0)))
    B = numerics.quotient_basis(K, data.incoming(degree), tol)
    return HomologySpace(degree, B)


def betti(obj, tol: Tolerance = DEFAULT_TOL) -> tuple:
    data = _chain_data(obj, tol)
    return tuple(homology(data, k, tol).dimension for k in range(3))


def euler_characteristic(obj, tol: Tolerance = DEFAULT_TOL) -> int:
    data = _chain_data(obj, tol)
    return sum((-1) ** k * data.dims[k] for k in range(3))


def linear_dual(cosheaf: Cosheaf) -> Cosheaf:
    maps = {k: M.T for k, M in cosheaf.maps.items()}
    name = f"dual of {cosheaf.name}" if cosheaf.name else ""
    return Cosheaf(cosheaf.base, cosheaf.stalks, maps, is_sheaf=not cosheaf.is_sheaf, name=name)


def poincare_dual_cosheaf(cosheaf: Cosheaf) -> Cosheaf:
    """Same stalks and matrices over the dual cell structure; variance flips."""
    dual_cx = poincare_dual(cosheaf.base)
    stalks = {dual_id(c): n for c, n in cosheaf.stalks.items()}
    maps = {(dual_id(d), dual_id(c)): M for (c, d), M in cosheaf.maps.items()}
    name = f"Poincare dual of {cosheaf.name}" if cosheaf.name else ""
    return Cosheaf(dual_cx, stalks, maps, is_sheaf=not cosheaf.is_sheaf, name=name)


@dataclass(frozen=True)
class CosheafMapData:
    source: Cosheaf
    target: Cosheaf
    components: Mapping[str, np.ndarray]

    def __post_init__(self):
        comps = {}
        for c in self.source.base.cells():
            shape = (self.target.stalks[c], self.source.stalks[c])
            M = self.components.get(c)
            comps[c] = np.zeros(shape) if M is None else np.asarray(M, dtype=float).reshape(shape)
        object.__setattr__(self, "components", comps)

    def commutativity_residual(self) -> float:
        worst = 0.0
        src, tgt = self.source, self.target
        for (c, d) in src.base.incidence:
            if src.is_sheaf:
                lhs = self.components[d] @ src.map(c, d)
                rhs = tgt.map(c, d) @ self.components[c]
            else:
                lhs = self.components[c] @ src.map(c, d)
                rhs = tgt.map(c, d) @ self.components[d]
            if lhs.size:
                worst = max(worst, float(np.abs(lhs - rhs).max()))
        return worst

    def check(self, tol: float = 1e-9):
        r = self.commutativity_residual()
        if r > tol:
            raise CommutativityError(f"cosheaf map fails to commute: residual {r:.3e}")
        return r

    def chain_map(self, degree: int, src_data=None, tgt_data=None) -> np.ndarray:
        src_data = src_data or assemble_chain_complex(self.source)
        tgt_data = tgt_data or assemble_chain_complex(self.target)
        M = np.zeros((tgt_data.dims[degree], src_data.dims[degree]))
        for c in self.source.base.cells(degree):
            M[tgt_data.block(c), src_data.block(c)] = self.components[c]
        return M

    def is_injective(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return all(numerics.rank(M, tol) == M.shape[1] for M in self.components.values() if M.shape[1])


@dataclass
class ShortExactSequence:
    """0 -> sub -> middle -> quotient -> 0 with its two cosheaf maps."""
    sub: Cosheaf
    middle: Cosheaf
    quotient: Cosheaf
    inclusion: CosheafMapData
    projection: CosheafMapData
    _cache: dict = field(default_factory=dict, repr=False)

    def data(self, which: str) -> ChainComplexData:
        if which not in self._cache:
            self._cache[which] = assemble_chain_complex(getattr(self, which))
        return self._cache[which]


def quotient_cosheaf(phi: CosheafMapData, tol: Tolerance = DEFAULT_TOL):
    """Quotient of ``phi.target`` by the image of an injective ``phi``.

    Quotient stalks are realized as orthogonal complements of the image, with
    the projection given by the transposed complement basis.
    """
    if not phi.is_injective(tol):
        bad = [c for c, M in phi.components.items() if M.shape[1] and numerics.rank(M, tol) < M.shape[1]]
        raise NotInjective(f"cosheaf map has a kernel over cells {bad}")
    L = phi.target
    comp = {c: numerics.orthogonal_complement(phi.components[c], L.stalks[c], tol)
            for c in L.base.cells()}
    stalks = {c: comp[c].shape[1] for c in L.base.cells()}
    maps = {}
    for (c, d) in L.base.incidence:
        if stalks[c] and stalks[d]:
            if L.is_sheaf:
                maps[(c, d)] = comp[d].T @ L.map(c, d) @ comp[c]
            else:
                maps[(c, d)] = comp[c].T @ L.map(c, d) @ comp[d]
    name = f"{L.name} / {phi.source.name}" if L.name else ""
    Q = Cosheaf(L.base, stalks, maps, is_sheaf=L.is_sheaf, name=name)
    pi = CosheafMapData(L, Q, {c: comp[c].T for c in L.base.cells()})
    return Q, pi


def short_exact_sequence(phi: CosheafMapData, tol: Tolerance = DEFAULT_TOL) -> ShortExactSequence:
    phi.check()
    Q, pi = quotient_cosheaf(phi, tol)
    pi.check()
    return ShortExactSequence(phi.source, phi.target, Q, phi, pi)


def check_stalkwise_exact(phi: CosheafMapData, pi: CosheafMapData, tol: Tolerance = DEFAULT_TOL):
    for c in phi.source.base.cells():
        A, B = phi.components[c], pi.components[c]
        n = A.shape[0]
        comp = np.abs(B @ A).max() if (B.size and A.size) else 0.0
        if comp > 1e-9:
            raise NotExact(f"pi o phi is nonzero over {c}")
        ra = numerics.rank(A, tol) if A.size else 0
        rb = numerics.rank(B, tol) if B.size else 0
        if ra != A.shape[1] or rb != B.shape[0] or ra + rb != n:
            raise NotExact(f"sequence is not exact over cell {c}")


def connecting_homomorphism(phi: CosheafMapData, pi: CosheafMapData, degree: int, cycle,
                            tol: Tolerance = DEFAULT_TOL, gate: float = 1e-8):
    """Zig-zag a cycle of the quotient to a cycle one degree lower in the sub-cosheaf.

    Returns the raw representative; use :meth:`HomologySpace.coordinates` to
    compare classes. Only cosheaves (chains) are supported.
    """
    if phi.source.is_sheaf:
        raise NotImplementedError("connecting homomorphism is implemented for cosheaves")
    check_stalkwise_exact(phi, pi, tol)
    K, L, Q = phi.source, phi.target, pi.target
    dK, dL, dQ = (assemble_chain_complex(x, tol) for x in (K, L, Q))
    z = np.asarray(cycle, dtype=float).reshape(-1)
    bz = dQ.outgoing(degree) @ z if degree > 0 else np.zeros(0)
    if bz.size and np.linalg.norm(bz) > gate * max(1.0, np.linalg.norm(z)):
        raise NotACycle(f"input is not a cycle: |d z| = {np.linalg.norm(bz):.3e}")
    if degree == 0:
        return np.zeros(0)
    P = pi.chain_map(degree, dL, dQ)
    x, r1 = numerics.least_squares_solve(P, z, tol)
    scale = max(1.0, np.linalg.norm(z))
    if r1 > gate * scale:
        raise PreimageResidualTooLarge(f"no preimage under the projection: residual {r1:.3e}")
    y = dL.outgoing(degree) @ x
    Phi = phi.chain_map(degree - 1, dK, dL)
    u, r2 = numerics.least_squares_solve(Phi, y, tol)
    if r2 > gate * max(scale, np.linalg.norm(y)):
        raise PreimageResidualTooLarge(f"no preimage under the inclusion: residual {r2:.3e}")
    return u


def induced_map(chain_map: np.ndarray, source: HomologySpace, target: HomologySpace) -> np.ndarray:
    """Matrix of a chain map on homology, in the harmonic bases."""
    if source.dimension == 0 or target.dimension == 0:
        return np.zeros((target.dimension, source.dimension))
    return target.basis.T @ chain_map @ source.basis


def long_exact_sequence(seq: ShortExactSequence, tol: Tolerance = DEFAULT_TOL) -> list:
    """Nodes and maps of the homology long exact sequence, from H_2(sub) down.

    Returns a list of ``(label, dimension, matrix_to_next)`` where the last
    entry's matrix is ``None``.
    """
    dK, dL, dQ = seq.data("sub"), seq.data("middle"), seq.data("quotient")
    H = {(name, k): homology(d, k, tol) for name, d in (("sub", dK), ("middle", dL), ("quotient", dQ))
         for k in range(3)}
    nodes = []
    for k in (2, 1, 0):
        phi = induced_map(seq.inclusion.chain_map(k, dK, dL), H[("sub", k)], H[("middle", k)])
        pi = induced_map(seq.projection.chain_map(k, dL, dQ), H[("middle", k)], H[("quotient", k)])
        hq = H[("quotient", k)]
        if k > 0:
            hk = H[("sub", k - 1)]
            cols = [hk.coordinates(connecting_homomorphism(seq.inclusion, seq.projection, k,
                                                           hq.basis[:, j], tol))
                    for j in range(hq.dimension)]
            theta = np.array(cols).T if cols else np.zeros((hk.dimension, 0))
        else:
            theta = None
        nodes.append((f"H{k}(sub)", H[("sub", k)].dimension, phi))
        nodes.append((f"H{k}(middle)", H[("middle", k)].dimension, pi))
        nodes.append((f"H{k}(quotient)", hq.dimension, theta))
    return nodes


def exactness_defects(nodes: list, tol: Tolerance = DEFAULT_TOL) -> list:
    """Positions where rank(incoming) != dim ker(outgoing); empty when exact."""
    bad = []
    for i, (label, dim, out) in enumerate(nodes):
        r_in = numerics.rank(nodes[i - 1][2], tol) if i > 0 and nodes[i - 1][2] is not None \
            and nodes[i - 1][2].size else 0
        r_out = numerics.rank(out, tol) if out is not None and out.size else 0
        if r_in != dim - r_out:
            bad.append((label, r_in, dim - r_out))
    return bad
