"""Regular 2-dimensional cell complexes with signed incidence, and diagrams.

A :class:`CellComplex` is fully described by its cell lists and the signed
incidence ``[lower:upper]``. Closed complexes are oriented surfaces; open
complexes may contain open-ended edges (one vertex) that model loads and
reactions, and may omit faces.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import DegenerateEdge, NotClosedSurface, ValidationError

DUAL_PREFIX = "~"


class CellComplex:
    """Immutable cell complex of dimension at most two."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[str],
                 faces: Iterable[str], incidence: Iterable[tuple], closed: bool = True):
        self.vertices = tuple(str(v) for v in vertices)
        self.edges = tuple(str(e) for e in edges)
        self.faces = tuple(str(f) for f in faces)
        self.closed = bool(closed)
        dims = {}
        for d, ids in enumerate((self.vertices, self.edges, self.faces)):
            for c in ids:
                if c in dims:
                    raise ValidationError(f"duplicate cell id {c!r}")
                dims[c] = d
        self._dim = dims
        inc = {}
        for lower, upper, sign in incidence:
            key = (str(lower), str(upper))
            if key in inc:
                raise ValidationError(f"duplicate incidence entry {key}")
            inc[key] = int(sign)
        self._incidence = inc
        down = defaultdict(list)
        up = defaultdict(list)
        for (lo, hi), s in inc.items():
            down[hi].append((lo, s))
            up[lo].append((hi, s))
        order = {c: i for i, c in enumerate(self.cells())}
        big = len(order)
        self._down = {c: sorted(v, key=lambda t: order.get(t[0], big)) for c, v in down.items()}
        self._up = {c: sorted(v, key=lambda t: order.get(t[0], big)) for c, v in up.items()}

    def cells(self, dim: int | None = None) -> tuple:
        if dim is None:
            return self.vertices + self.edges + self.faces
        return (self.vertices, self.edges, self.faces)[dim] if 0 <= dim <= 2 else ()

    def dim(self, cell: str) -> int:
        return self._dim[cell]

    def __contains__(self, cell) -> bool:
        return cell in self._dim

    @property
    def incidence(self) -> dict:
        return dict(self._incidence)

    def sign(self, lower: str, upper: str) -> int:
        return self._incidence.get((lower, upper), 0)

    def boundary(self, cell: str) -> list:
        """``[(lower, sign), ...]`` for cells one dimension down."""
        return list(self._down.get(cell, ()))

    def coboundary(self, cell: str) -> list:
        """``[(upper, sign), ...]`` for cells one dimension up."""
        return list(self._up.get(cell, ()))

    def edge_vertices(self, e: str) -> list:
        return [v for v, _ in self.boundary(e)]

    def head_tail(self, e: str):
        """``(head, tail)`` of a closed edge; head carries sign +1."""
        head = tail = None
        for v, s in self.boundary(e):
            if s > 0:
                head = v
            else:
                tail = v
        return head, tail

    def is_open_edge(self, e: str) -> bool:
        return len(self.boundary(e)) == 1

    def edge_faces(self, e: str) -> list:
        return self.coboundary(e)

    def face_vertices(self, f: str) -> list:
        seen = []
        for e, _ in self.boundary(f):
            for v in self.edge_vertices(e):
                if v not in seen:
                    seen.append(v)
        return seen

    def face_cycle(self, f: str) -> list:
        """Vertices of a face in boundary order, following its orientation.

        Only defined for faces bounded by closed edges forming one cycle.
        """
        steps = {}
        for e, s in self.boundary(f):
            head, tail = self.head_tail(e)
            if head is None or tail is None:
                raise ValidationError(f"face {f} has an open-ended boundary edge {e}")
            a, b = (tail, head) if s > 0 else (head, tail)
            if a in steps:
                raise ValidationError(f"face {f} boundary is not a simple cycle")
            steps[a] = b
        if not steps:
            return []
        start = min(steps, key=self.vertices.index)
        cycle = [start]
        while True:
            nxt = steps[cycle[-1]]
            if nxt == start:
                break
            if nxt in cycle or nxt not in steps:
                raise ValidationError(f"face {f} boundary is not a simple cycle")
            cycle.append(nxt)
        if len(cycle) != len(steps):
            raise ValidationError(f"face {f} boundary is not a single cycle")
        return cycle

    def counts(self) -> tuple:
        return len(self.vertices), len(self.edges), len(self.faces)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = defaultdict(set)
        for e in self.edges:
            vs = self.edge_vertices(e)
            for a in vs:
                adj[a].update(vs)
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for w in adj[v] - seen:
                seen.add(w)
                queue.append(w)
        return len(seen) == len(self.vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CellComplex):
            return NotImplemented
        return (self.vertices == other.vertices and self.edges == other.edges
                and self.faces == other.faces and self.closed == other.closed
                and self._incidence == other._incidence)

    def __hash__(self):
        return hash((self.vertices, self.edges, self.faces, self.closed))

    def __repr__(self):
        V, E, F = self.counts()
        kind = "closed" if self.closed else "open"
        return f"CellComplex({kind}, V={V}, E={E}, F={F})"


@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, rule: str, cells, message: str):
        self.failures.append({"rule": rule, "cells": list(cells), "message": message})

    def rules(self) -> set:
        return {f["rule"] for f in self.failures}

    def raise_if_failed(self):
        if self.failures:
            lines = "; ".join(f"{f['rule']}: {f['message']}" for f in self.failures)
            raise ValidationError(lines)


def validate(cx: CellComplex) -> ValidationReport:
    report = ValidationReport()
    for (lo, hi), s in cx.incidence.items():
        if lo not in cx or hi not in cx:
            report.add("adjacency", [lo, hi], "incidence references an unknown cell")
            continue
        if cx.dim(hi) != cx.dim(lo) + 1:
            report.add("adjacency", [lo, hi], "incidence between non-consecutive dimensions")
        if s not in (-1, 1):
            report.add("adjacency", [lo, hi], f"sign {s} is not +1 or -1")

    for e in cx.edges:
        bd = cx.boundary(e)
        if len(bd) == 2:
            if bd[0][1] * bd[1][1] != -1:
                report.add("directed edges", [e], "endpoint signs must multiply to -1")
        elif len(bd) == 1:
            if cx.closed:
                report.add("closed surface", [e], "open-ended edge in a closed complex")
        else:
            report.add("directed edges", [e], f"edge has {len(bd)} incident vertices")

    # regularity: sum_c [b:c][c:d] = 0 for every vertex-face pair
    for f in cx.faces:
        acc = defaultdict(int)
        for e, s_ef in cx.boundary(f):
            for v, s_ve in cx.boundary(e):
                acc[v] += s_ve * s_ef
        bad = [v for v, total in acc.items() if total != 0]
        if bad:
            report.add("regularity", [f] + bad, f"nonzero regularity sum around face {f}")

    if cx.closed:
        for e in cx.edges:
            cof = cx.coboundary(e)
            if len(cof) != 2:
                report.add("closed surface", [e], f"edge has {len(cof)} incident faces (expected 2)")
            elif cof[0][1] * cof[1][1] != -1:
                report.add("orientation", [e], "adjacent faces induce the same orientation on the edge")
        chi = euler_characteristic(cx)
        if chi % 2 != 0 or chi > 2:
            report.add("closed surface", [], f"Euler characteristic {chi} is not that of an oriented surface")
        if not cx.is_connected():
            report.add("closed surface", [], "complex is not connected")
    return report


def euler_characteristic(cx: CellComplex) -> int:
    V, E, F = cx.counts()
    return V - E + F


def genus(cx: CellComplex) -> int:
    if not cx.closed:
        raise NotClosedSurface("genus is only defined for closed surfaces")
    return (2 - euler_characteristic(cx)) // 2


def dual_id(cell: str) -> str:
    return cell[len(DUAL_PREFIX):] if cell.startswith(DUAL_PREFIX) else DUAL_PREFIX + cell


def poincare_dual(cx: CellComplex) -> CellComplex:
    """Dual cell structure with ``[~d : ~c] = [c : d]``; an involution on ids."""
    if not cx.closed:
        raise NotClosedSurface("Poincare dual requires a closed oriented surface")
    report = validate(cx)
    if not report.ok:
        raise NotClosedSurface(f"complex is not a valid closed surface: {sorted(report.rules())}")
    inc = [(dual_id(hi), dual_id(lo), s) for (lo, hi), s in cx.incidence.items()]
    return CellComplex([dual_id(f) for f in cx.faces], [dual_id(e) for e in cx.edges],
                       [dual_id(v) for v in cx.vertices], inc, closed=True)


def quarter_turn_vec(x):
    """Rotate vectors (last axis of length 2) by +90 degrees."""
    x = np.asarray(x, dtype=float)
    return np.stack([-x[..., 1], x[..., 0]], axis=-1)


class Diagram:
    """A cell complex with a planar realization of its vertices.

    ``directions`` holds the unit line of action of every open-ended edge,
    oriented from tail to head like closed edges.
    """

    def __init__(self, complex: CellComplex, positions: Mapping, directions: Mapping | None = None,
                 springs: Mapping | None = None):
        self.complex = complex
        self.positions = {v: np.asarray(positions[v], dtype=float).reshape(2) for v in complex.vertices}
        directions = dict(directions or {})
        self.directions = {}
        for e in complex.edges:
            if complex.is_open_edge(e):
                if e not in directions:
                    raise ValidationError(f"open-ended edge {e} has no direction")
                d = np.asarray(directions[e], dtype=float).reshape(2)
                n = np.linalg.norm(d)
                if n == 0:
                    raise DegenerateEdge(f"open-ended edge {e} has a zero direction")
                self.directions[e] = d / n
        self.springs = {str(k): float(v) for k, v in (springs or {}).items()}

    def point(self, v: str) -> np.ndarray:
        return self.positions[v]

    def homogeneous(self, v: str) -> np.ndarray:
        x, y = self.positions[v]
        return np.array([x, y, 1.0])

    def edge_vector(self, e: str):
        """Unit direction (head minus tail) and length; open edges report length inf."""
        cx = self.complex
        if cx.is_open_edge(e):
            return self.directions[e], float("inf")
        head, tail = cx.head_tail(e)
        vec = self.positions[head] - self.positions[tail]
        length = float(np.linalg.norm(vec))
        if length == 0.0:
            raise DegenerateEdge(f"edge {e} has zero length")
        return vec / length, length

    def edge_normal(self, e: str) -> np.ndarray:
        return quarter_turn_vec(self.edge_vector(e)[0])

    def coordinate_array(self) -> np.ndarray:
        return np.array([self.positions[v] for v in self.complex.vertices]).reshape(-1, 2)

    def scale(self) -> float:
        P = self.coordinate_array()
        if len(P) < 2:
            return 1.0
        return float(max(np.ptp(P, axis=0).max(), 1e-300))

    def with_positions(self, positions: Mapping) -> "Diagram":
        return Diagram(self.complex, positions, self.directions, self.springs)

    def face_centroid(self, f: str) -> np.ndarray:
        vs = self.complex.face_vertices(f)
        return np.mean([self.positions[v] for v in vs], axis=0)


def validate_diagram(diagram: Diagram, tol: float = 1e-12) -> ValidationReport:
    report = validate(diagram.complex)
    cx = diagram.complex
    P = diagram.coordinate_array()
    for i in range(len(P)):
        for j in range(i + 1, len(P)):
            if np.linalg.norm(P[i] - P[j]) <= tol * max(diagram.scale(), 1.0):
                report.add("injective realization", [cx.vertices[i], cx.vertices[j]],
                           "two vertices share coordinates")
    for e in cx.edges:
        if len(cx.boundary(e)) == 2 and None not in cx.head_tail(e):
            try:
                diagram.edge_vector(e)
            except DegenerateEdge:
                report.add("edge length", [e], "edge has zero length")
    return report


def diagram_from_faces(positions: Mapping, edges: Mapping, faces: Mapping,
                       closed: bool = True, springs: Mapping | None = None) -> Diagram:
    """Build a diagram from oriented edges ``{id: (tail, head)}`` and face cycles.

    Each face is a list of vertex ids traversed in the face's orientation;
    the face-edge signs are read off from the traversal direction.
    """
    lookup = {}
    inc = []
    for e, (tail, head) in edges.items():
        lookup[(tail, head)] = (e, 1)
        lookup[(head, tail)] = (e, -1)
        inc.append((tail, e, -1))
        inc.append((head, e, 1))
    for f, cycle in faces.items():
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            if (a, b) not in lookup:
                raise ValidationError(f"face {f} steps along a missing edge {a}-{b}")
            e, s = lookup[(a, b)]
            inc.append((e, f, s))
    cx = CellComplex(list(positions), list(edges), list(faces), inc, closed=closed)
    return Diagram(cx, positions, springs=springs)
