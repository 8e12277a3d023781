"""Built-in example diagrams.

Toroidal and genus-2 realizations are planar drawings of surfaces that are
not embeddings; coordinates were picked to reproduce specific stress and
lift counts and carry small deterministic perturbations to stay generic.
"""
from __future__ import annotations

import numpy as np

from .complex import CellComplex, Diagram, diagram_from_faces


def boxed() -> Diagram:
    """Unit square with its center joined to the four corners."""
    pos = {"v0": (0.0, 0.0), "v1": (1.0, 0.0), "v2": (1.0, 1.0), "v3": (0.0, 1.0), "v4": (0.5, 0.5)}
    edges = {"e0": ("v0", "v1"), "e1": ("v1", "v2"), "e2": ("v2", "v3"), "e3": ("v3", "v0"),
             "e4": ("v0", "v4"), "e5": ("v1", "v4"), "e6": ("v2", "v4"), "e7": ("v3", "v4")}
    faces = {"f0": ["v0", "v3", "v2", "v1"],  # outer face, lowest id so it stays flat
             "f1": ["v0", "v1", "v4"], "f2": ["v1", "v2", "v4"],
             "f3": ["v2", "v3", "v4"], "f4": ["v3", "v0", "v4"]}
    return diagram_from_faces(pos, edges, faces)


def square() -> Diagram:
    """Four-bar linkage drawn as a sphere with an inner and an outer face."""
    pos = {"v0": (0.0, 0.0), "v1": (1.0, 0.0), "v2": (1.0, 1.0), "v3": (0.0, 1.0)}
    edges = {"e0": ("v0", "v1"), "e1": ("v1", "v2"), "e2": ("v2", "v3"), "e3": ("v3", "v0")}
    faces = {"f0": ["v0", "v3", "v2", "v1"], "f1": ["v0", "v1", "v2", "v3"]}
    return diagram_from_faces(pos, edges, faces)


def triangle() -> Diagram:
    pos = {"v0": (0.0, 0.0), "v1": (1.3, 0.1), "v2": (0.4, 0.9)}
    edges = {"e0": ("v0", "v1"), "e1": ("v1", "v2"), "e2": ("v2", "v0")}
    faces = {"f0": ["v0", "v2", "v1"], "f1": ["v0", "v1", "v2"]}
    return diagram_from_faces(pos, edges, faces)


def single_edge() -> Diagram:
    cx = CellComplex(["v0", "v1"], ["e0"], [], [("v0", "e0", -1), ("v1", "e0", 1)], closed=False)
    return Diagram(cx, {"v0": (0.0, 0.0), "v1": (1.0, 0.0)})


def prism() -> Diagram:
    """Two triangles joined by three parallel bars: one stress and one mechanism."""
    pos = {"A": (0.0, 0.0), "B": (3.0, 0.0), "C": (3.0, 2.0), "D": (0.0, 2.0),
           "P": (1.0, 1.0), "Q": (2.0, 1.0)}
    edges = {"eAB": ("A", "B"), "eBC": ("B", "C"), "eCD": ("C", "D"), "eDA": ("D", "A"),
             "ePQ": ("P", "Q"), "ePA": ("A", "P"), "ePD": ("P", "D"),
             "eQB": ("B", "Q"), "eQC": ("Q", "C")}
    faces = {"f0": ["A", "D", "C", "B"], "f1": ["A", "P", "D"], "f2": ["B", "C", "Q"],
             "f3": ["A", "B", "Q", "P"], "f4": ["P", "Q", "C", "D"]}
    return diagram_from_faces(pos, edges, faces)


def triangulated_sphere() -> Diagram:
    """Octahedron drawn as a triangle inside a triangle, in generic position."""
    pos = {"a": (0.0, 0.0), "b": (4.1, 0.2), "c": (1.9, 3.7),
           "d": (1.6, 0.9), "e": (2.6, 1.2), "f": (1.8, 2.1)}
    edges = {"ab": ("a", "b"), "bc": ("b", "c"), "ca": ("c", "a"),
             "de": ("d", "e"), "ef": ("e", "f"), "fd": ("f", "d"),
             "ad": ("a", "d"), "ae": ("a", "e"), "be": ("b", "e"),
             "bf": ("b", "f"), "cf": ("c", "f"), "cd": ("c", "d")}
    faces = {"f0": ["a", "c", "b"], "f1": ["d", "e", "f"],
             "f2": ["a", "e", "d"], "f3": ["a", "b", "e"], "f4": ["b", "f", "e"],
             "f5": ["b", "c", "f"], "f6": ["c", "d", "f"], "f7": ["c", "a", "d"]}
    return diagram_from_faces(pos, edges, faces)


def open_truss() -> Diagram:
    """Triangle loaded at its apex and held by two vertical reactions."""
    verts = ["A", "B", "C"]
    edges = ["eAB", "eBC", "eCA", "lC", "rA", "rB"]
    faces = ["T", "S_AB", "S_BC", "S_CA"]
    inc = [("A", "eAB", -1), ("B", "eAB", 1), ("B", "eBC", -1), ("C", "eBC", 1),
           ("C", "eCA", -1), ("A", "eCA", 1),
           ("C", "lC", -1), ("A", "rA", -1), ("B", "rB", -1),
           ("eAB", "T", 1), ("eBC", "T", 1), ("eCA", "T", 1),
           ("eAB", "S_AB", -1), ("rA", "S_AB", 1), ("rB", "S_AB", -1),
           ("eBC", "S_BC", -1), ("rB", "S_BC", 1), ("lC", "S_BC", -1),
           ("eCA", "S_CA", -1), ("lC", "S_CA", 1), ("rA", "S_CA", -1)]
    cx = CellComplex(verts, edges, faces, inc, closed=False)
    pos = {"A": (0.0, 0.0), "B": (2.0, 0.0), "C": (1.0, 1.5)}
    dirs = {"lC": (0.0, 1.0), "rA": (0.0, -1.0), "rB": (0.0, -1.0)}
    return Diagram(cx, pos, dirs)


def _jitter(n, seed, amount):
    return np.random.default_rng(seed).uniform(-amount, amount, size=(n, 2))


def _torus_grid(n=3, diagonals=(), seed=0, amount=0.08, positions=None):
    """n x n grid on the torus; ``diagonals`` lists squares (i, j) split by (i,j)->(i+1,j+1)."""
    vid = lambda i, j: f"v{i % n}{j % n}"
    if positions is None:
        J = _jitter(n * n, seed, amount)
        positions = {vid(i, j): (i + J[i * n + j, 0], j + J[i * n + j, 1]) for i in range(n) for j in range(n)}
    edges, faces = {}, {}
    for i in range(n):
        for j in range(n):
            edges[f"h{i}{j}"] = (vid(i, j), vid(i + 1, j))
            edges[f"u{i}{j}"] = (vid(i, j), vid(i, j + 1))
    diag = set(diagonals)
    for i in range(n):
        for j in range(n):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            if (i, j) in diag:
                edges[f"d{i}{j}"] = (a, c)
                faces[f"f{i}{j}a"] = [a, b, c]
                faces[f"f{i}{j}b"] = [a, c, d]
            else:
                faces[f"f{i}{j}"] = [a, b, c, d]
    return diagram_from_faces(positions, edges, faces)


def torus_grid() -> Diagram:
    """3 x 3 quadrilateral grid on the torus (9 V, 18 E, 9 F)."""
    return _torus_grid()


def torus_triangulated() -> Diagram:
    """3 x 3 torus grid with every square split: 9 V, 27 E, 18 F."""
    return _torus_grid(diagonals=[(i, j) for i in range(3) for j in range(3)], seed=1, amount=0.15)


def torus_diagonals() -> Diagram:
    """Torus grid with six diagonals: 9 V, 24 E, 12 triangles and 3 quadrilaterals.

    The three remaining quadrilaterals form one band whose two boundary rows
    differ by a translation, so every band face is a parallelogram.
    """
    n = 3
    J = _jitter(n * n, 2, 0.12)
    pos = {}
    for i in range(n):
        for j in range(n):
            pos[f"v{i}{j}"] = (i + J[i * n + j, 0], j + J[i * n + j, 1])
    # row j = 1 repeats row j = 0 shifted up by a fixed vector
    shift = np.array([0.07, 1.0])
    for i in range(n):
        pos[f"v{i}1"] = tuple(np.asarray(pos[f"v{i}0"]) + shift)
    diags = [(i, j) for i in range(n) for j in (1, 2)]
    return _torus_grid(n, diags, positions=pos)


def torus_pentagon() -> Diagram:
    """Torus grid with two diagonals: 9 V, 20 E, 11 F."""
    return _torus_grid(diagonals=[(0, 0), (1, 1)], seed=3, amount=0.12)


def genus_two() -> Diagram:
    """Two 3 x 3 torus grids, each with one square removed, glued along the holes."""
    n = 3
    edges, faces, pos = {}, {}, {}
    J = _jitter(2 * n * n, 4, 0.1)
    for k, (ox, skip) in enumerate(((0.0, (1, 1)), (4.0, (1, 1)))):
        vid = lambda i, j, k=k: f"{'ab'[k]}{i % n}{j % n}"
        for i in range(n):
            for j in range(n):
                pos[vid(i, j)] = (ox + i + J[k * 9 + i * n + j, 0], j + J[k * 9 + i * n + j, 1])
                edges[f"{'ab'[k]}h{i}{j}"] = (vid(i, j), vid(i + 1, j))
                edges[f"{'ab'[k]}u{i}{j}"] = (vid(i, j), vid(i, j + 1))
        for i in range(n):
            for j in range(n):
                if (i, j) != skip:
                    faces[f"{'ab'[k]}f{i}{j}"] = [vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)]
    # identify the hole boundary of the second torus with the first
    hole = ["a11", "a21", "a22", "a12"]
    twin = ["b11", "b21", "b22", "b12"]
    rename = dict(zip(twin, hole))
    for v in twin:
        del pos[v]
    for e in [e for e, (t, h) in edges.items() if t in twin and h in twin]:
        del edges[e]
    edges = {e: (rename.get(t, t), rename.get(h, h)) for e, (t, h) in edges.items()}
    # the glued surface needs the second torus reversed so orientations agree
    for f in list(faces):
        cyc = [rename.get(v, v) for v in faces[f]]
        faces[f] = cyc[::-1] if f.startswith("b") else cyc
    return diagram_from_faces(pos, edges, faces)


def wheel(n: int = 5, seed: int = 0, jitter: float = 0.1) -> Diagram:
    """Hub joined to an n-gon rim, with the rim vertices moved by a seeded jitter."""
    rng = np.random.default_rng(seed)
    pos = {"hub": tuple(rng.uniform(-jitter, jitter, 2))}
    for k in range(n):
        t = 2 * np.pi * k / n + rng.uniform(-jitter, jitter)
        r = 1.0 + rng.uniform(-jitter, jitter)
        pos[f"r{k}"] = (r * np.cos(t), r * np.sin(t))
    edges, faces = {}, {}
    for k in range(n):
        edges[f"rim{k}"] = (f"r{k}", f"r{(k + 1) % n}")
        edges[f"spoke{k}"] = (f"r{k}", "hub")
        faces[f"t{k}"] = [f"r{k}", f"r{(k + 1) % n}", "hub"]
    faces["outer"] = [f"r{k}" for k in reversed(range(n))]
    return diagram_from_faces(pos, edges, faces)


CLOSED = {"boxed": boxed, "square": square, "triangle": triangle, "prism": prism,
          "triangulated_sphere": triangulated_sphere, "torus_grid": torus_grid,
          "torus_triangulated": torus_triangulated, "torus_diagonals": torus_diagonals,
          "torus_pentagon": torus_pentagon, "genus_two": genus_two}
OPEN = {"single_edge": single_edge, "open_truss": open_truss}
ALL = {**CLOSED, **OPEN}
