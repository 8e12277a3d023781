"""Render every closed fixture with its first reciprocal stress to SVG files."""
import argparse
from pathlib import Path

from sheafstatics import fixtures, reciprocal, render, statics
from sheafstatics.cli import normalized


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="gallery")
    ap.add_argument("--convention", choices=reciprocal.CONVENTIONS, default="cremona")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, build in sorted(fixtures.ALL.items()):
        d = build()
        stress, dual = None, None
        basis = reciprocal.reciprocal_stresses(d) if d.complex.closed else None
        if basis is not None and basis.shape[1]:
            w = normalized(basis[:, 0])
            stress = dict(zip(d.complex.edges, w))
            dual = reciprocal.reciprocal_diagram(d, w, args.convention)
        elif name == "open_truss":
            w = statics.solve_equilibrium(d, {"lC": 1.0}).as_vector(d.complex.edges)
            stress = dict(zip(d.complex.edges, w))
            dual = reciprocal.reciprocal_diagram(d, w, args.convention)
        svg = render.render_svg(d, stress, dual, layers=("form", "forces", "dual"))
        (out / f"{name}.svg").write_text(svg)
        print(f"wrote {out / name}.svg")


if __name__ == "__main__":
    main()
