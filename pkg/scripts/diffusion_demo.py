"""Perturb a diagram, diffuse with the position-sheaf Laplacian, and compare with the nearest parallel redrawing."""
import argparse

import numpy as np

from sheafstatics import dynamics, fixtures, statics


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("name", nargs="?", default="prism", choices=sorted(fixtures.ALL))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--amount", type=float, default=0.05)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--steps", type=int, default=20)
    ap.add_argument("--scheme", choices=["spectral", "euler"], default="spectral")
    args = ap.parse_args()

    d = fixtures.ALL[args.name]()
    verts = d.complex.vertices
    pert = dynamics.random_perturbation(d, args.seed, args.amount)
    L = dynamics.sheaf_laplacian(statics.position_sheaf(d))
    x0 = np.concatenate([pert[v] - d.point(v) for v in verts])
    trace = dynamics.diffuse(L, x0, args.alpha, args.scheme, args.steps)
    for t, e in zip(trace.times, trace.energies):
        print(f"t={t:10.4f}  energy={e:.3e}")
    near = dynamics.nearest_parallel_realization(d, pert)
    target = np.concatenate([near[v] - d.point(v) for v in verts])
    print(f"perturbed max angle change: {np.degrees(dynamics.max_angle_change(d, pert)):.4f} deg")
    print(f"limit vs nearest parallel redrawing: {np.linalg.norm(trace.states[-1] - target):.3e}")
    limit = {v: d.point(v) + trace.states[-1][2 * i:2 * i + 2] for i, v in enumerate(verts)}
    print(f"limit max angle change: {np.degrees(dynamics.max_angle_change(d, limit)):.2e} deg")


if __name__ == "__main__":
    main()
