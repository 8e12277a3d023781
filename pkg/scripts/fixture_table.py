"""Print homology, Maxwell and genus-bound counts for every built-in diagram."""
import argparse

from sheafstatics import fixtures, lifting, reciprocal, statics
from sheafstatics.complex import euler_characteristic, genus
from sheafstatics.sheaf import betti

COLUMNS = ["name", "V", "E", "F", "chi", "g", "H0F", "H1F", "H0J", "H1J", "M", "H2G", "H2A", "lift/aff",
           "recip", "lifts"]


def row(name, d):
    cx = d.complex
    V, E, F = cx.counts()
    bF = betti(statics.force_cosheaf(d))
    bJ = betti(statics.position_sheaf(d))
    rep = statics.maxwell_rule_report(d)
    sp = lifting.lift_space(d)
    closed = cx.closed
    return [name, V, E, F, euler_characteristic(cx), genus(cx) if closed else "-", bF[0], bF[1], bJ[0], bJ[1],
            rep["mechanisms"], betti(statics.force_sequence(d).quotient)[2], sp["dim_H2A"], sp["mod_affine"],
            reciprocal.reciprocal_stresses(d).shape[1] if closed else "-",
            lifting.lift_stresses(d).shape[1]]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=sorted(fixtures.ALL))
    ap.add_argument("--csv", action="store_true", help="comma separated output")
    args = ap.parse_args()
    rows = [COLUMNS] + [[str(x) for x in row(n, fixtures.ALL[n]())] for n in args.names]
    if args.csv:
        for r in rows:
            print(",".join(r))
        return
    widths = [max(len(r[i]) for r in rows) for i in range(len(COLUMNS))]
    for r in rows:
        print("  ".join(x.rjust(w) for x, w in zip(r, widths)))


if __name__ == "__main__":
    main()
