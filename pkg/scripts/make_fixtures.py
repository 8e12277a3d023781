"""Write every built-in diagram to fixtures/<name>.json."""
import argparse
from pathlib import Path

from sheafstatics import fixtures
from sheafstatics.io import diagram_to_dict, write_json


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, build in fixtures.ALL.items():
        write_json(diagram_to_dict(build()), out / f"{name}.json")
        print(f"wrote {out / name}.json")


if __name__ == "__main__":
    main()
