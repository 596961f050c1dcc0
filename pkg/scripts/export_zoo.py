"""Write every builtin model as a YAML model file (default: data/models/)."""

import argparse
from pathlib import Path

from foliate import zoo
from foliate.io import dump_model


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "models"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for e in zoo.all_entries():
        (out / f"{e.name}.yaml").write_text(dump_model(e.model))
        print(out / f"{e.name}.yaml")


if __name__ == "__main__":
    main()
