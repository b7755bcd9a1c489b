"""Write every builtin algebra as a ``<name>.alg`` file."""
import argparse
from pathlib import Path

from uawb.corpus import builtin_corpus
from uawb.io import print_algebra


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", nargs="?", default="corpus")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for e in builtin_corpus():
        path = out / f"{e.name}.alg"
        path.write_text(print_algebra(e.algebra))
        print(f"{path}  ({e.algebra.size} elements, {e.kind})")


if __name__ == "__main__":
    main()
