"""Enumerate irreducible hypertrees and write a catalog, with a breakdown by edge sizes."""

import argparse
import time
from collections import Counter

from hypertrees.core import is_generic
from hypertrees.enumerate import enumerate_irreducible, write_catalog


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--min", type=int, default=5)
    ap.add_argument("--max", type=int, default=10)
    ap.add_argument("--out", default=None, help="catalog directory")
    args = ap.parse_args()
    for n in range(args.min, args.max + 1):
        t = time.perf_counter()
        classes = enumerate_irreducible(n, allow_large=True)
        secs = time.perf_counter() - t
        shapes = Counter(tuple(sorted(len(e) for e in c.hypertree.edges if len(e) > 3)) for c in classes)
        generic = sum(1 for c in classes
                      if all(len(e) == 3 for e in c.hypertree.edges) and is_generic(c.hypertree))
        print(f"n={n:2d}  classes={len(classes):5d}  time={secs:7.2f}s  generic triples-only={generic}")
        for shape, k in sorted(shapes.items()):
            print(f"      larger edges {list(shape) or '-'}: {k}")
        if args.out:
            write_catalog(classes, args.out)


if __name__ == "__main__":
    main()
