"""Compare the closed-form class entries with the class read off the equation.

For each triples-only catalog hypertree the equation is expanded, its diagonal
multiplicities are converted to a Kapranov class, and every entry is checked
against the exact value or lower bound produced by class_coefficients.
"""

import argparse

from hypertrees.divisor import EXACT, class_coefficients, hypertree_equation
from hypertrees.enumerate import enumerate_irreducible
from hypertrees.pullback import extend_table, fm_to_kapranov, multiplicity_table


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=9)
    args = ap.parse_args()
    for n in range(6, args.max_n + 1):
        for c in enumerate_irreducible(n):
            h = c.hypertree
            if any(len(e) != 3 for e in h.edges):
                continue
            true = fm_to_kapranov(extend_table(multiplicity_table(hypertree_equation(h))), n + 1)
            cls = class_coefficients(h)
            exact = bounds = tight = wrong = 0
            for key, e in cls.m.items():
                got = true.m[key].value
                if e.kind == EXACT:
                    exact += 1
                    wrong += got != e.value
                else:
                    bounds += 1
                    tight += got == e.value
                    wrong += got < e.value
            print(f"n={n} {c.short_hash}: exact {exact}, bounds {bounds} (tight {tight}), violations {wrong}")


if __name__ == "__main__":
    main()
