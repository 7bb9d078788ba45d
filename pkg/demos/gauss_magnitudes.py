"""Every nontrivial Gauss sum over a small field has |G|^2 = q, exactly.

Run: python demos/gauss_magnitudes.py [q]
"""

import sys

from tameps.abelian import ResAddChar, ResMultChar, gauss_sum
from tameps.residue import fq_make

FIELDS = {3: (3, 1), 5: (5, 1), 7: (7, 1), 9: (3, 2), 13: (13, 1),
          25: (5, 2), 27: (3, 3), 49: (7, 2)}


def main(q: int = 9) -> None:
    p, f = FIELDS[q]
    k = fq_make(p, f)
    checked = 0
    for mult in range(1, q - 1):
        theta = ResMultChar(k, mult)
        for beta in k.nonzero_elements():
            g = gauss_sum(theta, ResAddChar(k, beta))
            assert g * g.conj() == q
            checked += 1
    print(f"q = {q}: {checked} pairs of nontrivial characters, "
          f"G * conj(G) = {q} for every one (exact integer identity)")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 9)
