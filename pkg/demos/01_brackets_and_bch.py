"""Structure constants, brackets, and the combination series.

Builds the standard 3-dimensional simple algebra in exact arithmetic,
evaluates brackets against its 2x2 matrix realization, and expands
log(exp(x) exp(y)) degree by degree, cross-checking the low orders
against the matrix logarithm in float mode.
"""

from fractions import Fraction

import numpy as np
from scipy.linalg import expm, logm

from postlie import liealg, magnus


def main():
    L = liealg.builtin("sl(2)")
    print("algebra:", ", ".join(L.labels), "(dim %d)" % L.dim)

    e, h, f = (L.basis(i) for i in range(3))
    for name_a, a in zip(L.labels, (e, h, f)):
        for name_b, b in zip(L.labels, (e, h, f)):
            v = liealg.bracket(L, a, b)
            print("  [%s, %s] = %s" % (name_a, name_b, _fmt(L, v)))

    print("\ntrace form on the realization:")
    for i, name_a in enumerate(L.labels):
        row = [liealg.trace_form(L, L.basis(i), L.basis(j)) for j in range(3)]
        print("  B(%s, -) = %s" % (name_a, row))

    x = (Fraction(1, 2), 0, 0)
    y = (0, 0, Fraction(1, 3))
    series = magnus.bch(L, x, y, 8)
    print("\nlog(exp(x) exp(y)) for x = e/2, y = f/3, degree by degree:")
    for m in range(1, 7):
        print("  degree %d: %s" % (m, _fmt(L, series.coeff(m))))

    # float cross-check: sum the series through degree 8 and compare with
    # the matrix log (remaining gap is the degree-9 tail)
    Lf = liealg.builtin("sl(2)", mode="float")
    total = [0.0] * 3
    for m in range(1, 9):
        total = [t + float(c) for t, c in zip(total, series.coeff(m))]
    M = logm(
        expm(np.array(Lf.rho([float(c) for c in x]), dtype=float))
        @ expm(np.array(Lf.rho([float(c) for c in y]), dtype=float))
    )
    direct = np.array(Lf.rho(total), dtype=float)
    print("\nmatrix-log cross-check gap (degree-9 tail): %.2e"
          % np.abs(M - direct).max())


def _fmt(L, v):
    parts = []
    for c, lab in zip(v, L.labels):
        if c == 0:
            continue
        parts.append(("%s*%s" % (c, lab)) if c != 1 else lab)
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


if __name__ == "__main__":
    main()
