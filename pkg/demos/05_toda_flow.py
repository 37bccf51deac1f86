"""Isospectral flow of a symmetric tridiagonal matrix.

Solves the Lax equation dx/dt = [x, R_minus(x)] on a 4x4 tridiagonal
initial condition two ways - the exact factorized-exponential form driven
by the graded expansion, and a classical RK4 integration - then compares
them and checks that the spectrum never moves.
"""

import numpy as np

from postlie import flows


def main():
    rng = np.random.default_rng(5)
    diag = rng.uniform(-0.4, 0.4, size=4)
    off = rng.uniform(-0.4, 0.4, size=3)
    grid = [i / 10 for i in range(11)]
    # the tail estimate at t = 1 sits near 7e-7 for this draw; accept it
    problem = flows.toda_problem(
        4, list(diag), list(off), grid, order=10, flow_tolerance=1e-5
    )

    print("initial diagonal:   ", np.round(diag, 4))
    print("initial off-diagonal:", np.round(off, 4))

    states = flows.factorized_solution(problem)
    ref = flows.rk4_reference(problem, 1e-3)

    print("\n   t    first eigenvalue      last eigenvalue      |fact - rk4|")
    for s, r in zip(states, ref):
        gap = max(abs(a - b) for a, b in zip(s.x, r.x))
        print("  %.1f   %+.12f      %+.12f      %.2e"
              % (s.t, s.eigenvalues[0], s.eigenvalues[-1], gap))

    rep = flows.conservation_report(states)
    print("\nworst eigenvalue drift over the grid:   %.2e"
          % rep["max_eig_drift"])
    print("worst trace-power drift over the grid:  %.2e"
          % rep["max_trace_power_drift"])

    print("\nCSV head:")
    for line in flows.flow_csv(states).splitlines()[:3]:
        print(" ", line[:100] + ("..." if len(line) > 100 else ""))


if __name__ == "__main__":
    main()
