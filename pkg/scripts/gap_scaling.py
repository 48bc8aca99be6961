"""Third-order gap and peak versus M: quotient eigenvalues against the
perturbative gap 2/(sqrt(M)(M-3)), plus the simulated peak at both rates."""

import math

import numpy as np

from kronwalk import analysis
from kronwalk.graph import kron_complete
from kronwalk.reduce import kronecker_partition, reduce_hamiltonian
from kronwalk.walk import SearchProblem, find_peak


def main():
    print(f"{'M':>6} {'gap':>12} {'perturbative':>12} {'rel':>9} "
          f"{'t*(crit)':>11} {'p*(crit)':>9} {'t*(pract)':>11} {'p*(pract)':>9}")
    for M in (8, 16, 32, 64, 128, 256, 512, 1024):
        g = kron_complete(M, 3)
        part = kronecker_partition(M, 3, materialize=False)
        crit = analysis.critical_gamma(M, 3).value
        E = np.linalg.eigvalsh(reduce_hamiltonian(g, part, crit, 0).matrix)
        pert = analysis.perturbation_report(M).gap
        hint = math.pi * math.sqrt(M**3) / 2
        tc, pc, _ = find_peak(SearchProblem(g, 0, crit), hint, part)
        tp, pp, _ = find_peak(SearchProblem(g, 0, 1 / (M - 1) ** 3), hint, part)
        gap = E[1] - E[0]
        print(f"{M:6d} {gap:12.4e} {pert:12.4e} {abs(gap / pert - 1):9.2e} "
              f"{tc:11.2f} {pc:9.5f} {tp:11.2f} {pp:9.5f}")


if __name__ == "__main__":
    main()
