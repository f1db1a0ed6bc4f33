"""Single-excitation walk on a random chain: unitarity and symmetry.

The amplitudes f_ij(t) come from the same spectral measure as the
classical probabilities.  Probability leaves site 0, spreads, and the
row sums of |f|^2 stay at 1 to machine precision.
"""

import numpy as np

from spectral_walk import (BirthDeathRates, eigendecompose, quantum_amplitude,
                           symmetrize)


def main():
    rng = np.random.default_rng(23)
    sites = 10
    rates = BirthDeathRates.from_arrays(
        lambdas=rng.uniform(0.1, 2.0, size=sites - 1),
        mus=np.concatenate([[0.0], rng.uniform(0.1, 2.0, size=sites - 1)]),
    )
    measure = eigendecompose(symmetrize(rates))

    times = np.array([0.0, 0.5, 1.0, 2.0, 4.0])
    f = np.empty((len(times), sites, sites), dtype=complex)
    for i in range(sites):
        for j in range(sites):
            f[:, i, j] = quantum_amplitude(measure, i, j, times).values

    print(f"{sites}-site chain, walk started at site 0")
    print("occupation |f_0j|^2 by time:")
    header = "   t   " + "".join(f"  site {j}" for j in range(sites))
    print(header)
    for k, t in enumerate(times):
        row = "".join(f"  {abs(f[k, 0, j])**2:6.4f}" for j in range(sites))
        print(f"  {t:4.1f} {row}")

    unitarity = np.max(np.abs((np.abs(f) ** 2).sum(axis=2) - 1.0))
    symmetry = np.max(np.abs(f - f.transpose(0, 2, 1)))
    print()
    print(f"max |row sum of |f|^2 - 1| : {unitarity:.3e}")
    print(f"max |f_ij - f_ji|          : {symmetry:.3e}")


if __name__ == "__main__":
    main()
