"""Two chains whose return amplitudes are Jacobi elliptic functions.

Variant C alternates couplings (k, 2, 3k, 4, ...) and its return
amplitude traces cn(t; k); variant D swaps the pattern and gives
dn(t; k).  Both spectra live on arithmetic lattices, so the walks are
periodic with period 2K(k).  cn vanishes at odd multiples of K while
dn never drops below k' = sqrt(1 - k^2).
"""

import numpy as np

from spectral_walk import (classify_return, elliptic_context, fitted_omega,
                           jacobi_cn_dn, quantum_amplitude,
                           stieltjes_carlitz_chain)


def main():
    k = 0.7
    ctx = elliptic_context(k)
    print(f"modulus k = {k}: quarter period K = {ctx.K:.12f}, "
          f"k' = {np.sqrt(1 - k*k):.12f}")

    for variant, law in (("C", "cn"), ("D", "dn")):
        j_op, measure = stieltjes_carlitz_chain(variant, k)
        verdict = classify_return(measure)
        omega = fitted_omega(variant, ctx, measure)

        t = np.linspace(0.0, 4 * ctx.K, 801)
        f = quantum_amplitude(measure, 0, 0, t).values
        cn, dn = jacobi_cn_dn(omega * t, ctx)
        ref = cn if variant == "C" else dn
        dev = np.max(np.abs(f - ref))

        print(f"variant {variant}: {len(measure.points)} atoms, "
              f"verdict {verdict.kind}, t0 = {verdict.t0:.12f} (= 2K)")
        print(f"  max |f_00 - {law}(omega t)| = {dev:.3e} with "
              f"omega = {omega:.12f}")
        if variant == "C":
            at_K = abs(quantum_amplitude(measure, 0, 0, np.array([ctx.K])).values[0])
            print(f"  |f_00(K)| = {at_K:.3e} (cn zero)")
        else:
            floor = np.min(np.abs(f[t <= verdict.t0]))
            print(f"  min |f_00| over one period = {floor:.12f} (dn floor k')")


if __name__ == "__main__":
    main()
