"""Meixner chains revive perfectly at t = 2 pi.

The Meixner measure sits on the nonnegative integers, so every phase
e^{-ixt} realigns at t = 2 pi and the walk returns to its start with
probability 1.  The characteristic function has the negative-binomial
closed form ((1-c)/(1-c e^{it}))^beta.
"""

import math

import numpy as np

from spectral_walk import characteristic, classify_return, meixner_chain, quantum_amplitude

for beta, c in [(1.0, 0.25), (2.5, 0.5), (0.5, 0.8)]:
    rates, j_op, measure = meixner_chain(beta=beta, c=c)
    tail = 1.0 - measure.total_mass

    t = np.linspace(0.0, 4 * math.pi, 513)
    F = characteristic(measure, t)
    closed = ((1.0 - c) / (1.0 - c * np.exp(1j * t))) ** beta
    dev = np.max(np.abs(F - closed))

    verdict = classify_return(measure)
    ret = abs(quantum_amplitude(measure, 0, 0, np.array([verdict.t0])).values[0])

    print(f"beta = {beta}, c = {c}: {len(measure.points)} atoms kept, "
          f"tail mass {tail:.2e}")
    print(f"  |F - closed form| <= {dev:.3e} on [0, 4 pi]")
    print(f"  verdict {verdict.kind}, t0 = {verdict.t0:.15f}, "
          f"|f_00(t0)| = {ret:.15f}")
