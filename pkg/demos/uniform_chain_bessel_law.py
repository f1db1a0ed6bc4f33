"""Return amplitude of the uniform chain follows a Bessel law.

On the half-infinite chain with constant coupling 1/2 the spectral
measure is the semicircle weight on [-1, 1] and the return amplitude is
f_00(t) = 2 J_1(t)/t.  The amplitude decays like t^(-3/2), so the walk
never returns: the classifier reports NoReturn.
"""

import numpy as np

from spectral_walk import bessel_j1, classify_return, quantum_amplitude, uniform_chain

_, measure = uniform_chain()

t = np.linspace(0.0, 30.0, 3001)
f = quantum_amplitude(measure, 0, 0, t)

target = np.ones_like(t)
target[1:] = 2.0 * bessel_j1(t[1:]) / t[1:]
print(f"max |f_00(t) - 2 J_1(t)/t| on [0, 30]: {np.max(np.abs(f.values - target)):.3e}")

sig = f.values.real
k = next(i for i in range(1, len(t) - 1) if sig[i] <= sig[i - 1] and sig[i] < sig[i + 1])
print(f"first minimum near t = {t[k]:.2f}, f_00 = {sig[k]:.5f}")

print(f"classifier verdict: {classify_return(measure).kind}")

# a finite chain shadows the infinite one until the excitation bounces
# off the far end and comes back
_, truncated = uniform_chain(n=60)
t_short = np.linspace(0.0, 20.0, 201)
dev = np.max(np.abs(quantum_amplitude(measure, 0, 0, t_short).values
                    - quantum_amplitude(truncated, 0, 0, t_short).values))
print(f"order-60 truncation matches to {dev:.3e} for t <= 20")
