"""End-to-end state transfer on an engineered finite chain.

Couplings J_i = sqrt(i (n - i))/2 give an equally spaced spectrum, so
the excitation refocuses at the far end at t = pi and returns home at
t = 2 pi, both with probability 1.
"""

import math

import numpy as np

from spectral_walk import eigendecompose, pst_demo_chain, quantum_amplitude

n = 10
j_op = pst_demo_chain(n)
measure = eigendecompose(j_op)

print(f"{n}-site transfer chain, eigenvalues:")
print(" ", np.round(measure.points, 12).tolist())

times = np.linspace(0.0, 2 * math.pi, 9)
print("\n  t/pi   |f_00|^2   |f_0,end|^2")
for t in times:
    home = abs(quantum_amplitude(measure, 0, 0, np.array([t])).values[0]) ** 2
    far = abs(quantum_amplitude(measure, 0, n - 1, np.array([t])).values[0]) ** 2
    print(f"  {t/math.pi:4.2f}   {home:8.6f}   {far:8.6f}")

transfer = abs(quantum_amplitude(measure, 0, n - 1, np.array([math.pi])).values[0])
revival = abs(quantum_amplitude(measure, 0, 0, np.array([2 * math.pi])).values[0])
print(f"\ntransfer fidelity at t = pi : {transfer:.15f}")
print(f"revival at t = 2 pi         : {revival:.15f}")
