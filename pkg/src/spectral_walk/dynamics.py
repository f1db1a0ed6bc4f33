"""Transition probabilities and quantum amplitudes from spectral data.

Both evolutions are read off the orthogonality measure of the
symmetrized operator J = -U A U^{-1}:

    P_ij(t) = (-1)^{i+j} (pi_j/pi_i)^{1/2} sum_s M_s e^{-x_s t} chi_i(x_s) chi_j(x_s),
    f_ij(t) = sum_s M_s chi_i(x_s) chi_j(x_s) e^{-i x_s t},

with integrals against a continuous part handled by the measure's
quadrature rule through the same nodes-and-weights interface.  The
classical formula is often quoted without the alternating sign; with the
measure of J (rather than of -A conjugated without signs) the sign
factor is required for P >= 0, and the oracle cross-check below pins it.

The coefficient table c_s = w_s chi_i(x_s) chi_j(x_s) is computed once
per (i, j); each time point is then an O(S) reduction.  By
Cauchy-Schwarz |c_s| <= 1 for a normalized measure, so the scaled
polynomial recurrence can recombine products without overflow.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bessel import bessel_j1, modified_bessel_i  # noqa: F401  (module-level API)
from .jacobi_core import BirthDeathRates, GeneratorMatrix, JacobiOperator, pi_coefficients, symmetrize
from .errors import DomainError, NumericError, UsageError
from .spectral import SpectralMeasure, chi_table_scaled

__all__ = [
    "ProbabilitySeries",
    "AmplitudeSeries",
    "classical_transition",
    "quantum_amplitude",
    "oracle_expm",
    "bessel_j1",
    "modified_bessel_i",
    "series_csv",
    "series_filename",
]

_ORACLE_SIZE_CAP = 512
_ORACLE_TIME_CAP = 1e3


@dataclass(frozen=True)
class ProbabilitySeries:
    """Classical transition probabilities P_ij on a time grid."""

    i: int
    j: int
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)
        if t.shape != v.shape:
            raise UsageError("times and values differ in shape")
        # catches sign/prefactor bugs (order-1 excursions), while leaving
        # room for tail leakage of truncated exact measures, which enters
        # as tail mass amplified by chi_i chi_j at the dropped atoms
        if v.size and (v.min() < -1e-6 or v.max() > 1 + 1e-6):
            raise NumericError(
                f"probability outside [0,1] beyond truncation leakage: range "
                f"[{v.min()}, {v.max()}] for P_{self.i}{self.j}"
            )


@dataclass(frozen=True)
class AmplitudeSeries:
    """Quantum transition amplitudes f_ij on a time grid."""

    i: int
    j: int
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)
        if t.shape != v.shape:
            raise UsageError("times and values differ in shape")


def _chi_product_coefficients(measure: SpectralMeasure, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes x_s and coefficients c_s = w_s chi_i(x_s) chi_j(x_s).

    Eigendecomposed measures carry the orthonormal table W, and there
    c_s = W[i, s] W[j, s]; this keeps the sum-rule identities (rows of
    P, unitarity) at eigensolver accuracy even for chains whose chi
    recurrence is unstable at edge nodes.
    """
    if i < 0 or j < 0:
        raise UsageError(f"site indices ({i}, {j}) must be nonnegative")
    if measure.weighted_chi is not None and measure.quad_points is None:
        table = measure.weighted_chi
        if not (i < table.shape[0] and j < table.shape[0]):
            raise UsageError(
                f"site indices ({i}, {j}) beyond operator size {table.shape[0]}")
        return measure.points, table[i] * table[j]
    x, w = measure.nodes_and_weights()
    mant, expo = chi_table_scaled(measure.jacobi, max(i, j), x)
    coeff = np.ldexp(w * mant[i] * mant[j],
                     (expo[i] + expo[j]).astype(np.int32, copy=False))
    return x, coeff


def _time_chunks(n: int, threads: int):
    per = max(1, -(-n // threads))
    return [slice(k, min(k + per, n)) for k in range(0, n, per)]


def _reduce_over_times(x, coeff, times, kernel, threads: int):
    """values[k] = sum_s coeff[s] * kernel(x[s], times[k]).

    Each time point is reduced by numpy's pairwise sum over the fixed
    spectral axis, never a shape-dependent matmul, so the value of a
    given t is identical no matter how the grid is chunked; threads only
    decide how many chunks run concurrently.  Output is therefore
    bitwise-reproducible across thread counts.
    """
    times = np.asarray(times, dtype=float)
    flat = np.atleast_1d(times).ravel()
    out = np.empty(flat.shape, dtype=complex)

    def work(sl: slice):
        terms = coeff * kernel(x[None, :], flat[sl, None])
        out[sl] = np.add.reduce(terms, axis=1)

    chunks = _time_chunks(len(flat), max(1, threads))
    if threads <= 1 or len(chunks) == 1:
        for sl in chunks:
            work(sl)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, chunks))
    return out.reshape(times.shape), times


def _check_provenance(measure: SpectralMeasure, rates: BirthDeathRates) -> None:
    """The measure must come from the symmetrization of these rates
    (either boundary convention), else the pi-prefactor formula is
    silently wrong; reject early instead."""
    j_op = measure.jacobi
    n = j_op.size - 1
    try:
        candidates = [symmetrize(rates, n, boundary=bnd)
                      for bnd in ("reflecting", "absorbing-tail")]
    except (UsageError, DomainError) as exc:
        raise UsageError(
            f"rates do not extend to the measure's {n + 1}-site operator: {exc}") from exc
    scale = max(1.0, float(np.max(np.abs(j_op.b))))
    for cand in candidates:
        if (np.allclose(cand.b, j_op.b, rtol=1e-12, atol=1e-13 * scale)
                and np.allclose(cand.j, j_op.j, rtol=1e-12, atol=1e-13 * scale)):
            return
    raise UsageError(
        "measure was not built from these rates: symmetrized operator "
        "disagrees beyond roundoff (provenance mismatch)"
    )


def classical_transition(measure: SpectralMeasure, rates: BirthDeathRates,
                         i: int, j: int, times, threads: int = 1) -> ProbabilitySeries:
    """P_ij(t) over a time grid via the spectral representation.

    Parameters
    ----------
    measure : SpectralMeasure
        Orthogonality measure of ``symmetrize(rates)``; provenance is
        checked and a mismatch raises UsageError.
    rates : BirthDeathRates
        Supplies the potential coefficients pi for the prefactor.
    i, j : int
        Sites, within the truncated operator.
    times : array_like
        Nonnegative time grid.
    threads : int
        Parallel evaluation over time chunks; results are identical to
        the serial order.
    """
    times_arr = np.asarray(times, dtype=float)
    if np.any(times_arr < 0):
        raise UsageError("classical evolution needs t >= 0")
    _check_provenance(measure, rates)
    x, coeff = _chi_product_coefficients(measure, i, j)
    pi = pi_coefficients(rates, max(i, j))
    prefactor = ((-1.0) ** ((i + j) % 2)) * pi.sqrt_ratio(j, i)
    vals, t = _reduce_over_times(x, coeff, times_arr,
                                 lambda xs, ts: np.exp(-xs * ts), threads)
    return ProbabilitySeries(i=i, j=j, times=t, values=prefactor * vals.real)


def quantum_amplitude(measure: SpectralMeasure, i: int, j: int, times,
                      threads: int = 1) -> AmplitudeSeries:
    """f_ij(t) = <i| exp(-iJt) |j> over a time grid.

    The sign convention is f(t) = exp(-iJt), so the spectral kernel is
    e^{-i x t} and f_ij(-t) = conj(f_ij(t)).
    """
    x, coeff = _chi_product_coefficients(measure, i, j)
    vals, t = _reduce_over_times(x, coeff, np.asarray(times, dtype=float),
                                 lambda xs, ts: np.exp(-1j * xs * ts), threads)
    return AmplitudeSeries(i=i, j=j, times=t, values=vals)


def oracle_expm(operator, t: float, kind: str | None = None) -> np.ndarray:
    """Dense reference evolution, independent of the spectral path.

    GeneratorMatrix -> exp(t A) by scaling-and-squaring;
    JacobiOperator -> exp(-i J t) by dense symmetric eigendecomposition.
    A raw square ndarray needs an explicit ``kind`` of "classical" or
    "quantum".  Accuracy target 1e-12 at sizes <= 32; sizes above 512 or
    |t| > 1e3 are refused rather than returned inaccurate.
    """
    if isinstance(operator, GeneratorMatrix):
        mat, inferred = operator.dense(), "classical"
    elif isinstance(operator, JacobiOperator):
        mat, inferred = operator.dense(), "quantum"
    else:
        mat = np.asarray(operator, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise UsageError(f"oracle needs a square matrix, got shape {mat.shape}")
        if kind is None:
            raise UsageError('raw matrices need kind="classical" or kind="quantum"')
        inferred = None
    kind = kind or inferred
    if kind not in ("classical", "quantum"):
        raise UsageError(f"unknown oracle kind {kind!r}")
    if mat.shape[0] > _ORACLE_SIZE_CAP:
        raise UsageError(f"oracle size {mat.shape[0]} above cap {_ORACLE_SIZE_CAP}")
    if abs(t) > _ORACLE_TIME_CAP:
        raise UsageError(f"oracle |t| = {abs(t)} above cap {_ORACLE_TIME_CAP}")
    if kind == "classical":
        return scipy.linalg.expm(mat * float(t))
    if not np.allclose(mat, mat.T, rtol=0, atol=1e-12):
        raise UsageError("quantum oracle needs a symmetric matrix")
    vals, vecs = np.linalg.eigh(mat)
    return (vecs * np.exp(-1j * vals * float(t))) @ vecs.T


def series_filename(series) -> str:
    tag = "f" if isinstance(series, AmplitudeSeries) else "p"
    return f"{tag}_{series.i}_{series.j}.csv"


def series_csv(series) -> str:
    """CSV text for one series: `t,p` or `t,re,im,abs`, 17 significant
    digits (round-trip exact for doubles), header always present."""
    lines = []
    if isinstance(series, AmplitudeSeries):
        lines.append("t,re,im,abs")
        for t, v in zip(np.atleast_1d(series.times), np.atleast_1d(series.values)):
            lines.append(f"{t:.17g},{v.real:.17g},{v.imag:.17g},{abs(v):.17g}")
    else:
        lines.append("t,p")
        for t, v in zip(np.atleast_1d(series.times), np.atleast_1d(series.values)):
            lines.append(f"{t:.17g},{v:.17g}")
    return "\n".join(lines) + "\n"
