"""Orthogonality measures of Jacobi operators and polynomial evaluation.

A symmetric Jacobi operator J with positive couplings has orthonormal
recurrence polynomials chi_i(x),

    chi_{-1} = 0,  chi_0 = 1,
    J_{i+1} chi_{i+1}(x) = (x - B_i) chi_i(x) - J_i chi_{i-1}(x),

and a probability measure under which they are orthonormal.  For a
finite operator that measure is discrete: the points are the eigenvalues
and the mass at each point is the squared first component of the
normalized eigenvector (the Golub-Welsch construction).  Continuous
measures are represented by their density together with a Gauss
quadrature rule so that every downstream consumer can treat "nodes and
weights" uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .jacobi_core import BirthDeathRates, JacobiOperator
from .errors import NumericError, UsageError

__all__ = [
    "SpectralMeasure",
    "PolynomialEvaluator",
    "eigendecompose",
    "evaluate_chi",
    "evaluate_chi_scaled",
    "chi_table",
    "evaluate_Q",
]

# |chi| above this triggers a power-of-two renormalization of the
# recurrence pair; far below overflow, far above any orthonormal value.
_RESCALE_LIMIT = 2.0**500
_CLUSTER_REL_TOL = 1e-12


@dataclass(frozen=True)
class SpectralMeasure:
    """Probability measure with a discrete and/or continuous part.

    Attributes
    ----------
    jacobi : JacobiOperator
        The operator whose recurrence polynomials this measure
        orthonormalizes; also the evaluator used for chi_i(x).
    points, masses : ndarray
        Discrete atoms (strictly increasing points, nonnegative masses).
    weight : callable or None
        Density of the continuous part on ``interval`` (normalized so the
        total measure has mass 1), or None if purely discrete.
    interval : (float, float) or None
    quad_points, quad_weights : ndarray
        Quadrature rule representing the continuous part; the weights
        already include the density, so sums against them approximate
        integrals against the continuous part.
    weighted_chi : ndarray or None
        Table W[i, s] = sqrt(M_s) chi_i(x_s), present when the atoms are
        the operator's own eigenvalues (it is then the sign-fixed
        eigenvector matrix).  Forward recurrence through a recessive
        regime can lose all relative accuracy at edge nodes of
        ill-conditioned chains, while this table is orthonormal by
        construction, so coefficient products at the atoms prefer it.
    """

    jacobi: JacobiOperator
    points: np.ndarray
    masses: np.ndarray
    weight: Callable[[np.ndarray], np.ndarray] | None = None
    interval: tuple[float, float] | None = None
    quad_points: np.ndarray | None = None
    quad_weights: np.ndarray | None = None
    weighted_chi: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        ms = np.asarray(self.masses, dtype=float)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", ms)
        if pts.shape != ms.shape:
            raise UsageError("points and masses differ in length")
        if len(pts) > 1 and not (np.diff(pts) > 0).all():
            raise UsageError("discrete points must be strictly increasing")
        if len(ms) and ms.min() < -1e-15:
            raise UsageError(f"negative mass {ms.min()} in discrete part")
        if (self.weight is None) != (self.quad_points is None):
            raise UsageError("continuous part needs both a weight and a quadrature rule")
        if self.quad_points is not None:
            qp = np.asarray(self.quad_points, dtype=float)
            qw = np.asarray(self.quad_weights, dtype=float)
            object.__setattr__(self, "quad_points", qp)
            object.__setattr__(self, "quad_weights", qw)
            qp.setflags(write=False)
            qw.setflags(write=False)
        if self.weighted_chi is not None:
            wc = np.asarray(self.weighted_chi, dtype=float)
            if wc.shape != (self.jacobi.size, len(pts)):
                raise UsageError(
                    f"weighted_chi has shape {wc.shape}, expected "
                    f"({self.jacobi.size}, {len(pts)})")
            object.__setattr__(self, "weighted_chi", wc)
            wc.setflags(write=False)
        pts.setflags(write=False)
        ms.setflags(write=False)

    @classmethod
    def discrete(cls, points, masses, jacobi: JacobiOperator) -> "SpectralMeasure":
        order = np.argsort(np.asarray(points, dtype=float))
        return cls(jacobi=jacobi,
                   points=np.asarray(points, dtype=float)[order],
                   masses=np.asarray(masses, dtype=float)[order])

    @classmethod
    def continuous(cls, weight, interval, quad_points, quad_weights,
                   jacobi: JacobiOperator) -> "SpectralMeasure":
        return cls(jacobi=jacobi,
                   points=np.empty(0), masses=np.empty(0),
                   weight=weight, interval=(float(interval[0]), float(interval[1])),
                   quad_points=quad_points, quad_weights=quad_weights)

    @property
    def kind(self) -> str:
        if self.weight is None:
            return "discrete"
        return "continuous" if len(self.points) == 0 else "mixed"

    @property
    def discrete_mass(self) -> float:
        return float(self.masses.sum()) if len(self.masses) else 0.0

    @property
    def continuous_mass(self) -> float:
        return float(self.quad_weights.sum()) if self.quad_weights is not None else 0.0

    @property
    def total_mass(self) -> float:
        return self.discrete_mass + self.continuous_mass

    def nodes_and_weights(self) -> tuple[np.ndarray, np.ndarray]:
        """All evaluation nodes with their masses/quadrature weights, in a
        fixed order (atoms first): the single interface dynamics needs."""
        if self.quad_points is None:
            return self.points, self.masses
        if len(self.points) == 0:
            return self.quad_points, self.quad_weights
        return (np.concatenate([self.points, self.quad_points]),
                np.concatenate([self.masses, self.quad_weights]))

    def moment(self, k: int) -> float:
        x, w = self.nodes_and_weights()
        return float(np.sum(w * x**k))

    def to_json_dict(self) -> dict:
        if self.kind == "discrete":
            return {"points": self.points.tolist(), "masses": self.masses.tolist()}
        out = {
            "kind": self.kind,
            "interval": list(self.interval),
            "quad_points": self.quad_points.tolist(),
            "quad_weights": self.quad_weights.tolist(),
        }
        if len(self.points):
            out["points"] = self.points.tolist()
            out["masses"] = self.masses.tolist()
        return out


def eigendecompose(j_op: JacobiOperator) -> SpectralMeasure:
    """Discrete orthogonality measure of a finite Jacobi operator.

    Eigenvalues of the symmetric tridiagonal matrix are the points; the
    mass at each point is the squared first component of the normalized
    eigenvector, renormalized so the masses sum to 1 exactly.  Points
    closer than 1e-12 of the spectral spread are merged (positive
    couplings give a simple spectrum in exact arithmetic, so clustering
    is purely numerical).

    The eigenvector matrix itself is kept on the measure (sign-fixed so
    row 0 is nonnegative) as ``weighted_chi``; a merge invalidates the
    column-to-atom mapping, so merged measures drop the table and fall
    back to recurrence evaluation.
    """
    b = np.asarray(j_op.b, dtype=float)
    e = np.asarray(j_op.j, dtype=float)
    if len(b) == 1:
        return SpectralMeasure(jacobi=j_op, points=b.copy(), masses=np.ones(1),
                               weighted_chi=np.ones((1, 1)))
    try:
        vals, vecs = scipy.linalg.eigh_tridiagonal(b, e)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise NumericError(f"tridiagonal eigensolver failed: {exc}") from exc
    sign = np.where(vecs[0, :] < 0, -1.0, 1.0)
    table = vecs * sign
    masses = table[0, :] ** 2
    masses = masses / masses.sum()
    points, masses = _merge_clustered(vals, masses)
    if len(points) != table.shape[1]:
        return SpectralMeasure.discrete(points, masses, j_op)
    return SpectralMeasure(jacobi=j_op, points=points, masses=masses,
                           weighted_chi=table)


def _merge_clustered(points: np.ndarray, masses: np.ndarray):
    spread = float(points[-1] - points[0])
    if spread == 0.0:
        return np.array([points[0]]), np.array([masses.sum()])
    tol = _CLUSTER_REL_TOL * spread
    gaps = np.diff(points)
    if (gaps >= tol).all():
        return points, masses
    out_p, out_m = [], []
    start = 0
    for k in range(1, len(points) + 1):
        if k == len(points) or points[k] - points[k - 1] >= tol:
            m = masses[start:k].sum()
            p = (points[start:k] * masses[start:k]).sum() / m if m > 0 else points[start:k].mean()
            out_p.append(p)
            out_m.append(m)
            start = k
    return np.array(out_p), np.array(out_m)


def _chi_recurrence(j_op: JacobiOperator, n: int, x: np.ndarray):
    """Scaled three-term recurrence: chi_i(x) = mant[i] * 2**expo[i].

    The pair (chi_i, chi_{i-1}) is renormalized by a power of two
    whenever it grows past 2**500, so arbitrarily high degrees never
    overflow; products chi_i * chi_j recombine exactly via ldexp.
    """
    if n < 0:
        raise UsageError(f"polynomial index {n} is negative")
    if n > j_op.size - 1:
        raise UsageError(
            f"polynomial index {n} needs {n + 1} recurrence rows, "
            f"operator has {j_op.size}"
        )
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    s = flat.shape[0]
    mant = np.empty((n + 1, s))
    expo = np.zeros((n + 1, s), dtype=np.int64)
    m_prev = np.ones(s)
    e = np.zeros(s, dtype=np.int64)
    mant[0] = m_prev
    if n >= 1:
        b, j = j_op.b, j_op.j
        m_curr = (flat - b[0]) / j[0]
        mant[1] = m_curr
        expo[1] = e
        for i in range(1, n):
            m_next = ((flat - b[i]) * m_curr - j[i - 1] * m_prev) / j[i]
            big = np.abs(m_next) > _RESCALE_LIMIT
            if big.any():
                _, ex = np.frexp(m_next[big])
                m_next[big] = np.ldexp(m_next[big], -ex)
                m_curr = m_curr.copy()
                m_curr[big] = np.ldexp(m_curr[big], -ex)
                e = e.copy()
                e[big] += ex
            m_prev, m_curr = m_curr, m_next
            mant[i + 1] = m_curr
            expo[i + 1] = e
    return mant, expo, x.shape


def evaluate_chi_scaled(j_op: JacobiOperator, i: int, x):
    """chi_i at x as (mantissa, exponent) with chi = mantissa * 2**exponent.

    Overflow-proof form for high degrees; exponents of products cancel in
    sums like sum_s M_s chi_i chi_j.
    """
    mant, expo, shape = _chi_recurrence(j_op, i, x)
    m, e = mant[i], expo[i]
    if shape == ():
        return float(m[0]), int(e[0])
    return m.reshape(shape), e.reshape(shape)


def evaluate_chi(j_op: JacobiOperator, i: int, x):
    """Orthonormal recurrence polynomial chi_i at x (scalar or array).

    chi_0 = 1 identically.  Values are produced from the scaled
    recurrence, so degrees whose raw values exceed the double range
    come back as inf only at the final recombination, never corrupting
    lower-degree results.
    """
    mant, expo, shape = _chi_recurrence(j_op, i, x)
    with np.errstate(over="ignore"):
        vals = np.ldexp(mant[i], expo[i].astype(np.int32, copy=False))
    return float(vals[0]) if shape == () else vals.reshape(shape)


def chi_table(j_op: JacobiOperator, n: int, x):
    """All chi_0..chi_n at the nodes x, shape (n+1, len(x))."""
    mant, expo, _ = _chi_recurrence(j_op, n, np.atleast_1d(x))
    with np.errstate(over="ignore"):
        return np.ldexp(mant, expo.astype(np.int32, copy=False))


def chi_table_scaled(j_op: JacobiOperator, n: int, x):
    """Scaled variant of :func:`chi_table`: (mantissas, exponents)."""
    mant, expo, _ = _chi_recurrence(j_op, n, np.atleast_1d(x))
    return mant, expo


@dataclass(frozen=True)
class PolynomialEvaluator:
    """Bound evaluator for the recurrence polynomials of one operator."""

    jacobi: JacobiOperator
    n_max: int | None = None

    def __post_init__(self):
        cap = self.jacobi.size - 1 if self.n_max is None else self.n_max
        if cap > self.jacobi.size - 1:
            raise UsageError(
                f"n_max {cap} exceeds operator capacity {self.jacobi.size - 1}")
        object.__setattr__(self, "n_max", cap)

    def chi(self, i: int, x):
        if i > self.n_max:
            raise UsageError(f"index {i} above evaluator cap {self.n_max}")
        return evaluate_chi(self.jacobi, i, x)

    def table(self, x, n: int | None = None):
        n = self.n_max if n is None else n
        if n > self.n_max:
            raise UsageError(f"index {n} above evaluator cap {self.n_max}")
        return chi_table(self.jacobi, n, x)


def evaluate_Q(rates: BirthDeathRates, i: int, x):
    """Karlin-McGregor polynomial Q_i at x (scalar or array).

    Q_{-1} = 0, Q_0 = 1 and

        lambda_j Q_{j+1}(x) = (lambda_j + mu_j - x) Q_j(x) - mu_j Q_{j-1}(x),

    which is the row-by-row statement of -x Q = A Q for the generator A.
    Q_i relates to the orthonormal family by
    chi_i = (-1)^i pi_i^{1/2} Q_i, and satisfies
    integral Q_i Q_j dmu = delta_ij / pi_i.
    """
    if i < 0:
        raise UsageError(f"polynomial index {i} is negative")
    rates.validate(i)
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    q_prev = np.zeros_like(flat)
    q_curr = np.ones_like(flat)
    for k in range(i):
        lam_k = rates.lambda_at(k)
        mu_k = rates.mu_at(k)
        q_next = ((lam_k + mu_k - flat) * q_curr - mu_k * q_prev) / lam_k
        q_prev, q_curr = q_curr, q_next
    return float(q_curr[0]) if x.shape == () else q_curr.reshape(x.shape)
