"""Named chains with closed-form spectral data.

Four families whose orthogonality measures are known exactly, so the
dynamics can be checked against special functions instead of another
eigensolve:

  * meixner      - linear rates, negative-binomial measure on 0,1,2,...
                   (perfect return with period 2 pi);
  * sc-c / sc-d  - Stieltjes-Carlitz polynomials, elliptic lattice
                   spectra, amplitudes cn / dn (perfect return, but no
                   classical birth-death counterpart: zero diagonal);
  * uniform      - constant couplings 1/2, Chebyshev-U weight on [-1,1]
                   (continuous spectrum, no return);
  * pst-demo     - finite chain with equispaced spectrum, end-to-end
                   perfect transfer (spectral folklore construction).

Semi-infinite discrete measures are truncated by excluded-mass rules
stated per constructor; the truncation always keeps enough sites that
the polynomial table reaches well past the degrees the test tolerances
are stated for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import EllipticContext, elliptic_context, jacobi_cn_dn
from .errors import ConfigurationError, DomainError, UsageError
from .jacobi_core import BirthDeathRates, JacobiOperator, symmetrize
from .return_analysis import detect_lattice
from .spectral import SpectralMeasure, chi_table, eigendecompose

__all__ = [
    "MeixnerFamily",
    "StieltjesCarlitzFamily",
    "EllipticContext",
    "FamilyBuild",
    "meixner_chain",
    "stieltjes_carlitz_chain",
    "uniform_chain",
    "pst_demo_chain",
    "elliptic_context",
    "jacobi_cn_dn",
    "fitted_omega",
    "family_schemas",
    "build_from_spec",
    "FAMILY_NAMES",
]

FAMILY_NAMES = ("custom", "meixner", "sc-c", "sc-d", "uniform", "pst-demo")

_MEIXNER_SITE_CAP = 100_000
_SC_S_CAP = 10_000
_SC_MIN_HALF_SUPPORT = 12

# Defaults size truncations so return amplitudes and the polynomial
# Gram are accurate beyond site 0: the excluded tail of
# sum_s M_s chi_i(x_s)^2 grows with i (chi_i is a degree-i polynomial),
# so the support is extended until the deficit stays below the
# tolerance for every site up to the probe order.
_SITE_PROBE_ORDER = 10
_SITE_TAIL_TOL = 1e-10


@dataclass(frozen=True)
class MeixnerFamily:
    """Parameters of the linear-rate chain: beta > 0, 0 < c < 1."""

    beta: float
    c: float

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError(f"beta = {self.beta} must be positive")
        if not 0.0 < self.c < 1.0:
            raise DomainError(f"c = {self.c} outside (0, 1)")

    def rates(self) -> BirthDeathRates:
        beta, c = self.beta, self.c
        return BirthDeathRates(
            lam=lambda i: c * (i + beta) / (1.0 - c),
            mu=lambda i: i / (1.0 - c),
        )


@dataclass(frozen=True)
class StieltjesCarlitzFamily:
    """Variant C or D at a fixed elliptic context.

    Couplings (diagonal is zero):
      C: J_n = k n for even n, n for odd n;
      D: J_n = n for even n, k n for odd n.
    """

    variant: str
    context: EllipticContext

    def __post_init__(self):
        if self.variant not in ("C", "D"):
            raise DomainError(f"variant {self.variant!r} must be 'C' or 'D'")

    def coupling(self, n: int) -> float:
        k = self.context.k
        if self.variant == "C":
            return k * n if n % 2 == 0 else float(n)
        return float(n) if n % 2 == 0 else k * n


def _negative_binomial(beta: float, c: float, n: int | None,
                       tail_tol: float, cap: int):
    """Masses M_s = (1-c)^beta (beta)_s c^s / s! for s = 0..S, with the
    excluded tail bounded below tail_tol.  Returns (masses, tail_bound)."""
    masses = [(1.0 - c) ** beta]
    s = 0
    while True:
        m_next = masses[-1] * c * (beta + s) / (s + 1)
        ratio_bound = max(c, c * (beta + s + 1) / (s + 2))
        tail = m_next / (1.0 - ratio_bound) if ratio_bound < 1.0 else math.inf
        if n is None:
            if tail < tail_tol:
                return np.array(masses), tail
            if s + 1 > cap:
                raise ConfigurationError(
                    f"negative-binomial tail still {tail:.3e} at {cap} sites; "
                    "raise the site cap or loosen tail_tol"
                )
        elif s + 1 > n:
            if tail >= tail_tol:
                raise ConfigurationError(
                    f"truncation n = {n} leaves tail mass <= {tail:.3e} "
                    f">= {tail_tol}; increase n"
                )
            return np.array(masses), tail
        masses.append(m_next)
        s += 1


def _nb_tail_bound(masses: np.ndarray, beta: float, c: float) -> float:
    s = len(masses) - 1
    m_next = masses[-1] * c * (beta + s) / (s + 1)
    ratio_bound = max(c, c * (beta + s + 1) / (s + 2))
    return m_next / (1.0 - ratio_bound) if ratio_bound < 1.0 else math.inf


def _nb_extend(masses: np.ndarray, beta: float, c: float, extra: int) -> np.ndarray:
    out = list(masses)
    s = len(out) - 1
    for _ in range(extra):
        out.append(out[-1] * c * (beta + s) / (s + 1))
        s += 1
    return np.array(out)


def _site_weighted_deficit(probe: JacobiOperator, points: np.ndarray,
                           masses: np.ndarray, order: int) -> float:
    """max over i <= order of the deficit 1 - sum_s M_s chi_i(x_s)^2.

    Over the full (untruncated) support that sum is 1 exactly, so the
    partial sum itself measures how much chi_i^2-weighted mass the
    truncation dropped."""
    table = chi_table(probe, order, points)
    partial = (table**2) @ masses
    return float(np.max(1.0 - partial))


def meixner_chain(beta: float, c: float, n: int | None = None,
                  tail_tol: float = 1e-12) -> tuple[BirthDeathRates, JacobiOperator, SpectralMeasure]:
    """Linear-rate chain lambda_i = c(i+beta)/(1-c), mu_i = i/(1-c).

    The orthogonality measure is the negative binomial distribution on
    the integers s = 0, 1, 2, ...; the chain is truncated at the
    smallest support (or the given n) whose excluded mass is below
    ``tail_tol``.  Without an explicit n the support is then extended
    until the chi_i^2-weighted tail is also below 1e-10 for sites
    i <= 10, so return amplitudes and the polynomial Gram stay accurate
    away from site 0 (the plain mass rule alone leaves site-5
    amplitudes off by ~1e-2).
    Masses are NOT renormalized: their deficit from 1 is exactly the
    documented tail.

    Returns (rates, J, measure); J is the principal submatrix of the
    semi-infinite operator (absorbing-tail convention), sized to the
    measure support.
    """
    fam = MeixnerFamily(beta=beta, c=c)
    masses, tail = _negative_binomial(beta, c, n, tail_tol, _MEIXNER_SITE_CAP)
    rates = fam.rates()
    if n is None:
        probe = symmetrize(rates, _SITE_PROBE_ORDER, boundary="absorbing-tail")
        while _site_weighted_deficit(probe, np.arange(len(masses), dtype=float),
                                     masses, _SITE_PROBE_ORDER) > _SITE_TAIL_TOL:
            if 2 * len(masses) > _MEIXNER_SITE_CAP:
                raise ConfigurationError(
                    f"site-weighted tail still above {_SITE_TAIL_TOL} at "
                    f"{len(masses)} sites; cap {_MEIXNER_SITE_CAP} reached")
            masses = _nb_extend(masses, beta, c, len(masses))
        tail = _nb_tail_bound(masses, beta, c)
    j_op = symmetrize(rates, len(masses) - 1, boundary="absorbing-tail")
    measure = SpectralMeasure.discrete(np.arange(len(masses), dtype=float), masses, j_op)
    return rates, j_op, measure


def _sc_half_support(q: float, offset: float, tail_tol: float) -> int:
    """Smallest S with two-sided excluded mass (relative) below tail_tol;
    one-sided raw weights are ~ q^{s+offset}."""
    total = 0.0
    s = 0
    while True:
        total += 2.0 / (q ** (s + offset) + q ** (-(s + offset)))
        tail = 2.0 * q ** (s + 1 + offset) / (1.0 - q)
        if tail / total < tail_tol:
            return s + 1
        s += 1
        if s > _SC_S_CAP:
            raise ConfigurationError(
                f"spectral tail still {tail:.3e} at |s| = {_SC_S_CAP}; nome q = {q}"
            )


def stieltjes_carlitz_chain(variant: str, k: float, s_max: int | None = None,
                            tail_tol: float = 1e-12) -> tuple[JacobiOperator, SpectralMeasure]:
    """Stieltjes-Carlitz chain of variant "C" or "D" at modulus k.

    The spectrum is an elliptic lattice, symmetric about 0:
      C: tau_s = (pi/2K)(2s+1) for s = -s_max..s_max-1, masses
         eta_C / (q^{s+1/2} + q^{-s-1/2});
      D: tau_s = pi s / K for s = -s_max..s_max, masses
         eta_D / (q^s + q^{-s}).
    eta is fixed numerically so the truncated masses sum to 1 exactly;
    s_max defaults to the excluded-mass rule (< tail_tol) with a floor
    that keeps the polynomial table usable to degree ~20, then grows
    until the chi_i^2-weighted tail for sites i <= 10 is below 1e-10
    (the weights only decay like q^|s|, which at large modulus is too
    slow for the plain mass rule to cover excited sites).
    """
    variant = variant.upper()
    ctx = elliptic_context(k)
    fam = StieltjesCarlitzFamily(variant=variant, context=ctx)
    q = ctx.q
    offset = 0.5 if variant == "C" else 0.0
    explicit = s_max is not None
    if s_max is None:
        s_max = max(_sc_half_support(q, offset, tail_tol), _SC_MIN_HALF_SUPPORT)
    if s_max < 1:
        raise UsageError(f"s_max = {s_max} must be >= 1")

    def support(half):
        if variant == "C":
            s_range = np.arange(-half, half)
            pts = (math.pi / (2.0 * ctx.K)) * (2.0 * s_range + 1.0)
            raw = 1.0 / (q ** (s_range + 0.5) + q ** (-(s_range + 0.5)))
        else:
            s_range = np.arange(-half, half + 1)
            pts = (math.pi / ctx.K) * s_range
            raw = 1.0 / (q ** s_range.astype(float) + q ** (-s_range.astype(float)))
        return pts, raw / raw.sum()

    points, masses = support(s_max)
    if not explicit:
        probe = JacobiOperator(
            b=np.zeros(_SITE_PROBE_ORDER + 1),
            j=np.array([fam.coupling(i) for i in range(1, _SITE_PROBE_ORDER + 1)]))
        while _site_weighted_deficit(probe, points, masses,
                                     _SITE_PROBE_ORDER) > _SITE_TAIL_TOL:
            if 2 * s_max > _SC_S_CAP:
                raise ConfigurationError(
                    f"site-weighted tail still above {_SITE_TAIL_TOL} at "
                    f"s_max = {s_max}; cap {_SC_S_CAP} reached")
            s_max *= 2
            points, masses = support(s_max)
    asym = np.max(np.abs(points + points[::-1]))
    if asym > 1e-12 * points.max():
        raise UsageError(f"truncated spectral support is asymmetric by {asym}")
    size = len(points)
    j_op = JacobiOperator(b=np.zeros(size),
                          j=np.array([fam.coupling(i) for i in range(1, size)]))
    measure = SpectralMeasure.discrete(points, masses, j_op)
    return j_op, measure


def fitted_omega(variant: str, context: EllipticContext,
                 measure: SpectralMeasure) -> float:
    """Frequency scale matching the measure lattice to cn/dn.

    cn's fundamental frequency is pi/2K (odd lattice), dn's is pi/K;
    the fitted omega is the ratio of the measured fundamental to those,
    so the amplitude equals cn(omega t) resp. dn(omega t).  The
    construction above makes omega = 1 up to lattice-fit roundoff; the
    value is computed from the spectrum, not assumed.
    """
    variant = variant.upper()
    pts = measure.points
    if variant == "C":
        positive = pts[pts > 0]
        if len(positive) == 0:
            raise UsageError("no positive spectrum points to fit omega")
        return float(positive.min() / (math.pi / (2.0 * context.K)))
    if variant == "D":
        verdict = detect_lattice(pts, masses=measure.masses)
        if verdict.kind != "Perfect":
            raise UsageError(f"variant-D spectrum not a lattice: {verdict.kind}")
        delta = 2.0 * math.pi / verdict.t0
        return float(delta / (math.pi / context.K))
    raise DomainError(f"variant {variant!r} must be 'C' or 'D'")


def uniform_chain(n: int | None = None, quad_order: int = 256
                  ) -> tuple[JacobiOperator, SpectralMeasure]:
    """Chain with B_i = 0, J_i = 1/2 (one-excitation XX chain with
    constant couplings).

    With ``n`` given, returns the (n+1)-site truncation and its discrete
    measure (eigenvalues cos(pi k/(n+2))).  Without ``n``, returns the
    semi-infinite chain's continuous measure (2/pi) sqrt(1-x^2) on
    [-1, 1] under a Gauss quadrature of order ``quad_order``, with the
    operator sized to the quadrature so high-degree polynomials remain
    evaluable.
    """
    if n is not None:
        if n < 1:
            raise UsageError(f"truncation order {n} must be >= 1")
        j_op = JacobiOperator(b=np.zeros(n + 1), j=np.full(n, 0.5))
        return j_op, eigendecompose(j_op)
    m = int(quad_order)
    if m < 2:
        raise UsageError(f"quadrature order {m} must be >= 2")
    j_op = JacobiOperator(b=np.zeros(m), j=np.full(m - 1, 0.5))
    idx = np.arange(1, m + 1, dtype=float)
    nodes = np.cos(idx * math.pi / (m + 1))[::-1].copy()
    weights = (2.0 / (m + 1)) * np.sin(idx * math.pi / (m + 1))[::-1] ** 2
    measure = SpectralMeasure.continuous(
        weight=lambda x: (2.0 / math.pi) * np.sqrt(np.clip(1.0 - x * x, 0.0, None)),
        interval=(-1.0, 1.0),
        quad_points=nodes,
        quad_weights=weights,
        jacobi=j_op,
    )
    return j_op, measure


def pst_demo_chain(n: int = 10) -> JacobiOperator:
    """Finite chain with perfect end-to-end transfer, n sites.

    Couplings J_i = (1/2) sqrt(i (n - i)) give the equispaced spectrum
    {-(n-1)/2, ..., (n-1)/2}; transfer time T = pi, return at 2T.
    """
    if n < 2:
        raise UsageError(f"transfer needs at least 2 sites, got {n}")
    i = np.arange(1, n, dtype=float)
    return JacobiOperator(b=np.zeros(n), j=0.5 * np.sqrt(i * (n - i)))


@dataclass(frozen=True)
class FamilyBuild:
    """A constructed chain plus everything the CLI needs to run it."""

    family: str
    jacobi: JacobiOperator
    measure: SpectralMeasure
    rates: BirthDeathRates | None = None
    info: dict | None = None


def family_schemas() -> dict:
    """Parameter schema per family name, machine-readable."""
    return {
        "custom": {
            "params": {
                "lambdas": {"type": "list[float]", "required": True,
                            "range": "lambda_i > 0, last entry 0 or omitted"},
                "mus": {"type": "list[float]", "required": True,
                        "range": "mu_0 >= 0, mu_i > 0 for i >= 1"},
            },
            "notes": "finite birth-death chain used as given (reflecting truncation)",
        },
        "meixner": {
            "params": {
                "beta": {"type": "float", "required": True, "range": "beta > 0"},
                "c": {"type": "float", "required": True, "range": "0 < c < 1"},
                "n": {"type": "int", "required": False,
                      "range": "truncation support; default: excluded mass < 1e-12"},
            },
            "notes": "linear rates; negative-binomial spectrum; perfect return at 2*pi",
        },
        "sc-c": {
            "params": {
                "k": {"type": "float", "required": True, "range": "0 < k < 1"},
                "s_max": {"type": "int", "required": False,
                          "range": "half support; default: excluded mass < 1e-12"},
            },
            "notes": "elliptic odd lattice; amplitude cn(t; k); no classical counterpart",
        },
        "sc-d": {
            "params": {
                "k": {"type": "float", "required": True, "range": "0 < k < 1"},
                "s_max": {"type": "int", "required": False,
                          "range": "half support; default: excluded mass < 1e-12"},
            },
            "notes": "elliptic integer lattice; amplitude dn(t; k); no classical counterpart",
        },
        "uniform": {
            "params": {
                "n": {"type": "int", "required": False,
                      "range": "n >= 1 for a finite truncation; omit for continuous measure"},
                "quad_order": {"type": "int", "required": False,
                               "range": ">= 2, default 256 (continuous mode)"},
            },
            "notes": "constant couplings 1/2; Chebyshev-U measure; no return",
        },
        "pst-demo": {
            "params": {
                "n": {"type": "int", "required": False, "range": "sites >= 2, default 10"},
            },
            "notes": "equispaced spectrum; perfect transfer at pi, return at 2*pi",
        },
    }


def _need(spec: dict, key: str, family: str):
    if key not in spec:
        raise UsageError(f"family '{family}' needs field '{key}'")
    return spec[key]


def build_from_spec(spec: dict) -> FamilyBuild:
    """Construct a chain from a JSON-style spec dict.

    The spec must carry "family" plus the parameters listed by
    :func:`family_schemas`; errors name the offending field.
    """
    if not isinstance(spec, dict):
        raise UsageError("chain spec must be a JSON object")
    family = spec.get("family")
    if family not in FAMILY_NAMES:
        raise UsageError(
            f"field 'family' is {family!r}, expected one of {', '.join(FAMILY_NAMES)}")
    known = {"family"} | set(family_schemas()[family]["params"])
    for key in spec:
        if key not in known:
            raise UsageError(f"unknown field '{key}' for family '{family}'")
    if family == "custom":
        lambdas = _need(spec, "lambdas", family)
        mus = _need(spec, "mus", family)
        try:
            rates = BirthDeathRates.from_arrays(lambdas, mus)
        except DomainError as exc:
            raise UsageError(f"field 'lambdas'/'mus': {exc}") from exc
        j_op = symmetrize(rates)
        measure = eigendecompose(j_op)
        return FamilyBuild(family=family, jacobi=j_op, measure=measure, rates=rates,
                           info={"sites": j_op.size})
    if family == "meixner":
        n = spec.get("n")
        rates, j_op, measure = meixner_chain(
            float(_need(spec, "beta", family)), float(_need(spec, "c", family)),
            n=None if n is None else int(n))
        tail = 1.0 - measure.masses.sum()
        return FamilyBuild(family=family, jacobi=j_op, measure=measure, rates=rates,
                           info={"sites": j_op.size, "tail_mass": tail})
    if family in ("sc-c", "sc-d"):
        variant = "C" if family == "sc-c" else "D"
        k = float(_need(spec, "k", family))
        s_max = spec.get("s_max")
        j_op, measure = stieltjes_carlitz_chain(
            variant, k, s_max=None if s_max is None else int(s_max))
        ctx = elliptic_context(k)
        return FamilyBuild(
            family=family, jacobi=j_op, measure=measure, rates=None,
            info={
                "sites": j_op.size,
                "atoms": len(measure.points),
                "omega_fitted": fitted_omega(variant, ctx, measure),
                "nome_q": ctx.q,
            })
    if family == "uniform":
        n = spec.get("n")
        j_op, measure = uniform_chain(n=None if n is None else int(n),
                                      quad_order=int(spec.get("quad_order", 256)))
        return FamilyBuild(family=family, jacobi=j_op, measure=measure, rates=None,
                           info={"sites": j_op.size, "measure_kind": measure.kind})
    n = int(spec.get("n", 10))
    j_op = pst_demo_chain(n)
    return FamilyBuild(family="pst-demo", jacobi=j_op, measure=eigendecompose(j_op),
                       rates=None, info={"sites": n, "transfer_time": math.pi})
