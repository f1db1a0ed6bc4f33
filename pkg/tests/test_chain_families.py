"""Named chain families: construction, measures, closed-form checks.

scipy.special supplies the elliptic oracles (ellipk, ellipj); the
in-repo evaluations must match them well below the stated tolerances.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special

from spectral_walk import (
    ConfigurationError,
    DomainError,
    UsageError,
    bessel_j1,
    build_from_spec,
    characteristic,
    chi_table,
    classify_return,
    eigendecompose,
    elliptic_context,
    family_schemas,
    fitted_omega,
    jacobi_cn_dn,
    meixner_chain,
    pst_demo_chain,
    quantum_amplitude,
    rates_of,
    stieltjes_carlitz_chain,
    uniform_chain,
)


# == Meixner ====================================================================

def test_meixner_rates_are_linear():
    rates, _, _ = meixner_chain(beta=2.0, c=0.5)
    for i in range(6):
        assert rates.lam(i) == pytest.approx(0.5 * (i + 2.0) / 0.5)
        assert rates.mu(i) == pytest.approx(i / 0.5)


def test_meixner_masses_are_negative_binomial():
    _, _, measure = meixner_chain(beta=1.0, c=0.25)
    # beta = 1: geometric distribution (1-c) c^s
    s = np.arange(len(measure.points))
    assert measure.masses == pytest.approx(list(0.75 * 0.25**s), rel=1e-14)
    assert measure.points == pytest.approx(list(s.astype(float)))


def test_meixner_mass_deficit_is_documented_tail():
    _, _, measure = meixner_chain(beta=0.5, c=0.8)
    deficit = 1.0 - measure.total_mass
    assert 0.0 <= deficit < 1e-12


def test_meixner_orthonormality():
    _, j_op, measure = meixner_chain(beta=2.5, c=0.5)
    table = chi_table(j_op, 10, measure.points)
    gram = (table * measure.masses) @ table.T
    assert np.max(np.abs(gram - np.eye(11))) < 1e-10


def test_meixner_characteristic_closed_form():
    for beta, c in [(1.0, 0.25), (2.5, 0.5), (0.5, 0.8)]:
        _, _, measure = meixner_chain(beta=beta, c=c)
        t = np.linspace(0.0, 4 * math.pi, 257)
        F = characteristic(measure, t)
        closed = ((1 - c) / (1 - c * np.exp(1j * t))) ** beta
        tail = 1.0 - measure.total_mass
        assert np.max(np.abs(F - closed)) <= 1e-10 + tail


def test_meixner_explicit_n_respected_and_checked():
    _, _, measure = meixner_chain(beta=1.0, c=0.25, n=30)
    assert len(measure.points) == 31
    with pytest.raises(ConfigurationError, match="tail"):
        meixner_chain(beta=1.0, c=0.25, n=3)


def test_meixner_rejects_bad_parameters():
    with pytest.raises(DomainError, match="beta"):
        meixner_chain(beta=0.0, c=0.5)
    with pytest.raises(DomainError, match="c ="):
        meixner_chain(beta=1.0, c=1.0)


def test_meixner_truncation_moments_converged():
    # first moments at the default truncation and at twice the support
    # agree: the tail rule leaves nothing that moves low moments
    rates, _, m1 = meixner_chain(beta=1.5, c=0.4)
    n2 = 2 * len(m1.points) - 1
    _, _, m2 = meixner_chain(beta=1.5, c=0.4, n=n2)
    for k in range(6):
        assert abs(m1.moment(k) - m2.moment(k)) < 1e-8


# == elliptic context and cn/dn ==================================================

def test_K_against_quadrature():
    for k in (0.1, 0.5, 0.9):
        ctx = elliptic_context(k)
        ref, err = scipy.integrate.quad(
            lambda th: 1.0 / math.sqrt(1.0 - (k * math.sin(th)) ** 2),
            0.0, math.pi / 2, epsabs=1e-13, epsrel=1e-13)
        assert abs(ctx.K - ref) < 1e-12


def test_K_against_scipy_and_limits():
    for k in (0.05, 0.3, 0.7, 0.99):
        ctx = elliptic_context(k)
        assert ctx.K == pytest.approx(scipy.special.ellipk(k * k), rel=1e-14)
        assert ctx.Kprime == pytest.approx(scipy.special.ellipk(1 - k * k), rel=1e-14)
    assert elliptic_context(1e-10).K == pytest.approx(math.pi / 2, rel=1e-9)


def test_K_increasing_in_k():
    ks = np.linspace(0.05, 0.95, 10)
    vals = [elliptic_context(k).K for k in ks]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_nome_special_value():
    # k = k' = 1/sqrt(2) gives K = K', hence q = e^{-pi}
    ctx = elliptic_context(1.0 / math.sqrt(2.0))
    assert ctx.q == pytest.approx(math.exp(-math.pi), rel=1e-14)


def test_context_rejects_bad_modulus():
    for k in (0.0, 1.0, -0.3, 1.7):
        with pytest.raises(DomainError):
            elliptic_context(k)


def test_cn_dn_against_scipy():
    for k in (0.2, 0.5, 0.9):
        ctx = elliptic_context(k)
        u = np.linspace(-3 * ctx.K, 3 * ctx.K, 401)
        _, cn_ref, dn_ref, _ = scipy.special.ellipj(u, k * k)
        cn, dn = jacobi_cn_dn(u, ctx)
        assert np.max(np.abs(cn - cn_ref)) < 1e-12
        assert np.max(np.abs(dn - dn_ref)) < 1e-12


def test_cn_dn_periodicity():
    ctx = elliptic_context(0.6)
    u = np.linspace(0.0, 2 * ctx.K, 51)
    cn1, dn1 = jacobi_cn_dn(u, ctx)
    cn2, dn2 = jacobi_cn_dn(u + 4 * ctx.K, ctx)
    _, dn3 = jacobi_cn_dn(u + 2 * ctx.K, ctx)
    assert cn2 == pytest.approx(list(cn1), abs=1e-12)
    assert dn3 == pytest.approx(list(dn1), abs=1e-12)


def test_cn_dn_small_modulus_series_branch():
    ctx = elliptic_context(1e-7)
    u = np.linspace(0.0, 6.0, 25)
    cn, dn = jacobi_cn_dn(u, ctx)
    assert cn == pytest.approx(list(np.cos(u)), abs=1e-12)
    assert dn == pytest.approx(list(np.ones_like(u)), abs=1e-12)


# == Stieltjes-Carlitz ===========================================================

def test_sc_coupling_parity_law():
    ctx = elliptic_context(0.4)
    from spectral_walk import StieltjesCarlitzFamily
    fam_c = StieltjesCarlitzFamily(variant="C", context=ctx)
    fam_d = StieltjesCarlitzFamily(variant="D", context=ctx)
    for n in range(1, 9):
        if n % 2 == 0:
            assert fam_c.coupling(n) == pytest.approx(0.4 * n)
            assert fam_d.coupling(n) == pytest.approx(float(n))
        else:
            assert fam_c.coupling(n) == pytest.approx(float(n))
            assert fam_d.coupling(n) == pytest.approx(0.4 * n)


def test_sc_atoms_and_mass():
    for variant, k in (("C", 0.3), ("D", 0.7)):
        j_op, measure = stieltjes_carlitz_chain(variant, k)
        ctx = elliptic_context(k)
        assert abs(measure.total_mass - 1.0) < 1e-14
        gaps = np.diff(measure.points)
        assert gaps == pytest.approx([math.pi / ctx.K] * len(gaps), rel=1e-12)
        if variant == "D":
            assert 0.0 in measure.points
        else:
            assert np.min(np.abs(measure.points)) == pytest.approx(
                math.pi / (2 * ctx.K), rel=1e-12)


def test_sc_orthonormality_to_degree_10():
    for variant, k in (("C", 0.5), ("D", 0.5)):
        j_op, measure = stieltjes_carlitz_chain(variant, k)
        table = chi_table(j_op, 10, measure.points)
        gram = (table * measure.masses) @ table.T
        assert np.max(np.abs(gram - np.eye(11))) < 1e-8


def test_sc_amplitude_matches_cn_dn_with_fitted_omega():
    for k in (0.3, 0.7):
        ctx = elliptic_context(k)
        t = np.linspace(0.0, 4 * ctx.K, 257)
        j_c, m_c = stieltjes_carlitz_chain("C", k)
        omega_c = fitted_omega("C", ctx, m_c)
        f_c = quantum_amplitude(m_c, 0, 0, t)
        cn, _ = jacobi_cn_dn(omega_c * t, ctx)
        assert np.max(np.abs(f_c.values.real - cn)) < 1e-8
        assert np.max(np.abs(f_c.values.imag)) < 1e-8

        j_d, m_d = stieltjes_carlitz_chain("D", k)
        omega_d = fitted_omega("D", ctx, m_d)
        f_d = quantum_amplitude(m_d, 0, 0, t)
        _, dn = jacobi_cn_dn(omega_d * t, ctx)
        assert np.max(np.abs(f_d.values.real - dn)) < 1e-8
        assert np.max(np.abs(f_d.values.imag)) < 1e-8


def test_sc_classified_perfect():
    for variant in ("C", "D"):
        _, measure = stieltjes_carlitz_chain(variant, 0.55)
        verdict = classify_return(measure)
        assert verdict.kind == "Perfect"
        ctx = elliptic_context(0.55)
        assert verdict.t0 == pytest.approx(2 * ctx.K, rel=1e-9)


def test_sc_rejects_unknown_variant():
    with pytest.raises(DomainError, match="variant"):
        stieltjes_carlitz_chain("E", 0.5)


def test_sc_has_no_birth_death_rates():
    j_op, _ = stieltjes_carlitz_chain("C", 0.5)
    with pytest.raises(DomainError):
        rates_of(j_op)


# == uniform chain ================================================================

def test_uniform_continuous_weight_normalized():
    _, measure = uniform_chain()
    assert measure.kind == "continuous"
    assert abs(measure.continuous_mass - 1.0) < 1e-12
    assert measure.interval == (-1.0, 1.0)


def test_uniform_amplitude_bessel_law_short():
    _, measure = uniform_chain()
    t = np.linspace(0.5, 10.0, 39)
    f = quantum_amplitude(measure, 0, 0, t)
    assert np.max(np.abs(f.values - 2 * bessel_j1(t) / t)) < 1e-10


def test_uniform_truncated_eigenvalues():
    j_op, measure = uniform_chain(n=9)
    ks = np.arange(1, 11, dtype=float)
    expect = np.sort(np.cos(ks * math.pi / 11.0))
    assert measure.points == pytest.approx(list(expect), abs=1e-14)


def test_uniform_truncated_matches_continuous_at_short_times():
    _, cont = uniform_chain()
    _, disc = uniform_chain(n=60)
    t = np.linspace(0.0, 10.0, 41)
    fc = quantum_amplitude(cont, 0, 0, t)
    fd = quantum_amplitude(disc, 0, 0, t)
    assert np.max(np.abs(fc.values - fd.values)) < 1e-8


def test_uniform_rejects_degenerate_orders():
    with pytest.raises(UsageError):
        uniform_chain(n=0)
    with pytest.raises(UsageError):
        uniform_chain(quad_order=1)


def test_uniform_has_no_birth_death_rates():
    j_op, _ = uniform_chain(n=5)
    with pytest.raises(DomainError):
        rates_of(j_op)


# == perfect-transfer demo chain ===================================================

def test_pst_spectrum_is_equispaced():
    j_op = pst_demo_chain(10)
    measure = eigendecompose(j_op)
    expect = np.arange(10, dtype=float) - 4.5
    assert measure.points == pytest.approx(list(expect), abs=1e-10)


def test_pst_transfer_and_return():
    j_op = pst_demo_chain(10)
    measure = eigendecompose(j_op)
    f_end = quantum_amplitude(measure, 0, 9, np.array([math.pi]))
    assert abs(f_end.values[0]) > 1.0 - 1e-8
    f_ret = quantum_amplitude(measure, 0, 0, np.array([2 * math.pi]))
    assert abs(f_ret.values[0]) > 1.0 - 1e-8


def test_pst_two_sites():
    j_op = pst_demo_chain(2)
    assert j_op.j[0] == pytest.approx(0.5)
    measure = eigendecompose(j_op)
    f = quantum_amplitude(measure, 0, 1, np.array([math.pi]))
    assert abs(f.values[0]) == pytest.approx(1.0, abs=1e-12)


def test_pst_rejects_single_site():
    with pytest.raises(UsageError):
        pst_demo_chain(1)


# == build_from_spec and schemas ===================================================

def test_schemas_cover_all_families():
    schemas = family_schemas()
    assert set(schemas) == {"custom", "meixner", "sc-c", "sc-d", "uniform", "pst-demo"}
    for meta in schemas.values():
        assert "params" in meta and "notes" in meta


def test_build_custom():
    build = build_from_spec({"family": "custom",
                             "lambdas": [1.0], "mus": [0.0, 2.0]})
    assert build.family == "custom"
    assert build.rates is not None
    assert build.jacobi.size == 2
    assert build.info["sites"] == 2


def test_build_meixner_reports_tail():
    build = build_from_spec({"family": "meixner", "beta": 1.0, "c": 0.25})
    assert build.rates is not None
    assert 0.0 <= build.info["tail_mass"] < 1e-12


def test_build_sc_reports_fitted_omega():
    build = build_from_spec({"family": "sc-d", "k": 0.6})
    assert build.rates is None
    assert build.info["omega_fitted"] == pytest.approx(1.0, abs=1e-9)
    assert 0.0 < build.info["nome_q"] < 1.0


def test_build_uniform_modes():
    cont = build_from_spec({"family": "uniform"})
    assert cont.measure.kind == "continuous"
    disc = build_from_spec({"family": "uniform", "n": 12})
    assert disc.measure.kind == "discrete"
    assert disc.info["sites"] == 13


def test_build_pst():
    build = build_from_spec({"family": "pst-demo", "n": 6})
    assert build.info["transfer_time"] == pytest.approx(math.pi)


def test_build_rejects_unknown_family():
    with pytest.raises(UsageError, match="family"):
        build_from_spec({"family": "heisenberg"})


def test_build_rejects_missing_field():
    with pytest.raises(UsageError, match="beta"):
        build_from_spec({"family": "meixner", "c": 0.25})


def test_build_rejects_unknown_field():
    with pytest.raises(UsageError, match="gamma"):
        build_from_spec({"family": "meixner", "beta": 1.0, "c": 0.25, "gamma": 3})


def test_build_casts_json_floats_to_int_counts():
    build = build_from_spec({"family": "uniform", "n": 12.0})
    assert build.jacobi.size == 13
