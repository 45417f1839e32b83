import math

import pytest

from dyboltz.basis import SpectralField, project_null
from dyboltz.errors import EigenvalueLookupError
from dyboltz.kernel import KernelParams, QuadratureSpec, ratio_bounds
from dyboltz.spaces import W_SHIFT, NormSpec, modified_lambda, spectral_norm
from dyboltz.solver import (DelaySeries, EvolutionReport, FiniteModes,
                            S2DelaySeries, SobolevSeries, choose_c0,
                            classify_frontier, decay_check_thm12, evolve,
                            galerkin_truncate, rate1_certificate, rate1_check,
                            rate2_check, series_tail_classify,
                            weak_form_residual)

P1 = KernelParams(s=1.0)
P2 = KernelParams(s=2.0)
P4 = KernelParams(s=4.0)
QUAD = QuadratureSpec()


def _random_field(rng, count, nmax=20, lmax=20):
    coeffs = {}
    while len(coeffs) < count:
        n = int(rng.integers(0, nmax + 1))
        l = int(rng.integers(0, lmax + 1))
        m = int(rng.integers(-l, l + 1))
        coeffs[(n, l, m)] = complex(rng.normal(), rng.normal())
    return SpectralField(coeffs)


# ---------------------------------------------------------------------------
# evolution
# ---------------------------------------------------------------------------

def test_evolve_identity_at_zero(rng, table_factory):
    tab = table_factory(2.0, 20, 20)
    g = _random_field(rng, 20)
    gt = evolve(g, 0.0, tab)
    assert gt.coeffs == g.coeffs


def test_evolve_null_modes_unchanged(table_factory):
    tab = table_factory(2.0, 8, 8)
    g = SpectralField({(0, 0, 0): 1.0, (1, 0, 0): 2.0, (0, 1, -1): 1.5j})
    gt = evolve(g, 7.3, tab)
    assert gt.coeffs == g.coeffs


def test_evolve_single_mode_closed_form(table_factory):
    tab = table_factory(2.0, 8, 8)
    gt = evolve(SpectralField({(2, 0, 0): 1.0}), 1.0, tab)
    assert gt.amplitude((2, 0, 0)) == math.exp(-tab.lam(2, 0))


def test_evolve_requires_coverage(table_factory):
    tab = table_factory(2.0, 8, 8)
    with pytest.raises(EigenvalueLookupError):
        evolve(SpectralField({(9, 0, 0): 1.0}), 1.0, tab)
    with pytest.raises(ValueError):
        evolve(SpectralField({(2, 0, 0): 1.0}), -0.5, tab)


def test_semigroup_property(rng, table_factory):
    tab = table_factory(2.0, 20, 20)
    g = _random_field(rng, 30)
    a = evolve(evolve(g, 0.7, tab), 1.9, tab)
    b = evolve(g, 2.6, tab)
    for m in b.modes():
        assert abs(a.amplitude(m) - b.amplitude(m)) <= 1e-12 * abs(b.amplitude(m))


def test_null_conservation_exact(rng, table_factory):
    tab = table_factory(2.0, 20, 20)
    g = _random_field(rng, 30)
    gt = evolve(g, 3.1, tab)
    assert project_null(gt, "null").coeffs == project_null(g, "null").coeffs


def test_orthogonal_part_monotone_decay(rng, table_factory):
    tab = table_factory(2.0, 20, 20)
    g = _random_field(rng, 30)
    gap_entry = tab.lookup(2, 0)
    base = project_null(g, "orthogonal").l2_norm()
    prev = base
    for t in (0.2, 0.5, 1.0, 2.0, 4.0):
        cur = project_null(evolve(g, t, tab), "orthogonal").l2_norm()
        assert cur <= prev * (1.0 + 1e-15)
        assert cur <= math.exp(-(gap_entry.lam - gap_entry.err) * t) * base * (1 + 1e-12)
        prev = cur


def test_exact_decay_rate(table_factory):
    tab = table_factory(2.0, 8, 8)
    lam = tab.lam(2, 0)
    g = SpectralField({(2, 0, 0): 1.0})
    for t in (0.1, 1.0, 10.0):
        got = project_null(evolve(g, t, tab), "orthogonal").l2_norm()
        assert abs(got - math.exp(-lam * t)) <= 1e-12 * math.exp(-lam * t)


# ---------------------------------------------------------------------------
# Galerkin truncation
# ---------------------------------------------------------------------------

def test_truncation_examples():
    f = SpectralField({(0, 0, 0): 1.0, (2, 0, 0): 1.0, (0, 5, 0): 1.0})
    g = galerkin_truncate(f, 4)
    assert set(g.coeffs) == {(0, 0, 0), (2, 0, 0)}
    h = galerkin_truncate(f, 0)
    assert set(h.coeffs) == {(0, 0, 0)}
    gg = galerkin_truncate(g, 4)
    assert gg.coeffs == g.coeffs


def test_truncation_cauchy_in_dual_norm(table_factory):
    # delay-series data: successive truncation increments shrink in the dual norm
    tab = table_factory(1.0, 60, 0)
    tau = 1.2
    coeffs = {(n, 0, 0): math.exp(0.55 * tab.lam(n, 0)) / n for n in range(1, 61)}
    g0 = SpectralField(coeffs)
    t = 0.3
    gt = evolve(g0, t, tab)
    dual = NormSpec.domain_dual(tau)
    prev = None
    for N in (20, 40, 60, 80, 100):
        a = galerkin_truncate(gt, N)
        b = galerkin_truncate(gt, N + 20)
        diff = spectral_norm(b - a, dual, tab)
        if prev is not None:
            assert diff <= prev
        prev = diff


def test_uniqueness_functional_vanishes(rng, table_factory):
    # difference of two evolutions of the same data is identically zero,
    # and the dual-weighted test functional certifies it at machine precision
    tab = table_factory(2.0, 20, 20)
    g = _random_field(rng, 25)
    h = evolve(g, 1.3, tab) - evolve(g, 1.3, tab)
    tau = 0.8
    total = sum(math.exp(-2.0 * tau * modified_lambda(m.n, m.l, tab)) * abs(a) ** 2
                for m, a in h.coeffs.items())
    assert total == 0.0


# ---------------------------------------------------------------------------
# decay checks
# ---------------------------------------------------------------------------

def test_choose_c0_uses_shifted_ratio(table_factory):
    tab = table_factory(2.0, 30, 30)
    c_min = ratio_bounds(tab, shift=W_SHIFT).c_min
    assert choose_c0(tab, 2.0) == 0.5 * c_min  # (log W0)^0 = 1 at s = 2
    with pytest.raises(ValueError):
        choose_c0(tab, 1.0)  # s disagrees with the table kernel


def test_rate1_certificate_on_small_tables(table_factory):
    for s in (1.0, 2.0):
        rep = rate1_certificate(table_factory(s, 60, 60), s)
        assert rep.ok, rep


def test_rate1_single_mode_closed_form(table_factory):
    tab = table_factory(2.0, 30, 30)
    lam = tab.lam(2, 0)
    g = SpectralField({(2, 0, 0): 2.0})
    for t in (0.5, 1.0, 3.0):
        r = rate1_check(g, t, tab, 2.0)
        expect_lhs = (2 * 2 + 0 + W_SHIFT) ** (r.c0 * t) * math.exp(-lam * t) * 2.0
        assert abs(r.lhs - expect_lhs) < 1e-12 * expect_lhs
        assert r.holds
        assert r.rhs == math.exp(-0.5 * lam * t) * 2.0
        assert r.rhs_paper == math.exp(-lam * t) * 2.0


def test_rate1_null_data_vacuous(table_factory):
    tab = table_factory(2.0, 30, 30)
    r = rate1_check(SpectralField({(0, 0, 0): 3.0}), 1.0, tab, 2.0)
    assert r.lhs == 0.0 and r.holds


def test_rate1_random_fields_hold(rng, table_factory):
    tab = table_factory(1.0, 30, 30)
    for _ in range(25):
        g = _random_field(rng, 20, nmax=30, lmax=30)
        for t in (0.5, 2.0):
            assert rate1_check(g, t, tab, 1.0).holds


def test_rate1_rejects_bad_s(table_factory):
    tab = table_factory(4.0, 8, 8)
    with pytest.raises(ValueError):
        rate1_check(SpectralField({(2, 0, 0): 1.0}), 1.0, tab, 4.0)


def test_decay_check_thm12_single_mode_s2(table_factory):
    # pure gap-mode data: the quarter-rate variant holds once t exceeds
    # 2 t0/c0 (= 4 t0 log W / lambda_{2,0}); the half-rate variant never does
    # for this field since the certificate is exactly tight at (2,0)
    tab = table_factory(2.0, 60, 60)
    g = SpectralField({(2, 0, 0): 1.0})
    t0 = 0.01
    c0 = choose_c0(tab, 2.0)
    r = decay_check_thm12(g, t0, 5 * t0 / c0, tab, 2.0)
    assert r.holds_paper and not r.holds
    assert r.lhs <= r.rhs_paper
    r_early = decay_check_thm12(g, t0, 1.0 * t0 / c0, tab, 2.0)
    assert not r_early.holds_paper
    with pytest.raises(ValueError):
        decay_check_thm12(g, t0, 0.5 * t0 / c0, tab, 2.0)


def test_decay_check_null_data(table_factory):
    tab = table_factory(2.0, 30, 30)
    g = SpectralField({(0, 0, 0): 1.0, (0, 1, 1): 2.0})
    r = decay_check_thm12(g, 0.01, 5.0, tab, 2.0)
    assert r.lhs == 0.0 and r.holds and r.holds_paper


def test_rate2_k_zero_reduces_to_l2(rng, table_factory):
    tab = table_factory(1.0, 30, 30)
    g = _random_field(rng, 20, nmax=30, lmax=30)
    r = rate2_check(g, 1.5, 0.0, tab, 1.0)
    assert r.cs_empirical == 0.0 and r.holds
    gp = project_null(g, "orthogonal")
    assert abs(r.lhs - project_null(evolve(g, 1.5, tab), "orthogonal").l2_norm()) < 1e-12
    assert abs(r.rhs - math.exp(-tab.lam(2, 0) * 1.5) * gp.l2_norm()) < 1e-12


def test_rate2_single_mode_formula(table_factory):
    tab = table_factory(1.0, 30, 30)
    g = SpectralField({(2, 0, 0): 1.0})
    k, t, s = 2.0, 1.0, 1.0
    r = rate2_check(g, t, k, tab, s)
    W = 4.0 + W_SHIFT
    # lhs = W^(k/2) e^(-lam t); baseline = e^(-lam t); cs scales the log ratio
    expect = (0.5 * k * math.log(W)) / ((1.0 / t) ** (s / (2 - s)) * k ** (2 / (2 - s)))
    assert abs(r.cs_empirical - expect) < 1e-12
    assert r.holds
    # for this field the clamped constant grows with t (the log-ratio is
    # t-independent while the scale shrinks); budget still dominates
    r2 = rate2_check(g, 4.0, k, tab, s)
    assert r2.cs_empirical > r.cs_empirical and r2.holds


def test_rate2_budget_certifies_random_fields(rng, table_factory):
    tab = table_factory(1.0, 30, 30)
    for _ in range(20):
        g = _random_field(rng, 25, nmax=30, lmax=30)
        for t in (0.5, 2.0):
            for k in (1.0, 3.0):
                assert rate2_check(g, t, k, tab, 1.0).holds


def test_rate2_validation(table_factory):
    tab = table_factory(2.0, 8, 8)
    g = SpectralField({(2, 0, 0): 1.0})
    with pytest.raises(ValueError):
        rate2_check(g, 1.0, 1.0, tab, 2.0)  # s must be < 2
    with pytest.raises(ValueError):
        rate2_check(g, 0.0, 1.0, tab, 2.0)


# ---------------------------------------------------------------------------
# series classification
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def lam_s1_small():
    from dyboltz.kernel import radial_eigenvalues
    return radial_eigenvalues(2000, P1, QUAD)


def test_delay_series_verdicts(lam_s1_small):
    spec = DelaySeries(tau0=0.5, N=2000)
    assert series_tail_classify(spec, 0.25, NormSpec.l2(), P1, QUAD,
                                lam=lam_s1_small).classification == "divergent"
    assert series_tail_classify(spec, 1.0, NormSpec.l2(), P1, QUAD,
                                lam=lam_s1_small).classification == "convergent"


def test_series_spec_validation():
    with pytest.raises(ValueError):
        DelaySeries(tau0=0.0)
    with pytest.raises(ValueError):
        S2DelaySeries(N=1)
    with pytest.raises(ValueError):
        SobolevSeries(tau=-1.0)
    with pytest.raises(TypeError):
        series_tail_classify(FiniteModes(SpectralField({})), 1.0,
                             NormSpec.l2(), P1, QUAD)


def test_sobolev_series_verdicts():
    from dyboltz.kernel import radial_eigenvalues
    lam = radial_eigenvalues(2000, P4, QUAD)
    spec = SobolevSeries(tau=1.0, N=2000)
    a = series_tail_classify(spec, 1.0, NormSpec.shubin(1.0), P4, QUAD, lam=lam)
    b = series_tail_classify(spec, 1.0, NormSpec.shubin(2.0), P4, QUAD, lam=lam)
    assert a.classification == "convergent"
    assert b.classification == "divergent"


def test_frontier_monotone_small():
    from dyboltz.kernel import radial_eigenvalues
    lam = radial_eigenvalues(2000, P2, QUAD)
    spec = S2DelaySeries(N=2000)
    t1 = classify_frontier(spec, 1.0, P2, QUAD, lam=lam)
    t2 = classify_frontier(spec, 2.0, P2, QUAD, lam=lam)
    assert 0.0 < t1 < t2


def test_classifier_accepts_built_table(table_factory):
    # an eigenvalue table covering (n <= N, l = 0) works as the lambda source
    tab = table_factory(1.0, 400, 0)
    spec = DelaySeries(tau0=0.5, N=400)
    v = series_tail_classify(spec, 2.0, NormSpec.l2(), tab)
    assert v.classification == "convergent"
    with pytest.raises(EigenvalueLookupError):
        series_tail_classify(DelaySeries(tau0=0.5, N=500), 2.0, NormSpec.l2(), tab)


def test_verdict_evidence_fields(lam_s1_small):
    v = series_tail_classify(DelaySeries(tau0=0.5, N=2000), 1.0, NormSpec.l2(),
                             P1, QUAD, lam=lam_s1_small)
    assert len(v.log10_partial_sums) >= 8
    assert v.median_tail_ratio_log < 0.0
    d = v.to_json_dict()
    assert d["classification"] == "convergent"


# ---------------------------------------------------------------------------
# weak formulation
# ---------------------------------------------------------------------------

def test_weak_form_null_mode_exact(table_factory):
    tab = table_factory(2.0, 8, 8)
    g = SpectralField({(0, 0, 0): 1.0})
    assert weak_form_residual(g, [(0, 0, 0)], 2.0, tab) <= 1e-12


def test_weak_form_single_mode(table_factory):
    tab = table_factory(2.0, 8, 8)
    g = SpectralField({(2, 0, 0): 1.0})
    assert weak_form_residual(g, [(2, 0, 0)], 1.0, tab) <= 1e-10


def test_weak_form_extra_test_modes_no_effect(rng, table_factory):
    tab = table_factory(2.0, 20, 20)
    g = _random_field(rng, 10)
    base = weak_form_residual(g, list(g.modes())[:4], 1.7, tab)
    absent = [(19, 19, 0), (20, 5, -5)]
    again = weak_form_residual(g, list(g.modes())[:4] + absent, 1.7, tab)
    assert abs(base - again) < 1e-14


def test_weak_form_random_fields(rng, table_factory):
    tab = table_factory(2.0, 20, 20)
    for _ in range(20):
        g = _random_field(rng, 12)
        test_modes = list(g.modes())[:5]
        t = float(rng.uniform(0.1, 3.0))
        assert weak_form_residual(g, test_modes, t, tab) <= 1e-10


# ---------------------------------------------------------------------------
# evolution report
# ---------------------------------------------------------------------------

def test_report_rows_and_slope(table_factory):
    tab = table_factory(2.0, 8, 8)
    lam = tab.lam(2, 0)
    g = SpectralField({(2, 0, 0): 1.0})
    rep = EvolutionReport.compute(g, [0.0, 0.5, 1.0, 2.0], [NormSpec.l2()], tab)
    assert rep.values[0][0] == 1.0
    assert abs(rep.decay_slopes[0] + lam) < 1e-10
    rows = list(rep.rows())
    assert rows[0] == (0.0, "l2", 1.0)
    assert "time,norm,value" in rep.to_csv()
    assert rep.to_json().startswith("{")
    with pytest.raises(ValueError):
        EvolutionReport.compute(g, [0.0, 0.0], [NormSpec.l2()], tab)


def test_report_null_mode_constant(table_factory):
    tab = table_factory(2.0, 8, 8)
    g = SpectralField({(0, 1, 0): 2.0})
    rep = EvolutionReport.compute(g, [0.0, 1.0, 5.0], [NormSpec.l2()], tab)
    assert all(row[0] == 2.0 for row in rep.values)
