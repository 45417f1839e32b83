"""Named verification checks behind the CLI ``verify`` command.

Each check runs a fast, self-contained subset of the package's correctness
properties and returns a CheckResult with the measured value and the
threshold it was held to.  These are sized for interactive use (tables up
to 48x48, reduced mode ranges); the pytest acceptance suite runs the same
claims at full scale.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from importlib import resources

import numpy as np

from . import basis, kernel, solver, spaces, specfun

__all__ = ["CheckResult", "run_suite", "SUITES"]

GAP_CLOSED_FORM_S2 = (2.0 / 3.0) * (1.0 - 2.0 ** -1.5)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""

    def to_json_dict(self):
        d = asdict(self)
        d["passed"] = bool(self.passed)  # numpy bools are not JSON serializable
        d["measured"] = float(self.measured)
        d["threshold"] = float(self.threshold)
        return d


def _golden_rows():
    with resources.files("dyboltz.data").joinpath("golden_eigenvalues.csv").open() as fh:
        yield from csv.DictReader(fh)


def _bessel_j0(x: float) -> float:
    # power series; converges fast for |x| <= pi/2
    total, term = 1.0, 1.0
    for k in range(1, 40):
        term *= -(x * x) / (4.0 * k * k)
        total += term
        if abs(term) < 1e-18:
            break
    return total


# ---------------------------------------------------------------------------
# specfun
# ---------------------------------------------------------------------------

def check_legendre_bound(rng) -> CheckResult:
    worst = 0.0
    x = rng.uniform(-1.0, 1.0, size=200)
    for l in (10, 100, 1000, 10000):
        worst = max(worst, float(np.max(np.abs(specfun.legendre(l, x)))))
    return CheckResult("legendre_bound", worst <= 1.0 + 1e-12, worst, 1.0)


def check_legendre_orthogonality(rng) -> CheckResult:
    x, w = np.polynomial.legendre.leggauss(64)
    vals = specfun.legendre_all(20, x)
    gram = (vals * w) @ vals.T
    expect = np.diag([2.0 / (2 * l + 1) for l in range(21)])
    worst = float(np.max(np.abs(gram - expect)))
    return CheckResult("legendre_orthogonality", worst <= 1e-10, worst, 1e-10)


def check_sphere_orthonormality(rng) -> CheckResult:
    x, w = np.polynomial.legendre.leggauss(32)
    nphi = 32
    phi = 2 * math.pi * np.arange(nphi) / nphi
    modes = [(l, m) for l in range(11) for m in range(-l, l + 1)]
    Y = np.array([np.outer(specfun.assoc_legendre_norm(l, abs(m), x),
                           np.exp(1j * m * phi)).ravel() for l, m in modes])
    wflat = np.repeat(w, nphi) * (2 * math.pi / nphi)
    gram = (Y * wflat) @ Y.conj().T
    worst = float(np.max(np.abs(gram - np.eye(len(modes)))))
    return CheckResult("sphere_orthonormality", worst <= 1e-10, worst, 1e-10)


def check_scaled_gap_values(rng) -> CheckResult:
    a = abs(specfun.legendre_scaled_gap(1, math.pi / 2) - 4.0 / math.pi**2)
    b = abs(specfun.legendre_scaled_gap(500, 1.0) - (1.0 - _bessel_j0(1.0)))
    worst = max(a, b / 1e3)  # Mehler-Heine agreement is O(1/l); scale to one gate
    return CheckResult("scaled_gap_values", a <= 1e-12 and b <= 1e-3, worst, 1e-12,
                       detail=f"l=1 dev {a:.2e}; Mehler-Heine dev {b:.2e}")


def check_scaled_gap_bound(rng) -> CheckResult:
    thetas = np.linspace(math.pi / 2 / 100, math.pi / 2, 100)
    worst = max(float(np.max(specfun.legendre_scaled_gap(l, thetas)))
                for l in range(1, 51))
    return CheckResult("scaled_gap_uniform_bound", worst <= 0.5 + 1e-9, worst, 0.5)


def check_hermite_eigenrelation(rng) -> CheckResult:
    h = 1e-2
    offsets = np.arange(-3, 4)
    coeffs = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])
    x = rng.uniform(-3.0, 3.0, size=60)
    worst = 0.0
    for n in range(9):
        vals = np.array([specfun.hermite_osc(n, x + h * o) for o in offsets])
        d2 = coeffs @ vals / h**2
        center = specfun.hermite_osc(n, x)
        resid = np.abs(-d2 + 0.25 * x * x * center - (n + 0.5) * center)
        worst = max(worst, float(np.max(resid / np.maximum(1.0, np.abs(center)))))
    return CheckResult("hermite_eigenrelation", worst <= 1e-6, worst, 1e-6)


def check_laguerre_values(rng) -> CheckResult:
    worst = max(
        abs(specfun.laguerre(0, 0.5, 3.1) - 1.0),
        abs(specfun.laguerre(1, 0.5, 1.0) - 0.5),
        abs(specfun.laguerre(2, 0.5, 0.0) - 1.875),
    )
    return CheckResult("laguerre_values", worst <= 1e-12, worst, 1e-12)


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------

def check_null_exactness(rng) -> CheckResult:
    worst = 0.0
    for s in (0.5, 1.0, 2.0, 4.0):
        p = kernel.KernelParams(s=s)
        for n, l in kernel.NULL_MODES:
            worst = max(worst, abs(kernel.eigenvalue(n, l, p).lam))
    return CheckResult("null_exactness", worst <= 1e-12, worst, 1e-12)


def check_gap_closed_form(rng) -> CheckResult:
    lam = kernel.lambda_gap(kernel.KernelParams(s=2.0)).lam
    dev = abs(lam - GAP_CLOSED_FORM_S2)
    return CheckResult("gap_closed_form_s2", dev <= 1e-8, dev, 1e-8)


def check_gap_golden(rng) -> CheckResult:
    worst = 0.0
    for row in _golden_rows():
        p = kernel.KernelParams(s=float(row["s"]))
        lam = kernel.eigenvalue(int(row["n"]), int(row["l"]), p).lam
        worst = max(worst, abs(lam - float(row["lambda"])) / float(row["lambda"]))
    return CheckResult("eigenvalues_vs_golden", worst <= 1e-7, worst, 1e-7)


def _small_table(s: float) -> kernel.EigenvalueTable:
    return kernel.eigenvalue_table(48, 48, kernel.KernelParams(s=s))


def check_spectral_gap(rng, s: float) -> CheckResult:
    tab = _small_table(s)
    gap = tab.lam(2, 0)
    worst = min(e.lam - (gap - e.err) for k, e in tab.entries.items()
                if k[0] + k[1] >= 2)
    return CheckResult("spectral_gap_48", worst >= 0.0, worst, 0.0,
                       detail=f"s={s}, min margin over table(48,48)")


def check_ratio_interval(rng, s: float) -> CheckResult:
    rb = kernel.ratio_bounds(_small_table(s))
    ratio = rb.c_max / rb.c_min
    return CheckResult("ratio_interval_48", rb.c_min > 0.0 and ratio <= 50.0,
                       ratio, 50.0, detail=f"s={s}, c_min={rb.c_min:.5g}")


def check_table_determinism(rng) -> CheckResult:
    p = kernel.KernelParams(s=1.0)
    a = kernel.eigenvalue_table(10, 10, p)
    b = kernel.eigenvalue_table(10, 10, p)
    same = all(a.entries[k].lam == b.entries[k].lam for k in a.entries)
    return CheckResult("table_determinism", same, float(same), 1.0)


# ---------------------------------------------------------------------------
# basis
# ---------------------------------------------------------------------------

def check_orthonormality(rng) -> CheckResult:
    dev = basis.orthonormality_max_deviation(6, 6)
    return CheckResult("basis_orthonormality_6", dev <= 1e-8, dev, 1e-8)


def check_ground_mode(rng) -> CheckResult:
    pts = rng.normal(scale=1.5, size=(50, 3))
    r2 = np.einsum("ij,ij->i", pts, pts)
    expect = (2 * math.pi) ** -0.75 * np.exp(-0.25 * r2)
    dev = float(np.max(np.abs(basis.eval_phi((0, 0, 0), pts) - expect)))
    return CheckResult("phi000_is_sqrt_maxwellian", dev <= 1e-12, dev, 1e-12)


def check_fourier_ground(rng) -> CheckResult:
    a = abs(basis.fourier_sqrtmu_phi((0, 0, 0), [0.0, 0.0, 0.0]) - 1.0)
    b = abs(basis.fourier_sqrtmu_phi((0, 0, 0), [1.0, 0.0, 0.0]) - math.exp(-0.5))
    worst = max(a, b)
    return CheckResult("fourier_ground_mode", worst <= 1e-12, worst, 1e-12)


def check_fourier_vs_quadrature(rng) -> CheckResult:
    x, w = np.polynomial.hermite.hermgauss(40)
    U = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1).reshape(-1, 3)
    W = (w[:, None, None] * w[None, :, None] * w[None, None, :]).reshape(-1)
    v = math.sqrt(2.0) * U
    r2 = np.einsum("ij,ij->i", v, v)
    worst = 0.0
    for mode in [(0, 0, 0), (1, 0, 0), (0, 1, 1), (2, 1, 0), (1, 2, -2)]:
        poly = basis.eval_phi(mode, v) * np.exp(0.25 * r2) * (2 * math.pi) ** -0.75
        for _ in range(3):
            xi = rng.uniform(-2.0, 2.0, size=3)
            direct = 2.0 ** 1.5 * np.dot(W, poly * np.exp(-1j * (v @ xi)))
            worst = max(worst, abs(direct - basis.fourier_sqrtmu_phi(mode, xi)))
    return CheckResult("fourier_vs_quadrature", worst <= 1e-6, worst, 1e-6)


def check_oscillator(rng) -> CheckResult:
    pts = rng.uniform(-2.5, 2.5, size=(80, 3))
    pts = pts[np.linalg.norm(pts, axis=1) > 0.5]
    worst = 0.0
    for mode in [(0, 0, 0), (1, 0, 0), (0, 2, 1), (2, 3, -1), (3, 1, 0)]:
        worst = max(worst, basis.oscillator_residual(mode, pts))
    return CheckResult("oscillator_eigenrelation", worst <= 1e-6, worst, 1e-6)


# ---------------------------------------------------------------------------
# spaces
# ---------------------------------------------------------------------------

def check_weight_values(rng) -> CheckResult:
    f = basis.SpectralField({(0, 0, 0): 1.0})
    a = abs(spaces.spectral_norm(f, spaces.NormSpec.shubin(2)) - (1.5 + math.e))
    b = abs(spaces.spectral_norm(f, spaces.NormSpec.logsob(1, 2)) - (1.5 + math.e))
    worst = max(a, b)
    return CheckResult("norm_weight_values", worst <= 1e-12, worst, 1e-12)


def check_young_equality(rng) -> CheckResult:
    worst, done = 0.0, 0
    while done < 50:
        tau = rng.uniform(0.1, 3.0)
        nu = rng.uniform(0.05, 1.95)
        k = rng.uniform(1.0, 8.0)
        r = spaces.young_rhs(tau, nu, k)
        if r < 1e-300:
            continue
        m = spaces.young_min(tau, nu, k).min_value
        worst = max(worst, abs(m - r) / r)
        done += 1
    closed = abs(spaces.young_min(1.0, 1.0, 4.0).min_value - math.exp(-2.0))
    worst = max(worst, closed)
    return CheckResult("young_equality", worst <= 1e-6, worst, 1e-6)


def check_shubin_vs_logsob(rng) -> CheckResult:
    # mode-wise W^(2 tau1) <= exp(2 tau1 (log W)^(2/s)) needs log W >= 1
    worst = -math.inf
    for _ in range(20):
        modes = _random_field(rng, 30, nmax=20, lmax=20)
        tau1 = rng.uniform(0.05, 0.8)
        s = rng.uniform(0.5, 2.0)
        a = spaces.spectral_norm(modes, spaces.NormSpec.shubin(2 * tau1))
        b = spaces.spectral_norm(modes, spaces.NormSpec.logsob(tau1, s))
        worst = max(worst, (a - b) / b)
    return CheckResult("shubin_below_logsob", worst <= 1e-12, worst, 0.0)


def _random_field(rng, count: int, nmax: int = 40, lmax: int = 40):
    coeffs = {}
    while len(coeffs) < count:
        n = int(rng.integers(0, nmax + 1))
        l = int(rng.integers(0, lmax + 1))
        m = int(rng.integers(-l, l + 1))
        coeffs[(n, l, m)] = complex(rng.normal(), rng.normal())
    return basis.SpectralField(coeffs)


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------

def check_exact_decay(rng, s: float) -> CheckResult:
    p = kernel.KernelParams(s=s)
    lam = kernel.lambda_gap(p).lam
    tab = kernel.eigenvalue_table(4, 4, p)
    g = basis.SpectralField({(2, 0, 0): 1.0})
    worst = 0.0
    for t in (0.1, 1.0, 10.0):
        got = basis.project_null(solver.evolve(g, t, tab), "orthogonal").l2_norm()
        expect = math.exp(-lam * t)
        worst = max(worst, abs(got - expect) / expect)
    return CheckResult("exact_single_mode_decay", worst <= 1e-12, worst, 1e-12)


def check_semigroup(rng, s: float) -> CheckResult:
    tab = kernel.eigenvalue_table(12, 12, kernel.KernelParams(s=s))
    g = _random_field(rng, 25, nmax=12, lmax=12)
    a = solver.evolve(solver.evolve(g, 0.6, tab), 1.7, tab)
    b = solver.evolve(g, 2.3, tab)
    worst = max(abs(a.amplitude(m) - b.amplitude(m)) / abs(b.amplitude(m))
                for m in b.modes())
    return CheckResult("semigroup", worst <= 1e-12, worst, 1e-12)


def check_weak_form(rng, s: float) -> CheckResult:
    tab = kernel.eigenvalue_table(12, 12, kernel.KernelParams(s=s))
    worst = 0.0
    for _ in range(20):
        g = _random_field(rng, 10, nmax=12, lmax=12)
        test = list(g.modes())[:4] + [(1, 1, 0)]
        t = float(rng.uniform(0.1, 3.0))
        worst = max(worst, solver.weak_form_residual(g, test, t, tab))
    return CheckResult("weak_form_residual", worst <= 1e-10, worst, 1e-10)


def check_rate1(rng, s: float) -> CheckResult:
    if s > 2.0:
        return CheckResult("rate1_certificate", True, math.nan, 0.0,
                           detail=f"skipped: rate1 applies for s <= 2, got s={s}")
    tab = kernel.eigenvalue_table(60, 60, kernel.KernelParams(s=s))
    rep = solver.rate1_certificate(tab, s)
    return CheckResult("rate1_certificate", rep.ok, rep.worst_margin, 0.0,
                       detail=f"s={s}, table(60,60), worst mode {rep.worst_mode}")


def check_delay_verdicts(rng, s: float) -> CheckResult:
    p = kernel.KernelParams(s=1.0)
    lam = kernel.radial_eigenvalues(2000, p)
    spec = solver.DelaySeries(tau0=0.5, N=2000)
    v1 = solver.series_tail_classify(spec, 0.25, spaces.NormSpec.l2(), p, lam=lam)
    v2 = solver.series_tail_classify(spec, 1.0, spaces.NormSpec.l2(), p, lam=lam)
    ok = v1.classification == "divergent" and v2.classification == "convergent"
    return CheckResult("delay_series_verdicts", ok, float(ok), 1.0,
                       detail=f"t=0.25 -> {v1.classification}, t=1.0 -> {v2.classification}")


SUITES = {
    "specfun": [check_legendre_bound, check_legendre_orthogonality,
                check_sphere_orthonormality, check_scaled_gap_values,
                check_scaled_gap_bound, check_hermite_eigenrelation,
                check_laguerre_values],
    "kernel": [check_null_exactness, check_gap_closed_form, check_gap_golden,
               check_spectral_gap, check_ratio_interval, check_table_determinism],
    "basis": [check_orthonormality, check_ground_mode, check_fourier_ground,
              check_fourier_vs_quadrature, check_oscillator],
    "spaces": [check_weight_values, check_young_equality, check_shubin_vs_logsob],
    "solver": [check_exact_decay, check_semigroup, check_weak_form, check_rate1,
               check_delay_verdicts],
}


def run_suite(suite: str, s: float = 2.0, seed: int = 20240801):
    """Run one suite (or 'all'); returns a list of CheckResult."""
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITES:
        names = [suite]
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from "
                         f"{', '.join(list(SUITES) + ['all'])}")
    rng = np.random.default_rng(seed)
    results = []
    for name in names:
        for fn in SUITES[name]:
            if fn.__code__.co_argcount == 2:
                results.append(fn(rng, s))
            else:
                results.append(fn(rng))
    return results
