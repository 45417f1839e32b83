"""Function-space norms as weighted spectral sums, plus the Young-bound machinery.

Every norm here is a square root of a weighted sum of squared amplitudes
over the modes of a finite SpectralField; W = 2n + l + 3/2 + e denotes the
shifted oscillator eigenvalue and lambda~ the modified collision eigenvalue
(1 on the null space, lambda_{n,l} otherwise):

    l2                      weight 1
    shubin:k=K              weight W^K          (|| (e+H)^{K/2} u ||)
    logsob:tau=T,nu=N       weight exp(2 T (log W)^(2/N)),  T may be negative
    domain:tau=T            weight exp(T lambda~)
    domaindual:tau=T        weight exp(-T lambda~)
    domainplus:tau=T        weight lambda~ exp(T lambda~)
    domainplusdual:tau=T    weight exp(-T lambda~) / lambda~

The strings on the left are the canonical CLI forms accepted by
``parse_norm_spec``.  Norms are computed over finite fields only; series
tails are the solver's business.

Note the two distinct logarithm shifts in this package: norm weights use
log(2n + l + 3/2 + e) (as here), while the spectral-bound ratio in
``kernel.ratio_bounds`` defaults to log(2n + l + e).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .basis import SpectralField
from .kernel import EigenvalueTable

__all__ = [
    "NormSpec",
    "modified_lambda",
    "mode_weight",
    "spectral_norm",
    "young_min",
    "young_rhs",
    "YoungMin",
    "EmbeddingEstimate",
    "embedding_estimate",
    "parse_norm_spec",
]

W_SHIFT = 1.5 + math.e

_KINDS = ("l2", "shubin", "logsob", "domain", "domaindual", "domainplus",
          "domainplusdual")


@dataclass(frozen=True)
class NormSpec:
    kind: str
    k: float = 0.0
    tau: float = 0.0
    nu: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}; choose from {_KINDS}")
        if self.kind == "shubin" and self.k < 0.0:
            raise ValueError("shubin order k must be nonnegative")
        if self.kind == "logsob" and self.nu <= 0.0:
            raise ValueError("logsob nu must be positive")
        if self.kind.startswith("domain") and self.tau <= 0.0:
            raise ValueError(f"{self.kind} tau must be positive")

    # constructors ---------------------------------------------------------
    @classmethod
    def l2(cls):
        return cls("l2")

    @classmethod
    def shubin(cls, k: float):
        return cls("shubin", k=k)

    @classmethod
    def logsob(cls, tau: float, nu: float):
        return cls("logsob", tau=tau, nu=nu)

    @classmethod
    def domain(cls, tau: float):
        return cls("domain", tau=tau)

    @classmethod
    def domain_dual(cls, tau: float):
        return cls("domaindual", tau=tau)

    @classmethod
    def domain_plus(cls, tau: float):
        return cls("domainplus", tau=tau)

    @classmethod
    def domain_plus_dual(cls, tau: float):
        return cls("domainplusdual", tau=tau)

    @property
    def needs_table(self) -> bool:
        return self.kind.startswith("domain")

    def __str__(self):
        if self.kind == "l2":
            return "l2"
        if self.kind == "shubin":
            return f"shubin:k={self.k:g}"
        if self.kind == "logsob":
            return f"logsob:tau={self.tau:g},nu={self.nu:g}"
        return f"{self.kind}:tau={self.tau:g}"


def parse_norm_spec(text: str) -> NormSpec:
    """Parse the canonical CLI string form, e.g. 'shubin:k=2' or 'domain:tau=0.5'."""
    text = text.strip().lower()
    kind, _, rest = text.partition(":")
    args = {}
    if rest:
        for item in rest.split(","):
            key, _, value = item.partition("=")
            if not value:
                raise ValueError(f"malformed norm argument {item!r} in {text!r}")
            args[key.strip()] = float(value)
    try:
        if kind == "l2":
            if args:
                raise ValueError("l2 takes no arguments")
            return NormSpec.l2()
        if kind == "shubin":
            return NormSpec.shubin(args.pop("k"))
        if kind == "logsob":
            return NormSpec.logsob(args.pop("tau"), args.pop("nu"))
        if kind in ("domain", "domaindual", "domainplus", "domainplusdual"):
            return NormSpec(kind, tau=args.pop("tau"))
    except KeyError as exc:
        raise ValueError(f"norm spec {text!r} is missing argument {exc}") from None
    raise ValueError(
        f"unknown norm spec {text!r}; canonical forms: l2, shubin:k=K, "
        "logsob:tau=T,nu=N, domain:tau=T, domaindual:tau=T, domainplus:tau=T, "
        "domainplusdual:tau=T"
    )


def modified_lambda(n: int, l: int, table: EigenvalueTable) -> float:
    """lambda~: 1 on the null space (n + l <= 1), the table eigenvalue otherwise."""
    if n + l <= 1:
        return 1.0
    return table.lam(n, l)


def _exp(x: float) -> float:
    # finite weighted sums may legitimately overflow the double range
    return math.exp(x) if x < 709.0 else math.inf


def mode_weight(spec: NormSpec, n: int, l: int, table: EigenvalueTable | None = None) -> float:
    """Squared-sum weight of mode (n, l, *) under the given norm."""
    if spec.kind == "l2":
        return 1.0
    W = 2 * n + l + W_SHIFT
    if spec.kind == "shubin":
        return W ** spec.k
    if spec.kind == "logsob":
        return _exp(2.0 * spec.tau * math.log(W) ** (2.0 / spec.nu))
    if table is None:
        raise ValueError(f"{spec.kind} norms need an eigenvalue table")
    lam = modified_lambda(n, l, table)
    if spec.kind == "domain":
        return _exp(spec.tau * lam)
    if spec.kind == "domaindual":
        return _exp(-spec.tau * lam)
    if spec.kind == "domainplus":
        return lam * _exp(spec.tau * lam)
    return _exp(-spec.tau * lam) / lam  # domainplusdual


def spectral_norm(field: SpectralField, spec: NormSpec,
                  table: EigenvalueTable | None = None) -> float:
    """sqrt(sum_modes weight * |amplitude|^2); table required for domain norms."""
    total = 0.0
    for mode, amp in field.coeffs.items():
        total += mode_weight(spec, mode.n, mode.l, table) * (
            amp.real * amp.real + amp.imag * amp.imag)
    return math.sqrt(total)


@dataclass(frozen=True)
class YoungMin:
    min_value: float
    argmin: float


def young_min(tau: float, nu: float, k: float, x_max: float | None = None) -> YoungMin:
    """Numeric minimum of h(x) = exp(2 tau (log x)^(2/nu)) / x^k over [1, x_max].

    h is unimodal in log x with interior stationary point
    u* = (k nu / (4 tau))^(nu/(2-nu)); the search brackets u* and refines by
    golden section.  Raises when the stationary point falls outside the
    search interval (pass a larger x_max).
    """
    if tau <= 0.0 or not 0.0 < nu < 2.0:
        raise ValueError("need tau > 0 and 0 < nu < 2")
    if k < 0.0:
        raise ValueError("k must be nonnegative")
    if k == 0.0:
        return YoungMin(min_value=1.0, argmin=1.0)  # h nondecreasing from h(1) = 1
    log_u_star = nu / (2.0 - nu) * math.log(k * nu / (4.0 * tau))
    if log_u_star > 690.0:  # u* itself not representable (nu close to 2)
        raise ValueError("stationary point too large to represent; parameters too extreme")
    u_star = math.exp(log_u_star)
    if x_max is None:
        u_hi = 3.0 * (u_star + 1.0)
    else:
        u_hi = math.log(x_max)
        if u_star > u_hi:
            raise ValueError(
                f"stationary point x* = exp({u_star:.6g}) exceeds x_max; enlarge the domain")

    def g(u):  # log h
        return 2.0 * tau * u ** (2.0 / nu) - k * u

    lo, hi = 0.0, u_hi
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = hi - inv_phi * (hi - lo), lo + inv_phi * (hi - lo)
    ga, gb = g(a), g(b)
    while hi - lo > 1e-13 * (1.0 + hi):
        if ga <= gb:
            hi, b, gb = b, a, ga
            a = hi - inv_phi * (hi - lo)
            ga = g(a)
        else:
            lo, a, ga = a, b, gb
            b = lo + inv_phi * (hi - lo)
            gb = g(b)
    u_min = 0.5 * (lo + hi)
    log_min = g(u_min)
    return YoungMin(
        min_value=math.exp(log_min) if log_min > -745.0 else 0.0,
        argmin=math.exp(u_min) if u_min < 709.0 else math.inf,
    )


def young_rhs(tau: float, nu: float, k: float) -> float:
    """Closed-form lower bound exp(-((2-nu)/2) (nu/(4 tau))^(nu/(2-nu)) k^(2/(2-nu))).

    This is the exact minimum of h over x >= 1 (Young's inequality is tight
    at the stationary point), so ``young_min`` reproduces it to roundoff.
    """
    if tau <= 0.0 or not 0.0 < nu < 2.0:
        raise ValueError("need tau > 0 and 0 < nu < 2")
    if k < 0.0:
        raise ValueError("k must be nonnegative")
    expo = (2.0 - nu) / 2.0 * (nu / (4.0 * tau)) ** (nu / (2.0 - nu)) * k ** (2.0 / (2.0 - nu))
    return math.exp(-expo)


@dataclass(frozen=True)
class EmbeddingEstimate:
    tau1_hat: float
    tau2_hat: float


def embedding_estimate(table: EigenvalueTable, s: float) -> EmbeddingEstimate:
    """Finite-truncation witnesses for the domain-vs-log-Sobolev embeddings.

    Returns the min and max over stored modes of
    lambda~_{n,l} / (2 (log W)^(2/s)); any tau1 <= tau1_hat makes the domain
    norm dominate the logsob(tau*tau1, s) norm mode-wise on this table, and
    any tau2 >= tau2_hat the reverse.  Witnesses are truncation-dependent;
    no asymptotic claim is made.
    """
    if table.nmax < 50 or table.lmax < 50:
        raise ValueError("embedding estimate needs table coverage n, l up to at least 50")
    lo, hi = math.inf, -math.inf
    for (n, l), entry in table.entries.items():
        lam = 1.0 if n + l <= 1 else entry.lam
        r = lam / (2.0 * math.log(2 * n + l + W_SHIFT) ** (2.0 / s))
        lo, hi = min(lo, r), max(hi, r)
    return EmbeddingEstimate(tau1_hat=lo, tau2_hat=hi)
