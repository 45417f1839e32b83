"""Eigenvalues of the linearized collision operator for the Debye-Yukawa kernel.

Canonical kernel
----------------
The physics only pins the angular kernel up to two-sided constants, so this
package FIXES the canonical form

    beta(theta) = (sin theta)^(-1) * (log(1/sin theta))^(2/s - 1),
    0 < theta <= pi/4,  s > 0.

Every numeric constant in the package (the spectral gap ``lambda_{2,0}``,
ratio bounds, decay thresholds downstream) is relative to this choice.  For
s = 2 the gap has the closed form (2/3) * (1 - 2^(-3/2)).

Eigenvalues are

    lambda_{n,l} = int_0^{pi/4} beta(theta) * (1 + delta_{n0} delta_{l0}
                   - sin(theta)^K P_l(sin theta)
                   - cos(theta)^K P_l(cos theta)) dtheta,      K = 2n + l,

computed over geometrically graded dyadic panels [pi/4 * 2^-(j+1), pi/4 * 2^-j]
with fixed-order Gauss nodes per panel.  The integrand vanishes like
theta * log(1/theta)^(2/s-1) at 0 for n + l >= 2, so the grading converges;
each panel is also evaluated at doubled order for an error estimate.  Modes
(0,0), (1,0), (0,1) have identically zero integrand and come out exactly 0.

Bulk table construction is vectorized row-by-row in l; parallel and serial
builds produce bit-identical results because each (n, l) entry is an
independent deterministic computation.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CacheError, EigenvalueLookupError, QuadratureConvergenceError
from .specfun import legendre_all

__all__ = [
    "KernelParams",
    "QuadratureSpec",
    "EigenvalueEntry",
    "EigenvalueTable",
    "RatioBounds",
    "beta",
    "eigen_integrand",
    "eigenvalue",
    "lambda_gap",
    "eigenvalue_table",
    "radial_eigenvalues",
    "asymptotic_leading",
    "ratio_bounds",
    "save_table",
    "load_table",
    "table_to_csv",
]

# bump when the quadrature scheme changes; stale caches are rejected, never migrated
CODE_VERSION = "dyboltz-kernel-1"

THETA_MAX = math.pi / 4

NULL_MODES = ((0, 0), (1, 0), (0, 1))

# terminate panel accumulation once a panel contributes less than this
# fraction of the running tolerance (the dyadic tail then sits well inside it)
_PANEL_CUTOFF = 0.1

_N_CHUNK = 2048


@dataclass(frozen=True)
class KernelParams:
    """Debye-Yukawa exponent s > 0; the angular cutoff is pinned at pi/4."""

    s: float
    theta_max: float = THETA_MAX

    def __post_init__(self):
        if not self.s > 0.0:
            raise ValueError(f"kernel exponent s must be positive, got {self.s}")
        if self.theta_max != THETA_MAX:
            raise ValueError("theta_max is fixed at pi/4 for the canonical kernel")


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    max_panels: int = 72
    nodes_per_panel: int = 16

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("quadrature tolerances must be positive")
        if self.max_panels < 1:
            raise ValueError("max_panels must be a positive integer")
        if self.nodes_per_panel < 8:
            raise ValueError("nodes_per_panel must be at least 8")


@dataclass(frozen=True)
class EigenvalueEntry:
    n: int
    l: int
    lam: float
    err: float

    def __post_init__(self):
        if (self.n, self.l) in NULL_MODES:
            if self.lam != 0.0:
                raise ValueError(f"null mode ({self.n},{self.l}) must have lambda = 0")
        elif not self.lam > 0.0:
            raise ValueError(
                f"lambda must be positive for (n,l)=({self.n},{self.l}), got {self.lam}"
            )
        if self.err < 0.0:
            raise ValueError("err estimate must be nonnegative")


def beta(theta, params: KernelParams):
    """Canonical angular kernel on (0, pi/4]; positive and finite there."""
    theta = np.asarray(theta, dtype=float)
    if np.any(theta <= 0.0) or np.any(theta > params.theta_max + 1e-15):
        raise ValueError("theta must lie in (0, pi/4]")
    scalar = theta.ndim == 0
    theta = np.atleast_1d(theta)
    sin = np.sin(theta)
    out = np.log(1.0 / sin) ** (2.0 / params.s - 1.0) / sin
    return float(out[0]) if scalar else out


def _bracket_rows(n_arr: np.ndarray, l: int, logsin, logcos, ps, pc) -> np.ndarray:
    """1 + delta - sin^K P_l(sin) - cos^K P_l(cos) for each n, stably.

    Near theta = 0 the cos term approaches 1, so it is folded through
    expm1 when P_l(cos theta) > 0; null-mode rows are identically zero and
    are zeroed exactly.
    """
    K = (2 * n_arr + l).astype(float)[:, None]
    with np.errstate(under="ignore"):
        sin_term = np.exp(K * logsin[None, :]) * ps[None, :]
        pos = pc > 0.0
        log_pc = np.where(pos, np.log(np.where(pos, pc, 1.0)), 0.0)
        br_pos = -np.expm1(K * logcos[None, :] + log_pc[None, :])
        br_neg = 1.0 - np.exp(K * logcos[None, :]) * pc[None, :]
    brackets = np.where(pos[None, :], br_pos, br_neg) - sin_term
    if l == 0:
        brackets[(n_arr == 0) | (n_arr == 1)] = 0.0
    elif l == 1:
        brackets[n_arr == 0] = 0.0
    return brackets


@lru_cache(maxsize=8)
def _panel_nodes(max_panels: int, nodes_per_panel: int):
    """Concatenated Gauss nodes for all dyadic panels, coarse and fine order."""
    out = {}
    for tag, m in (("c", nodes_per_panel), ("f", 2 * nodes_per_panel)):
        x, w = np.polynomial.legendre.leggauss(m)
        thetas, weights = [], []
        for j in range(max_panels):
            hi = THETA_MAX * 0.5**j
            lo = 0.5 * hi
            thetas.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
            weights.append(0.5 * (hi - lo) * w)
        theta = np.concatenate(thetas)
        out[tag] = (theta, np.concatenate(weights), np.log(np.sin(theta)),
                    np.log(np.cos(theta)), np.sin(theta), np.cos(theta))
    return out["c"], out["f"]


@lru_cache(maxsize=32)
def _beta_weights(params: KernelParams, quad: QuadratureSpec):
    """w * beta at every node, coarse and fine sets."""
    (tc, wc, *_), (tf, wf, *_) = _panel_nodes(quad.max_panels, quad.nodes_per_panel)
    return wc * beta(tc, params), wf * beta(tf, params)


def _legendre_at_nodes(l: int, quad: QuadratureSpec):
    (_, _, _, _, sc, cc), (_, _, _, _, sf, cf) = _panel_nodes(
        quad.max_panels, quad.nodes_per_panel
    )
    pl = legendre_all(l, np.concatenate([sc, cc, sf, cf]))[l]
    nc, nf = len(sc), len(sf)
    return pl[:nc], pl[nc:2 * nc], pl[2 * nc:2 * nc + nf], pl[2 * nc + nf:]


def _eigen_rows(l: int, n_arr: np.ndarray, params: KernelParams, quad: QuadratureSpec):
    """lambda and err for all n in n_arr at fixed l (the one true code path).

    Both the scalar ``eigenvalue`` and the bulk table builder run through
    here, so single entries, serial builds and parallel builds agree
    bit-for-bit.
    """
    n_arr = np.asarray(n_arr, dtype=np.int64)
    lam = np.empty(len(n_arr))
    err = np.empty(len(n_arr))
    for start in range(0, len(n_arr), _N_CHUNK):
        block = n_arr[start:start + _N_CHUNK]
        lam_b, err_b = _eigen_rows_block(l, block, params, quad)
        lam[start:start + _N_CHUNK] = lam_b
        err[start:start + _N_CHUNK] = err_b
    return lam, err


def _eigen_rows_block(l, n_block, params, quad):
    coarse, fine = _panel_nodes(quad.max_panels, quad.nodes_per_panel)
    bwc, bwf = _beta_weights(params, quad)
    psc, pcc, psf, pcf = _legendre_at_nodes(l, quad)
    mc, mf = quad.nodes_per_panel, 2 * quad.nodes_per_panel
    P = quad.max_panels

    br_c = _bracket_rows(n_block, l, coarse[2], coarse[3], psc, pcc)
    br_f = _bracket_rows(n_block, l, fine[2], fine[3], psf, pcf)
    i_coarse = (br_c * bwc).reshape(len(n_block), P, mc).sum(axis=2)
    i_fine = (br_f * bwf).reshape(len(n_block), P, mf).sum(axis=2)

    cum = np.cumsum(i_fine, axis=1)
    cum_err = np.cumsum(np.abs(i_fine - i_coarse), axis=1)
    tol = np.maximum(quad.abs_tol, quad.rel_tol * np.abs(cum))
    done = np.abs(i_fine) < _PANEL_CUTOFF * tol
    if not done.any(axis=1).all():
        bad = np.nonzero(~done.any(axis=1))[0]
        pairs = [(int(n_block[i]), l) for i in bad]
        partial = {(int(n_block[i]), l): float(cum[i, -1]) for i in bad}
        raise QuadratureConvergenceError(pairs, partial)
    stop = np.argmax(done, axis=1)
    rows = np.arange(len(n_block))
    lam = cum[rows, stop]
    err = cum_err[rows, stop] + np.abs(i_fine[rows, stop])
    return lam, err


def eigen_integrand(n: int, l: int, theta, params: KernelParams):
    """beta(theta) times the spectral bracket; identically 0 for null modes."""
    if n < 0 or l < 0:
        raise ValueError("n and l must be nonnegative integers")
    theta = np.asarray(theta, dtype=float)
    scalar = theta.ndim == 0
    b = beta(theta, params)
    theta = np.atleast_1d(theta)
    if (n, l) in NULL_MODES:
        out = np.zeros_like(theta)
        return float(out[0]) if scalar else out
    sin, cos = np.sin(theta), np.cos(theta)
    pl = legendre_all(l, np.concatenate([sin, cos]))[l]
    ps, pc = pl[:len(sin)], pl[len(sin):]
    br = _bracket_rows(np.array([n]), l, np.log(sin), np.log(cos), ps, pc)[0]
    out = np.atleast_1d(b) * br
    return float(out[0]) if scalar else out


def eigenvalue(n: int, l: int, params: KernelParams,
               quad: QuadratureSpec = QuadratureSpec()) -> EigenvalueEntry:
    """One eigenvalue by graded-panel quadrature, exact 0 for the null modes."""
    if n < 0 or l < 0:
        raise ValueError("n and l must be nonnegative integers")
    lam, err = _eigen_rows(l, np.array([n]), params, quad)
    return EigenvalueEntry(n=n, l=l, lam=float(lam[0]), err=float(err[0]))


def lambda_gap(params: KernelParams,
               quad: QuadratureSpec = QuadratureSpec()) -> EigenvalueEntry:
    """The spectral gap lambda_{2,0}; alias of eigenvalue(2, 0), bit-for-bit."""
    return eigenvalue(2, 0, params, quad)


@dataclass(frozen=True)
class EigenvalueTable:
    params: KernelParams
    quad: QuadratureSpec
    entries: dict
    version: str

    def lookup(self, n: int, l: int) -> EigenvalueEntry:
        try:
            return self.entries[(n, l)]
        except KeyError:
            raise EigenvalueLookupError(n, l) from None

    def lam(self, n: int, l: int) -> float:
        return self.lookup(n, l).lam

    @property
    def nmax(self) -> int:
        return max(n for n, _ in self.entries)

    @property
    def lmax(self) -> int:
        return max(l for _, l in self.entries)

    def subset(self, nmax: int, lmax: int) -> "EigenvalueTable":
        sub = {k: v for k, v in self.entries.items() if k[0] <= nmax and k[1] <= lmax}
        return EigenvalueTable(self.params, self.quad, sub, self.version)

    def sorted_entries(self):
        return [self.entries[k] for k in sorted(self.entries)]


def table_version(params: KernelParams, quad: QuadratureSpec) -> str:
    """Content hash of (kernel params, quadrature spec, code version)."""
    key = "|".join([
        CODE_VERSION,
        f"s={params.s!r}",
        f"theta_max={params.theta_max!r}",
        f"rel_tol={quad.rel_tol!r}",
        f"abs_tol={quad.abs_tol!r}",
        f"max_panels={quad.max_panels}",
        f"nodes_per_panel={quad.nodes_per_panel}",
    ])
    return hashlib.sha256(key.encode()).hexdigest()[:16]


def _row_task(args):
    l, nmax, params, quad = args
    lam, err = _eigen_rows(l, np.arange(nmax + 1), params, quad)
    return l, lam, err


def eigenvalue_table(nmax: int, lmax: int, params: KernelParams,
                     quad: QuadratureSpec = QuadratureSpec(),
                     workers: int = 1) -> EigenvalueTable:
    """All eigenvalues with n <= nmax, l <= lmax.

    ``workers > 1`` distributes l-rows over processes; every entry is an
    independent deterministic computation, so the result does not depend on
    worker count or evaluation order.
    """
    if nmax < 0 or lmax < 0:
        raise ValueError("nmax and lmax must be nonnegative")
    tasks = [(l, nmax, params, quad) for l in range(lmax + 1)]
    if workers > 1 and lmax > 0:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row_task, tasks, chunksize=max(1, lmax // (4 * workers))))
    else:
        rows = [_row_task(t) for t in tasks]
    entries = {}
    for l, lam, err in rows:
        for n in range(nmax + 1):
            entries[(n, l)] = EigenvalueEntry(n=n, l=l, lam=float(lam[n]), err=float(err[n]))
    return EigenvalueTable(params=params, quad=quad, entries=entries,
                           version=table_version(params, quad))


def radial_eigenvalues(nmax: int, params: KernelParams,
                       quad: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """lambda_{n,0} for n = 0..nmax as a flat array (cheap P_0 = 1 path)."""
    lam, _ = _eigen_rows(0, np.arange(nmax + 1), params, quad)
    return lam


def asymptotic_leading(n: int, l: int, params: KernelParams) -> float:
    """Leading large-mode term (s/2) * log(sqrt(2n+l))^(2/s), needs 2n+l >= 3.

    For l = 0 this is the whole leading behaviour of lambda_{n,0} (the
    Legendre correction term vanishes since P_0 = 1).
    """
    K = 2 * n + l
    if K < 3:
        raise ValueError("asymptotic leading term requires 2n + l >= 3")
    s = params.s
    return (s / 2.0) * (0.5 * math.log(K)) ** (2.0 / s)


@dataclass(frozen=True)
class RatioBounds:
    c_min: float
    c_max: float
    argmin: tuple
    argmax: tuple


def ratio_bounds(table: EigenvalueTable, shift: float = math.e) -> RatioBounds:
    """Min/max of lambda_{n,l} / log(2n + l + shift)^(2/s) over modes n+l >= 2.

    The default shift e matches the spectral lower-bound weight; shift
    1.5 + e gives the oscillator-norm weight used by the decay certificates.
    """
    s = table.params.s
    best_min = best_max = None
    argmin = argmax = None
    for (n, l), entry in table.entries.items():
        if n + l < 2:
            continue
        r = entry.lam / math.log(2 * n + l + shift) ** (2.0 / s)
        if best_min is None or r < best_min:
            best_min, argmin = r, (n, l)
        if best_max is None or r > best_max:
            best_max, argmax = r, (n, l)
    if best_min is None:
        raise ValueError("table has no modes with n + l >= 2")
    return RatioBounds(c_min=best_min, c_max=best_max, argmin=argmin, argmax=argmax)


# ---------------------------------------------------------------------------
# cache files
# ---------------------------------------------------------------------------

def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_table(table: EigenvalueTable, path: str):
    """Write the cache file atomically (temp file + rename)."""
    header = {
        "s": table.params.s,
        "theta_max": table.params.theta_max,
        "rel_tol": table.quad.rel_tol,
        "abs_tol": table.quad.abs_tol,
        "max_panels": table.quad.max_panels,
        "nodes_per_panel": table.quad.nodes_per_panel,
        "version": table.version,
    }
    rows = [[e.n, e.l, e.lam, e.err] for e in table.sorted_entries()]
    _atomic_write(path, json.dumps({"header": header, "rows": rows},
                                   separators=(",", ":"), sort_keys=True))


def load_table(path: str, params: KernelParams | None = None,
               quad: QuadratureSpec | None = None) -> EigenvalueTable:
    """Load and validate a cache file.

    Corrupt files and version mismatches (different parameters, quadrature
    spec, or code version) raise CacheError; stale caches are never migrated
    or partially read.
    """
    try:
        with open(path) as fh:
            doc = json.load(fh)
        header = doc["header"]
        file_params = KernelParams(s=header["s"], theta_max=header["theta_max"])
        file_quad = QuadratureSpec(
            rel_tol=header["rel_tol"], abs_tol=header["abs_tol"],
            max_panels=header["max_panels"], nodes_per_panel=header["nodes_per_panel"],
        )
        expected = table_version(file_params, file_quad)
        if header["version"] != expected:
            raise CacheError(
                f"cache version {header['version']} does not match expected {expected} "
                f"(stale code or tampered header); rebuild required"
            )
        if params is not None and params != file_params:
            raise CacheError("cache was built for different kernel parameters")
        if quad is not None and quad != file_quad:
            raise CacheError("cache was built with a different quadrature spec")
        entries = {}
        for n, l, lam, err in doc["rows"]:
            entries[(int(n), int(l))] = EigenvalueEntry(int(n), int(l), float(lam), float(err))
    except CacheError:
        raise
    except Exception as exc:
        raise CacheError(f"unreadable eigenvalue cache {path}: {exc}") from exc
    return EigenvalueTable(params=file_params, quad=file_quad, entries=entries,
                           version=header["version"])


def table_to_csv(table: EigenvalueTable) -> str:
    """CSV mirror of the cache rows (n, l, lambda, err)."""
    lines = ["n,l,lambda,err"]
    for e in table.sorted_entries():
        lines.append(f"{e.n},{e.l},{e.lam!r},{e.err!r}")
    return "\n".join(lines) + "\n"
