"""Stable evaluation of the classical special functions behind the spectral basis.

Legendre and associated Legendre polynomials, generalized Laguerre
polynomials, spherical harmonics and the 1-D oscillator Hermite functions,
all by three-term recurrences (explicit derivative formulas are used as
test oracles only, never for evaluation).

Conventions
-----------
* Spherical harmonics carry NO Condon-Shortley phase:

      Y_l^m(theta, phi) = N_lm * P_l^|m|(cos theta) * exp(i*m*phi),
      N_lm = sqrt((2l+1)/(4*pi) * (l-|m|)! / (l+|m|)!).

  Many references fold a (-1)^m into P_l^m; this package does not.  A
  consequence used elsewhere: conj(Y_l^m) = Y_l^{-m} with no extra phase,
  and Y_1^1(theta=pi/2, phi=0) = +N_{1,1}.
* ``hermite_osc`` returns the L2(R)-orthonormal eigenfunctions of the
  oscillator -d^2/dx^2 + x^2/4 with eigenvalue n + 1/2 (Gaussian factor
  exp(-x^2/4), so hermite_osc(0, 0) = (2*pi)**-0.25).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SphericalDirection",
    "legendre",
    "legendre_all",
    "assoc_legendre",
    "assoc_legendre_norm",
    "spherical_harmonic",
    "laguerre",
    "laguerre_all",
    "hermite_osc",
    "legendre_scaled_gap",
]

# unnormalized P_l^m overflows around l ~ 155 (P_l^l(0) = (2l-1)!!); cap below
_UNNORM_LMAX = 150


@dataclass(frozen=True)
class SphericalDirection:
    """Point on the unit sphere: colatitude theta in [0, pi], azimuth phi in [0, 2*pi).

    The polar axis is the first Cartesian axis, i.e. the unit vector is
    (cos theta, sin theta cos phi, sin theta sin phi).
    """

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")

    @classmethod
    def from_vector(cls, v) -> "SphericalDirection":
        v = np.asarray(v, dtype=float)
        r = float(np.linalg.norm(v))
        if r == 0.0:
            raise ValueError("direction of the zero vector is undefined")
        theta = math.atan2(math.hypot(v[1], v[2]), v[0])
        phi = math.atan2(v[2], v[1]) % (2.0 * math.pi)
        return cls(theta=theta, phi=phi)


def _check_unit_interval(x):
    if np.any(np.abs(x) > 1.0 + 1e-14):
        raise ValueError("Legendre argument must satisfy |x| <= 1")


def legendre(l: int, x):
    """Legendre polynomial P_l(x) on [-1, 1] by the three-term recurrence.

    Accepts scalars or arrays; stable for l up to at least 10^4
    (values stay in [-1, 1]).
    """
    if l < 0:
        raise ValueError("degree l must be a nonnegative integer")
    x = np.asarray(x, dtype=float)
    _check_unit_interval(x)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    p_prev = np.ones_like(x)
    if l == 0:
        return float(p_prev[0]) if scalar else p_prev
    p = x.copy()
    for k in range(1, l):
        p, p_prev = ((2 * k + 1) * x * p - k * p_prev) / (k + 1), p
    return float(p[0]) if scalar else p


def legendre_all(lmax: int, x) -> np.ndarray:
    """All P_0..P_lmax at x, shape (lmax+1,) + x.shape."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    _check_unit_interval(x)
    out = np.empty((lmax + 1,) + x.shape)
    out[0] = 1.0
    if lmax >= 1:
        out[1] = x
    for k in range(1, lmax):
        out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1)
    return out


def assoc_legendre(l: int, m: int, x):
    """Unnormalized associated Legendre function P_l^m(x), 0 <= m <= l.

    P_l^m(x) = (1-x^2)^{m/2} (d/dx)^m P_l(x), no Condon-Shortley factor.
    Overflows in double precision near l ~ 155, so degrees above
    150 are rejected; use :func:`assoc_legendre_norm` there.
    """
    if not 0 <= m <= l:
        raise ValueError(f"need 0 <= m <= l, got l={l}, m={m}")
    if l > _UNNORM_LMAX:
        raise ValueError(
            f"unnormalized P_l^m overflows for l > {_UNNORM_LMAX}; "
            "use assoc_legendre_norm"
        )
    x = np.asarray(x, dtype=float)
    _check_unit_interval(x)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    sx = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    # seed P_m^m = (2m-1)!! (1-x^2)^{m/2}
    pmm = np.ones_like(x)
    for k in range(1, m + 1):
        pmm *= (2 * k - 1) * sx
    if l == m:
        return float(pmm[0]) if scalar else pmm
    pm1 = (2 * m + 1) * x * pmm
    if l == m + 1:
        return float(pm1[0]) if scalar else pm1
    for ll in range(m + 2, l + 1):
        pm1, pmm = ((2 * ll - 1) * x * pm1 - (ll + m - 1) * pmm) / (ll - m), pm1
    return float(pm1[0]) if scalar else pm1


def assoc_legendre_norm(l: int, m: int, x):
    """N_lm * P_l^m(x) with N_lm = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!), 0 <= m <= l.

    The normalization is fused into the recurrence and the sectoral seed
    (which underflows doubles near m ~ 10^3 away from the equator) is
    carried with an explicit power-of-2 exponent, so evaluation stays
    accurate for l up to 10^4.  Rescaling by exact powers of 2 perturbs no
    mantissa bits.
    """
    if not 0 <= m <= l:
        raise ValueError(f"need 0 <= m <= l, got l={l}, m={m}")
    x = np.asarray(x, dtype=float)
    _check_unit_interval(x)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    sx = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    # seed: N_mm P_m^m = sqrt((2m+1)/4pi) * prod_k sqrt((2k-1)/(2k)) * sx^m,
    # one sx folded in per factor; track the scale in log2 once it leaves
    # the comfortable range
    pmm = np.full_like(x, math.sqrt((2 * m + 1) / (4.0 * math.pi)))
    scale = np.zeros(x.shape, dtype=np.int64)
    for k in range(1, m + 1):
        pmm *= math.sqrt((2 * k - 1) / (2.0 * k)) * sx
        if k % 64 == 0:
            pmm, scale = _rescale(pmm, scale)
    if l == m:
        return _descale_out(pmm, scale, scalar)
    pm1 = math.sqrt(2 * m + 3) * x * pmm
    if l == m + 1:
        return _descale_out(pm1, scale, scalar)
    for ll in range(m + 2, l + 1):
        a = math.sqrt((4 * ll * ll - 1) / ((ll - m) * (ll + m)))
        b = math.sqrt(
            (2 * ll + 1) * (ll - 1 - m) * (ll - 1 + m)
            / ((2 * ll - 3) * (ll - m) * (ll + m))
        )
        pm1, pmm = a * x * pm1 - b * pmm, pm1
        if ll % 64 == 0:
            tiny = (np.abs(pm1) < 2.0**-400) & (np.abs(pmm) < 2.0**-400)
            huge = (np.abs(pm1) > 2.0**400) | (np.abs(pmm) > 2.0**400)
            shift = 400 * tiny.astype(np.int64) - 400 * huge.astype(np.int64)
            if shift.any():
                pm1 = np.ldexp(pm1, shift)
                pmm = np.ldexp(pmm, shift)
                scale = scale - shift
    return _descale_out(pm1, scale, scalar)


def _rescale(vals, scale):
    tiny = np.abs(vals) < 2.0**-400
    if tiny.any():
        vals = np.where(tiny, np.ldexp(vals, 400), vals)
        scale = scale - 400 * tiny
    return vals, scale


def _descale_out(vals, scale, scalar):
    out = np.ldexp(vals, scale)
    return float(out[0]) if scalar else out


def spherical_harmonic(l: int, m: int, direction: SphericalDirection) -> complex:
    """Y_l^m at a point of the unit sphere (orthonormal on S^2, no CS phase)."""
    if abs(m) > l:
        raise ValueError(f"need |m| <= l, got l={l}, m={m}")
    return complex(
        _ylm(l, m, np.float64(math.cos(direction.theta)), np.float64(direction.phi))
    )


def _ylm(l: int, m: int, costheta, phi):
    """Vectorized Y_l^m from cos(theta) and phi arrays."""
    real = assoc_legendre_norm(l, abs(m), costheta)
    return real * np.exp(1j * m * np.asarray(phi, dtype=float))


def laguerre(n: int, alpha: float, x):
    """Generalized Laguerre polynomial L_n^(alpha)(x), x >= 0, alpha > -1."""
    if n < 0:
        raise ValueError("degree n must be a nonnegative integer")
    if alpha <= -1.0:
        raise ValueError("alpha must exceed -1")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError("Laguerre argument must be nonnegative")
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    p_prev = np.ones_like(x)
    if n == 0:
        return float(p_prev[0]) if scalar else p_prev
    p = alpha + 1.0 - x
    for k in range(1, n):
        p, p_prev = ((2 * k + 1 + alpha - x) * p - (k + alpha) * p_prev) / (k + 1), p
    return float(p[0]) if scalar else p


def laguerre_all(nmax: int, alpha: float, x) -> np.ndarray:
    """All L_0^(alpha)..L_nmax^(alpha) at x, shape (nmax+1,) + x.shape."""
    if alpha <= -1.0:
        raise ValueError("alpha must exceed -1")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0.0):
        raise ValueError("Laguerre argument must be nonnegative")
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = alpha + 1.0 - x
    for k in range(1, nmax):
        out[k + 1] = ((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out


def hermite_osc(n: int, x):
    """Orthonormal eigenfunction of -d^2/dx^2 + x^2/4 with eigenvalue n + 1/2.

    hermite_osc(n, x) = (2 pi)^{-1/4} / sqrt(n!) * He_n(x) * exp(-x^2/4)
    via the normalized recurrence
    h_{n+1} = (x h_n - sqrt(n) h_{n-1}) / sqrt(n+1).
    """
    if n < 0:
        raise ValueError("degree n must be a nonnegative integer")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    h_prev = (2.0 * math.pi) ** -0.25 * np.exp(-0.25 * x * x)
    if n == 0:
        return float(h_prev[0]) if scalar else h_prev
    h = x * h_prev
    for k in range(1, n):
        h, h_prev = (x * h - math.sqrt(k) * h_prev) / math.sqrt(k + 1), h
    return float(h[0]) if scalar else h


def legendre_scaled_gap(l: int, theta):
    """(1 - P_l(cos(theta/l))) / theta^2 for l >= 1, 0 < theta <= pi/2.

    Uniformly bounded by 1/2; the theta -> 0 limit is l(l+1)/(4 l^2), which
    the caller must use analytically (theta = 0 is a domain error).  Small
    arguments are evaluated through the hypergeometric expansion of
    P_l(1 - 2z) around z = 0 to avoid the 1 - P cancellation.
    """
    if l < 1:
        raise ValueError("l must be a positive integer")
    theta = np.asarray(theta, dtype=float)
    if np.any(theta <= 0.0) or np.any(theta > math.pi / 2 + 1e-15):
        raise ValueError("theta must lie in (0, pi/2]")
    scalar = theta.ndim == 0
    theta = np.atleast_1d(theta)
    eps = theta / l
    z = np.sin(0.5 * eps) ** 2  # (1 - cos(eps)) / 2
    gap = np.empty_like(theta)

    small = l * (l + 1) * z < 0.05
    if np.any(small):
        gap[small] = _legendre_gap_series(l, z[small])
    if np.any(~small):
        gap[~small] = 1.0 - legendre(l, np.cos(eps[~small]))
    gap /= theta * theta
    return float(gap[0]) if scalar else gap


def _legendre_gap_series(l: int, z: np.ndarray) -> np.ndarray:
    # 1 - P_l(1-2z) = sum_{k>=1} (-1)^{k+1} c_k z^k with
    # c_k = [l(l-1)..(l-k+1)] [(l+1)..(l+k)] / (k!)^2
    acc = np.zeros_like(z)
    coeff_times_zk = np.ones_like(z)
    for k in range(1, l + 1):
        coeff_times_zk = coeff_times_zk * ((l - k + 1) * (l + k)) / (k * k) * z
        if k % 2:
            acc += coeff_times_zk
        else:
            acc -= coeff_times_zk
        if np.all(coeff_times_zk < 1e-18):
            break
    return acc
