"""The orthonormal eigenbasis: pointwise evaluation, Fourier transforms,
null-space projection and numerical inner products.

Basis functions are indexed by (n, l, m) with n, l >= 0 and |m| <= l:

    phi_{n,l,m}(v) = sqrt(n! / (sqrt(2) Gamma(n+l+3/2)))
                     * (|v|/sqrt(2))^l * exp(-|v|^2/4)
                     * L_n^(l+1/2)(|v|^2/2) * Y_l^m(v/|v|),

an orthonormal basis of L^2(R^3) and eigenbasis of the oscillator
-Laplace + |v|^2/4 with eigenvalue 2n + l + 3/2.  The five modes with
n + l <= 1 span the collision-invariant null space.

Conventions
-----------
* Spherical axis: the polar axis of Y_l^m is the FIRST Cartesian axis
  (direction vector (cos theta, sin theta cos phi, sin theta sin phi)).
* Fourier transform: g^(xi) = int exp(-i v.xi) g(v) dv, so the Gaussian
  sqrt(mu) phi_{0,0,0} = mu transforms to exp(-|xi|^2/2).
* A SpectralField stores finitely many complex amplitudes; a missing key
  means amplitude zero.  It synthesizes a real-valued function iff
  c_{n,l,-m} = conj(c_{n,l,m}) (no extra phase under the bare Y_l^m
  convention); ``is_real_field`` provides that predicate without
  enforcing it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import roots_genlaguerre

from .errors import ResolutionError
from .specfun import _ylm, assoc_legendre_norm, laguerre

__all__ = [
    "ModeIndex",
    "SpectralField",
    "eval_phi",
    "fourier_sqrtmu_phi",
    "project_null",
    "is_real_field",
    "inner_product_numeric",
    "orthonormality_max_deviation",
    "oscillator_residual",
]


class ModeIndex(NamedTuple):
    n: int
    l: int
    m: int

    def validate(self) -> "ModeIndex":
        if self.n < 0 or self.l < 0:
            raise ValueError(f"n and l must be nonnegative, got {self}")
        if abs(self.m) > self.l:
            raise ValueError(f"|m| must not exceed l, got {self}")
        return self


NULL_SPACE_MODES = (
    ModeIndex(0, 0, 0),
    ModeIndex(1, 0, 0),
    ModeIndex(0, 1, -1),
    ModeIndex(0, 1, 0),
    ModeIndex(0, 1, 1),
)


@dataclass(frozen=True)
class SpectralField:
    """Finite map ModeIndex -> complex amplitude, plus a provenance label.

    The basis is orthonormal, so the L2 norm of the synthesized function is
    the Euclidean norm of the amplitudes.
    """

    coeffs: dict
    label: str = ""

    def __post_init__(self):
        clean = {}
        for mode, amp in self.coeffs.items():
            mode = ModeIndex(*mode).validate()
            clean[mode] = complex(amp)
        object.__setattr__(self, "coeffs", clean)

    def amplitude(self, mode) -> complex:
        return self.coeffs.get(ModeIndex(*mode), 0j)

    def l2_norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.coeffs.values()))

    def modes(self):
        return sorted(self.coeffs)

    def map_amplitudes(self, fn, label=None) -> "SpectralField":
        return SpectralField(
            {mode: fn(mode, amp) for mode, amp in self.coeffs.items()},
            label=self.label if label is None else label,
        )

    def __add__(self, other: "SpectralField") -> "SpectralField":
        out = dict(self.coeffs)
        for mode, amp in other.coeffs.items():
            out[mode] = out.get(mode, 0j) + amp
        return SpectralField(out, label=self.label)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        return self + other.map_amplitudes(lambda _, a: -a)

    def inner(self, other: "SpectralField") -> complex:
        """L2 pairing sum_m c_m conj(d_m) over shared modes."""
        small, big = self.coeffs, other.coeffs
        if len(big) < len(small):
            small, big = big, small
            return sum(big.get(m, 0j) * amp.conjugate() for m, amp in small.items())
        return sum(amp * big.get(m, 0j).conjugate() for m, amp in small.items())

    def to_json(self) -> str:
        rows = [[m.n, m.l, m.m, a.real, a.imag] for m, a in sorted(self.coeffs.items())]
        return json.dumps({"label": self.label, "rows": rows},
                          separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SpectralField":
        doc = json.loads(text)
        coeffs = {ModeIndex(int(n), int(l), int(m)): complex(re, im)
                  for n, l, m, re, im in doc["rows"]}
        return cls(coeffs, label=doc.get("label", ""))


def _radial_norm_const(n: int, l: int) -> float:
    # sqrt(n! / (sqrt(2) Gamma(n+l+3/2))) in log space
    return math.exp(0.5 * math.lgamma(n + 1) - 0.5 * math.lgamma(n + l + 1.5)
                    - 0.25 * math.log(2.0))


def eval_phi(mode, v):
    """phi_{n,l,m} at one or many points of R^3 (last axis = components)."""
    n, l, m = ModeIndex(*mode).validate()
    v = np.asarray(v, dtype=float)
    single = v.ndim == 1
    pts = np.atleast_2d(v)
    r = np.linalg.norm(pts, axis=-1)
    out = np.zeros(len(pts), dtype=complex)

    const = _radial_norm_const(n, l)
    nz = r > 0.0
    if np.any(nz):
        rr = r[nz]
        radial = const * (rr / math.sqrt(2.0)) ** l * np.exp(-0.25 * rr * rr) \
            * laguerre(n, l + 0.5, 0.5 * rr * rr)
        costheta = pts[nz, 0] / rr
        phi_az = np.arctan2(pts[nz, 2], pts[nz, 1])
        out[nz] = radial * _ylm(l, m, np.clip(costheta, -1.0, 1.0), phi_az)
    if np.any(~nz):
        # only l = 0 modes are nonzero at the origin (|v|^l factor)
        if l == 0:
            out[~nz] = const * laguerre(n, 0.5, 0.0) / math.sqrt(4.0 * math.pi)
    return out[0] if single else out


def fourier_sqrtmu_phi(mode, xi):
    """Closed-form transform of sqrt(mu) phi_{n,l,m} at frequency xi.

    Equals (-i)^l (2 pi)^(3/4) (sqrt(2) n! Gamma(n+l+3/2))^(-1/2)
    (|xi|/sqrt(2))^(2n+l) exp(-|xi|^2/2) Y_l^m(xi/|xi|); for the ground mode
    this is exp(-|xi|^2/2), the transform of the Maxwellian itself.
    """
    n, l, m = ModeIndex(*mode).validate()
    xi = np.asarray(xi, dtype=float)
    single = xi.ndim == 1
    pts = np.atleast_2d(xi)
    r = np.linalg.norm(pts, axis=-1)
    out = np.zeros(len(pts), dtype=complex)

    K = 2 * n + l
    const = (2.0 * math.pi) ** 0.75 * math.exp(
        -0.25 * math.log(2.0) - 0.5 * math.lgamma(n + 1) - 0.5 * math.lgamma(n + l + 1.5)
    ) * (-1j) ** l

    nz = r > 0.0
    if np.any(nz):
        rr = r[nz]
        costheta = pts[nz, 0] / rr
        phi_az = np.arctan2(pts[nz, 2], pts[nz, 1])
        out[nz] = const * (rr / math.sqrt(2.0)) ** K * np.exp(-0.5 * rr * rr) \
            * _ylm(l, m, np.clip(costheta, -1.0, 1.0), phi_az)
    if np.any(~nz) and K == 0:
        out[~nz] = const / math.sqrt(4.0 * math.pi)
    return out[0] if single else out


def project_null(field: SpectralField, keep: str) -> SpectralField:
    """Orthogonal projection onto the collision-invariant span (n + l <= 1).

    keep='null' returns P g (the five modes phi_{0,0,0}, phi_{1,0,0},
    phi_{0,1,-1..1}); keep='orthogonal' returns (I - P) g.  The two parts
    sum to the input and the projection is idempotent.
    """
    if keep not in ("null", "orthogonal"):
        raise ValueError("keep must be 'null' or 'orthogonal'")
    want_null = keep == "null"
    out = {m: a for m, a in field.coeffs.items() if (m.n + m.l <= 1) == want_null}
    return SpectralField(out, label=field.label)


def is_real_field(field: SpectralField, tol: float = 0.0) -> bool:
    """Whether the synthesized function is real-valued: c_{n,l,-m} = conj(c_{n,l,m})."""
    for mode, amp in field.coeffs.items():
        partner = field.amplitude((mode.n, mode.l, -mode.m))
        if abs(partner - amp.conjugate()) > tol:
            return False
    return True


def _sphere_rule(n_theta: int, n_phi: int):
    x, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    wphi = 2.0 * math.pi / n_phi
    return x, w, phi, wphi


def _radial_pair_integral(na, la, nb, lb, n_radial: int) -> float:
    """int_0^inf r^2 R_a R_b dr via generalized Gauss-Laguerre in u = r^2/2."""
    alpha = 0.5 * (la + lb + 1)
    u, w = roots_genlaguerre(n_radial, alpha)
    vals = laguerre(na, la + 0.5, u) * laguerre(nb, lb + 0.5, u)
    return (_radial_norm_const(na, la) * _radial_norm_const(nb, lb)
            * math.sqrt(2.0) * float(np.dot(w, vals)))


def inner_product_numeric(mode_a, mode_b, n_radial: int = 64,
                          n_theta: int = 64, n_phi: int = 64) -> complex:
    """<phi_a, phi_b> by tensorized radial x spherical quadrature.

    The radial factor uses generalized Gauss-Laguerre in u = r^2/2 (exact
    for the Laguerre product), the spherical factor Gauss-Legendre in
    cos(theta) times a uniform azimuthal rule.  Raises ResolutionError when
    the rule cannot certify exactness for the requested mode degrees.
    """
    a = ModeIndex(*mode_a).validate()
    b = ModeIndex(*mode_b).validate()
    if n_radial < (a.n + b.n) // 2 + 1:
        raise ResolutionError(
            f"n_radial={n_radial} cannot integrate Laguerre degrees {a.n}+{b.n}")
    if 2 * n_theta - 1 < a.l + b.l:
        raise ResolutionError(
            f"n_theta={n_theta} cannot integrate Legendre degrees {a.l}+{b.l}")
    if n_phi <= abs(a.m) + abs(b.m):
        raise ResolutionError(
            f"n_phi={n_phi} aliases azimuthal orders {a.m},{b.m}")

    x, w, phi, wphi = _sphere_rule(n_theta, n_phi)
    ya = np.outer(assoc_legendre_norm(a.l, abs(a.m), x), np.exp(1j * a.m * phi))
    yb = np.outer(assoc_legendre_norm(b.l, abs(b.m), x), np.exp(1j * b.m * phi))
    sphere = complex(np.einsum("tp,tp,t->", ya, yb.conj(), w) * wphi)
    return _radial_pair_integral(a.n, a.l, b.n, b.l, n_radial) * sphere


def orthonormality_max_deviation(nmax: int, lmax: int, n_radial: int = 64,
                                 n_theta: int = 64, n_phi: int = 64) -> float:
    """max |<phi_a, phi_b> - delta_ab| over all modes with n <= nmax, l <= lmax.

    Separable form: the Gram matrix factors into a radial-pair matrix over
    (n, l) and a spherical Gram over (l, m), so the full scan over
    ((nmax+1) * sum(2l+1))^2 pairs costs two small matrices.
    """
    x, w, phi, wphi = _sphere_rule(n_theta, n_phi)
    sph_modes = [(l, m) for l in range(lmax + 1) for m in range(-l, l + 1)]
    Y = np.empty((len(sph_modes), n_theta, n_phi), dtype=complex)
    for i, (l, m) in enumerate(sph_modes):
        Y[i] = np.outer(assoc_legendre_norm(l, abs(m), x), np.exp(1j * m * phi))
    flat = Y.reshape(len(sph_modes), -1)
    wflat = np.repeat(w, n_phi) * wphi
    sphere_gram = (flat * wflat) @ flat.conj().T

    rad_modes = [(n, l) for n in range(nmax + 1) for l in range(lmax + 1)]
    R = np.empty((len(rad_modes), len(rad_modes)))
    for i, (na, la) in enumerate(rad_modes):
        for j, (nb, lb) in enumerate(rad_modes[: i + 1]):
            R[i, j] = R[j, i] = _radial_pair_integral(na, la, nb, lb, n_radial)

    rad_pos = {nl: i for i, nl in enumerate(rad_modes)}
    sph_pos = {lm: i for i, lm in enumerate(sph_modes)}
    modes = [ModeIndex(n, l, m) for n in range(nmax + 1) for l, m in sph_modes]
    ri = np.array([rad_pos[(mo.n, mo.l)] for mo in modes])
    si = np.array([sph_pos[(mo.l, mo.m)] for mo in modes])
    gram = R[np.ix_(ri, ri)] * sphere_gram[np.ix_(si, si)]
    return float(np.max(np.abs(gram - np.eye(len(modes)))))


# 6th-order central second-difference stencil
_D2_OFFSETS = np.array([-3, -2, -1, 0, 1, 2, 3])
_D2_COEFFS = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])


def oscillator_residual(mode, points, h: float = 1e-2) -> float:
    """max_p |(-Lap + |v|^2/4) phi - (2n+l+3/2) phi| / max(1, |phi|).

    The Laplacian uses 6th-order central differences with step ``h``;
    points must stay away from |v| = 0 when l > 0 (the |v|^l cusp breaks
    the stencil's smoothness assumption).
    """
    mode = ModeIndex(*mode).validate()
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if mode.l > 0 and np.any(np.linalg.norm(pts, axis=1) < 10 * h):
        raise ValueError("sample points too close to the origin for l > 0")
    center = eval_phi(mode, pts)
    lap = np.zeros_like(center)
    for axis in range(3):
        shifted = np.repeat(pts[None, :, :], len(_D2_OFFSETS), axis=0)
        shifted[:, :, axis] += h * _D2_OFFSETS[:, None]
        vals = eval_phi(mode, shifted.reshape(-1, 3)).reshape(len(_D2_OFFSETS), -1)
        lap += np.tensordot(_D2_COEFFS, vals, axes=1) / (h * h)
    r2 = np.einsum("ij,ij->i", pts, pts)
    eig = 2 * mode.n + mode.l + 1.5
    resid = np.abs(-lap + 0.25 * r2 * center - eig * center)
    return float(np.max(resid / np.maximum(1.0, np.abs(center))))
