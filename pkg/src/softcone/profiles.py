"""Infrared dressing profiles of a uniformly moving charge.

All profiles are transverse vector functions of momentum built from the
angular factor P_tr w / (1 - khat.w) (transverse projection of the velocity,
Doppler denominator) with different radial weights:

* sharp shell    chi_[sigma, kappa](|k|) |k|^(-3/2)              (``v_sigma``)
* full shell     sigma = 0                                       (``v_limit``)
* smooth window  g~(|k|) e^(-i u |k|) |k|^(-3/2)                 (``v_hat``)
* time-windowed emission over [0, T], in the closed form

      v_hat_T = v_hat + term2 + term3,

  where ``term2`` carries the stable factor (e^(i b T) - 1)/b with b = k.w
  written as i T e^(i b T / 2) sinc(b T / (2 pi)) (no Doppler denominator),
  and ``term3`` is the rapidly oscillating remainder with phase
  e^(-i(|k| - k.w) T).  Both remainders decay in T after pairing with a
  smooth wavefunction; the total tends to ``v_hat``.

The common prefactor alpha^(1/2) is included.  g~ is the unit-normalized 3D
transform of a radial bump, rescaled so g~(0) equals ``g_scale`` (1 for the
physical profile; other values deliberately break the infrared matching).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import PointSingularity
from .photon import PhotonWaveFunction, transverse_project
from .quadrature import gauss_rule, integrate_1d
from .testfields import (
    BumpProfile,
    RadialBumpTransform,
    _SingleSlotMemo,
    _truncation_radius,
)

TWO_PI = 2.0 * math.pi
PROFILE_KINDS = ("v_sigma", "v_limit", "v_hat", "v_hat_T")
TERM_KINDS = ("vhat", "term2", "term3", "total")


@dataclass(frozen=True)
class DressingParams:
    """Coupling, momentum cutoffs, velocity and smooth-window data.

    ``w`` is the charge velocity (|w| <= v_max < 1), ``u`` the emission time
    shift, ``g`` the radial window bump and ``g_scale`` the value enforced
    for g~ at zero momentum.
    """

    alpha: float = 0.01
    kappa: float = 1.0
    sigma: float = 0.0
    w: tuple = (0.0, 0.0, 0.3)
    v_max: float = 0.9
    u: float = 2.0
    g: BumpProfile = BumpProfile(0.0, 1.0, 1.0)
    g_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(
            self, "w", tuple(float(c) for c in np.asarray(self.w, dtype=float).reshape(3))
        )
        if not (self.alpha > 0):
            raise ValueError("alpha must be positive")
        if not (self.kappa > 0):
            raise ValueError("kappa must be positive")
        if not (0.0 <= self.sigma <= self.kappa):
            raise ValueError("sigma must lie in [0, kappa]")
        if not (0.0 < self.v_max < 1.0):
            raise ValueError("v_max must lie in (0, 1)")
        if self.speed > self.v_max:
            raise ValueError("|w| must not exceed v_max")
        if not (self.u > 0):
            raise ValueError("time shift u must be positive")
        if self.g.center != 0.0:
            raise ValueError("the window profile must be radial (center 0)")

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.w))

    @property
    def w_vec(self) -> np.ndarray:
        return np.asarray(self.w, dtype=float)


@lru_cache(maxsize=32)
def _window_transform(g: BumpProfile, g_scale: float):
    """Radial transform of the window bump, rescaled to g~(0) = g_scale."""
    tr = RadialBumpTransform(g)
    at_zero = float(tr(np.array([0.0]))[0])
    return tr, g_scale / at_zero


def _window_truncation(params: DressingParams) -> float:
    tr, scale = _window_transform(params.g, params.g_scale)
    return _truncation_radius([lambda rho: scale * tr(rho)])


def _angular_parts(params: DressingParams, mu, phi):
    """khat.w, the Doppler denominator and P_tr w on a spherical grid."""
    mu = np.asarray(mu, dtype=float)
    phi = np.asarray(phi, dtype=float)
    sin_th = np.sqrt(np.clip(1.0 - mu * mu, 0.0, None))
    kx = sin_th * np.cos(phi)
    ky = sin_th * np.sin(phi)
    kz = mu
    w1, w2, w3 = params.w
    kw = kx * w1 + ky * w2 + kz * w3
    pw = np.stack(
        [w1 - kw * kx, w2 - kw * ky, w3 - kw * kz], axis=-1
    )
    return kw, 1.0 - kw, pw


def _require_positive(rho):
    if np.any(rho <= 0.0):
        raise PointSingularity("dressing profiles are singular at zero momentum")


def _sharp_wavefunction(params: DressingParams, sigma_lo: float) -> PhotonWaveFunction:
    sqrt_alpha = math.sqrt(params.alpha)
    lo, hi = sigma_lo, params.kappa

    def evaluator(rho, mu, phi):
        rho = np.asarray(rho, dtype=float)
        _require_positive(rho)
        kw, denom, pw = _angular_parts(params, mu, phi)
        radial = sqrt_alpha * np.where(
            (rho >= lo) & (rho <= hi), rho ** -1.5, 0.0
        )
        scal = radial / denom
        return (scal[..., None] * pw).astype(complex)

    return PhotonWaveFunction(
        evaluator=evaluator,
        small_k_exponent=(-1.5 if lo == 0.0 else 0.0),
        truncation_radius=hi,
        phase_terms=((0.0, 0.0),),
        label=("v_limit" if lo == 0.0 else "v_sigma"),
    )


def _dressed_wavefunction(params: DressingParams, which: str, T) -> PhotonWaveFunction:
    sqrt_alpha = math.sqrt(params.alpha)
    u = params.u
    tr, scale = _window_transform(params.g, params.g_scale)
    gt = _SingleSlotMemo(lambda rho: scale * tr(rho))
    w_speed = params.speed
    w_perp = math.hypot(params.w[0], params.w[1])

    def evaluator(rho, mu, phi):
        rho = np.asarray(rho, dtype=float)
        _require_positive(rho)
        kw, denom, pw = _angular_parts(params, mu, phi)
        g = gt(rho)
        phase_u = np.exp(-1j * u * rho)
        acc = 0.0
        if which in ("vhat", "total"):
            acc = acc + (g * phase_u * rho ** -1.5) / denom
        if which in ("term2", "term3", "total"):
            if which in ("term2", "total"):
                b = rho * kw
                bracket = 1j * T * np.exp(0.5j * b * T) * np.sinc(b * T / TWO_PI)
                acc = acc - g * np.exp(-1j * (u + T) * rho) * rho ** -0.5 * bracket
            if which in ("term3", "total"):
                acc = acc - (
                    g * phase_u * rho ** -1.5 * np.exp(-1j * rho * (1.0 - kw) * T)
                ) / denom
        out = sqrt_alpha * acc
        return out[..., None] * pw

    if which == "vhat":
        phases = ((-u, 0.0),)
        exponent = -1.5
        x_perp = 0.0
    else:
        span = w_speed * T
        phases = {
            "term2": ((-(u + T), 0.0), (-(u + T), span)),
            "term3": ((-(u + T), span),),
            "total": ((-u, 0.0), (-(u + T), 0.0), (-(u + T), span)),
        }[which]
        exponent = {"term2": -0.5, "term3": -1.5, "total": -0.5}[which]
        x_perp = w_perp * T
    return PhotonWaveFunction(
        evaluator=evaluator,
        small_k_exponent=exponent,
        truncation_radius=_window_truncation(params),
        phase_terms=phases,
        x_perp_extent=x_perp,
        label=("v_hat" if which == "vhat" else f"v_hat_T[{which}]"),
    )


@lru_cache(maxsize=128)
def _cached_wavefunction(params: DressingParams, kind: str, T) -> PhotonWaveFunction:
    if kind == "v_sigma":
        return _sharp_wavefunction(params, params.sigma)
    if kind == "v_limit":
        return _sharp_wavefunction(params, 0.0)
    if kind == "v_hat":
        return _dressed_wavefunction(params, "vhat", None)
    if kind == "v_hat_T":
        return _dressed_wavefunction(params, "total", float(T))
    if kind in ("term2", "term3"):
        return _dressed_wavefunction(params, kind, float(T))
    raise ValueError(f"unknown profile kind {kind!r}")


def profile_wavefunction(params: DressingParams, kind: str, T: float | None = None):
    """Wavefunction view of a dressing profile; ``v_hat_T`` takes a window
    length T >= 0 (T = 0 is the empty window, identically zero)."""
    if kind not in PROFILE_KINDS:
        raise ValueError(f"kind must be one of {PROFILE_KINDS}")
    if kind == "v_hat_T":
        if T is None or not (T >= 0):
            raise ValueError("v_hat_T requires an emission window length T >= 0")
    elif T is not None:
        raise ValueError(f"kind {kind!r} does not take a window length")
    return _cached_wavefunction(params, kind, T)


def term_wavefunction(params: DressingParams, which: str, T: float) -> PhotonWaveFunction:
    """One constituent of the ``v_hat_T`` closed form (for decay studies)."""
    if which not in TERM_KINDS:
        raise ValueError(f"which must be one of {TERM_KINDS}")
    if which == "vhat":
        return _cached_wavefunction(params, "v_hat", None)
    if which == "total":
        return _cached_wavefunction(params, "v_hat_T", float(T))
    return _cached_wavefunction(params, which, float(T))


def evaluate(params: DressingParams, kind: str, k, T: float | None = None) -> np.ndarray:
    """Pointwise profile value at Cartesian momentum k (complex 3-vector)."""
    return profile_wavefunction(params, kind, T)(k)


def v_hat_T_direct(params: DressingParams, T: float, k) -> np.ndarray:
    """Nested time-ordered double integral for the windowed profile, evaluated
    literally (two levels of adaptive 1D quadrature).  Slow; used to validate
    the closed form."""
    if T < 0:
        raise ValueError("window length T must be >= 0")
    k = np.asarray(k, dtype=float).reshape(3)
    rho = float(np.linalg.norm(k))
    if rho == 0.0:
        raise PointSingularity("zero momentum")
    if T == 0:
        return np.zeros(3, dtype=complex)
    khat = k / rho
    b = float(np.dot(k, params.w_vec))

    def inner(t: float) -> complex:
        return integrate_1d(
            lambda tau: np.exp(-1j * rho * tau), t, T, rel_tol=1e-12, freq=rho
        )

    outer = integrate_1d(
        lambda t: np.array([np.exp(1j * b * ti) * inner(float(ti)) for ti in t]),
        0.0,
        T,
        rel_tol=1e-11,
        freq=abs(b),
    )
    tr, scale = _window_transform(params.g, params.g_scale)
    gval = scale * float(tr(np.array([rho]))[0])
    coeff = (
        -math.sqrt(params.alpha)
        * math.sqrt(rho)
        * gval
        * np.exp(-1j * rho * params.u)
        * outer
    )
    return coeff * transverse_project(khat, params.w_vec)


def shell_norm_squared(params: DressingParams, sigma_lo: float, quadrature=None) -> float:
    """Squared norm of the full-shell profile restricted to [sigma_lo, kappa].

    Grows like alpha * A(|w|) * ln(kappa / sigma_lo) as sigma_lo -> 0.
    """
    if not (0.0 < sigma_lo < params.kappa):
        raise ValueError("sigma_lo must lie strictly between 0 and kappa")
    from . import pairing

    v = profile_wavefunction(params, "v_limit")
    res = pairing.pair(v, v, quadrature, r_bounds=(sigma_lo, params.kappa))
    return float(res.value.real)


def difference_norm_squared(
    params: DressingParams, sigma_probe: float, quadrature=None
) -> float:
    """Squared norm of (full shell - smooth window) above sigma_probe.

    Stays bounded as sigma_probe -> 0 exactly when g_scale = 1 (the infrared
    tails cancel); otherwise it grows logarithmically."""
    if not (sigma_probe > 0):
        raise ValueError("sigma_probe must be positive")
    from . import pairing

    diff = profile_wavefunction(params, "v_limit") - profile_wavefunction(params, "v_hat")
    res = pairing.pair(
        diff, diff, quadrature, r_bounds=(sigma_probe, diff.truncation_radius)
    )
    return float(res.value.real)


def pairwise_divergence_slope(
    params: DressingParams,
    w_first,
    w_second,
    sigma_grid=(1e-2, 1e-3, 1e-4, 1e-5, 1e-6),
    quadrature=None,
):
    """Slope of |v_limit(w) - v_limit(w')|^2 restricted to [sigma, kappa]
    against ln(kappa/sigma); zero exactly when the velocities coincide."""
    from . import pairing

    pa = replace(params, w=tuple(np.asarray(w_first, dtype=float)))
    pb = replace(params, w=tuple(np.asarray(w_second, dtype=float)))
    diff = profile_wavefunction(pa, "v_limit") - profile_wavefunction(pb, "v_limit")
    xs, ys = [], []
    for sigma in sorted(sigma_grid, reverse=True):
        res = pairing.pair(diff, diff, quadrature, r_bounds=(float(sigma), params.kappa))
        xs.append(math.log(params.kappa / float(sigma)))
        ys.append(res.value.real)
    slope = float(np.polyfit(xs, ys, 1)[0])
    return slope


def angular_factor(speed: float) -> float:
    """2 pi v^2 int_(-1)^1 (1 - mu^2) / (1 - v mu)^2 dmu  (Gauss-Legendre).

    The logarithmic growth rate of the shell norm per unit coupling."""
    if not (0.0 <= speed < 1.0):
        raise ValueError("speed must lie in [0, 1)")
    x, wts = gauss_rule(256)
    integrand = (1.0 - x * x) / (1.0 - speed * x) ** 2
    return float(TWO_PI * speed * speed * np.sum(wts * integrand))


def pairwise_angular_factor(w_first, w_second) -> float:
    """Full solid-angle integral of |P_tr(w/(1-khat.w) - w'/(1-khat.w'))|^2."""
    wa = np.asarray(w_first, dtype=float).reshape(3)
    wb = np.asarray(w_second, dtype=float).reshape(3)
    mu, wmu = gauss_rule(256)
    phi = (np.arange(128) + 0.5) * (TWO_PI / 128)
    wphi = TWO_PI / 128
    sin_th = np.sqrt(np.clip(1.0 - mu * mu, 0.0, None))
    kx = sin_th[:, None] * np.cos(phi)[None, :]
    ky = sin_th[:, None] * np.sin(phi)[None, :]
    kz = np.broadcast_to(mu[:, None], kx.shape)

    def doppler_field(w):
        kw = kx * w[0] + ky * w[1] + kz * w[2]
        den = 1.0 - kw
        comp = [w[i] / den for i in range(3)]
        kdotc = kx * comp[0] + ky * comp[1] + kz * comp[2]
        return [
            comp[0] - kdotc * kx,
            comp[1] - kdotc * ky,
            comp[2] - kdotc * kz,
        ]

    fa = doppler_field(wa)
    fb = doppler_field(wb)
    mag2 = sum((fa[i] - fb[i]) ** 2 for i in range(3))
    return float(np.sum(wmu[:, None] * wphi * mag2))