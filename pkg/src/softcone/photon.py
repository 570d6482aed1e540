"""Single-photon kinematics and the momentum-space pairing interface.

Provides the fixed polarisation frame, transverse projection, helicity
components, the `PhotonWaveFunction` value type shared by test-field images
and dressing profiles, and the scalar/symplectic pairings (delegated to the
quadrature engine in `pairing`).

Conventions fixed here and relied on everywhere else:

* scalar product antilinear in the FIRST slot,  <f, g> = int d3k conj(f).g;
* symplectic form sigma(f, g) = Im <f, g>;
* polarisation frame  eps_plus(khat) = (khat_2, -khat_1, 0)/sqrt(khat_1^2+khat_2^2),
  eps_minus = khat x eps_plus,  singular on the k3-axis (AxisSingularity);
* transverse projection is implemented frame-free, P u = u - (khat.u) khat,
  which agrees with the frame sum off the axis and is regular on it.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import AxisSingularity, NonIntegrablePairing
from .quadrature import QuadratureSpec

AXIS_TOLERANCE = 1e-12


def polarisation(khat):
    """Polarisation pair (eps_plus, eps_minus) for a unit direction off the axis.

    Raises AxisSingularity within AXIS_TOLERANCE of +-e3; quadrature rules are
    built so they never place nodes there.
    """
    k = np.asarray(khat, dtype=float)
    perp2 = k[..., 0] ** 2 + k[..., 1] ** 2
    if np.any(perp2 <= AXIS_TOLERANCE**2):
        raise AxisSingularity("polarisation frame undefined on the k3-axis")
    norm = np.sqrt(perp2)
    eps_plus = np.stack(
        [k[..., 1] / norm, -k[..., 0] / norm, np.zeros_like(norm)], axis=-1
    )
    eps_minus = np.cross(k, eps_plus)
    return eps_plus, eps_minus


def transverse_project(khat, u):
    """Frame-free transverse projection  u - (khat.u) khat  (axis-safe)."""
    k = np.asarray(khat, dtype=float)
    u = np.asarray(u)
    return u - np.sum(k * u, axis=-1, keepdims=True) * k


def helicity_components(f: "PhotonWaveFunction", k):
    """(f_plus, f_minus) = (eps_plus . f(k), eps_minus . f(k)); axis excluded."""
    k = np.asarray(k, dtype=float)
    rho = np.linalg.norm(k, axis=-1, keepdims=True)
    khat = k / rho
    ep, em = polarisation(khat)
    val = f(k)
    return np.sum(ep * val, axis=-1), np.sum(em * val, axis=-1)


@dataclass(frozen=True)
class PhotonWaveFunction:
    """Transverse momentum-space amplitude with quadrature metadata.

    ``evaluator(rho, mu, phi)`` maps broadcast-compatible spherical-coordinate
    arrays to a complex array of shape ``broadcast(...) + (3,)``. Passing
    tensor-shaped inputs (rho[:,None,None], mu[None,:,None], phi[None,None,:])
    keeps radial factors cheap through broadcasting.

    Metadata drives mesh construction:

    * ``small_k_exponent``: p with |f(k)| = O(|k|^p) near 0 (integrability);
    * ``truncation_radius``: beyond it the amplitude is negligible or cut;
    * ``phase_terms``: (c0, c1) pairs so the radial phases are approximately
      exp(i rho (c0 + c1 mu)); used for frequency and resonance budgeting;
    * ``freq_pad``: additive envelope bandwidth (support halfwidths);
    * ``x_perp_extent``: spatial offset from the 3-axis, drives phi resolution.
    """

    evaluator: object
    small_k_exponent: float
    truncation_radius: float
    phase_terms: tuple = ((0.0, 0.0),)
    freq_pad: float = 0.0
    x_perp_extent: float = 0.0
    label: str = ""

    def values(self, rho, mu, phi) -> np.ndarray:
        return self.evaluator(rho, mu, phi)

    def __call__(self, k) -> np.ndarray:
        """Pointwise Cartesian evaluation, k of shape (..., 3)."""
        k = np.asarray(k, dtype=float)
        rho = np.linalg.norm(k, axis=-1)
        safe = np.where(rho > 0, rho, 1.0)
        mu = k[..., 2] / safe
        phi = np.arctan2(k[..., 1], k[..., 0])
        out = self.evaluator(rho, mu, phi)
        return out

    # -- linear structure (labels form a complex vector space) --------------

    def _combined_meta(self, other: "PhotonWaveFunction") -> dict:
        terms = tuple(dict.fromkeys(self.phase_terms + other.phase_terms))[:16]
        return dict(
            small_k_exponent=min(self.small_k_exponent, other.small_k_exponent),
            truncation_radius=max(self.truncation_radius, other.truncation_radius),
            phase_terms=terms,
            freq_pad=max(self.freq_pad, other.freq_pad),
            x_perp_extent=max(self.x_perp_extent, other.x_perp_extent),
        )

    def __add__(self, other: "PhotonWaveFunction") -> "PhotonWaveFunction":
        f, g = self.evaluator, other.evaluator
        return PhotonWaveFunction(
            evaluator=lambda rho, mu, phi: f(rho, mu, phi) + g(rho, mu, phi),
            label=f"({self.label}+{other.label})",
            **self._combined_meta(other),
        )

    def __sub__(self, other: "PhotonWaveFunction") -> "PhotonWaveFunction":
        return self + (-other)

    def __neg__(self) -> "PhotonWaveFunction":
        return self.scaled(-1.0)

    def scaled(self, c: complex) -> "PhotonWaveFunction":
        """Scalar multiple c*f (c may be complex, e.g. -1j for Weyl labels)."""
        f = self.evaluator
        return replace(
            self,
            evaluator=lambda rho, mu, phi: c * f(rho, mu, phi),
            label=f"({c!r}*{self.label})",
        )


def zero_wavefunction() -> PhotonWaveFunction:
    """The zero label (identity Weyl element)."""

    def evaluator(rho, mu, phi):
        shape = np.broadcast(np.asarray(rho), np.asarray(mu), np.asarray(phi)).shape
        return np.zeros(shape + (3,), dtype=complex)

    return PhotonWaveFunction(
        evaluator=evaluator,
        small_k_exponent=2.0,
        truncation_radius=1.0,
        label="0",
    )


def check_integrable(v: PhotonWaveFunction, f: PhotonWaveFunction) -> None:
    """Raise NonIntegrablePairing unless the small-k exponents allow |conj(v).f|
    to be absolutely integrable against d3k (sum of exponents > -3)."""
    if v.small_k_exponent + f.small_k_exponent <= -3.0:
        raise NonIntegrablePairing(
            f"combined small-k exponent {v.small_k_exponent} + {f.small_k_exponent} "
            "<= -3: pairing not absolutely integrable near k = 0"
        )


def inner_product(f: PhotonWaveFunction, g: PhotonWaveFunction,
                  q: QuadratureSpec) -> complex:
    """<f, g> = int d3k conj(f(k)) . g(k), antilinear in the first slot."""
    from . import pairing

    return pairing.pair(f, g, q).value


def symplectic(f: PhotonWaveFunction, g: PhotonWaveFunction,
               q: QuadratureSpec) -> float:
    """sigma(f, g) = Im <f, g>."""
    return inner_product(f, g, q).imag
