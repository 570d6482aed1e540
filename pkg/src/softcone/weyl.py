"""Symbolic Weyl/CCR layer: exponentiated fields as (phase, label) words.

A Weyl element stands for e^(i phase) W(label).  Products never leave this
set thanks to the composition law

    W(f1) W(f2) = e^(-i sigma(f1, f2)) W(f1 + f2),      W(f)* = W(-f),

with sigma the symplectic form (imaginary part of the pairing).  Coherent
automorphisms act by pure phases  W(f) -> e^(-2i Im<-i v, f>) W(f)  and are
stored by their profile v, which need not be square integrable itself — only
its pairings with labels must converge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonIntegrablePairing
from .pairing import pair
from .photon import PhotonWaveFunction
from .profiles import DressingParams, profile_wavefunction
from .quadrature import QuadratureSpec
from .testfields import TestFieldPair, photon_wavefunction

TWO_PI = 2.0 * math.pi

# |f|^2 rho^2 integrable at 0 requires a small-k exponent above -3/2.
SQUARE_INTEGRABLE_EXPONENT = -1.5


def canonical_phase(phase: float) -> float:
    """Reduce an angle to [0, 2 pi)."""
    out = float(np.mod(phase, TWO_PI))
    return 0.0 if out == TWO_PI else out


def phase_distance(a: float, b: float) -> float:
    """Shortest circular distance between two angles."""
    d = abs(canonical_phase(a) - canonical_phase(b))
    return min(d, TWO_PI - d)


def _require_square_integrable(label: PhotonWaveFunction):
    if label.small_k_exponent <= SQUARE_INTEGRABLE_EXPONENT:
        raise NonIntegrablePairing(
            "label is not square integrable near k = 0 "
            f"(small-k exponent {label.small_k_exponent})"
        )


@dataclass(frozen=True)
class WeylElement:
    """One word e^(i phase) W(label); phase canonicalized to [0, 2 pi)."""

    label: PhotonWaveFunction
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "phase", canonical_phase(self.phase))


@dataclass(frozen=True)
class CoherentAutomorphism:
    """Phase action W(f) -> e^(-2i Im<-i profile, f>) W(f)."""

    profile: PhotonWaveFunction


def multiply(
    w1: WeylElement, w2: WeylElement, quadrature: QuadratureSpec | None = None
) -> WeylElement:
    """Weyl composition; requires both labels square integrable."""
    _require_square_integrable(w1.label)
    _require_square_integrable(w2.label)
    sigma = pair(w1.label, w2.label, quadrature).value.imag
    return WeylElement(w1.label + w2.label, w1.phase + w2.phase - sigma)


def adjoint(w: WeylElement) -> WeylElement:
    return WeylElement(-w.label, -w.phase)


def apply_automorphism(
    auto: CoherentAutomorphism, w: WeylElement, quadrature: QuadratureSpec | None = None
) -> WeylElement:
    """Same label, phase shifted by -2 Im<-i v, f> = -2 Re<v, f>."""
    shift = -2.0 * pair(auto.profile, w.label, quadrature).value.real
    return WeylElement(w.label, w.phase + shift)


def compose_difference(
    first: CoherentAutomorphism, second: CoherentAutomorphism
) -> CoherentAutomorphism:
    """The relative automorphism, acting by the difference of the phases."""
    return CoherentAutomorphism(first.profile - second.profile)


def state_phase(
    params: DressingParams,
    fields: TestFieldPair,
    quadrature: QuadratureSpec | None = None,
) -> complex:
    """The modulus-one factor e^(-2i Im<-i v_limit, f>) of the dressed
    plane-wave expectation of W(f); the remaining matrix element is not
    modelled here."""
    v = profile_wavefunction(params, "v_limit")
    f = photon_wavefunction(fields)
    angle = -2.0 * pair(v, f, quadrature).value.real
    return complex(math.cos(angle), math.sin(angle))
