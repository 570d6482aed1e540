"""Deterministic quadrature rules for singular and oscillatory momentum integrals.

The momentum-space pairings of this package are integrals over R^3 written in
spherical coordinates

    integral = int_0^inf rho^2 drho int_{-1}^1 dmu int_0^{2pi} dphi  G(rho, mu, phi),

with integrands that are (i) power-law graded near rho = 0 and (ii) oscillatory
in rho with a known frequency budget (time supports, worldline cutoffs T).
The rules here are pure functions of a `QuadratureSpec` plus explicit frequency
metadata, so node generation is reproducible bit-for-bit:

* radial: geometric panels from ``r_min`` to ``r_max`` (``panels_per_decade``),
  each panel subdivided uniformly so the local Gauss-Legendre rule keeps at
  least ``nodes_per_wavelength`` nodes per oscillation wavelength;
* angular: Gauss-Legendre in mu = cos(theta) (all nodes interior, never on the
  polarisation axis mu = +-1) times a uniform midpoint rule in phi whose first
  node is offset away from phi = 0.

Large oscillation frequencies are handled by scaling panel density linearly
with the frequency rather than by Filon/Levin weights; this is adequate at desk
scale (T up to about 10^3) and is the documented scalability boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import ToleranceNotMet

MAX_RADIAL_NODES = 2_000_000
MAX_ANGULAR_NODES = 4096


@lru_cache(maxsize=64)
def gauss_rule(order: int):
    """Cached Gauss-Legendre nodes/weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


@dataclass(frozen=True)
class QuadratureSpec:
    """Description of the product rule used for all pairings and norms.

    Tolerances are targets for the two-level refinement check, not promises:
    the refinement difference is reported as the error estimate and compared
    against ``max(abs_tol, rel_tol * scale)``.
    """

    r_min: float = 1e-8
    r_max: float = 80.0
    panels_per_decade: int = 4
    gauss_order: int = 16
    n_cos_theta: int = 48
    n_phi: int = 8
    phi_offset: float = 0.5
    oscillation_aware: bool = True
    nodes_per_wavelength: float = 6.0
    abs_tol: float = 1e-12
    rel_tol: float = 1e-6

    def __post_init__(self):
        if not (0 < self.r_min < self.r_max):
            raise ValueError("need 0 < r_min < r_max")
        if self.panels_per_decade < 1 or self.gauss_order < 2:
            raise ValueError("panel/order counts too small")
        if self.n_cos_theta < 2 or self.n_phi < 1:
            raise ValueError("angular node counts too small")
        if self.oscillation_aware and self.nodes_per_wavelength < 6:
            raise ValueError("nodes_per_wavelength must be >= 6 when oscillation_aware")

    def refined(self) -> "QuadratureSpec":
        """One refinement level: double panel density and angular resolution."""
        return replace(
            self,
            panels_per_decade=2 * self.panels_per_decade,
            n_cos_theta=2 * self.n_cos_theta,
            n_phi=2 * self.n_phi,
            nodes_per_wavelength=2 * self.nodes_per_wavelength
            if self.oscillation_aware
            else self.nodes_per_wavelength,
        )


# ----------------------------------------------------------------------------
# radial meshes
# ----------------------------------------------------------------------------

def geometric_breakpoints(r_lo: float, r_hi: float, panels_per_decade: int) -> np.ndarray:
    """Geometric panel edges covering [r_lo, r_hi]."""
    if not (0 < r_lo < r_hi):
        raise ValueError("need 0 < r_lo < r_hi")
    n = int(math.ceil(panels_per_decade * math.log10(r_hi / r_lo))) + 1
    edges = r_lo * 10.0 ** (np.arange(n + 1) / panels_per_decade)
    edges = edges[edges < r_hi * (1 - 1e-14)]
    return np.concatenate([edges, [r_hi]])


def radial_mesh(spec: QuadratureSpec, r_lo: float, r_hi: float, freq: float = 0.0):
    """Graded, oscillation-aware radial nodes and weights on [r_lo, r_hi].

    ``freq`` is the maximum |d(phase)/d rho| of the integrand; each geometric
    panel is split uniformly until the Gauss rule on every subpanel sees at
    least ``nodes_per_wavelength`` nodes per wavelength 2 pi / freq.
    """
    edges = geometric_breakpoints(r_lo, r_hi, spec.panels_per_decade)
    x, w = gauss_rule(spec.gauss_order)
    nodes, weights = [], []
    budget = 0
    for a, b in zip(edges[:-1], edges[1:]):
        nsub = 1
        if spec.oscillation_aware and freq > 0:
            # nodes_per_wavelength nodes per 2 pi / freq, spread over the
            # gauss_order nodes of each subpanel
            nsub = max(
                1,
                int(
                    math.ceil(
                        spec.nodes_per_wavelength
                        * freq
                        * (b - a)
                        / (2.0 * math.pi * spec.gauss_order)
                    )
                ),
            )
        sub = np.linspace(a, b, nsub + 1)
        for aa, bb in zip(sub[:-1], sub[1:]):
            half = 0.5 * (bb - aa)
            nodes.append(0.5 * (aa + bb) + half * x)
            weights.append(half * w)
        budget += nsub * spec.gauss_order
        if budget > MAX_RADIAL_NODES:
            raise ToleranceNotMet(
                f"radial mesh would need more than {MAX_RADIAL_NODES} nodes "
                f"(freq={freq:.3g}, interval=[{r_lo:.3g}, {r_hi:.3g}])"
            )
    return np.concatenate(nodes), np.concatenate(weights)


def angular_mesh(spec: QuadratureSpec, n_mu: int | None = None, n_phi: int | None = None):
    """Sphere product rule: (mu GL nodes/weights, phi nodes/weights).

    GL nodes in mu are strictly interior, so the polarisation-frame axis
    mu = +-1 is never sampled; phi nodes are midpoint-offset.
    """
    n_mu = spec.n_cos_theta if n_mu is None else n_mu
    n_phi = spec.n_phi if n_phi is None else n_phi
    if max(n_mu, n_phi) > MAX_ANGULAR_NODES:
        raise ToleranceNotMet(
            f"angular rule would need more than {MAX_ANGULAR_NODES} nodes per axis"
        )
    mu, wmu = gauss_rule(n_mu)
    dphi = 2.0 * math.pi / n_phi
    phi = dphi * (np.arange(n_phi) + spec.phi_offset)
    wphi = np.full(n_phi, dphi)
    return mu, wmu, phi, wphi


# ----------------------------------------------------------------------------
# one-dimensional adaptive integration (transform evaluation, oracles)
# ----------------------------------------------------------------------------

def integrate_1d(func, a: float, b: float, rel_tol: float = 1e-10,
                 freq: float = 0.0, order: int = 12, max_doublings: int = 16):
    """Composite-Gauss integral of a vectorized callable on [a, b].

    Deterministic panel-doubling: start from a frequency-informed panel count
    and double until two consecutive levels agree to ``rel_tol`` (relative to
    the larger magnitude, with an absolute floor). Raises ToleranceNotMet if
    the doubling stalls.
    """
    if b <= a:
        return 0.0
    x, w = gauss_rule(order)
    npanels = max(2, int(math.ceil(freq * (b - a) / (2.0 * math.pi))))
    prev = None
    for _ in range(max_doublings):
        edges = np.linspace(a, b, npanels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
        half = 0.5 * (edges[1] - edges[0])
        pts = mid + half * x[None, :]
        vals = np.asarray(func(pts.ravel())).reshape(pts.shape)
        total = complex(np.sum(vals * (half * w)[None, :]))
        if prev is not None and abs(total - prev) <= rel_tol * max(abs(total), 1e-30):
            return total
        prev = total
        npanels *= 2
    raise ToleranceNotMet(
        f"integrate_1d failed to converge on [{a}, {b}] (freq={freq:.3g})"
    )
