"""Physical models feeding the interferometer simulation.

Three ingredients:

* the simulated starlight: a double-slit source with Gaussian
  illumination whose far-field mutual coherence follows the
  van Cittert-Zernike theorem, and the two-mode thermal state it
  induces at the collection fibers;
* the heralded down-conversion reference: photon-number statistics of
  the heralded pulse and its split into the path-entangled reference
  state (PERS);
* small diagnostics relating second-order coherence to the spectral
  Schmidt number.

Units are SI throughout (meters, seconds, radians).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import quad

from .fock import (
    DensityOperator,
    FockConfig,
    apply_unitary,
    bs_unitary,
    phase_unitary,
    tensor,
    vacuum_state,
)


def intensity_profile(x, gaussian_radius, slit_half_separation, slit_width):
    """Unnormalized source intensity: two slits under a Gaussian beam.

    I(x) = [rect((x-d)/w) + rect((x+d)/w)] * exp(-2 x^2 / sigma^2).
    Overlapping slits (w >= 2d) simply add, which covers the
    single-slit limit d -> 0.
    """
    x = np.asarray(x, dtype=float)
    d, w, sigma = slit_half_separation, slit_width, gaussian_radius
    slits = (np.abs(x - d) <= w / 2).astype(float) + (np.abs(x + d) <= w / 2)
    return slits * np.exp(-2.0 * x**2 / sigma**2)


@dataclass(frozen=True)
class SourceModel:
    """Double-slit-with-Gaussian-illumination source and its geometry.

    slit_half_separation : center of a slit to the midpoint between slits (d)
    slit_width           : width of each slit (w)
    gaussian_radius      : 1/e^2 intensity radius of the illuminating beam (sigma)
    wavelength, distance : central wavelength and source-to-detection distance
    """

    slit_half_separation: float
    slit_width: float
    gaussian_radius: float
    wavelength: float = 830e-9
    distance: float = 1.02

    def __post_init__(self):
        for name in ("slit_half_separation", "slit_width", "gaussian_radius",
                     "wavelength", "distance"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.slit_width < 2 * self.slit_half_separation:
            raise ValueError("slits overlap: require slit_width < 2*slit_half_separation")

    def slit_intervals(self):
        d, w = self.slit_half_separation, self.slit_width
        return ((-d - w / 2, -d + w / 2), (d - w / 2, d + w / 2))

    def intensity(self, x):
        return intensity_profile(x, self.gaussian_radius,
                                 self.slit_half_separation, self.slit_width)

    @cached_property
    def _intensity_norm(self) -> float:
        total = 0.0
        for lo, hi in self.slit_intervals():
            val, _ = quad(self.intensity, lo, hi, epsabs=0.0, epsrel=1e-10)
            total += val
        return total


def coherence_vcz(source: SourceModel, y1: float, y2: float) -> complex:
    """Complex degree of coherence between detection-plane points y1, y2.

    Van Cittert-Zernike: j = e^{-i pi r/(lambda z)} * FT of the normalized
    intensity at spatial frequency (y2-y1)/(lambda z), with r = y2^2 - y1^2.
    Evaluated by adaptive quadrature over the slit supports.
    """
    if not (np.isfinite(y1) and np.isfinite(y2)):
        raise ValueError("positions must be finite")
    dy = y2 - y1
    r = y2**2 - y1**2
    lam_z = source.wavelength * source.distance
    k = 2.0 * math.pi * dy / lam_z

    re = im = 0.0
    for lo, hi in source.slit_intervals():
        val, _ = quad(lambda x: source.intensity(x) * math.cos(k * x),
                      lo, hi, epsabs=0.0, epsrel=1e-9, limit=200)
        re += val
        val, _ = quad(lambda x: -source.intensity(x) * math.sin(k * x),
                      lo, hi, epsabs=0.0, epsrel=1e-9, limit=200)
        im += val
    j = complex(re, im) / source._intensity_norm
    j *= cmath.exp(-1j * math.pi * r / lam_z)
    if abs(j) > 1.0:
        if abs(j) > 1.0 + 1e-9:
            raise ValueError(f"|j| = {abs(j)!r} exceeds 1 beyond tolerance")
        j /= abs(j)
    return j


@dataclass(frozen=True)
class CoherencePair:
    """Mean photon number and mutual coherence of the two collected fields."""

    mean_photons: float = 0.008
    j: complex = 0.0
    y1: float = 0.0
    y2: float = 0.0

    def __post_init__(self):
        if self.mean_photons < 0:
            raise ValueError("mean_photons must be nonnegative")
        if abs(self.j) > 1.0 + 1e-9:
            raise ValueError("|j| must not exceed 1")


@dataclass(frozen=True)
class SpdcModel:
    """Down-conversion source parameters (per-pulse statistics)."""

    mean_photons: float = 0.01
    heralding_efficiency: float = 0.28
    schmidt_number: float = 1.51

    def __post_init__(self):
        if self.mean_photons < 0:
            raise ValueError("mean_photons must be nonnegative")
        if not 0.0 <= self.heralding_efficiency <= 1.0:
            raise ValueError("heralding_efficiency must lie in [0, 1]")
        if self.schmidt_number < 1.0:
            raise ValueError("schmidt_number must be >= 1")


def thermal_pn(nbar: float, n: int) -> float:
    """Bose photon-number distribution p(n) = nbar^n / (nbar+1)^(n+1)."""
    if nbar < 0:
        raise ValueError("nbar must be nonnegative")
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    if nbar == 0.0:
        return 1.0 if n == 0 else 0.0
    return nbar**n / (nbar + 1.0) ** (n + 1)


def thermal_state(nbar: float, config: FockConfig) -> DensityOperator:
    """Single-mode thermal state, truncated at n_max and renormalized."""
    if config.mode_count != 1:
        raise ValueError("thermal_state builds a single-mode state")
    p = np.array([thermal_pn(nbar, n) for n in range(config.n_max + 1)])
    return DensityOperator(config, np.diag(p / p.sum()).astype(complex))


def thermal_pair_state(pair: CoherencePair, config: FockConfig) -> DensityOperator:
    """Two-mode thermal state with first-order coherence matrix
    [[nbar, nbar*conj(j)], [nbar*j, nbar]].

    Built exactly (up to truncation) by diagonalizing the coherence matrix
    into independent thermal eigenmodes of means nbar*(1 +/- |j|) and
    rotating back with a balanced beam splitter whose phase is fixed so
    that <1,0|rho|0,1> = nbar*j + O(nbar^2).
    """
    if config.mode_count != 2:
        raise ValueError("thermal_pair_state builds a two-mode state")
    j = complex(pair.j)
    if abs(j) > 1.0 + 1e-9:
        raise ValueError("|j| must not exceed 1")
    nbar = pair.mean_photons
    mode_cfg = FockConfig(1, config.n_max)
    rho = tensor(thermal_state(nbar * (1 + abs(j)), mode_cfg),
                 thermal_state(nbar * (1 - abs(j)), mode_cfg))
    # i*e^{i phi} = e^{-i arg j} orients the single-photon coherence along j
    phi = -cmath.phase(j) - math.pi / 2
    return apply_unitary(rho, bs_unitary(config, 0, 1, math.pi / 4, phi))


def heralded_state(spdc: SpdcModel, config: FockConfig) -> DensityOperator:
    """Heralded reference pulse: eta*p(1)|1><1| + (2-eta)*eta*p(2)|2><2|,
    renormalized to trace 1 (vacuum and higher orders neglected)."""
    if config.mode_count != 1:
        raise ValueError("heralded_state builds a single-mode state")
    if config.n_max < 2:
        raise ValueError("heralded_state needs n_max >= 2")
    eta = spdc.heralding_efficiency
    m = np.zeros((config.hilbert_dim,) * 2, dtype=complex)
    m[1, 1] = eta * thermal_pn(spdc.mean_photons, 1)
    m[2, 2] = (2.0 - eta) * eta * thermal_pn(spdc.mean_photons, 2)
    return DensityOperator(config, m).normalize()


def herald_probability(spdc: SpdcModel) -> float:
    """Per-pulse probability that the herald detector announces a pulse
    (the pre-normalization trace of the heralded state)."""
    eta = spdc.heralding_efficiency
    return eta * thermal_pn(spdc.mean_photons, 1) \
        + (2.0 - eta) * eta * thermal_pn(spdc.mean_photons, 2)


def pers_split(heralded: DensityOperator, delta: float,
               config: FockConfig) -> DensityOperator:
    """Split the heralded pulse into the two reference paths.

    Tensor with vacuum, balanced beam splitter, then the controllable
    path phase e^{i delta n} on mode 2.  A single-photon input yields
    the path-entangled reference (|1,0> + i e^{i delta}|0,1>)/sqrt(2);
    the constant i is the splitter convention and is absorbed downstream.
    """
    if heralded.config.mode_count != 1:
        raise ValueError("pers_split expects a single-mode input")
    if config.mode_count != 2 or config.n_max != heralded.config.n_max:
        raise ValueError("config mismatch: need two modes with the same n_max")
    if abs(heralded.trace() - 1.0) > 1e-9:
        raise ValueError("input state must have unit trace")
    rho = tensor(heralded, vacuum_state(heralded.config))
    rho = apply_unitary(rho, bs_unitary(config, 0, 1, math.pi / 4, 0.0))
    return apply_unitary(rho, phase_unitary(config, 1, delta))


def g2_from_schmidt(schmidt_number: float) -> float:
    """Zero-delay second-order coherence of unheralded multimode
    squeezed vacuum with K Schmidt modes: g2(0) = 1 + 1/K."""
    if schmidt_number < 1.0:
        raise ValueError("schmidt_number must be >= 1")
    return 1.0 + 1.0 / schmidt_number


def schmidt_mode_weights(schmidt_number: float) -> tuple[float, float]:
    """Two-mode weights (lam1, lam2), lam1+lam2 = 1, reproducing a given
    Schmidt number K = 1/(lam1^2 + lam2^2).  Requires 1 <= K <= 2."""
    k = schmidt_number
    if not 1.0 <= k <= 2.0:
        raise ValueError("two-mode weights exist only for 1 <= K <= 2")
    s = math.sqrt(2.0 / k - 1.0)
    return (1.0 + s) / 2.0, (1.0 - s) / 2.0
