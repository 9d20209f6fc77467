"""Truncated Fock-space linear algebra for few-photon linear optics.

Minimal dense machinery for multi-mode photon-number states: density
operators, beam-splitter and phase unitaries, binary-detector POVMs,
partial trace, and a partial-transpose entanglement witness.

Conventions used throughout the package:

* Modes are indexed ``0 .. mode_count-1``.  The joint basis is
  lexicographic in photon numbers with mode 0 the slowest-varying digit,
  i.e. basis index ``sum(n_k * (n_max+1)**(mode_count-1-k))``.
* Beam splitters use the symmetric "i on reflection" convention,

      a1+ -> cos(theta) a1+ + i e^{+i phi} sin(theta) a2+
      a2+ -> i e^{-i phi} sin(theta) a1+ + cos(theta) a2+

  so a 50:50 splitter maps |1,0> to (|1,0> + i|0,1>)/sqrt(2).  Constant
  phases downstream of a splitter absorb the convention; only internal
  consistency matters and this is the single place it is defined.
* Detectors are binary (click / no-click) with independent per-photon
  detection efficiency and an optional per-pulse dark-count probability.
  Photon-number resolution is deliberately not modeled.

All values are immutable after construction and every operation is a
pure function, so states can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import expm

HERMITICITY_ATOL = 1e-10
TRACE_ATOL = 1e-9
PSD_ATOL = 1e-9


@dataclass(frozen=True)
class FockConfig:
    """Mode count and per-mode photon cutoff of a truncated Fock space."""

    mode_count: int
    n_max: int = 3

    def __post_init__(self):
        if self.mode_count < 1:
            raise ValueError("mode_count must be a positive integer")
        if self.n_max < 1:
            raise ValueError("n_max must be a positive integer")

    @property
    def level_count(self) -> int:
        return self.n_max + 1

    @property
    def hilbert_dim(self) -> int:
        return self.level_count**self.mode_count

    def occupations(self) -> np.ndarray:
        """(D, mode_count) table of photon numbers, lexicographic order."""
        return _occupation_table(self.mode_count, self.n_max)

    def index_of(self, occupation: Sequence[int]) -> int:
        if len(occupation) != self.mode_count:
            raise ValueError("occupation length does not match mode_count")
        idx = 0
        for n in occupation:
            if not 0 <= n <= self.n_max:
                raise ValueError(f"occupation {occupation} exceeds n_max={self.n_max}")
            idx = idx * self.level_count + int(n)
        return idx


@lru_cache(maxsize=None)
def _occupation_table(mode_count: int, n_max: int) -> np.ndarray:
    levels = np.arange(n_max + 1)
    grids = np.meshgrid(*([levels] * mode_count), indexing="ij")
    table = np.stack([g.ravel() for g in grids], axis=1)
    table.setflags(write=False)
    return table


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DensityOperator:
    """Density matrix on a truncated multi-mode Fock space."""

    config: FockConfig
    matrix: np.ndarray

    def __post_init__(self):
        m = _readonly(self.matrix)
        d = self.config.hilbert_dim
        if m.shape != (d, d):
            raise ValueError(f"matrix shape {m.shape} does not match dimension {d}")
        object.__setattr__(self, "matrix", m)

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalize(self) -> "DensityOperator":
        tr = np.trace(self.matrix)
        if abs(tr) == 0.0:
            raise ValueError("cannot normalize a zero-trace operator")
        return DensityOperator(self.config, self.matrix / tr)

    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    def validate(self, atol_herm: float = HERMITICITY_ATOL,
                 atol_trace: float = TRACE_ATOL,
                 atol_psd: float = PSD_ATOL) -> None:
        """Raise if the state is not Hermitian, trace-1 and PSD within tolerance."""
        dev = np.max(np.abs(self.matrix - self.matrix.conj().T))
        if dev > atol_herm:
            raise ValueError(f"not Hermitian: max deviation {dev:.3e}")
        tr = self.trace()
        if abs(tr - 1.0) > atol_trace:
            raise ValueError(f"trace {tr!r} differs from 1")
        lo = float(np.linalg.eigvalsh(self.matrix)[0])
        if lo < -atol_psd:
            raise ValueError(f"negative eigenvalue {lo:.3e}")


@dataclass(frozen=True)
class ModeUnitary:
    """Unitary on the truncated Fock space."""

    config: FockConfig
    matrix: np.ndarray

    def __post_init__(self):
        m = _readonly(self.matrix)
        d = self.config.hilbert_dim
        if m.shape != (d, d):
            raise ValueError(f"matrix shape {m.shape} does not match dimension {d}")
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other: "ModeUnitary") -> "ModeUnitary":
        if self.config != other.config:
            raise ValueError("config mismatch")
        return ModeUnitary(self.config, self.matrix @ other.matrix)


def vacuum_state(config: FockConfig) -> DensityOperator:
    m = np.zeros((config.hilbert_dim,) * 2, dtype=complex)
    m[0, 0] = 1.0
    return DensityOperator(config, m)


def number_state(config: FockConfig, occupation: Sequence[int]) -> DensityOperator:
    m = np.zeros((config.hilbert_dim,) * 2, dtype=complex)
    i = config.index_of(occupation)
    m[i, i] = 1.0
    return DensityOperator(config, m)


def pure_state(config: FockConfig, amplitudes: np.ndarray) -> DensityOperator:
    """Projector onto a (normalized) state vector in the joint basis."""
    v = np.asarray(amplitudes, dtype=complex).ravel()
    if v.shape != (config.hilbert_dim,):
        raise ValueError("amplitude vector has wrong length")
    v = v / np.linalg.norm(v)
    return DensityOperator(config, np.outer(v, v.conj()))


def mode_number_diag(config: FockConfig, mode: int) -> np.ndarray:
    """Diagonal of the photon-number operator of one mode."""
    if not 0 <= mode < config.mode_count:
        raise ValueError(f"mode {mode} out of range")
    return config.occupations()[:, mode].astype(float)


def annihilation_operator(config: FockConfig, mode: int) -> np.ndarray:
    """Truncated annihilation operator of one mode in the joint basis."""
    if not 0 <= mode < config.mode_count:
        raise ValueError(f"mode {mode} out of range")
    occ = config.occupations()
    d = config.hilbert_dim
    stride = config.level_count ** (config.mode_count - 1 - mode)
    a = np.zeros((d, d), dtype=complex)
    src = np.nonzero(occ[:, mode] > 0)[0]
    a[src - stride, src] = np.sqrt(occ[src, mode])
    return a


def bs_unitary(config: FockConfig, mode_a: int, mode_b: int,
               theta: float, phi: float) -> ModeUnitary:
    """Beam-splitter unitary on a mode pair (see module conventions).

    Photon number is conserved, so the matrix is block diagonal in the
    total photon number; blocks with total <= n_max are exact.
    """
    if mode_a == mode_b:
        raise ValueError("mode_a and mode_b must differ")
    if not (np.isfinite(theta) and np.isfinite(phi)):
        raise ValueError("theta and phi must be finite")
    a = annihilation_operator(config, mode_a)
    b = annihilation_operator(config, mode_b)
    # generator H = theta (e^{-i phi} a+ b + e^{+i phi} b+ a), U = exp(iH)
    h = theta * (np.exp(-1j * phi) * a.conj().T @ b
                 + np.exp(1j * phi) * b.conj().T @ a)
    return ModeUnitary(config, expm(1j * h))


def phase_unitary(config: FockConfig, mode: int, phase: float) -> ModeUnitary:
    """Single-mode phase shift exp(i phase n)."""
    if not np.isfinite(phase):
        raise ValueError("phase must be finite")
    n = mode_number_diag(config, mode)
    return ModeUnitary(config, np.diag(np.exp(1j * phase * n)))


def apply_unitary(rho: DensityOperator, u: ModeUnitary) -> DensityOperator:
    if rho.config != u.config:
        raise ValueError("config mismatch between state and unitary")
    return DensityOperator(rho.config, u.matrix @ rho.matrix @ u.matrix.conj().T)


def tensor(a: DensityOperator, b: DensityOperator) -> DensityOperator:
    """Tensor product; a's modes come first (slower indices)."""
    if a.config.n_max != b.config.n_max:
        raise ValueError("tensor requires matching n_max")
    config = FockConfig(a.config.mode_count + b.config.mode_count, a.config.n_max)
    return DensityOperator(config, np.kron(a.matrix, b.matrix))


def partial_trace(rho: DensityOperator, keep: Iterable[int]) -> DensityOperator:
    """Reduced state on `keep` (ascending original order)."""
    keep = sorted(set(int(k) for k in keep))
    m = rho.config.mode_count
    if not keep:
        raise ValueError("keep set must not be empty")
    if keep[0] < 0 or keep[-1] >= m:
        raise ValueError("keep contains an invalid mode index")
    traced = [k for k in range(m) if k not in keep]
    lv = rho.config.level_count
    t = rho.matrix.reshape([lv] * (2 * m))
    for count, mode in enumerate(traced):
        ax = mode - count  # axes shift as earlier ones are contracted
        t = np.trace(t, axis1=ax, axis2=ax + (m - count))
    config = FockConfig(len(keep), rho.config.n_max)
    return DensityOperator(config, t.reshape(config.hilbert_dim, config.hilbert_dim))


def permute_modes(rho: DensityOperator, order: Sequence[int]) -> DensityOperator:
    """Relabel modes so that new mode i is old mode order[i]."""
    m = rho.config.mode_count
    if sorted(order) != list(range(m)):
        raise ValueError("order must be a permutation of the mode indices")
    lv = rho.config.level_count
    t = rho.matrix.reshape([lv] * (2 * m))
    axes = list(order) + [m + o for o in order]
    return DensityOperator(rho.config, t.transpose(axes).reshape(rho.matrix.shape))


@dataclass(frozen=True)
class ClickPovm:
    """Binary-detector POVM {E_noclick, E_click} on one mode.

    Both elements are diagonal in the Fock basis:
    <n|E_noclick|n> = (1 - dark_count_prob) * (1 - detector_efficiency)**n.
    """

    n_max: int
    detector_efficiency: float = 1.0
    dark_count_prob: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.detector_efficiency <= 1.0:
            raise ValueError("detector_efficiency must lie in [0, 1]")
        if not 0.0 <= self.dark_count_prob <= 1.0:
            raise ValueError("dark_count_prob must lie in [0, 1]")

    def no_click_diag(self) -> np.ndarray:
        n = np.arange(self.n_max + 1)
        return (1.0 - self.dark_count_prob) * (1.0 - self.detector_efficiency) ** n

    def click_diag(self) -> np.ndarray:
        return 1.0 - self.no_click_diag()

    def element_diag(self, click: bool) -> np.ndarray:
        return self.click_diag() if click else self.no_click_diag()


def pattern_diag(config: FockConfig, povms: Sequence[ClickPovm],
                 clicks: Sequence[bool]) -> np.ndarray:
    """Diagonal of the joint POVM element for one click pattern."""
    if len(povms) != config.mode_count or len(clicks) != config.mode_count:
        raise ValueError("need one POVM and one click flag per mode")
    diag = np.ones(1)
    for povm, click in zip(povms, clicks):
        if povm.n_max != config.n_max:
            raise ValueError("POVM cutoff does not match the state config")
        diag = np.kron(diag, povm.element_diag(bool(click)))
    return diag


def outcome_probability(rho: DensityOperator, povms: Sequence[ClickPovm],
                        clicks: Sequence[bool]) -> float:
    """Probability of an exact click/no-click pattern, clamped to [0, 1]."""
    diag = pattern_diag(rho.config, povms, clicks)
    p = float(np.real(np.dot(diag, rho.matrix.diagonal())))
    if p < -1e-9 or p > 1.0 + 1e-9:
        raise ValueError(f"pattern probability {p!r} outside [0, 1] beyond tolerance")
    return min(max(p, 0.0), 1.0)


def ppt_negativity(rho: DensityOperator) -> float:
    """Negativity of the partial transpose over mode 1 (two-mode states).

    Returns the sum of |negative eigenvalues|; a value above ~1e-9
    certifies entanglement across the mode bipartition.
    """
    if rho.config.mode_count != 2:
        raise ValueError("ppt_negativity requires a two-mode state")
    lv = rho.config.level_count
    t = rho.matrix.reshape(lv, lv, lv, lv)
    pt = t.transpose(0, 3, 2, 1).reshape(rho.matrix.shape)
    eig = np.linalg.eigvalsh(pt)
    return float(-eig[eig < 0.0].sum())
