"""State families on truncated Fock spaces and the fidelity metric."""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.special import gammaln

from .config import PERELOMOV_AMPLITUDE_BOUND
from .fock import (
    Cutoff,
    CutoffWarning,
    Ket,
    Operator,
    PolarParam,
    annihilation,
    dagger,
    expm,
    tail_warning,
)
from .lie import SpinJ, SpinK, su2_generators, su11_generators


def vacuum(cutoff: Cutoff, modes: int = 1) -> Ket:
    amps = np.zeros(cutoff.dim ** modes, dtype=complex)
    amps[0] = 1.0
    return Ket(amps, modes, cutoff, normalized=True)


def number_state(n: int, cutoff: Cutoff) -> Ket:
    """Occupation eigenstate |n>, equal to (a†)^n/sqrt(n!) acting on vacuum."""
    if not 0 <= n <= cutoff.n_max:
        raise ValueError(f"occupation {n} outside [0, {cutoff.n_max}]")
    amps = np.zeros(cutoff.dim, dtype=complex)
    amps[n] = 1.0
    return Ket(amps, 1, cutoff, normalized=True)


def displacement(alpha: PolarParam, cutoff: Cutoff) -> Operator:
    """Unitary exp(alpha a† - conj(alpha) a); warns when the tail rule fails."""
    tail_warning(alpha.modulus, cutoff, context="displacement")
    a = annihilation(cutoff)
    gen = alpha.value * dagger(a) - alpha.conj * a
    return expm(gen)


def coherent_with_deficit(alpha: PolarParam, cutoff: Cutoff) -> tuple[Ket, float]:
    """Displaced vacuum, renormalized, plus the recorded truncation deficit.

    The truncated displacement stays exactly unitary, so the lost amplitude
    shows up as distortion rather than norm loss; the deficit is therefore
    measured on the closed-form expansion as the norm shortfall of its
    restriction to the cutoff.
    """
    raw = displacement(alpha, cutoff).apply(vacuum(cutoff))
    deficit = abs(1.0 - coherent_series(alpha, cutoff).norm)
    return raw.normalize(), deficit


def coherent(alpha: PolarParam, cutoff: Cutoff) -> Ket:
    return coherent_with_deficit(alpha, cutoff)[0]


def coherent_series(alpha: PolarParam, cutoff: Cutoff) -> Ket:
    """Closed-form coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!), untruncated
    values restricted to the cutoff (not renormalized).

    Independent of the matrix-exponential route; serves as its cross-check.
    """
    n = np.arange(cutoff.dim)
    if alpha.modulus == 0.0:
        return Ket(np.eye(cutoff.dim, dtype=complex)[0], 1, cutoff)
    log_mag = -0.5 * alpha.modulus ** 2 + n * math.log(alpha.modulus) - 0.5 * gammaln(n + 1)
    amps = np.exp(log_mag) * np.exp(1j * n * alpha.phase)
    return Ket(amps, 1, cutoff, normalized=False)


def squeeze(z: PolarParam, cutoff: Cutoff) -> Operator:
    """Unitary exp((z (a†)^2 - conj(z) a^2) / 2)."""
    a = annihilation(cutoff)
    ad = dagger(a)
    gen = 0.5 * (z.value * (ad @ ad) - z.conj * (a @ a))
    return expm(gen)


def phase_rotation(t: float, cutoff: Cutoff) -> Operator:
    """Diagonal unitary exp(i t N), built exactly entry by entry."""
    diag = np.exp(1j * t * np.arange(cutoff.dim))
    return Operator(np.diag(diag), 1, cutoff)


def perelomov_su2(z: PolarParam, spin: SpinJ) -> Ket:
    """exp(z J+ - conj(z) J-) applied to the lowest-weight state; exactly unit norm."""
    triple = su2_generators(spin)
    gen = z.value * triple.plus - z.conj * triple.minus
    u = expm(gen)
    amps = u.entries[:, 0].copy()
    return Ket(amps, 1, Cutoff(spin.two_j), normalized=True)


def su11_adequate_cutoff(z_abs: float, bound: float = PERELOMOV_AMPLITUDE_BOUND) -> int:
    """Smallest truncation with tanh(|z|)^n_max below the amplitude bound."""
    if z_abs == 0.0:
        return 1
    rate = math.tanh(z_abs)
    return max(1, math.ceil(math.log(bound) / math.log(rate)))


def perelomov_su11(z: PolarParam, spin: SpinK) -> Ket:
    """exp(z K+ - conj(z) K-) applied to |K,0>, truncated at the spin's cutoff.

    Amplitudes decay like tanh(|z|)^n; warns when the cutoff leaves the
    amplitude at the boundary above the adequacy bound.
    """
    if z.modulus > 0:
        needed = su11_adequate_cutoff(z.modulus)
        if spin.cutoff.n_max < needed:
            warnings.warn(
                f"cutoff inadequate for su(1,1) state: n_max={spin.cutoff.n_max} "
                f"< {needed} required for |z|={z.modulus:.4g}",
                CutoffWarning,
                stacklevel=2,
            )
    triple = su11_generators(spin)
    gen = z.value * triple.plus - z.conj * triple.minus
    u = expm(gen)
    return Ket(u.entries[:, 0].copy(), 1, spin.cutoff, normalized=True)


def squeezed_coherent(beta: PolarParam, alpha: PolarParam, cutoff: Cutoff) -> Ket:
    """S(beta) D(alpha) |0>, renormalized after truncation."""
    displaced = displacement(alpha, cutoff).apply(vacuum(cutoff))
    return squeeze(beta, cutoff).apply(displaced).normalize()


def fidelity(x: Ket, y: Ket) -> float:
    """|<x|y>|^2 with both vectors renormalized first."""
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    nx, ny = x.norm, y.norm
    if nx == 0.0 or ny == 0.0:
        raise ValueError("fidelity of the zero vector is undefined")
    overlap = np.vdot(x.amplitudes, y.amplitudes) / (nx * ny)
    return float(min(1.0, abs(overlap) ** 2))


def occupation_expectations(ket: Ket) -> tuple[float, ...]:
    """Mean occupation per mode, computed from the probability weights."""
    probs = np.abs(ket.amplitudes) ** 2
    total = probs.sum()
    if total == 0.0:
        raise ValueError("zero vector has no occupation statistics")
    probs = probs / total
    d = ket.cutoff.dim
    if ket.modes == 1:
        return (float(np.dot(np.arange(d), probs)),)
    grid = probs.reshape(d, d)
    n1 = float(np.dot(np.arange(d), grid.sum(axis=1)))
    n2 = float(np.dot(np.arange(d), grid.sum(axis=0)))
    return (n1, n2)
