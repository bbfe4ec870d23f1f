"""Executable verification of the conjugation identities.

Each check builds the operators at a truncation level, evaluates both sides
of an identity on the safe subspace, and returns a Report of residual norms.

Truncation policy.  Conjugation by an occupation-preserving rotation (the
beamsplitter family) is exact on complete total-occupation sectors, so any
margin works there.  Hyperbolic conjugations (squeeze family) leak boundary
corruption into the bulk at a rate of roughly tanh(|z|) per ladder step, so
those checks keep only a small block far below the cutoff; defaults below are
calibrated so residuals sit two orders under the default tolerance for the
documented parameter ranges.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .config import DEFAULT_TOLERANCES, default_margin
from .fock import (
    Cutoff,
    Ket,
    PolarParam,
    annihilation,
    safe_indices,
    tail_warning,
    _expm_array,
)
from .report import Report, make_report
from .states import (
    coherent,
    displacement,
    phase_rotation,
    squeeze,
    vacuum,
    fidelity,
)

# Hyperbolic guard: conjugation amplification must stay within the cutoff.
COSH_GUARD = 3.0

# Size of the retained low-occupation block for hyperbolic-conjugation checks.
HYPERBOLIC_SAFE_BLOCK = 12

# Calibrated default truncations (see module docstring).
J_ROTATION_CUTOFF = Cutoff(24)
K_ROTATION_CUTOFF = Cutoff(44)
SQUEEZE_CONJUGATION_CUTOFF = Cutoff(144)
SDS_CUTOFF = Cutoff(144)
SSS_CUTOFF = Cutoff(32)
SSS_MARGIN = 10
PHASE_FORMULA_CUTOFF = Cutoff(40)
UJ_INVARIANCE_CUTOFF = Cutoff(40)


def _sinc(x: float) -> float:
    """sin(x)/x with the removable singularity filled in."""
    if abs(x) < 1e-8:
        return 1.0 - x * x / 6.0
    return math.sin(x) / x


def _sinhc(x: float) -> float:
    """sinh(x)/x with the removable singularity filled in."""
    if abs(x) < 1e-8:
        return 1.0 + x * x / 6.0
    return math.sinh(x) / x


def _hyperbolic_margin(cutoff: Cutoff) -> int:
    return max(0, cutoff.n_max - HYPERBOLIC_SAFE_BLOCK)


def _guard_cosh(modulus: float, label: str):
    if math.cosh(modulus) > COSH_GUARD:
        raise ValueError(
            f"guard violated: cosh|{label}| = {math.cosh(modulus):.3f} exceeds {COSH_GUARD}"
        )


def _restricted_conjugation(u: np.ndarray, a: np.ndarray, keep: np.ndarray) -> np.ndarray:
    """Safe block of U A U†, computed with slim matrix products.

    Identical to projecting the full conjugation with the safe projector.
    """
    rows = u[keep, :]
    return rows @ a @ rows.conj().T


def _conjugation_residual(
    u: np.ndarray, a: np.ndarray, rhs: np.ndarray, keep: np.ndarray
) -> float:
    block = _restricted_conjugation(u, a, keep) - rhs[np.ix_(keep, keep)]
    return float(np.linalg.norm(block, "fro"))


def _two_mode_ladders(cutoff: Cutoff) -> tuple[np.ndarray, np.ndarray]:
    a = annihilation(cutoff).entries
    eye = np.eye(cutoff.dim, dtype=complex)
    return np.kron(a, eye), np.kron(eye, a)


def squeeze_pair_exponent_coefficients(
    alpha: complex, beta: complex, t: complex
) -> dict[str, complex]:
    """Coefficients of the exponent produced by beamsplitter conjugation of a
    product of single-mode squeezes S1(alpha) S2(beta).

    Keys: ``a1dag2``/``a1sq``/``a2dag2``/``a2sq`` multiply (a1†)², a1², (a2†)²,
    a2² (the 1/2 factors included); ``pair_create``/``pair_destroy`` multiply
    a1†a2† and a1a2.  The pair terms vanish exactly when beta*t equals
    alpha*conj(t), which is the invariance condition.
    """
    m = abs(t)
    c = math.cos(m)
    ts = t * _sinc(m)  # equals t*sin|t|/|t|
    a1dag2 = 0.5 * (c * c * alpha + ts * ts * beta)
    a1sq = -0.5 * (c * c * alpha.conjugate() + (ts.conjugate() ** 2) * beta.conjugate())
    a2dag2 = 0.5 * (c * c * beta + (ts.conjugate() ** 2) * alpha)
    a2sq = -0.5 * (c * c * beta.conjugate() + ts * ts * alpha.conjugate())
    ratio = _sinc(2 * m)  # sin(2|t|)/(2|t|)
    pair_create = (beta * t - alpha * t.conjugate()) * ratio
    pair_destroy = -(beta.conjugate() * t.conjugate() - alpha.conjugate() * t) * ratio
    return {
        "a1dag2": a1dag2,
        "a1sq": a1sq,
        "a2dag2": a2dag2,
        "a2sq": a2sq,
        "pair_create": pair_create,
        "pair_destroy": pair_destroy,
    }


def check_J_rotation(
    t: PolarParam,
    cutoff: Cutoff | None = None,
    margin: int | None = None,
    tolerance: float | None = None,
) -> Report:
    """Beamsplitter conjugation of the mode operators against its closed form.

    U(t) a1 U(t)^-1 = cos|t| a1 - (t sin|t|/|t|) a2 and the a2 counterpart; the
    2x2 coefficient matrix must be special unitary.
    """
    cutoff = cutoff or J_ROTATION_CUTOFF
    margin = default_margin(cutoff.n_max) if margin is None else margin
    tol = DEFAULT_TOLERANCES.identity_residual if tolerance is None else tolerance

    a1, a2 = _two_mode_ladders(cutoff)
    gen = t.value * (a1.conj().T @ a2) - t.conj * (a2.conj().T @ a1)
    u = _expm_array(gen)
    keep = safe_indices(cutoff, margin, modes=2)

    m = t.modulus
    c = math.cos(m)
    ts = t.value * _sinc(m)
    rhs1 = c * a1 - ts * a2
    rhs2 = c * a2 + ts.conjugate() * a1

    coeff = np.array([[c, ts.conjugate()], [-ts, c]])
    residuals = {
        "a1_conjugation": _conjugation_residual(u, a1, rhs1, keep),
        "a2_conjugation": _conjugation_residual(u, a2, rhs2, keep),
        "su2_unitarity": float(np.linalg.norm(coeff.conj().T @ coeff - np.eye(2), "fro")),
        "su2_determinant": float(abs(np.linalg.det(coeff) - 1.0)),
    }
    return make_report("check_J_rotation", (t,), cutoff, margin, residuals, {}, tol)


def check_K_rotation(
    t: PolarParam,
    cutoff: Cutoff | None = None,
    margin: int | None = None,
    tolerance: float | None = None,
) -> Report:
    """Two-mode squeezer conjugation against its hyperbolic closed form.

    U(t) a1 U(t)^-1 = cosh|t| a1 - (t sinh|t|/|t|) a2† and the a2† counterpart;
    the coefficient matrix satisfies cosh^2 - sinh^2 = 1.
    """
    cutoff = cutoff or K_ROTATION_CUTOFF
    margin = _hyperbolic_margin(cutoff) if margin is None else margin
    tol = DEFAULT_TOLERANCES.identity_residual if tolerance is None else tolerance
    _guard_cosh(t.modulus, "t")

    a1, a2 = _two_mode_ladders(cutoff)
    a1d, a2d = a1.conj().T, a2.conj().T
    gen = t.value * (a1d @ a2d) - t.conj * (a2 @ a1)
    u = _expm_array(gen)
    keep = safe_indices(cutoff, margin, modes=2)

    m = t.modulus
    ch = math.cosh(m)
    ts = t.value * _sinhc(m)
    rhs1 = ch * a1 - ts * a2d
    rhs2 = ch * a2d - ts.conjugate() * a1

    residuals = {
        "a1_conjugation": _conjugation_residual(u, a1, rhs1, keep),
        "a2dag_conjugation": _conjugation_residual(u, a2d, rhs2, keep),
        "su11_normalization": float(abs(ch * ch - math.sinh(m) ** 2 - 1.0)),
    }
    return make_report("check_K_rotation", (t,), cutoff, margin, residuals, {}, tol)


def check_squeeze_conjugation(
    epsilon: PolarParam,
    cutoff: Cutoff | None = None,
    margin: int | None = None,
    tolerance: float | None = None,
) -> Report:
    """S(eps) a S(eps)^-1 against cosh|eps| a - e^{i phase} sinh|eps| a†."""
    cutoff = cutoff or SQUEEZE_CONJUGATION_CUTOFF
    margin = _hyperbolic_margin(cutoff) if margin is None else margin
    tol = DEFAULT_TOLERANCES.identity_residual if tolerance is None else tolerance
    _guard_cosh(epsilon.modulus, "epsilon")

    a = annihilation(cutoff).entries
    ad = a.conj().T
    s = _expm_array(0.5 * (epsilon.value * (ad @ ad) - epsilon.conj * (a @ a)))
    keep = safe_indices(cutoff, margin, modes=1)
    rhs = math.cosh(epsilon.modulus) * a - cmath.exp(1j * epsilon.phase) * math.sinh(
        epsilon.modulus
    ) * ad
    residuals = {"a_conjugation": _conjugation_residual(s, a, rhs, keep)}
    return make_report(
        "check_squeeze_conjugation", (epsilon,), cutoff, margin, residuals, {}, tol
    )


def check_SDS(
    epsilon: PolarParam,
    alpha: PolarParam,
    cutoff: Cutoff | None = None,
    margin: int | None = None,
    tolerance: float | None = None,
) -> Report:
    """Squeeze conjugation of a displacement.

    S(eps) D(alpha) S(eps)^-1 = D(cosh|eps| alpha + e^{i phase} sinh|eps|
    conj(alpha)); with the squeeze phase locked to twice the displacement
    phase (plus pi) this rescales alpha by e^{+|eps|} (e^{-|eps|}), checked at
    the state level against the predicted coherent state.
    """
    cutoff = cutoff or SDS_CUTOFF
    margin = _hyperbolic_margin(cutoff) if margin is None else margin
    tol = DEFAULT_TOLERANCES.identity_residual if tolerance is None else tolerance
    _guard_cosh(epsilon.modulus, "epsilon")

    messages = []
    amplified = math.exp(epsilon.modulus) * alpha.modulus
    msg = tail_warning(amplified, cutoff, context="conjugated displacement")
    if msg:
        messages.append(msg)

    a = annihilation(cutoff).entries
    ad = a.conj().T
    s = _expm_array(0.5 * (epsilon.value * (ad @ ad) - epsilon.conj * (a @ a)))
    d = _expm_array(alpha.value * ad - alpha.conj * a)
    predicted = (
        math.cosh(epsilon.modulus) * alpha.value
        + cmath.exp(1j * epsilon.phase) * math.sinh(epsilon.modulus) * alpha.conj
    )
    d_pred = _expm_array(predicted * ad - predicted.conjugate() * a)
    keep = safe_indices(cutoff, margin, modes=1)
    residuals = {
        "displacement_conjugation": _conjugation_residual(s, d, d_pred, keep)
    }

    # Phase-locked special cases, verified on states.
    vac = np.zeros(cutoff.dim, dtype=complex)
    vac[0] = 1.0
    fidelities = {}
    for key, offset, scale in (
        ("scale_up_state", 0.0, math.exp(epsilon.modulus)),
        ("scale_down_state", math.pi, math.exp(-epsilon.modulus)),
    ):
        locked = PolarParam.from_polar(epsilon.modulus, 2 * alpha.phase + offset)
        s_locked = _expm_array(
            0.5 * (locked.value * (ad @ ad) - locked.conj * (a @ a))
        )
        out = s_locked @ (d @ (s_locked.conj().T @ vac))
        target = coherent(PolarParam.from_value(scale * alpha.value), cutoff)
        out_ket = Ket(out, 1, cutoff)
        fidelities[key] = fidelity(out_ket, target)

    return make_report(
        "check_SDS",
        (epsilon, alpha),
        cutoff,
        margin,
        residuals,
        fidelities,
        tol,
        warnings=tuple(messages),
    )


def check_SSS_commute(
    epsilon: PolarParam,
    alpha: PolarParam,
    cutoff: Cutoff | None = None,
    margin: int | None = None,
    tolerance: float | None = None,
) -> Report:
    """Commutator of two squeezes.

    Squeezes with a common phase share a generator direction and commute
    exactly, truncation included; with differing phases the commutator is
    generically nonzero and is reported without being asserted.
    """
    cutoff = cutoff or SSS_CUTOFF
    margin = SSS_MARGIN if margin is None else margin
    tol = DEFAULT_TOLERANCES.identity_residual if tolerance is None else tolerance
    _guard_cosh(epsilon.modulus, "epsilon")
    _guard_cosh(alpha.modulus, "alpha")

    s_eps = squeeze(epsilon, cutoff).entries
    s_alp = squeeze(alpha, cutoff).entries
    keep = safe_indices(cutoff, margin, modes=1)
    comm = (s_eps @ s_alp - s_alp @ s_eps)[np.ix_(keep, keep)]
    residuals = {"commutator": float(np.linalg.norm(comm, "fro"))}

    matched = (
        epsilon.modulus == 0.0
        or alpha.modulus == 0.0
        or abs(math.remainder(epsilon.phase - alpha.phase, 2 * math.pi)) <= 1e-12
    )
    unasserted = () if matched else ("commutator",)
    return make_report(
        "check_SSS_commute",
        (epsilon, alpha),
        cutoff,
        margin,
        residuals,
        {},
        tol,
        unasserted=unasserted,
    )


def check_phase_formula(
    t: float,
    alpha: PolarParam,
    cutoff: Cutoff | None = None,
    margin: int | None = None,
    tolerance: float | None = None,
) -> Report:
    """Number-operator phase rotation of a displacement: V(t) D(a) V(t)^-1 =
    D(e^{it} a), plus the state-level version and vacuum invariance.

    Diagonal conjugation commutes with truncation, so this is exact at any
    cutoff satisfying the tail rule.
    """
    cutoff = cutoff or PHASE_FORMULA_CUTOFF
    margin = default_margin(cutoff.n_max) if margin is None else margin
    tol = DEFAULT_TOLERANCES.identity_residual if tolerance is None else tolerance

    messages = []
    msg = tail_warning(alpha.modulus, cutoff, context="phase-rotated displacement")
    if msg:
        messages.append(msg)

    v = phase_rotation(t, cutoff)
    d = displacement(alpha, cutoff)
    rotated = PolarParam.from_value(cmath.exp(1j * t) * alpha.value)
    d_pred = displacement(rotated, cutoff)
    keep = safe_indices(cutoff, margin, modes=1)

    vac = vacuum(cutoff)
    residuals = {
        "displacement_conjugation": _conjugation_residual(
            v.entries, d.entries, d_pred.entries, keep
        ),
        "vacuum_invariance": float(
            np.linalg.norm(v.entries @ vac.amplitudes - vac.amplitudes)
        ),
    }
    rotated_state = Ket(v.entries @ coherent(alpha, cutoff).amplitudes, 1, cutoff)
    fidelities = {"rotated_state": fidelity(rotated_state, coherent(rotated, cutoff))}
    return make_report(
        "check_phase_formula",
        (PolarParam.from_value(t), alpha),
        cutoff,
        margin,
        residuals,
        fidelities,
        tol,
        warnings=tuple(messages),
    )


def check_UJ_squeeze_invariance(
    t: PolarParam,
    alpha: PolarParam,
    cutoff: Cutoff | None = None,
    margin: int | None = None,
    tolerance: float | None = None,
) -> Report:
    """Invariance of a squeeze pair under beamsplitter conjugation.

    With beta = alpha conj(t)/t the pair-creation term of the conjugated
    exponent cancels and U(t) S1(alpha) S2(beta) U(t)^-1 = S1(alpha) S2(beta).
    The three coefficient identities of the exponent are evaluated alongside
    the matrix-level residual.  t = 0 makes the condition degenerate and the
    conjugation trivially invariant.
    """
    cutoff = cutoff or UJ_INVARIANCE_CUTOFF
    margin = _hyperbolic_margin(cutoff) if margin is None else margin
    tol = DEFAULT_TOLERANCES.identity_residual if tolerance is None else tolerance
    _guard_cosh(alpha.modulus, "alpha")

    if t.modulus == 0.0:
        residuals = {
            "invariance": 0.0,
            "mode1_coefficient": 0.0,
            "mode2_coefficient": 0.0,
            "pair_coefficient": 0.0,
        }
        return make_report(
            "check_UJ_squeeze_invariance", (t, alpha), cutoff, margin, residuals, {}, tol
        )

    beta = PolarParam.from_value(alpha.value * t.conj / t.value)
    coeffs = squeeze_pair_exponent_coefficients(alpha.value, beta.value, t.value)

    a1, a2 = _two_mode_ladders(cutoff)
    a1d, a2d = a1.conj().T, a2.conj().T
    u = _expm_array(t.value * (a1d @ a2) - t.conj * (a2d @ a1))

    s1 = squeeze(alpha, cutoff).entries
    s2 = squeeze(beta, cutoff).entries
    pair = np.kron(s1, s2)  # S1(alpha) S2(beta) on the two-mode space

    keep = safe_indices(cutoff, margin, modes=2)
    residuals = {
        "invariance": _conjugation_residual(u, pair, pair, keep),
        "mode1_coefficient": abs(2 * coeffs["a1dag2"] - alpha.value),
        "mode2_coefficient": abs(2 * coeffs["a2dag2"] - beta.value),
        "pair_coefficient": abs(coeffs["pair_create"]),
    }
    return make_report(
        "check_UJ_squeeze_invariance", (t, alpha), cutoff, margin, residuals, {}, tol
    )
