"""Truncated bosonic Fock spaces: domain types and dense operator kernels.

A single mode truncated at occupation ``n_max`` is represented on the
(n_max+1)-dimensional space spanned by the occupation states; two-mode
operators live on the Kronecker product with the first factor major.  All
values are immutable after construction and every function is pure.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm as _scipy_expm
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import gammainc

from .config import DEFAULT_TOLERANCES, TAIL_BOUND


class CutoffWarning(UserWarning):
    """A requested amplitude is too large for the chosen truncation level."""


@dataclass(frozen=True)
class Cutoff:
    """Fock truncation level; the retained space has dimension n_max + 1."""

    n_max: int

    def __post_init__(self):
        if not isinstance(self.n_max, int) or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max!r}")

    @property
    def dim(self) -> int:
        return self.n_max + 1


@dataclass(frozen=True)
class PolarParam:
    """Complex protocol parameter stored together with its polar form.

    Zero modulus forces phase 0 by convention; the phase is kept in (-pi, pi].
    """

    value: complex
    modulus: float
    phase: float

    def __post_init__(self):
        if self.modulus < 0:
            raise ValueError("modulus must be non-negative")
        if not (-math.pi < self.phase <= math.pi + 1e-15):
            raise ValueError(f"phase {self.phase} outside (-pi, pi]")
        if self.modulus == 0.0 and self.phase != 0.0:
            raise ValueError("zero modulus forces phase 0")
        recon = self.modulus * cmath.exp(1j * self.phase)
        scale = max(1.0, self.modulus)
        if abs(self.value - recon) > 1e-14 * scale:
            raise ValueError("value inconsistent with (modulus, phase)")

    @classmethod
    def from_value(cls, z: complex) -> "PolarParam":
        z = complex(z)
        m = abs(z)
        if m == 0.0:
            return cls(0j, 0.0, 0.0)
        ph = cmath.phase(z)
        if ph <= -math.pi:  # map -pi to +pi
            ph = math.pi
        return cls(z, m, ph)

    @classmethod
    def from_polar(cls, modulus: float, phase: float) -> "PolarParam":
        if modulus == 0.0:
            return cls(0j, 0.0, 0.0)
        # reduce to (-pi, pi]
        ph = math.remainder(phase, 2 * math.pi)
        if ph <= -math.pi:
            ph = math.pi
        return cls(modulus * cmath.exp(1j * ph), float(modulus), ph)

    @classmethod
    def parse(cls, text: str) -> "PolarParam":
        """Parse ``re,im`` (Cartesian) or ``mod@phase`` (polar) notation."""
        text = text.strip()
        if "@" in text:
            mod_s, ph_s = text.split("@", 1)
            return cls.from_polar(float(mod_s), float(ph_s))
        if "," in text:
            re_s, im_s = text.split(",", 1)
            return cls.from_value(complex(float(re_s), float(im_s)))
        return cls.from_value(complex(float(text), 0.0))

    @property
    def conj(self) -> complex:
        return self.value.conjugate()


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Operator:
    """Dense complex matrix on a truncated one- or two-mode Fock space.

    The constructor takes ownership of ``entries`` and write-protects it.
    """

    entries: np.ndarray
    modes: int
    cutoff: Cutoff

    def __post_init__(self):
        object.__setattr__(self, "entries", _freeze(self.entries))
        if self.modes not in (1, 2):
            raise ValueError("modes must be 1 or 2")
        e = self.entries
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError(f"entries must be square, got shape {e.shape}")
        expected = self.cutoff.dim ** self.modes
        if e.shape[0] != expected:
            raise ValueError(
                f"dim {e.shape[0]} inconsistent with cutoff/modes (expected {expected})"
            )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def _like(self, entries: np.ndarray) -> "Operator":
        return Operator(entries, self.modes, self.cutoff)

    def _check_compatible(self, other: "Operator"):
        if not isinstance(other, Operator):
            raise TypeError("expected an Operator")
        if self.modes != other.modes or self.cutoff != other.cutoff:
            raise ValueError("operators live on different spaces")

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_compatible(other)
        return self._like(self.entries @ other.entries)

    def __add__(self, other: "Operator") -> "Operator":
        self._check_compatible(other)
        return self._like(self.entries + other.entries)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_compatible(other)
        return self._like(self.entries - other.entries)

    def __mul__(self, scalar) -> "Operator":
        return self._like(self.entries * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return self._like(-self.entries)

    def apply(self, ket: "Ket") -> "Ket":
        """Matrix-vector application; the result keeps the input's norm flag off."""
        if ket.modes != self.modes or ket.cutoff != self.cutoff:
            raise ValueError("operator and ket live on different spaces")
        return Ket(self.entries @ ket.amplitudes, self.modes, self.cutoff, normalized=False)


@dataclass(frozen=True)
class Ket:
    """Complex amplitude vector on a truncated (tensor-product) Fock space."""

    amplitudes: np.ndarray
    modes: int
    cutoff: Cutoff
    normalized: bool = False

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        if self.modes not in (1, 2):
            raise ValueError("modes must be 1 or 2")
        expected = self.cutoff.dim ** self.modes
        if amps.shape[0] != expected:
            raise ValueError(f"dim {amps.shape[0]} inconsistent with cutoff/modes")
        if self.normalized and abs(np.linalg.norm(amps) - 1.0) > 1e-12:
            raise ValueError("normalized flag set but norm deviates from 1 beyond 1e-12")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "Ket":
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return Ket(self.amplitudes / n, self.modes, self.cutoff, normalized=True)


# ---------------------------------------------------------------------------
# constructors


def annihilation(cutoff: Cutoff) -> Operator:
    """Single-mode lowering operator: entry (n-1, n) = sqrt(n)."""
    d = cutoff.dim
    a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1).astype(complex)
    return Operator(a, 1, cutoff)


def dagger(op: Operator) -> Operator:
    """Conjugate transpose."""
    return Operator(op.entries.conj().T.copy(), op.modes, op.cutoff)


def number(cutoff: Cutoff) -> Operator:
    """Occupation-number operator diag(0, 1, ..., n_max)."""
    return Operator(np.diag(np.arange(cutoff.dim, dtype=float)).astype(complex), 1, cutoff)


def identity(cutoff: Cutoff, modes: int = 1) -> Operator:
    return Operator(np.eye(cutoff.dim ** modes, dtype=complex), modes, cutoff)


def tensor(a: Operator, b: Operator) -> Operator:
    """Kronecker product with the first factor major: (i,j) -> i*dim + j."""
    if a.cutoff != b.cutoff:
        raise ValueError("tensor factors must share a cutoff")
    if a.modes != 1 or b.modes != 1:
        raise ValueError("tensor is defined for single-mode factors only")
    return Operator(np.kron(a.entries, b.entries), 2, a.cutoff)


def tensor_ket(a: Ket, b: Ket) -> Ket:
    """Kronecker product of single-mode kets, first factor major."""
    if a.cutoff != b.cutoff:
        raise ValueError("tensor factors must share a cutoff")
    if a.modes != 1 or b.modes != 1:
        raise ValueError("tensor_ket is defined for single-mode factors only")
    return Ket(
        np.kron(a.amplitudes, b.amplitudes),
        2,
        a.cutoff,
        normalized=a.normalized and b.normalized,
    )


# ---------------------------------------------------------------------------
# matrix exponential


def _expm_array(g: np.ndarray) -> np.ndarray:
    """Matrix exponential of a dense array.

    Exact zero structure is exploited: if the symmetrized sparsity pattern
    splits into several connected components (conserved sectors of the
    generators built here), each block is exponentiated separately.  This
    changes nothing mathematically and keeps large truncations affordable.
    """
    if not np.all(np.isfinite(g)):
        raise ValueError("generator has non-finite entries")
    pattern = csr_matrix((g != 0) | (g.T != 0))
    n_comp, labels = connected_components(pattern, directed=False)
    if n_comp == 1:
        return _scipy_expm(g)
    out = np.zeros_like(g)
    for comp in range(n_comp):
        idx = np.nonzero(labels == comp)[0]
        if idx.size == 1:
            out[idx[0], idx[0]] = np.exp(g[idx[0], idx[0]])
        else:
            block = g[np.ix_(idx, idx)]
            out[np.ix_(idx, idx)] = _scipy_expm(block)
    return out


def expm(g: Operator) -> Operator:
    """Matrix exponential of an operator; raises on non-finite entries."""
    return Operator(_expm_array(np.asarray(g.entries)), g.modes, g.cutoff)


def conjugate_by(u: Operator, a: Operator, unitarity_tol: float | None = None) -> Operator:
    """U A U† for unitary U; rejects U that fails the unitarity tolerance."""
    u._check_compatible(a)
    tol = DEFAULT_TOLERANCES.unitarity if unitarity_tol is None else unitarity_tol
    defect = np.linalg.norm(u.entries.conj().T @ u.entries - np.eye(u.dim), "fro")
    if defect > tol:
        raise ValueError(f"conjugating operator is not unitary (defect {defect:.2e})")
    return Operator(u.entries @ a.entries @ u.entries.conj().T, u.modes, u.cutoff)


# ---------------------------------------------------------------------------
# truncation-aware comparison


def safe_indices(cutoff: Cutoff, margin: int, modes: int = 1) -> np.ndarray:
    """Indices of the safe subspace a margin away from the truncation boundary.

    Single mode: occupations n <= n_max - margin.  Two modes: total occupation
    n1 + n2 <= n_max - margin, which keeps only complete occupation sectors
    and is where truncated operator identities can be meaningfully compared.
    """
    if margin < 0:
        raise ValueError("margin must be non-negative")
    if margin > cutoff.n_max:
        raise ValueError(f"margin {margin} exceeds n_max {cutoff.n_max}")
    cap = cutoff.n_max - margin
    if modes == 1:
        return np.arange(cap + 1)
    if modes == 2:
        d = cutoff.dim
        flat = np.arange(d * d)
        total = flat // d + flat % d
        return np.nonzero(total <= cap)[0]
    raise ValueError("modes must be 1 or 2")


def safe_projector(cutoff: Cutoff, margin: int, modes: int = 1) -> Operator:
    """Orthogonal projector onto the safe subspace (see safe_indices)."""
    dim = cutoff.dim ** modes
    diag = np.zeros(dim)
    diag[safe_indices(cutoff, margin, modes)] = 1.0
    return Operator(np.diag(diag).astype(complex), modes, cutoff)


def residual(a: Operator, b: Operator, margin: int) -> float:
    """Frobenius norm of P (A - B) P with P the safe projector at ``margin``.

    Computed by slicing the safe block directly, which is identical to the
    projected norm for a 0/1 diagonal projector.
    """
    a._check_compatible(b)
    keep = safe_indices(a.cutoff, margin, a.modes)
    block = (a.entries - b.entries)[np.ix_(keep, keep)]
    return float(np.linalg.norm(block, "fro"))


# ---------------------------------------------------------------------------
# cutoff adequacy for coherent amplitudes


def poisson_tail(alpha_abs: float, n_max: int) -> float:
    """Poisson(|alpha|^2) mass above n_max: sum_{n > n_max} e^-lam lam^n / n!."""
    lam = alpha_abs * alpha_abs
    if lam == 0.0:
        return 0.0
    return float(gammainc(n_max + 1, lam))


def adequate_cutoff(alpha_abs: float, tail_bound: float = TAIL_BOUND) -> int:
    """Smallest n_max whose Poisson tail for |alpha| stays below tail_bound."""
    n = max(1, math.ceil(alpha_abs * alpha_abs))
    while poisson_tail(alpha_abs, n) >= tail_bound:
        n += 1
    return n


def tail_warning(alpha_abs: float, cutoff: Cutoff, context: str = "") -> str | None:
    """Warn (and return the message) if the cutoff violates the tail rule."""
    tail = poisson_tail(alpha_abs, cutoff.n_max)
    if tail < TAIL_BOUND:
        return None
    msg = (
        f"cutoff inadequate{f' for {context}' if context else ''}: "
        f"|alpha|={alpha_abs:.4g} leaves Poisson tail {tail:.2e} above n_max={cutoff.n_max}"
    )
    warnings.warn(msg, CutoffWarning, stacklevel=3)
    return msg


# ---------------------------------------------------------------------------
# debug dumps


def dump_operator(op: Operator) -> str:
    """Textual dump: header ``dim modes n_max``, then row-major ``re im`` lines."""
    lines = [f"{op.dim} {op.modes} {op.cutoff.n_max}"]
    for v in op.entries.reshape(-1):
        lines.append(f"{float(v.real)!r} {float(v.imag)!r}")
    return "\n".join(lines) + "\n"


def load_operator(text: str) -> Operator:
    lines = text.strip().splitlines()
    dim, modes, n_max = (int(x) for x in lines[0].split())
    vals = np.array(
        [complex(float(r), float(i)) for r, i in (ln.split() for ln in lines[1:])]
    )
    if vals.size != dim * dim:
        raise ValueError("entry count does not match header dimension")
    return Operator(vals.reshape(dim, dim), modes, Cutoff(n_max))


def dump_ket(ket: Ket) -> str:
    """Textual dump: header ``dim modes``, then one ``re im`` line per amplitude."""
    lines = [f"{ket.dim} {ket.modes}"]
    for v in ket.amplitudes:
        lines.append(f"{float(v.real)!r} {float(v.imag)!r}")
    return "\n".join(lines) + "\n"


def load_ket(text: str) -> Ket:
    lines = text.strip().splitlines()
    dim, modes = (int(x) for x in lines[0].split())
    amps = np.array(
        [complex(float(r), float(i)) for r, i in (ln.split() for ln in lines[1:])]
    )
    if amps.size != dim:
        raise ValueError("amplitude count does not match header dimension")
    n_max = (dim if modes == 1 else math.isqrt(dim)) - 1
    return Ket(amps, modes, Cutoff(n_max))
