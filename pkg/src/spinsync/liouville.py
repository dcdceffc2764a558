"""Vectorized master-equation engine.

Density matrices are flattened by column stacking, so a triple product
B rho C maps to (C^T kron B) vec(rho).  The generator splits into a
drift part (coherent drift plus dissipation) and a drive part; both are
dense 16x16 matrices and propagation uses the matrix exponential.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .dissipation import JumpOperator, build_jump_operators
from .hamiltonians import Hamiltonian, as_matrix, drive_term, rotating_drift
from .system import DriveConfig, SpinSystemConfig

# Ratio of second-smallest to largest singular value below which the
# stationary subspace is treated as degenerate.
DEGENERACY_RATIO = 1e-8
# Residual bound for an accepted steady state, relative to ||L||.
RESIDUAL_RTOL = 1e-10


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Stack the columns of a 4x4 matrix into a 16-vector."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    return rho.reshape(-1, order="F")

def devectorize(vec: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vectorize` for 16-element vectors."""
    vec = np.asarray(vec, dtype=complex)
    if vec.shape != (16,):
        raise ValueError(f"expected a 16-vector, got shape {vec.shape}")
    return vec.reshape((4, 4), order="F")


def _commutator_superoperator(h: np.ndarray) -> np.ndarray:
    eye = np.eye(h.shape[0], dtype=complex)
    return -1j * (np.kron(eye, h) - np.kron(h.T, eye))


def _dissipator_superoperator(o: np.ndarray) -> np.ndarray:
    eye = np.eye(o.shape[0], dtype=complex)
    odo = o.conj().T @ o
    return (
        np.kron(o.conj(), o)
        - 0.5 * np.kron(eye, odo)
        - 0.5 * np.kron(odo.T, eye)
    )


def _hermitian_part(h0: Hamiltonian | np.ndarray, name: str) -> np.ndarray:
    h = np.asarray(as_matrix(h0), dtype=complex)
    dev = float(np.max(np.abs(h - h.conj().T)))
    if dev > 1e-12:
        raise ValueError(f"{name} must be Hermitian, deviation {dev:.3e}")
    return h


def build_l0(
    h0: Hamiltonian | np.ndarray,
    jumps: list[JumpOperator] | list[np.ndarray],
) -> np.ndarray:
    """Drift generator: -i[H0, .] plus the sum of all dissipators."""
    l0 = _commutator_superoperator(_hermitian_part(h0, "drift Hamiltonian"))
    for jump in jumps:
        l0 += _dissipator_superoperator(getattr(jump, "matrix", jump))
    return l0


def build_lv(v: Hamiltonian | np.ndarray) -> np.ndarray:
    """Drive generator -i[V, .]."""
    return _commutator_superoperator(_hermitian_part(v, "drive term"))


@dataclass(frozen=True)
class Liouvillian:
    """Generator split into drift and drive addends (16x16 each)."""

    drift: np.ndarray
    drive: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.drift + self.drive


def build_liouvillian(config: SpinSystemConfig, drive: DriveConfig) -> Liouvillian:
    """Assemble the full generator for a configured system and drive."""
    l0 = build_l0(rotating_drift(config, drive), build_jump_operators(config))
    lv = build_lv(drive_term(drive))
    return Liouvillian(drift=l0, drive=lv)


def _total(liouvillian: Liouvillian | np.ndarray) -> np.ndarray:
    if isinstance(liouvillian, Liouvillian):
        return liouvillian.total
    return np.asarray(liouvillian, dtype=complex)


def propagate(
    liouvillian: Liouvillian | np.ndarray, rho0: np.ndarray, t: float
) -> np.ndarray:
    """Evolve rho0 for a time t >= 0 via expm(L t).

    Scaling-and-squaring Pade approximation; exact semigroup property up
    to rounding, trace and Hermiticity preserved by construction of L.
    """
    if t < 0.0:
        raise ValueError("propagation time must be non-negative")
    l_total = _total(liouvillian)
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (4, 4):
        raise ValueError(f"initial state must be 4x4, got {rho0.shape}")
    return devectorize(scipy.linalg.expm(l_total * t) @ vectorize(rho0))


def propagator(liouvillian: Liouvillian | np.ndarray, t: float) -> np.ndarray:
    """The 16x16 map expm(L t); useful when many states share one time."""
    if t < 0.0:
        raise ValueError("propagation time must be non-negative")
    return scipy.linalg.expm(_total(liouvillian) * t)


def steady_state(liouvillian: Liouvillian | np.ndarray) -> np.ndarray:
    """Stationary density matrix from the null space of the generator.

    Found as the singular vector of the smallest singular value, then
    Hermitized and trace-normalized.  Raises if the null space is
    (numerically) more than one-dimensional or if the residual after
    normalization is not small.
    """
    l_total = _total(liouvillian)
    _, s, vh = np.linalg.svd(l_total)
    if s[0] == 0.0 or s[-2] < DEGENERACY_RATIO * s[0]:
        raise np.linalg.LinAlgError(
            "stationary subspace is degenerate; steady state ambiguous"
        )
    rho = devectorize(vh[-1].conj())
    trace = rho.trace()
    if abs(trace) < 1e-12:
        raise np.linalg.LinAlgError("null vector has vanishing trace")
    rho = rho / trace
    rho = 0.5 * (rho + rho.conj().T)
    residual = np.linalg.norm(l_total @ vectorize(rho))
    bound = RESIDUAL_RTOL * np.linalg.norm(l_total, 2)
    if residual > bound:
        raise np.linalg.LinAlgError(
            f"steady-state residual {residual:.3e} exceeds {bound:.3e}"
        )
    return rho


@dataclass(frozen=True)
class SpectralReport:
    """Eigenvalues of the generator, sorted by descending real part."""

    eigenvalues: np.ndarray
    gap: float  # |Re| of the slowest decaying mode


def spectral_report(liouvillian: Liouvillian | np.ndarray) -> SpectralReport:
    """Eigenvalue summary; the gap sets the equilibration time scale.

    All real parts are non-positive for a valid generator (one eigenvalue
    is zero up to rounding).
    """
    eigs = np.linalg.eigvals(_total(liouvillian))
    order = np.argsort(-eigs.real)
    eigs = eigs[order]
    return SpectralReport(eigenvalues=eigs, gap=float(-eigs[1].real))
