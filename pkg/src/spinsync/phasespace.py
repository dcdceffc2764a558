"""Spin coherent states, Husimi distribution and synchronization measures.

The four-level Husimi function is Q = (24/pi^3) <n|rho|n> over SU(4)
coherent states |n(theta_1..3, phi_1..3)>, component 1 overlapping the
highest level |4> and component 4 the lowest |1>.  The group measure is
parametrized with full angles alpha_i = theta_i / 2 in [0, pi/2] and
weights cos(a1) sin^5(a1) cos(a2) sin^3(a2) cos(a3) sin(a3), the unique
normalization for which the states resolve the identity as
integral |n><n| dmu = (pi^3 / 24) * I; see ``completeness_check``.

Synchronization is measured by S(phi_1..3) = integral Q dTheta -
1/(2 pi)^3, which reduces to a closed form linear in the upper-triangle
coherences with coefficient 1/(16 pi^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Q prefactor and max value; the flat state has Q = 6/pi^3 everywhere.
HUSIMI_PREFACTOR = 24.0 / math.pi**3
# phi-space density of a fully delocalized phase distribution.
UNIFORM_PHASE_DENSITY = 1.0 / (2.0 * math.pi) ** 3
# Closed-form coefficient of each coherence in the sync measure.
SYNC_COEFFICIENT = 1.0 / (16.0 * math.pi**2)


def coherent_state_su2(theta: float, phi: float) -> np.ndarray:
    """Spin-1/2 coherent state (cos(theta/2), e^{i phi} sin(theta/2))."""
    return np.array(
        [math.cos(theta / 2.0), np.exp(1j * phi) * math.sin(theta / 2.0)],
        dtype=complex,
    )


def coherent_state_sun(n: int, thetas, phis) -> np.ndarray:
    """SU(n) coherent state from n-1 polar and n-1 azimuthal angles.

    Built by the recursion |n_k> = (cos(theta/2), e^{i phi} sin(theta/2)
    |n_{k-1}>), unrolled with absolute phases: component k > 1 carries
    e^{i phi_{k-1}} times a product of half-angle sines and one cosine.
    """
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    if n < 2:
        raise ValueError("need n >= 2 levels")
    if thetas.shape != (n - 1,) or phis.shape != (n - 1,):
        raise ValueError(f"expected {n - 1} polar and azimuthal angles")
    if np.any(thetas < 0.0) or np.any(thetas > math.pi):
        raise ValueError("polar angles must lie in [0, pi]")
    half = thetas / 2.0
    state = np.empty(n, dtype=complex)
    sine_running = 1.0
    for k in range(n - 1):
        state[k] = sine_running * math.cos(half[k])
        if k > 0:
            state[k] *= np.exp(1j * phis[k - 1])
        sine_running *= math.sin(half[k])
    state[n - 1] = sine_running * np.exp(1j * phis[n - 2])
    return state


@dataclass(frozen=True)
class CoherentStateSU4:
    """SU(4) coherent state angles; component i overlaps level |5-i>."""

    thetas: tuple[float, float, float]
    phis: tuple[float, float, float]

    def __post_init__(self) -> None:
        if len(self.thetas) != 3 or len(self.phis) != 3:
            raise ValueError("need three polar and three azimuthal angles")
        if any(t < 0.0 or t > math.pi for t in self.thetas):
            raise ValueError("polar angles must lie in [0, pi]")

    @property
    def vector(self) -> np.ndarray:
        return coherent_state_sun(4, self.thetas, self.phis)


def free_phase_evolution(
    state: CoherentStateSU4, frequencies, t: float
) -> CoherentStateSU4:
    """Coherent state after free diagonal evolution for time t.

    ``frequencies`` are the four level frequencies (rad/s) in component
    order; each azimuthal angle shifts by -(omega_{i+1} - omega_1) t, the
    global phase being unobservable.
    """
    w = np.asarray(frequencies, dtype=float)
    if w.shape != (4,):
        raise ValueError("need four level frequencies")
    shifted = tuple(
        float(np.mod(p - (w[i + 1] - w[0]) * t, 2.0 * math.pi))
        for i, p in enumerate(state.phis)
    )
    return CoherentStateSU4(thetas=state.thetas, phis=shifted)


def husimi_full(rho: np.ndarray, state: CoherentStateSU4) -> float:
    """Husimi value (24/pi^3) <n|rho|n> at one SU(4) coherent state."""
    n = state.vector
    return float(HUSIMI_PREFACTOR * np.real(n.conj() @ np.asarray(rho) @ n))


def husimi_reduced(rho, theta, phi, include_prefactor: bool = True):
    """Husimi distribution on the |4>,|2> section of phase space.

    Equals the full distribution at (theta_1 = theta, theta_2 = pi,
    theta_3 = 0, phi_2 = phi): rho44 cos^2(theta/2) + Re(rho42 e^{i phi})
    sin(theta) + rho22 sin^2(theta/2), times 24/pi^3 unless
    ``include_prefactor`` is false.  Broadcasts over array angles.
    """
    rho = np.asarray(rho)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    bracket = (
        rho[0, 0].real * np.cos(theta / 2.0) ** 2
        + rho[2, 2].real * np.sin(theta / 2.0) ** 2
        + np.real(rho[0, 2] * np.exp(1j * phi)) * np.sin(theta)
    )
    if include_prefactor:
        return HUSIMI_PREFACTOR * bracket
    return bracket


@dataclass(frozen=True)
class HusimiGrid:
    """Sampled reduced Husimi distribution over a theta x phi grid."""

    thetas: np.ndarray
    phis: np.ndarray
    values: np.ndarray  # shape (len(thetas), len(phis))

    def __post_init__(self) -> None:
        if self.values.shape != (self.thetas.size, self.phis.size):
            raise ValueError("grid values do not match the axes")
        if np.any(np.diff(self.thetas) <= 0.0) or np.any(np.diff(self.phis) <= 0.0):
            raise ValueError("grid axes must be strictly increasing")


def husimi_grid(
    rho: np.ndarray,
    n_theta: int = 64,
    n_phi: int = 128,
    include_prefactor: bool = True,
) -> HusimiGrid:
    """Reduced Husimi distribution on a regular grid.

    theta spans [0, pi] inclusive, phi spans [0, 2 pi) half-open.
    """
    if n_theta < 2 or n_phi < 2:
        raise ValueError("grid needs at least two points per axis")
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    values = husimi_reduced(
        rho, thetas[:, None], phis[None, :], include_prefactor=include_prefactor
    )
    return HusimiGrid(thetas=thetas, phis=phis, values=values)


def visibility(grid: HusimiGrid) -> float:
    """Contrast of the phase profile Q_phi = sum over theta of Q.

    Returns (max - min) / (max + min) of the profile; raises on a grid
    whose profile sums to zero (no meaningful contrast).
    """
    profile = grid.values.sum(axis=0)
    top, bottom = float(profile.max()), float(profile.min())
    if top + bottom == 0.0:
        raise ValueError("degenerate grid: phase profile sums to zero")
    return (top - bottom) / (top + bottom)


def sync_measure_full(rho: np.ndarray, phi1: float, phi2: float, phi3: float) -> float:
    """Closed-form phase-space synchronization measure S(phi1, phi2, phi3).

    Linear in the six upper-triangle coherences; the relative phase of
    each level pair enters through the matching azimuthal combination.
    """
    rho = np.asarray(rho)
    e1, e2, e3 = np.exp(1j * phi1), np.exp(1j * phi2), np.exp(1j * phi3)
    total = (
        rho[0, 1] * e1
        + rho[0, 2] * e2
        + rho[0, 3] * e3
        + rho[1, 2] * e2 * np.conj(e1)
        + rho[1, 3] * e3 * np.conj(e1)
        + rho[2, 3] * e3 * np.conj(e2)
    )
    return float(SYNC_COEFFICIENT * total.real)


def sync_measure_reduced(rho: np.ndarray, phi: float) -> float:
    """S(phi) = Re(rho42 e^{i phi}) / (16 pi^2) on the reduced section."""
    return float(SYNC_COEFFICIENT * np.real(np.asarray(rho)[0, 2] * np.exp(1j * phi)))


def sync_measure_max(rho: np.ndarray) -> float:
    """Peak of the reduced measure over phi: |rho42| / (16 pi^2)."""
    return float(SYNC_COEFFICIENT * abs(np.asarray(rho)[0, 2]))


# --- group-measure quadrature ------------------------------------------------

# Which azimuthal angle each state component carries (0 = none).
_PHASE_SLOT = (0, 1, 2, 3)
# Per-axis radial factors of the components: axis k contributes cos or
# sin of alpha_k (or 1) to component i; see coherent_state_sun.
_RADIAL_KIND = (
    ("cos", "one", "one"),
    ("sin", "cos", "one"),
    ("sin", "sin", "cos"),
    ("sin", "sin", "sin"),
)
# Measure weight exponents per axis: cos(a) sin^m(a) with m = 5, 3, 1.
_WEIGHT_SINE_POWER = (5, 3, 1)


@dataclass(frozen=True)
class HaarQuadrature:
    """Product quadrature for the SU(4) coherent-state measure.

    Gauss-Legendre nodes in each full angle alpha_i = theta_i / 2 on
    [0, pi/2] and a uniform periodic grid in each azimuthal angle.  The
    integrand of every measure integral used here factorizes per axis, so
    the 6-D product rule is evaluated exactly in factorized form.
    """

    alpha_nodes: np.ndarray
    alpha_weights: np.ndarray
    n_phi: int

    def _radial_pair_integrals(self) -> np.ndarray:
        """R[i, j] = integral over alphas of r_i r_j times the weight."""
        a, w = self.alpha_nodes, self.alpha_weights
        cos_a, sin_a = np.cos(a), np.sin(a)
        factors = {"cos": cos_a, "sin": sin_a, "one": np.ones_like(a)}
        r = np.ones((4, 4))
        for axis in range(3):
            weight = w * cos_a * sin_a ** _WEIGHT_SINE_POWER[axis]
            axis_int = np.empty((4, 4))
            for i in range(4):
                for j in range(4):
                    fi = factors[_RADIAL_KIND[i][axis]]
                    fj = factors[_RADIAL_KIND[j][axis]]
                    axis_int[i, j] = np.sum(weight * fi * fj)
            r *= axis_int
        return r

    def _phase_pair_integrals(self) -> np.ndarray:
        """P[i, j] = integral over phis of e_i(phi) conj(e_j(phi))."""
        phis = np.linspace(0.0, 2.0 * math.pi, self.n_phi, endpoint=False)
        dphi = 2.0 * math.pi / self.n_phi
        p = np.ones((4, 4), dtype=complex)
        for axis in range(1, 4):
            axis_int = np.empty((4, 4), dtype=complex)
            for i in range(4):
                for j in range(4):
                    k = (_PHASE_SLOT[i] == axis) - (_PHASE_SLOT[j] == axis)
                    axis_int[i, j] = dphi * np.sum(np.exp(1j * k * phis))
            p *= axis_int
        return p


def haar_quadrature(n_alpha: int = 32, n_phi: int = 64) -> HaarQuadrature:
    """Quadrature scheme of the given orders (defaults are ample)."""
    if n_alpha < 2 or n_phi < 4:
        raise ValueError("quadrature orders too small")
    x, w = np.polynomial.legendre.leggauss(n_alpha)
    # map [-1, 1] -> [0, pi/2]
    nodes = 0.25 * math.pi * (x + 1.0)
    weights = 0.25 * math.pi * w
    return HaarQuadrature(alpha_nodes=nodes, alpha_weights=weights, n_phi=n_phi)


def completeness_check(scheme: HaarQuadrature | None = None) -> np.ndarray:
    """Quadrature of integral |n><n| dmu; exact value is (pi^3/24) I."""
    scheme = scheme or haar_quadrature()
    return scheme._radial_pair_integrals() * scheme._phase_pair_integrals()


def husimi_normalization(rho: np.ndarray, scheme: HaarQuadrature | None = None) -> float:
    """Quadrature of integral Q dmu; equals 1 for any unit-trace state."""
    scheme = scheme or haar_quadrature()
    overlap = completeness_check(scheme)
    return float(HUSIMI_PREFACTOR * np.real(np.trace(np.asarray(rho) @ overlap)))


def sync_measure_quadrature(
    rho: np.ndarray,
    phi1: float,
    phi2: float,
    phi3: float,
    scheme: HaarQuadrature | None = None,
) -> float:
    """S(phi1..3) evaluated as a polar-sector quadrature of Q.

    Integrates Q over the three polar angles at fixed azimuthal angles
    and subtracts the uniform phase density; agrees with the closed form
    ``sync_measure_full`` to quadrature accuracy.
    """
    scheme = scheme or haar_quadrature()
    rho = np.asarray(rho)
    radial = scheme._radial_pair_integrals()
    phases = np.array([1.0, np.exp(1j * phi1), np.exp(1j * phi2), np.exp(1j * phi3)])
    # integral over alphas of <n|rho|n> at fixed azimuths
    sector = np.real(
        np.einsum("ij,i,j,ij->", rho, phases.conj(), phases, radial)
    )
    return float(HUSIMI_PREFACTOR * sector - UNIFORM_PHASE_DENSITY)
