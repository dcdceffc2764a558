"""Jump operators for single-quantum relaxation against a thermal bath.

Each spin exchanges quanta with its own bath; the partner spin is a
spectator, so every allowed transition flips exactly one spin while the
other keeps its orientation.  That gives eight jump operators: two spins
x two directions x two spectator orientations, each with a single
non-zero matrix element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .system import SpinSystemConfig


def fermionic_probabilities(epsilon: float) -> tuple[float, float]:
    """Bath occupation pair (p_plus, p_minus) for one spin.

    p_plus = 1 / (exp(4 epsilon) + 1) weights upward (energy-gaining)
    jumps, p_minus = 1 - p_plus downward ones; their ratio exp(-4 epsilon)
    sets the detailed-balance population ratio across the transition.
    """
    if epsilon < 0.0:
        raise ValueError("purity factor must be non-negative")
    p_plus = 1.0 / (math.exp(4.0 * epsilon) + 1.0)
    return p_plus, 1.0 - p_plus


def transition_rate(t1_s: float) -> float:
    """Base rate g = 2 pi / T1 in rad/s."""
    if t1_s <= 0.0:
        raise ValueError("T1 must be positive")
    return 2.0 * math.pi / t1_s


@dataclass(frozen=True)
class JumpOperator:
    """One weighted transition |target><source| in the four-level basis."""

    matrix: np.ndarray
    species: str  # "P" or "F"
    direction: str  # "up" (energy-gaining) or "down"
    source: int  # level label 1..4
    target: int


def build_jump_operators(config: SpinSystemConfig) -> list[JumpOperator]:
    """All eight single-quantum jump operators for the configured system.

    Weights are sqrt(g * p) with g = 2 pi / T1 of the flipping spin and p
    the fermionic probability for the jump direction.  Upward means the
    flipping spin moves from m = +1/2 to m = -1/2 (its higher-energy
    orientation for the positive gyromagnetic ratios used here).
    """
    basis = config.basis
    params = {
        "P": (transition_rate(config.t1_p_s), fermionic_probabilities(config.epsilon_p)),
        "F": (transition_rate(config.t1_f_s), fermionic_probabilities(config.epsilon_f)),
    }
    index_of = {qn: i for i, qn in enumerate(basis.levels)}
    label_of = {i: label for i, label in enumerate((4, 3, 2, 1))}

    ops = []
    for species, flip_slot in (("P", 0), ("F", 1)):
        g, (p_up, p_down) = params[species]
        for spectator_m in (-0.5, +0.5):
            lower = [0.0, 0.0]
            lower[flip_slot] = +0.5  # m = +1/2 is the lower-energy orientation
            lower[1 - flip_slot] = spectator_m
            upper = list(lower)
            upper[flip_slot] = -0.5
            i_lower, i_upper = index_of[tuple(lower)], index_of[tuple(upper)]
            for direction, p, i_src, i_tgt in (
                ("up", p_up, i_lower, i_upper),
                ("down", p_down, i_upper, i_lower),
            ):
                m = np.zeros((4, 4), dtype=complex)
                m[i_tgt, i_src] = math.sqrt(g * p)
                ops.append(
                    JumpOperator(
                        matrix=m,
                        species=species,
                        direction=direction,
                        source=label_of[i_src],
                        target=label_of[i_tgt],
                    )
                )
    return ops
