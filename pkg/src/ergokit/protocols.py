"""Explicit work-storage unitaries for qubit ensembles.

Two protocol families are realized as structured (pair-rotation)
unitaries acting on a product thermal state:

* equal-angle rotations in every subspace spanned by a basis state and
  its bit-wise negation, which tune the local bias continuously via
  bias = cos(2 angle) * bias', and
* full population inversions of a single excitation shell, which shift
  the bias in discrete steps and, chained greedily, approximate any
  weaker or reversed bias with an error vanishing as the ensemble grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    DensityMatrix,
    StructuredUnitary,
    SystemSpec,
    apply_unitary,
    hamming_weights,
    partial_trace_to,
)
from .errors import DomainError, UnreachableBiasError, UnsupportedError
from .families import product_thermal_diagonal, product_thermal_state
from .passivity import thermal_params


@dataclass(frozen=True)
class ProtocolResult:
    """Outcome of a bias-steering protocol run."""

    state: DensityMatrix
    achieved_bias: float
    target_bias: float
    beta_local: float
    angle: Optional[float] = None
    levels: tuple[int, ...] = field(default_factory=tuple)

    @property
    def residual(self) -> float:
        return abs(self.achieved_bias - self.target_bias)


def _require_qubits(spec: SystemSpec):
    if spec.d != 2:
        raise UnsupportedError("protocol unitaries are implemented for qubits only")


def pair_rotation_unitary(spec: SystemSpec, angle: float) -> StructuredUnitary:
    """Equal rotation in every subspace {|i>, |negation(i)>} with |i| < n/2.

    Indices of weight exactly n/2 (even n) pair among themselves and are
    left untouched.  For odd n this yields 2^(n-1) rotations.
    """
    _require_qubits(spec)
    weights = hamming_weights(spec.n)
    mask = spec.dim - 1
    rotations = tuple(
        (i, mask ^ i, float(angle))
        for i in range(spec.dim)
        if 2 * int(weights[i]) < spec.n
    )
    return StructuredUnitary(rotations=rotations, dim=spec.dim)


def level_inversion_unitary(spec: SystemSpec, level: int) -> StructuredUnitary:
    """Full swap (pi/2 rotation) of every weight-`level` index with its negation."""
    _require_qubits(spec)
    if not 0 <= level < spec.n / 2:
        raise DomainError(f"level {level} outside [0, n/2) for n = {spec.n}")
    mask = spec.dim - 1
    indices = np.nonzero(hamming_weights(spec.n) == level)[0]
    rotations = tuple((int(i), mask ^ int(i), math.pi / 2) for i in indices)
    return StructuredUnitary(rotations=rotations, dim=spec.dim)


def measure_bias(rho: DensityMatrix, spec: SystemSpec, subsystem: int = 1) -> float:
    """Population difference p0 - p1 of one subsystem's reduced state."""
    _require_qubits(spec)
    marginal = partial_trace_to(rho, spec, subsystem)
    diag = marginal.diagonal
    return float(diag[0] - diag[1])


def local_beta_for_bias(spec: SystemSpec, bias: float) -> float:
    """Inverse temperature whose thermal qubit has the given bias."""
    _require_qubits(spec)
    clipped = min(max(bias, -1.0 + 1e-300), 1.0 - 1e-300)
    return 2.0 / spec.energy_gap * math.atanh(clipped)


def prepare_locally_thermal(spec: SystemSpec, beta_prime: float,
                            target_bias: float) -> ProtocolResult:
    """Rotate a product thermal state to the requested local bias.

    The rotation angle solves target = cos(2 angle) * bias', so any bias
    with |target| <= bias' = tanh(beta' E / 2) is reachable; the global
    spectrum (hence entropy) is untouched.
    """
    _require_qubits(spec)
    bias_prime = thermal_params(spec, beta_prime).bias
    if abs(target_bias) > bias_prime + 1e-12:
        raise UnreachableBiasError(
            f"target bias {target_bias} exceeds the reachable range "
            f"[-{bias_prime!r}, {bias_prime!r}]"
        )
    if bias_prime == 0.0:
        angle = 0.0
    else:
        ratio = min(max(target_bias / bias_prime, -1.0), 1.0)
        angle = 0.5 * math.acos(ratio)
    state = apply_unitary(product_thermal_state(spec, beta_prime),
                          pair_rotation_unitary(spec, angle))
    achieved = measure_bias(state, spec)
    return ProtocolResult(
        state=state,
        achieved_bias=achieved,
        target_bias=float(target_bias),
        beta_local=local_beta_for_bias(spec, achieved),
        angle=angle,
    )


def bias_after_inversion(spec: SystemSpec, excited_probability: float,
                         level: int) -> float:
    """Exact local bias after inverting one shell of a product thermal state.

    Starting from per-qubit excitation probability p', swapping the
    populations of the shells with `level` and n - `level` excitations
    shifts the bias by
        2 C(n, level) (z' + 2 mu / n) (p'^level (1-p')^(n-level)
                                       - p'^(n-level) (1-p')^level)
    with z' = 1 - 2 p' and mu = n p' - level.
    """
    _require_qubits(spec)
    n = spec.n
    if not 0 <= level < n / 2:
        raise DomainError(f"level {level} outside [0, n/2) for n = {n}")
    p = float(excited_probability)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"excitation probability {p} outside [0, 1]")
    bias_prime = 1.0 - 2.0 * p
    mu = n * p - level
    swapped = p ** level * (1.0 - p) ** (n - level) - p ** (n - level) * (1.0 - p) ** level
    return bias_prime - 2.0 * math.comb(n, level) * (bias_prime + 2.0 * mu / n) * swapped


def _diagonal_bias(diag: np.ndarray, n: int) -> float:
    # subsystem 1 is the most significant bit: first half has it in |0>
    half = 1 << (n - 1)
    return float(diag[:half].sum() - diag[half:].sum())


def _invert_shell(diag: np.ndarray, n: int, level: int) -> np.ndarray:
    out = diag.copy()
    mask = (1 << n) - 1
    idx = np.nonzero(hamming_weights(n) == level)[0]
    out[idx], out[mask ^ idx] = diag[mask ^ idx], diag[idx]
    return out


def inversion_sequence_to_bias(spec: SystemSpec, beta_prime: float,
                               target_bias: float) -> ProtocolResult:
    """Greedy chain of shell inversions steering the bias toward a target.

    Candidate shells are level = round(n p' - mu) for mu = 0, +1, -1,
    +2, -2, ... (each shell used at most once); the chain stops at the
    first step that would not shrink the residual.  The diagonal never
    grows coherences, so the state stays classical and locally thermal
    throughout.
    """
    _require_qubits(spec)
    params = thermal_params(spec, beta_prime)
    bias_prime = params.bias
    if abs(target_bias) > bias_prime + 1e-12:
        raise UnreachableBiasError(
            f"target bias {target_bias} exceeds the reachable range "
            f"[-{bias_prime!r}, {bias_prime!r}]"
        )
    n = spec.n
    excited = params.populations[1]
    diag = product_thermal_diagonal(spec, beta_prime)
    bias = _diagonal_bias(diag, n)
    used: set[int] = set()
    applied: list[int] = []
    offsets = [0]
    for m in range(1, n + 1):
        offsets.extend([m, -m])
    for mu in offsets:
        level = int(round(n * excited - mu))
        if level < 0 or level >= n / 2 or level in used:
            continue
        candidate = _invert_shell(diag, n, level)
        candidate_bias = _diagonal_bias(candidate, n)
        if abs(candidate_bias - target_bias) < abs(bias - target_bias):
            diag, bias = candidate, candidate_bias
            used.add(level)
            applied.append(level)
        else:
            break
    return ProtocolResult(
        state=DensityMatrix.from_diagonal(diag),
        achieved_bias=bias,
        target_bias=float(target_bias),
        beta_local=local_beta_for_bias(spec, bias),
        levels=tuple(applied),
    )
