"""Passive states, ergotropy and the analytic work bounds.

The central quantity is the ergotropy of a state rho under a diagonal
Hamiltonian H: the energy gap between rho and its passive counterpart,
obtained by placing the eigenvalues of rho, sorted descending, onto the
energy levels sorted ascending.  Thermal (Gibbs) states are the completely
passive reference; the entropy-constrained bound is evaluated by inverting
the thermal-entropy map with a bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import DensityMatrix, ShapeError, SystemSpec, state_eigenvalues
from .errors import DomainError, NumericalError, UnsupportedError

# beta' = infinity is represented by this sentinel (in units of the first
# local gap); the thermal entropy there must underflow below 1e-12.
BETA_MAX_SCALE = 1e6

ENTROPY_BISECTION_TOL = 1e-12
ENTROPY_BISECTION_MAX_ITER = 200


@dataclass(frozen=True)
class ThermalParams:
    """Gibbs weights of one subsystem at a given inverse temperature.

    populations holds all d level occupations e^(-beta E_a)/Z, ground
    level included.
    """

    beta_prime: float
    populations: tuple[float, ...]
    partition_function: float
    mean_energy: float

    @property
    def bias(self) -> float:
        """Population difference p0 - p1; only meaningful for qubits."""
        if len(self.populations) != 2:
            raise UnsupportedError("bias is defined for two-level subsystems only")
        return self.populations[0] - self.populations[1]

    @property
    def entropy(self) -> float:
        pops = np.asarray(self.populations)
        nz = pops[pops > 0.0]
        return float(-(nz * np.log(nz)).sum())


@dataclass(frozen=True)
class WorkReport:
    """Energy bookkeeping of one work-extraction assessment."""

    initial_energy: float
    passive_energy: float
    ergotropy: float
    bound_total_energy: Optional[float] = None
    bound_entropy: Optional[float] = None
    ratio_to_bound: Optional[float] = None


def thermal_params(spec: SystemSpec, beta: Optional[float] = None) -> ThermalParams:
    """Gibbs populations, partition function and mean energy at beta.

    beta defaults to the reference inverse temperature of the spec.
    """
    b = spec.beta if beta is None else float(beta)
    if b < 0.0 or not math.isfinite(b):
        raise DomainError(f"inverse temperature must be finite and >= 0, got {b}")
    ladder = np.asarray(spec.local_energies)
    weights = np.exp(-b * ladder)
    z = float(weights.sum())
    pops = weights / z
    return ThermalParams(
        beta_prime=b,
        populations=tuple(float(p) for p in pops),
        partition_function=z,
        mean_energy=float(pops @ ladder),
    )


def thermal_state(spec: SystemSpec, beta: Optional[float] = None) -> DensityMatrix:
    """Single-subsystem Gibbs state e^(-beta h)/Z as a d x d density matrix."""
    return DensityMatrix.from_diagonal(thermal_params(spec, beta).populations)


def thermal_entropy(spec: SystemSpec, beta: Optional[float] = None) -> float:
    """Entropy of the single-subsystem Gibbs state, in nats."""
    return thermal_params(spec, beta).entropy


def passive_state(rho: DensityMatrix, hamiltonian) -> DensityMatrix:
    """Passive counterpart: descending eigenvalues on ascending energy levels.

    Ties in energy are broken by ascending basis index (stable sort), which
    fixes a deterministic representative without changing the energy.
    """
    energies = _checked_hamiltonian(rho, hamiltonian)
    lam = state_eigenvalues(rho)
    order = np.argsort(energies, kind="stable")
    diag = np.empty(rho.dim)
    diag[order] = lam
    return DensityMatrix.from_diagonal(diag)


def ergotropy(rho: DensityMatrix, hamiltonian, spec: Optional[SystemSpec] = None,
              total_entropy: Optional[float] = None) -> WorkReport:
    """Maximal unitarily extractable work from rho under a diagonal H.

    When spec is given the report also carries the total-energy bound
    n * E_beta for locally thermal states and the ratio to it; passing
    total_entropy additionally fills the entropy-constrained bound.
    """
    energies = _checked_hamiltonian(rho, hamiltonian)
    initial = float(rho.diagonal @ energies)
    lam = state_eigenvalues(rho)
    passive = float(lam @ np.sort(energies, kind="stable"))
    work = initial - passive
    bound_total = bound_entropy = ratio = None
    if spec is not None:
        bound_total = spec.n * thermal_params(spec).mean_energy
        if total_entropy is not None:
            bound_entropy = entropy_constrained_bound(spec, total_entropy)
        if bound_total > 0.0:
            ratio = work / bound_total
    return WorkReport(
        initial_energy=initial,
        passive_energy=passive,
        ergotropy=work,
        bound_total_energy=bound_total,
        bound_entropy=bound_entropy,
        ratio_to_bound=ratio,
    )


def pure_state_ergotropy(amplitudes, hamiltonian,
                         spec: Optional[SystemSpec] = None) -> WorkReport:
    """Ergotropy of a pure state given by its amplitude vector.

    The spectrum of a pure state is (1, 0, ..., 0), so its passive energy
    is the smallest level and no dense eigensolve is needed.  This is the
    scalable route for states too large to materialize as matrices.
    """
    vec = np.asarray(amplitudes, dtype=complex).ravel()
    energies = np.asarray(hamiltonian, dtype=float).ravel()
    if vec.size != energies.size:
        raise ShapeError(
            f"amplitude vector length {vec.size} does not match H length {energies.size}"
        )
    norm = float((np.abs(vec) ** 2).sum())
    if abs(norm - 1.0) > 1e-10:
        raise DomainError(f"amplitudes must be normalized, got norm^2 = {norm!r}")
    initial = float((np.abs(vec) ** 2) @ energies)
    passive = float(energies.min())
    bound_total = ratio = None
    if spec is not None:
        bound_total = spec.n * thermal_params(spec).mean_energy
        if bound_total > 0.0:
            ratio = (initial - passive) / bound_total
    return WorkReport(
        initial_energy=initial,
        passive_energy=passive,
        ergotropy=initial - passive,
        bound_total_energy=bound_total,
        ratio_to_bound=ratio,
    )


def is_passive(rho: DensityMatrix, hamiltonian) -> bool:
    """True iff rho is diagonal with populations non-increasing in energy.

    Within a degenerate energy shell any ordering counts as passive, so
    populations are compared shell-by-shell.
    """
    if rho.off_diagonal_max() > 1e-10:
        return False
    energies = _checked_hamiltonian(rho, hamiltonian)
    pops = rho.diagonal
    order = np.argsort(energies, kind="stable")
    sorted_e = energies[order]
    sorted_p = pops[order]
    # sort populations descending inside each (tolerance-grouped) shell
    arranged = []
    start = 0
    for i in range(1, len(sorted_e) + 1):
        if i == len(sorted_e) or sorted_e[i] - sorted_e[start] > 1e-9:
            arranged.append(np.sort(sorted_p[start:i])[::-1])
            start = i
    seq = np.concatenate(arranged)
    return bool(np.all(np.diff(seq) <= 1e-12))


def beta_for_entropy(spec: SystemSpec, entropy_per_subsystem: float) -> ThermalParams:
    """Invert the thermal-entropy map: find beta' with S(tau_beta') = s.

    Bisection on the monotone map beta' -> S(tau_beta'), converged to
    1e-12 absolute on the entropy residual.  s = ln d returns beta' = 0;
    s at or below the sentinel entropy returns the beta_max sentinel.
    """
    s = float(entropy_per_subsystem)
    s_max = math.log(spec.d)
    if s < -ENTROPY_BISECTION_TOL or s > s_max + ENTROPY_BISECTION_TOL:
        raise DomainError(
            f"entropy per subsystem {s} outside [0, ln d = {s_max!r}]"
        )
    s = min(max(s, 0.0), s_max)
    if s_max - s <= ENTROPY_BISECTION_TOL:
        return thermal_params(spec, 0.0)
    gap = spec.energy_gap if spec.energy_gap > 0.0 else 1.0
    beta_max = BETA_MAX_SCALE / gap
    floor_params = thermal_params(spec, beta_max)
    if s <= floor_params.entropy:
        return floor_params
    lo, hi = 0.0, beta_max
    params = floor_params
    for _ in range(ENTROPY_BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        params = thermal_params(spec, mid)
        resid = params.entropy - s
        if abs(resid) <= ENTROPY_BISECTION_TOL:
            return params
        if resid > 0.0:
            lo = mid  # entropy decreases with beta
        else:
            hi = mid
    if abs(params.entropy - s) > 1e-9:
        raise NumericalError(
            f"entropy bisection stalled at residual {params.entropy - s:.3e}"
        )
    return params


def entropy_constrained_bound(spec: SystemSpec, total_entropy: float) -> float:
    """Upper bound on extractable work from locally thermal states of fixed entropy.

    Equals n E_beta minus the energy of the product thermal state whose
    per-subsystem entropy is total_entropy / n.
    """
    s = float(total_entropy)
    if s < -1e-12 or s > spec.n * math.log(spec.d) + 1e-9:
        raise DomainError(
            f"total entropy {s} outside [0, n ln d = {spec.n * math.log(spec.d)!r}]"
        )
    final = beta_for_entropy(spec, s / spec.n)
    initial = thermal_params(spec)
    return spec.n * (initial.mean_energy - final.mean_energy)


def separable_work_limit(spec: SystemSpec) -> float:
    """Maximal work stored in separable locally thermal states.

    n E_beta - E_1 (1 - 1/Z); valid in the many-subsystem regime
    n >= d - 1, where the d - 1 largest populations fit into the first
    excited shell.
    """
    if spec.n < spec.d - 1:
        raise DomainError(
            f"formula requires n >= d - 1, got n = {spec.n}, d = {spec.d}"
        )
    params = thermal_params(spec)
    return spec.n * params.mean_energy - spec.energy_gap * (
        1.0 - 1.0 / params.partition_function
    )


def _checked_hamiltonian(rho: DensityMatrix, hamiltonian) -> np.ndarray:
    energies = np.asarray(hamiltonian, dtype=float).ravel()
    if energies.size != rho.dim:
        raise ShapeError(
            f"Hamiltonian length {energies.size} does not match state dimension {rho.dim}"
        )
    return energies
