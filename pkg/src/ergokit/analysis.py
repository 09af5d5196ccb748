"""Entanglement detection, bath-assisted bounds and level counting.

Entanglement is certified by negativity under partial transposition
(NPT); a PPT outcome is reported as undecided, never as separability.
For the rotated product-thermal states an analytic witness for the
half/half split is available in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import DensityMatrix, SystemSpec, partial_trace_to, von_neumann_entropy
from .errors import DomainError, ShapeError, UnsupportedError
from .passivity import thermal_entropy, thermal_params

NPT_EIGENVALUE_TOL = -1e-10


@dataclass(frozen=True)
class Bipartition:
    """A split of the n subsystems into side_a and its complement."""

    side_a: frozenset[int]
    n: int

    def __post_init__(self):
        side = frozenset(int(i) for i in self.side_a)
        object.__setattr__(self, "side_a", side)
        if not side or len(side) >= self.n:
            raise DomainError("both sides of a bipartition must be nonempty")
        if any(i < 1 or i > self.n for i in side):
            raise DomainError(f"subsystem indices must lie in [1, {self.n}]")

    @property
    def side_b(self) -> frozenset[int]:
        return frozenset(range(1, self.n + 1)) - self.side_a

    @classmethod
    def half_split(cls, n: int) -> "Bipartition":
        return cls(side_a=frozenset(range(1, n // 2 + 1)), n=n)


@dataclass(frozen=True)
class EntanglementVerdict:
    """NPT verdict from the minimum partial-transpose eigenvalue."""

    min_pt_eigenvalue: float
    witness_value: Optional[float]
    verdict: str

    ENTANGLED = "entangled"
    UNDECIDED = "ppt_undecided"


def partial_transpose(rho: DensityMatrix, spec: SystemSpec,
                      part: Bipartition) -> np.ndarray:
    """Transpose the side_a subsystems; returns a Hermitian matrix."""
    if rho.dim != spec.dim:
        raise ShapeError(f"state dimension {rho.dim} does not match spec dimension {spec.dim}")
    if part.n != spec.n:
        raise ShapeError(f"bipartition over {part.n} subsystems, spec has {spec.n}")
    n, d = spec.n, spec.d
    tensor = rho.entries.reshape([d] * (2 * n))
    axes = list(range(2 * n))
    for sub in part.side_a:
        axes[sub - 1], axes[n + sub - 1] = axes[n + sub - 1], axes[sub - 1]
    return tensor.transpose(axes).reshape(spec.dim, spec.dim).copy()


def min_pt_eigenvalue(rho: DensityMatrix, spec: SystemSpec,
                      part: Bipartition) -> float:
    return float(np.linalg.eigvalsh(partial_transpose(rho, spec, part)).min())


def entanglement_verdict(rho: DensityMatrix, spec: SystemSpec, part: Bipartition,
                         witness_value: Optional[float] = None) -> EntanglementVerdict:
    smallest = min_pt_eigenvalue(rho, spec, part)
    verdict = (EntanglementVerdict.ENTANGLED if smallest < NPT_EIGENVALUE_TOL
               else EntanglementVerdict.UNDECIDED)
    return EntanglementVerdict(min_pt_eigenvalue=smallest,
                               witness_value=witness_value, verdict=verdict)


def npt_witness_half_split(spec: SystemSpec, beta_prime: float, angle: float) -> float:
    """Closed-form NPT witness for the rotated product-thermal state.

    Returns sin(2 angle) (1 - e^(-beta' E n)) - 2 e^(-beta' E n / 2); a
    positive value certifies entanglement of the angle-rotated product
    thermal state across the half/half split (even n).  It tracks a single
    coherence pair, so a negative value decides nothing.
    """
    if spec.d != 2:
        raise UnsupportedError("the closed-form witness applies to qubits only")
    if spec.n % 2:
        raise DomainError("the half/half witness requires an even subsystem count")
    x = beta_prime * spec.energy_gap * spec.n
    return math.sin(2.0 * angle) * (1.0 - math.exp(-x)) - 2.0 * math.exp(-x / 2.0)


def free_energy(rho: DensityMatrix, hamiltonian, beta: float) -> float:
    """F = Tr(H rho) - S(rho)/beta at inverse temperature beta > 0."""
    if beta <= 0.0:
        raise DomainError(f"inverse temperature must be positive, got {beta}")
    energies = np.asarray(hamiltonian, dtype=float).ravel()
    if energies.size != rho.dim:
        raise ShapeError(
            f"Hamiltonian length {energies.size} does not match state dimension {rho.dim}"
        )
    return float(rho.diagonal @ energies) - von_neumann_entropy(rho) / beta


def bath_extractable_work(spec: SystemSpec, total_entropy: float) -> float:
    """Work from a locally thermal state of entropy S given a bath at beta.

    Equals (n S(tau_beta) - S)/beta: the multipartite mutual information
    over beta, and identically the free-energy gap to the product thermal
    state.
    """
    if spec.beta <= 0.0:
        raise DomainError("the bath bound requires a positive inverse temperature")
    s = float(total_entropy)
    s_top = spec.n * thermal_entropy(spec)
    if s < -1e-12 or s > s_top + 1e-9:
        raise DomainError(f"total entropy {s} outside [0, n S(tau_beta) = {s_top!r}]")
    return (s_top - s) / spec.beta


def mutual_information_multipartite(rho: DensityMatrix, spec: SystemSpec) -> float:
    """Sum of marginal entropies minus the global entropy."""
    marginal_total = sum(
        von_neumann_entropy(partial_trace_to(rho, spec, k))
        for k in range(1, spec.n + 1)
    )
    return float(marginal_total - von_neumann_entropy(rho))


def count_global_energies(n: int, d: int) -> int:
    """Number of distinct total energies for a generic local ladder.

    Each multiset of n digits from d symbols gives one energy when the
    ladder has no accidental coincidences: C(n + d - 1, d - 1).
    """
    if n < 0 or d < 1:
        raise DomainError(f"need n >= 0 and d >= 1, got n = {n}, d = {d}")
    return math.comb(n + d - 1, d - 1)


def dicke_mixture_work_formula(spec: SystemSpec) -> float:
    """Closed-form ergotropy of the qubit Dicke mixture.

    n E_beta - (1 - max_k C(n,k) p^k (1-p)^(n-k)) E.  The passive state
    parks the largest of the n + 1 binomial weights on the ground level
    and the remaining n inside the first excited shell, so the exact
    maximizing k is used (not the typical-value approximation).
    """
    if spec.d != 2:
        raise UnsupportedError("the closed form applies to qubits only")
    params = thermal_params(spec)
    p = params.populations[1]
    n = spec.n
    largest = max(
        math.comb(n, k) * p ** k * (1.0 - p) ** (n - k) for k in range(n + 1)
    )
    return n * params.mean_energy - (1.0 - largest) * spec.energy_gap
