"""The three reference work-ratio curves for qubit ensembles.

For n = 1..n_max at fixed beta * E, computes extractable work in units of
the total initial energy n E_beta for
* the locally thermal entangled pure state (ratio 1 by construction),
* the optimal separable (diagonal) state, and
* the entropy-constrained bound at the separable state's entropy.

The pure-state ratio is evaluated through the scalable amplitude-vector
route, so n beyond the dense-matrix cap is fine.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import DEFAULT_DIM_CAP, SystemSpec, build_hamiltonian
from .families import gibbs_weighted_superposition
from .passivity import (
    entropy_constrained_bound,
    pure_state_ergotropy,
    separable_work_limit,
    thermal_entropy,
    thermal_params,
)


@dataclass(frozen=True)
class Figure1Row:
    n: int
    entangled_ratio: float
    separable_ratio: float
    entropy_bound_ratio: float


def figure1_rows(beta_e: float = 1.0, n_max: int = 20) -> list[Figure1Row]:
    """One row per ensemble size with the three work ratios."""
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    rows = []
    for n in range(1, n_max + 1):
        spec = SystemSpec.qubits(n, beta=beta_e,
                                 dim_cap=max(DEFAULT_DIM_CAP, 2 ** n))
        bound = n * thermal_params(spec).mean_energy
        hamiltonian = build_hamiltonian(spec)
        entangled = pure_state_ergotropy(
            gibbs_weighted_superposition(spec), hamiltonian
        ).ergotropy
        separable = separable_work_limit(spec)
        entropy_bound = entropy_constrained_bound(spec, thermal_entropy(spec))
        rows.append(Figure1Row(
            n=n,
            entangled_ratio=entangled / bound,
            separable_ratio=separable / bound,
            entropy_bound_ratio=entropy_bound / bound,
        ))
    return rows
