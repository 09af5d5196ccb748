"""Constructors for the locally thermal state families.

Every constructor returns a global state whose single-subsystem marginals
all equal the Gibbs state at the reference inverse temperature:

* the entangled pure state with Gibbs-weighted amplitudes on |a...a>,
* its dephased (diagonal, separable) counterpart of minimal entropy,
* product thermal states at an arbitrary temperature,
* the Dicke mixture matching the thermal diagonal on qubits,
* a three-weight diagonal family hitting a prescribed global entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DensityMatrix, SystemSpec, hamming_weights
from .errors import DomainError, InfeasibilityError, UnsupportedError
from .passivity import thermal_entropy, thermal_params

GAMMA_SCAN_STEP = 1e-3
GAMMA_BISECTION_TOL = 1e-12


@dataclass(frozen=True)
class DickeIndexSet:
    """All n-qubit basis indices with a given excitation count, ascending."""

    k: int
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)


@dataclass(frozen=True)
class DiagonalFamilyParams:
    """Weights of the fixed-entropy diagonal family.

    ground_weight sits on |0...0>, top_weight on |1...1>, and shell_weight
    is spread uniformly over the shell with shell_excitations excited
    subsystems.  The three weights sum to one and reproduce the thermal
    excitation probability on every marginal.
    """

    ground_weight: float
    top_weight: float
    shell_weight: float
    shell_excitations: int


def dicke_index_set(n: int, k: int) -> DickeIndexSet:
    if not 0 <= k <= n:
        raise DomainError(f"excitation count {k} outside [0, {n}]")
    idx = np.nonzero(hamming_weights(n) == k)[0]
    return DickeIndexSet(k=k, indices=idx)


def gibbs_weighted_superposition(spec: SystemSpec) -> np.ndarray:
    """Amplitude vector with weight e^(-beta E_a / 2)/sqrt(Z) on each |a...a>."""
    params = thermal_params(spec)
    amp = np.zeros(spec.dim, dtype=complex)
    rep = (spec.dim - 1) // (spec.d - 1)  # linear index of |a...a> is a * rep
    for a, pop in enumerate(params.populations):
        amp[a * rep] = math.sqrt(pop)
    return amp


def entangled_pure_state(spec: SystemSpec) -> DensityMatrix:
    """The locally thermal entangled pure state (n >= 2).

    For a single subsystem the same amplitude vector is pure, hence not
    thermal, so n = 1 is rejected.
    """
    if spec.n < 2:
        raise DomainError("local thermality of a pure state requires n >= 2")
    return DensityMatrix.from_pure(gibbs_weighted_superposition(spec))


def separable_optimal_state(spec: SystemSpec) -> DensityMatrix:
    """Gibbs-weighted classical mixture of |a...a>: the dephased pure state.

    This is the minimal-entropy separable locally thermal state; its global
    entropy equals the single-subsystem thermal entropy.
    """
    if spec.n < 2:
        raise DomainError("the correlated mixture requires n >= 2")
    params = thermal_params(spec)
    diag = np.zeros(spec.dim)
    rep = (spec.dim - 1) // (spec.d - 1)
    for a, pop in enumerate(params.populations):
        diag[a * rep] = pop
    return DensityMatrix.from_diagonal(diag)


def product_thermal_diagonal(spec: SystemSpec, beta_prime: float | None = None) -> np.ndarray:
    """Populations of tau_beta'^(x n) in basis order, as a vector."""
    pops = np.asarray(thermal_params(spec, beta_prime).populations)
    diag = np.ones(1)
    for _ in range(spec.n):
        diag = np.multiply.outer(diag, pops).ravel()
    return diag


def product_thermal_state(spec: SystemSpec, beta_prime: float | None = None) -> DensityMatrix:
    """Product of identical Gibbs states at inverse temperature beta_prime."""
    return DensityMatrix.from_diagonal(product_thermal_diagonal(spec, beta_prime))


def dicke_thermal_mixture(spec: SystemSpec) -> DensityMatrix:
    """Binomial mixture of Dicke states with the thermal diagonal (qubits).

    The weight on the k-excitation Dicke state is C(n,k) p^k (1-p)^(n-k),
    so the diagonal matches tau_beta^(x n) while each degenerate shell is
    maximally coherent.  Rank is n + 1.
    """
    if spec.d != 2:
        raise UnsupportedError("the Dicke mixture is implemented for qubits only")
    p = thermal_params(spec).populations[1]
    n = spec.n
    # rows of sqrt-weighted Dicke vectors; the state is rows^T rows
    rows = np.zeros((n + 1, spec.dim))
    for k in range(n + 1):
        amp = math.sqrt(p ** k * (1.0 - p) ** (n - k))
        rows[k, dicke_index_set(n, k).indices] = amp
    return DensityMatrix(rows.T @ rows)


def smallest_shell_for_entropy(n: int, entropy: float) -> int:
    """Smallest D with ln C(n, D) >= entropy, capped at n//2.

    Beyond n//2 the binomial coefficients repeat by symmetry, so a larger
    shell can never help.
    """
    if entropy < 0.0:
        raise DomainError(f"entropy must be nonnegative, got {entropy}")
    for shell in range(0, n // 2 + 1):
        if math.log(math.comb(n, shell)) >= entropy:
            return shell
    top = math.log(math.comb(n, n // 2))
    raise InfeasibilityError(
        f"entropy {entropy} exceeds ln C({n}, {n // 2}) = {top!r}"
    )


def _shell_family_entropy(gamma: float, p: float, n: int, shell: int,
                          ln_shell_size: float) -> float:
    """Global entropy of the three-weight diagonal family at shell weight gamma."""
    top = p - gamma * shell / n
    ground = 1.0 - p - gamma * (n - shell) / n

    def xlnx(x: float) -> float:
        return 0.0 if x <= 0.0 else x * math.log(x)

    return -(xlnx(ground) + xlnx(top) + xlnx(gamma)) + gamma * ln_shell_size


def diagonal_state_at_entropy(
    spec: SystemSpec, total_entropy: float
) -> tuple[DensityMatrix, DiagonalFamilyParams]:
    """Diagonal locally thermal qubit state with the prescribed global entropy.

    Solves f(gamma) = total_entropy by a forward sign-change scan (step
    1e-3) followed by bisection; f is only guaranteed continuous, not
    monotone, so the first crossing is taken.

    Raises InfeasibilityError when no shell weight in the physical range
    achieves the target, reporting the range f covered.
    """
    if spec.d != 2:
        raise UnsupportedError("the diagonal family is implemented for qubits only")
    s = float(total_entropy)
    n = spec.n
    p = thermal_params(spec).populations[1]
    s_local = thermal_entropy(spec)
    if s < s_local - 1e-9:
        raise DomainError(
            f"global entropy {s} below the locally thermal minimum {s_local!r}"
        )
    shell = smallest_shell_for_entropy(n, s)
    shell_size = math.comb(n, shell)
    ln_shell_size = math.log(shell_size)

    # weight nonnegativity bounds the scan: top_weight >= 0 and ground_weight >= 0
    hi = 1.0
    if shell > 0:
        hi = min(hi, n * p / shell)
    hi = min(hi, n * (1.0 - p) / (n - shell))

    def resid(g: float) -> float:
        return _shell_family_entropy(g, p, n, shell, ln_shell_size) - s

    gamma = _first_crossing(resid, hi)
    if gamma is None:
        grid = np.arange(0.0, hi + GAMMA_SCAN_STEP, GAMMA_SCAN_STEP)
        grid = grid[grid <= hi]
        values = [resid(g) + s for g in grid]
        raise InfeasibilityError(
            f"no shell weight in [0, {hi!r}] reaches entropy {s}; "
            f"family covers [{min(values)!r}, {max(values)!r}]"
        )

    top = p - gamma * shell / n
    ground = 1.0 - p - gamma * (n - shell) / n
    diag = np.zeros(spec.dim)
    diag[0] += ground
    diag[-1] += top
    if gamma > 0.0:
        diag[dicke_index_set(n, shell).indices] += gamma / shell_size
    params = DiagonalFamilyParams(
        ground_weight=ground,
        top_weight=top,
        shell_weight=gamma,
        shell_excitations=shell,
    )
    return DensityMatrix.from_diagonal(diag), params


def _first_crossing(resid, hi: float):
    """First sign change of resid on [0, hi] by forward scan, then bisection."""
    prev_g = 0.0
    prev_r = resid(0.0)
    # a target within rounding of the f(0) entropy floor is the gamma = 0 state
    if abs(prev_r) <= 1e-9:
        return 0.0
    steps = int(math.ceil(hi / GAMMA_SCAN_STEP))
    for k in range(1, steps + 1):
        g = min(k * GAMMA_SCAN_STEP, hi)
        r = resid(g)
        if abs(r) <= GAMMA_BISECTION_TOL:
            return g
        if (prev_r < 0.0) != (r < 0.0):
            lo, lo_r, up = prev_g, prev_r, g
            for _ in range(200):
                mid = 0.5 * (lo + up)
                mid_r = resid(mid)
                if abs(mid_r) <= GAMMA_BISECTION_TOL:
                    return mid
                if (mid_r < 0.0) == (lo_r < 0.0):
                    lo, lo_r = mid, mid_r
                else:
                    up = mid
            return 0.5 * (lo + up)
        prev_g, prev_r = g, r
    return None
