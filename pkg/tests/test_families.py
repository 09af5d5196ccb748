"""State-family constructors: marginals, spectra, entropies, feasibility."""

import math

import numpy as np
import pytest

from ergokit import (
    DensityMatrix,
    DomainError,
    InfeasibilityError,
    SystemSpec,
    UnsupportedError,
    build_hamiltonian,
    diagonal_state_at_entropy,
    dicke_index_set,
    dicke_thermal_mixture,
    entangled_pure_state,
    ergotropy,
    gibbs_weighted_superposition,
    partial_trace_to,
    product_thermal_state,
    separable_optimal_state,
    separable_work_limit,
    smallest_shell_for_entropy,
    state_eigenvalues,
    thermal_entropy,
    thermal_params,
    thermal_state,
    von_neumann_entropy,
)

P1 = math.exp(-1.0) / (1.0 + math.exp(-1.0))


def assert_locally_thermal(state, spec, atol=1e-10):
    tau = thermal_state(spec)
    for k in range(1, spec.n + 1):
        marginal = partial_trace_to(state, spec, k)
        assert float(np.abs(marginal.entries - tau.entries).max()) <= atol


# ---------------------------------------------------------------------------
# entangled pure state
# ---------------------------------------------------------------------------

def test_pure_state_at_infinite_temperature_is_bell(qubit_pair):
    spec = SystemSpec.qubits(2, 0.0)
    state = entangled_pure_state(spec)
    vec = np.zeros(4)
    vec[0] = vec[3] = 1 / math.sqrt(2)
    np.testing.assert_allclose(state.entries, np.outer(vec, vec), atol=1e-14)


def test_pure_state_rejects_single_subsystem():
    with pytest.raises(DomainError):
        entangled_pure_state(SystemSpec.qubits(1, 1.0))


def test_pure_state_top_amplitude():
    spec = SystemSpec.qubits(3, 1.0)
    state = entangled_pure_state(spec)
    assert abs(float(state.entries[7, 7].real) - P1) <= 1e-12
    assert abs(float(state.entries[7, 7].real) - 0.268941) <= 1e-6


def test_pure_state_is_pure_and_locally_thermal():
    for n, beta in ((2, 1.0), (3, 0.5), (5, 2.0)):
        spec = SystemSpec.qubits(n, beta)
        state = entangled_pure_state(spec)
        assert von_neumann_entropy(state) <= 1e-10
        assert_locally_thermal(state, spec)


def test_pure_state_qudit_marginals():
    spec = SystemSpec(n=2, d=3, local_energies=(0.0, 1.0, 2.2), beta=0.9)
    assert_locally_thermal(entangled_pure_state(spec), spec)


def test_pure_state_extracts_everything():
    for n in (2, 4, 6):
        spec = SystemSpec.qubits(n, 1.0)
        report = ergotropy(entangled_pure_state(spec), build_hamiltonian(spec), spec)
        assert abs(report.ergotropy - report.bound_total_energy) <= 1e-9


def test_gibbs_vector_is_normalized():
    spec = SystemSpec(n=3, d=3, local_energies=(0.0, 0.5, 1.5), beta=1.1)
    vec = gibbs_weighted_superposition(spec)
    assert abs(float((np.abs(vec) ** 2).sum()) - 1.0) <= 1e-12


# ---------------------------------------------------------------------------
# separable optimum
# ---------------------------------------------------------------------------

def test_separable_state_at_infinite_temperature():
    spec = SystemSpec.qubits(2, 0.0)
    state = separable_optimal_state(spec)
    np.testing.assert_allclose(state.diagonal, [0.5, 0.0, 0.0, 0.5], atol=1e-14)


def test_separable_state_entropy_equals_local():
    spec = SystemSpec.qubits(5, 1.0)
    value = von_neumann_entropy(separable_optimal_state(spec))
    assert abs(value - thermal_entropy(spec)) <= 1e-10
    assert abs(value - 0.582203) <= 1e-5


def test_separable_state_is_dephased_pure_state():
    spec = SystemSpec.qubits(3, 1.0)
    dephased = np.diag(np.diag(entangled_pure_state(spec).entries))
    np.testing.assert_allclose(separable_optimal_state(spec).entries, dephased,
                               atol=1e-14)


def test_separable_state_locally_thermal():
    for spec in (SystemSpec.qubits(4, 0.7),
                  SystemSpec(n=3, d=3, local_energies=(0.0, 1.0, 1.8), beta=1.2)):
        assert_locally_thermal(separable_optimal_state(spec), spec)


def test_separable_strictly_below_entangled():
    for n in range(2, 8):
        for beta in (0.5, 1.0, 2.0):
            spec = SystemSpec.qubits(n, beta)
            ham = build_hamiltonian(spec)
            w_sep = ergotropy(separable_optimal_state(spec), ham).ergotropy
            w_ent = ergotropy(entangled_pure_state(spec), ham).ergotropy
            assert w_sep < w_ent - 1e-6


# ---------------------------------------------------------------------------
# product thermal
# ---------------------------------------------------------------------------

def test_product_thermal_infinite_temperature():
    spec = SystemSpec.qubits(3, 1.0)
    np.testing.assert_allclose(product_thermal_state(spec, 0.0).entries,
                               np.eye(8) / 8, atol=1e-14)


def test_product_thermal_energy_and_entropy_additive():
    spec = SystemSpec.qubits(4, 1.0)
    params = thermal_params(spec, 1.6)
    state = product_thermal_state(spec, 1.6)
    energy = float(state.diagonal @ build_hamiltonian(spec))
    assert abs(energy - 4 * params.mean_energy) <= 1e-10
    assert abs(von_neumann_entropy(state) - 4 * params.entropy) <= 1e-9


# ---------------------------------------------------------------------------
# Dicke mixture
# ---------------------------------------------------------------------------

def test_dicke_index_set_contents():
    shell = dicke_index_set(4, 2)
    assert list(shell.indices) == [3, 5, 6, 9, 10, 12]
    assert len(shell.indices) == math.comb(4, 2)
    with pytest.raises(DomainError):
        dicke_index_set(4, 5)


def test_dicke_mixture_single_qubit_is_thermal():
    spec = SystemSpec.qubits(1, 1.0)
    np.testing.assert_allclose(dicke_thermal_mixture(spec).entries,
                               thermal_state(spec).entries, atol=1e-14)


def test_dicke_mixture_spectrum_n2():
    spec = SystemSpec.qubits(2, 1.0)
    values = state_eigenvalues(dicke_thermal_mixture(spec))
    exact = sorted([(1 - P1) ** 2, 2 * P1 * (1 - P1), P1 ** 2, 0.0], reverse=True)
    np.testing.assert_allclose(values, exact, atol=1e-12)


def test_dicke_mixture_rank_is_n_plus_one():
    for n in range(1, 11):
        spec = SystemSpec.qubits(n, 1.0)
        values = state_eigenvalues(dicke_thermal_mixture(spec))
        assert int((values > 1e-12).sum()) == n + 1


def test_dicke_mixture_matches_thermal_diagonal():
    for n in (2, 4, 7):
        spec = SystemSpec.qubits(n, 1.0)
        state = dicke_thermal_mixture(spec)
        np.testing.assert_allclose(state.diagonal,
                                   product_thermal_state(spec).diagonal, atol=1e-12)
        assert_locally_thermal(state, spec)


def test_dicke_mixture_rejects_qudits():
    spec = SystemSpec(n=2, d=3, local_energies=(0.0, 1.0, 2.0), beta=1.0)
    with pytest.raises(UnsupportedError):
        dicke_thermal_mixture(spec)


# ---------------------------------------------------------------------------
# shell selection and the fixed-entropy diagonal family
# ---------------------------------------------------------------------------

def test_shell_selection_examples():
    assert smallest_shell_for_entropy(8, 0.0) == 0
    assert smallest_shell_for_entropy(8, 2.0) == 1  # ln C(8,1) = 2.079 >= 2
    assert smallest_shell_for_entropy(8, 2.1) == 2  # ln 8 < 2.1 <= ln 28
    with pytest.raises(InfeasibilityError):
        smallest_shell_for_entropy(4, 2.0)
    with pytest.raises(DomainError):
        smallest_shell_for_entropy(8, -0.1)


def test_diagonal_family_at_minimum_entropy_recovers_mixture():
    spec = SystemSpec.qubits(6, 1.0)
    state, params = diagonal_state_at_entropy(spec, thermal_entropy(spec))
    assert params.shell_weight == 0.0
    assert abs(params.ground_weight - (1 - P1)) <= 1e-12
    assert abs(params.top_weight - P1) <= 1e-12
    np.testing.assert_allclose(state.entries,
                               separable_optimal_state(spec).entries, atol=1e-12)


def test_diagonal_family_self_consistency():
    spec = SystemSpec.qubits(8, 1.0)
    state, params = diagonal_state_at_entropy(spec, 2.0)
    # independent recomputation from the dense matrix
    assert abs(von_neumann_entropy(state) - 2.0) <= 1e-8
    assert_locally_thermal(state, spec)
    total = params.ground_weight + params.top_weight + params.shell_weight
    assert abs(total - 1.0) <= 1e-12
    marginal_excited = params.top_weight + params.shell_weight * params.shell_excitations / 8
    assert abs(marginal_excited - P1) <= 1e-12


def test_diagonal_family_rank_bound():
    for n, total in ((6, 1.4), (8, 2.4), (10, 3.0)):
        spec = SystemSpec.qubits(n, 1.0)
        state, params = diagonal_state_at_entropy(spec, total)
        shell_size = math.comb(n, params.shell_excitations)
        rank = int((state.diagonal > 1e-14).sum())
        assert rank <= 2 + shell_size


def test_diagonal_family_work_floor():
    spec = SystemSpec.qubits(8, 1.0)
    state, params = diagonal_state_at_entropy(spec, 2.0)
    work = ergotropy(state, build_hamiltonian(spec)).ergotropy
    floor = 8 * P1 - (params.shell_excitations + 1) * 1.0
    assert work > floor


def test_diagonal_family_infeasible_entropy():
    spec = SystemSpec.qubits(2, 1.0)
    with pytest.raises(InfeasibilityError):
        diagonal_state_at_entropy(spec, 2.0)


def test_diagonal_family_below_minimum_entropy():
    spec = SystemSpec.qubits(6, 1.0)
    with pytest.raises(DomainError):
        diagonal_state_at_entropy(spec, 0.3)


def test_diagonal_family_rejects_qudits():
    spec = SystemSpec(n=4, d=3, local_energies=(0.0, 1.0, 2.0), beta=1.0)
    with pytest.raises(UnsupportedError):
        diagonal_state_at_entropy(spec, 1.0)


# ---------------------------------------------------------------------------
# the separable mixture family
# ---------------------------------------------------------------------------

def test_mixture_family_work_and_entropy(rng):
    for k in range(40):
        n = int(rng.integers(2, 7))
        beta = float(rng.uniform(0.4, 2.0))
        spec = SystemSpec.qubits(n, beta)
        ham = build_hamiltonian(spec)
        t = 1.0 if k % 13 == 0 else float(rng.uniform())
        state = DensityMatrix(
            t * separable_optimal_state(spec).entries
            + (1 - t) * product_thermal_state(spec).entries
        )
        assert_locally_thermal(state, spec)
        work = ergotropy(state, ham).ergotropy
        limit = separable_work_limit(spec)
        assert work <= limit + 1e-9
        entropy = von_neumann_entropy(state)
        assert entropy >= thermal_entropy(spec) - 1e-12
        if t == 1.0:
            assert abs(work - limit) <= 1e-10
        else:
            assert work < limit
            assert entropy > thermal_entropy(spec) + 1e-12
