import numpy as np
import pytest

from dqsim import algorithms as alg
from dqsim import experiments as ex
from dqsim.boolfn import point_function
from dqsim.circuit import Circuit, g, simulate
from dqsim.core import DensityState, Gate, StateVector, apply_gate, probability_vector
from dqsim.errors import DomainError, ResourceLimitError
from dqsim.noise import (
    Channel,
    NoiseModel,
    Parameterization as P,
    depolarize,
    evolve_density,
    noisy_transform,
    trajectory_sample,
)

PAULIS = [np.eye(2), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]


def random_rho(rng, n):
    a = rng.normal(size=(1 << n, 1 << n)) + 1j * rng.normal(size=(1 << n, 1 << n))
    m = a @ a.conj().T
    return DensityState(n, m / np.trace(m))


def channel_by_kron(rho, q, model):
    """Reference channel built from full-register Pauli operators."""
    n = rho.n_qubits
    pq = model.pauli_probability
    out = np.zeros_like(rho.matrix)
    for w, s in zip([1 - pq, pq / 3, pq / 3, pq / 3], PAULIS):
        op = np.eye(1)
        for wire in range(n):
            op = np.kron(op, s if wire == q else np.eye(2))
        out += w * op @ rho.matrix @ op.conj().T
    return out


def test_zero_noise_identity(backend):
    rho = random_rho(np.random.default_rng(1), 3)
    for par in P:
        assert np.allclose(depolarize(rho, 1, NoiseModel(0.0, par)).matrix, rho.matrix, atol=1e-15)


def test_full_uniform_mix_gives_maximally_mixed():
    rho = StateVector.basis("1").to_density()
    out = depolarize(rho, 0, NoiseModel(1.0, P.UNIFORM_MIX))
    assert np.allclose(out.matrix, np.eye(2) / 2)


@pytest.mark.parametrize("p", [0.0, 0.05, 0.3, 0.75])
def test_pauli_thirds_equals_scaled_uniform(p):
    rho = random_rho(np.random.default_rng(7), 2)
    a = depolarize(rho, 0, NoiseModel(p, P.PAULI_THIRDS)).matrix
    b = depolarize(rho, 0, NoiseModel(min(1.0, 4 * p / 3), P.UNIFORM_MIX)).matrix
    assert np.allclose(a, b, atol=1e-14)


def test_uniform_mix_matches_definition():
    rng = np.random.default_rng(11)
    rho = random_rho(rng, 1)
    p = 0.37
    out = depolarize(rho, 0, NoiseModel(p, P.UNIFORM_MIX)).matrix
    assert np.allclose(out, (1 - p) * rho.matrix + p * np.eye(2) / 2, atol=1e-14)


@pytest.mark.parametrize("q", range(4))
def test_channel_matches_kron_reference(backend, q):
    rho = random_rho(np.random.default_rng(q), 4)
    model = NoiseModel(0.21, P.PAULI_THIRDS)
    assert np.allclose(depolarize(rho, q, model).matrix, channel_by_kron(rho, q, model), atol=1e-13)


def test_trace_and_positivity_preserved():
    rng = np.random.default_rng(5)
    rho = random_rho(rng, 3)
    for _ in range(20):
        rho = depolarize(rho, int(rng.integers(3)), NoiseModel(float(rng.random()), P.UNIFORM_MIX))
        assert abs(rho.trace() - 1) < 1e-12
        assert np.linalg.eigvalsh(rho.matrix).min() > -1e-9


def test_invalid_wire():
    with pytest.raises(DomainError, match="invalid wire"):
        depolarize(DensityState.zero(2), 2, NoiseModel(0.1))


def test_probability_range_checked():
    with pytest.raises(DomainError):
        NoiseModel(1.5)


def test_noisy_transform_examples():
    m = NoiseModel(0.1)
    assert noisy_transform(Circuit(1, (g(Gate.H, 0),)), m).ops == (g(Gate.H, 0), Channel(0))
    prog = noisy_transform(Circuit(3, (g(Gate.MCZ, 0, 1, 2),)), m)
    assert prog.ops == (g(Gate.MCZ, 0, 1, 2), Channel(0), Channel(1), Channel(2))


def test_noisy_transform_skips_barrier_and_measure():
    c = Circuit(2, (g(Gate.H, 0), g(Gate.BARRIER, 0, 1), g(Gate.MEASURE, 0, 1)))
    prog = noisy_transform(c, NoiseModel(0.1))
    assert prog.channel_count() == 1
    assert prog.ops[-1] == g(Gate.MEASURE, 0, 1)


def test_noiseless_program_matches_state_vector(backend):
    c = alg.build_long(point_function("101"))
    rho = evolve_density(noisy_transform(c, NoiseModel(0.0)))
    psi = simulate(c).amplitudes
    assert np.allclose(rho.matrix, np.outer(psi, psi.conj()), atol=1e-12)


def test_density_limit():
    c = Circuit(9, tuple(g(Gate.H, q) for q in range(9)))
    with pytest.raises(ResourceLimitError, match="density-matrix limit"):
        evolve_density(noisy_transform(c, NoiseModel(0.1)))


def test_noisy_evolution_matches_kron_reference():
    c = alg.build_grover(point_function("10"))
    model = NoiseModel(0.08, P.UNIFORM_MIX)
    got = evolve_density(noisy_transform(c, model)).matrix
    rho = DensityState.zero(2)
    for gi in c.gates:
        if not gi.kind.is_unitary:
            continue
        rho = apply_gate(rho, gi.kind, gi.wires, gi.phi)
        for w in gi.wires:
            rho = DensityState(2, channel_by_kron(rho, w, model))
    assert np.allclose(got, rho.matrix, atol=1e-13)


def test_trajectory_noiseless_matches_distribution():
    c = alg.build_grover(point_function("01"))
    h = trajectory_sample(noisy_transform(c, NoiseModel(0.0)), 5000, seed=1)
    assert h.counts == {"01": 5000}


def test_trajectory_reproducible():
    prog = noisy_transform(alg.build_grover(point_function("11")), NoiseModel(0.05))
    assert trajectory_sample(prog, 20000, seed=3) == trajectory_sample(prog, 20000, seed=3)


def test_trajectory_rejects_zero_shots():
    prog = noisy_transform(Circuit(1, (g(Gate.H, 0),)), NoiseModel(0.05))
    with pytest.raises(DomainError, match="empty sample request"):
        trajectory_sample(prog, 0)


def within_sigma(hist, dist, k):
    """k-sigma check per outcome; outcomes expected fewer than 10 times are pooled.

    The normal approximation behind a sigma bound fails for tiny expected counts.
    """
    n = hist.shots
    width = int(np.log2(len(dist)))
    counts = np.array([hist.counts.get(format(i, f"0{width}b"), 0) for i in range(len(dist))])
    rare = n * dist < 10
    bins = [(counts[~rare], dist[~rare])]
    if rare.any():
        bins.append((np.array([counts[rare].sum()]), np.array([dist[rare].sum()])))
    for f, p in bins:
        if np.any(np.abs(f - n * p) > k * np.sqrt(n * p * (1 - p)) + 1e-9):
            return False
    return True


def test_grover_2q_three_sigma_at_p001():
    c = ex.fixture("grover-2q-01").circuit
    model = NoiseModel(0.01)
    dist = probability_vector(evolve_density(noisy_transform(c, model)))
    h = trajectory_sample(noisy_transform(c, model), 100_000, seed=2024)
    f = h.counts["01"]
    assert abs(f - 1e5 * dist[1]) <= 3 * np.sqrt(1e5 * dist[1] * (1 - dist[1]))


@pytest.mark.slow
@pytest.mark.parametrize("name", ["grover-2q-01", "long-3q-101", "dega-4q-1001", "DBVA-3-opt"])
@pytest.mark.parametrize("par", list(P))
def test_trajectory_density_agreement(name, par):
    c = ex.fixture(name).circuit
    model = NoiseModel(0.04, par)
    dist = probability_vector(evolve_density(noisy_transform(c, model)))
    h = trajectory_sample(noisy_transform(c, model), 100_000, seed=17)
    assert within_sigma(h, dist, 4)


@pytest.mark.parametrize("par", list(P))
def test_noise_monotone_on_small_fixtures(par):
    for name in ("grover-2q-01", "long-3q-101", "dega-4q-1001", "DBVA-2-opt"):
        fx = ex.fixture(name)
        ps = [ex.noisy_distribution(fx.circuit, NoiseModel(p, par))[int(fx.target, 2)] for p in ex.NOISE_GRID]
        assert all(b <= a + 1e-12 for a, b in zip(ps, ps[1:])), name


def test_dega_target_modal_at_p007():
    fx = ex.fixture("dega-5q-01001")
    dist = ex.noisy_distribution(fx.circuit, NoiseModel(0.07))
    assert int(np.argmax(dist)) == int("01001", 2)
