"""Compiled and pure-Python kernels must agree bit for bit (up to rounding)."""
import numpy as np
import pytest

from dqsim import _fallback, kernels
from dqsim import experiments as ex
from dqsim.circuit import simulate
from dqsim.noise import NoiseModel, evolve_density, noisy_transform, trajectory_sample

needs_compiled = pytest.mark.skipif("compiled" not in kernels.BACKENDS, reason="extension not built")


def rand_psi(rng, rows, n):
    a = rng.normal(size=(rows, 1 << n)) + 1j * rng.normal(size=(rows, 1 << n))
    return np.ascontiguousarray(a)


def rand_u(rng):
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    return np.ascontiguousarray(q)


@needs_compiled
@pytest.mark.parametrize("seed", range(10))
def test_apply_1q_agrees(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    target = int(rng.integers(n))
    ctrl = 0
    for w in range(n):
        if w != target and rng.random() < 0.4:
            ctrl |= 1 << (n - 1 - w)
    u = rand_u(rng)
    a = rand_psi(rng, 3, n)
    b = a.copy()
    _fallback.apply_1q(a, n, target, u, ctrl)
    kernels.BACKENDS["compiled"].apply_1q(b, n, target, u, ctrl)
    assert np.allclose(a, b, atol=1e-14)


@needs_compiled
def test_apply_phase_agrees():
    rng = np.random.default_rng(0)
    a = rand_psi(rng, 4, 5)
    b = a.copy()
    _fallback.apply_phase(a, 0b10110, np.exp(0.3j))
    kernels.BACKENDS["compiled"].apply_phase(b, 0b10110, np.exp(0.3j))
    assert np.allclose(a, b, atol=1e-15)


@needs_compiled
@pytest.mark.parametrize("target", range(4))
def test_pauli_rows_agree(target):
    rng = np.random.default_rng(target)
    a = rand_psi(rng, 64, 4)
    b = a.copy()
    choice = rng.integers(0, 4, 64).astype(np.int8)
    _fallback.apply_pauli_rows(a, 4, target, choice)
    kernels.BACKENDS["compiled"].apply_pauli_rows(b, 4, target, choice)
    assert np.allclose(a, b, atol=1e-15)


@needs_compiled
@pytest.mark.parametrize("target", range(3))
def test_kraus_agrees(target):
    rng = np.random.default_rng(target)
    m = rand_psi(rng, 8, 3)
    rho = m @ m.conj().T
    other = rho.copy()
    kraus = NoiseModel(0.2).kraus()
    _fallback.apply_kraus_1q(rho, 3, target, kraus)
    kernels.BACKENDS["compiled"].apply_kraus_1q(other, 3, target, kraus)
    assert np.allclose(rho, other, atol=1e-14)


@needs_compiled
def test_end_to_end_backends_agree():
    c = ex.fixture("dega-5q-01001").circuit
    prog = noisy_transform(c, NoiseModel(0.05))
    results = {}
    for name in kernels.BACKENDS:
        with kernels.use_backend(name):
            results[name] = (simulate(c).amplitudes, evolve_density(prog).matrix, trajectory_sample(prog, 3000, 1))
    py, comp = results["python"], results["compiled"]
    assert np.allclose(py[0], comp[0], atol=1e-13)
    assert np.allclose(py[1], comp[1], atol=1e-13)
    assert py[2] == comp[2]


def test_set_backend_validates():
    with pytest.raises(ValueError):
        kernels.set_backend("gpu")


def test_use_backend_restores():
    before = kernels.backend_name()
    with kernels.use_backend("python"):
        assert kernels.backend_name() == "python"
    assert kernels.backend_name() == before
