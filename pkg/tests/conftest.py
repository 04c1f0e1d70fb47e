import numpy as np
import pytest


def dense_letter_operator(gate: np.ndarray, position: int, n: int) -> np.ndarray:
    """Explicit I x ... x gate x ... x I, built by Kronecker products."""
    out = np.eye(1, dtype=complex)
    for p in range(1, n + 1):
        out = np.kron(out, gate if p == position else np.eye(4))
    return out


def random_unitary(rng: np.random.Generator, d: int = 4) -> np.ndarray:
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_amplitudes(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=4**n) + 1j * rng.normal(size=4**n)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20010531)
