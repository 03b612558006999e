import numpy as np
import pytest

from thermoex.tensor4 import I2, KTensor, kt_to_block, is_positive_definite


@pytest.fixture
def rng():
    return np.random.default_rng(0x5EED)


def rand_herm(rng, scale=1.0):
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    return scale * (A + A.conj().T) / 2.0


def rand_sym_c(rng, scale=1.0):
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    return scale * (A + A.T) / 2.0


def rand_spd(rng, floor=0.5):
    A = rng.standard_normal((2, 2))
    return A @ A.T + floor * I2


def rand_kt(rng, scale=1.0):
    """Random symmetric operator, not necessarily positive definite."""
    return KTensor(rand_herm(rng, scale), rand_sym_c(rng, scale))


def rand_pd_kt(rng, scale=0.5):
    """Random positive definite symmetric operator."""
    for _ in range(200):
        k = KTensor(rand_herm(rng, scale) + 2.0 * I2, rand_sym_c(rng, scale))
        if is_positive_definite(k):
            return k
    raise RuntimeError("failed to draw a PD operator")


def rand_pd_block(rng, scale=0.5):
    return kt_to_block(rand_pd_kt(rng, scale))


def rel_err(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return np.abs(a - b).max() / (1.0 + max(np.abs(a).max(), np.abs(b).max()))
