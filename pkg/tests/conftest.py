import numpy as np
import pytest

from jetcov import hermitian_part


def random_hermitian(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return hermitian_part(a)


def random_psd(rng, dim, rank=None, unit_scale=True):
    """Random PSD matrix, optionally rank-deficient, diagonal of order one."""
    if rank is None:
        rank = dim
    a = (rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank)))
    out = hermitian_part(a @ a.conj().T)
    if unit_scale:
        out = out / max(np.max(np.abs(np.diag(out)).real), 1e-12)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
