import numpy as np
import pytest

from sobspec import kernels
from sobspec.matrices import HermitianTruncation
from sobspec.scalars import RationalComplex, rational


def rc(re, im=0):
    return RationalComplex(re, im)


def random_hpd_array(rng, n, shift=0.5):
    """Float Hermitian positive definite with moderate conditioning."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = g @ g.conj().T + shift * np.eye(n)
    return 0.5 * (a + a.conj().T)


def random_exact_hpd(rng, n, span=3):
    """Exact HPD truncation B B* + I with small Gaussian-integer B."""
    rows = [
        [rc(rng.randint(-span, span), rng.randint(-span, span)) for _ in range(n)]
        for _ in range(n)
    ]
    grid = [[rc(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            acc = grid[i][j]
            for k in range(n):
                acc = acc + rows[i][k] * rows[j][k].conjugate()
            grid[i][j] = acc
    return HermitianTruncation.exact(grid)


def exact_diag(values):
    n = len(values)
    zero = rc(0)
    rows = [[zero] * n for _ in range(n)]
    for i, v in enumerate(values):
        rows[i][i] = v if isinstance(v, RationalComplex) else rc(v)
    return HermitianTruncation.exact(rows, check=False)


def pascal_exact(size):
    import math

    return HermitianTruncation.from_entry_fn(
        size, lambda i, j: rc(math.comb(i + j, i))
    )


@pytest.fixture(params=kernels.available_backends())
def kernel_backend(request):
    previous = kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)


@pytest.fixture
def compiled_available():
    return "compiled" in kernels.available_backends()
