import numpy as np
import pytest

from kchaug import _kernels
from kchaug.augment import commutative_system
from kchaug.braid import BraidWord, ideal_generators


def lowered_figure_eight(mu0=1.7 - 0.3j):
    return commutative_system(ideal_generators(BraidWord(3, (1, -2, 1, -2)))).lower(mu0)


def random_point(system, rng):
    size = system.expo.shape[1]
    return rng.normal(size=size) + 1j * rng.normal(size=size)


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba unavailable")
def test_system_backends_match():
    system = lowered_figure_eight()
    rng = np.random.default_rng(0)
    for _ in range(10):
        z = random_point(system, rng)
        F1, J1 = system(z, "numba")
        F2, J2 = system(z, "numpy")
        assert np.allclose(F1, F2, rtol=1e-12, atol=1e-12)
        assert np.allclose(J1, J2, rtol=1e-12, atol=1e-12)


def test_jacobian_matches_finite_differences():
    system = lowered_figure_eight()
    z = random_point(system, np.random.default_rng(1))
    F, J = system(z, "numpy")
    assert F.shape == (system.n_eq,)
    h = 1e-7
    for col in range(z.size):
        dz = np.zeros_like(z)
        dz[col] = h
        Fp, _ = system(z + dz, "numpy")
        Fm, _ = system(z - dz, "numpy")
        assert np.allclose((Fp - Fm) / (2 * h), J[:, col], atol=1e-5 * max(1.0, np.max(np.abs(J))))


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_charpoly_against_eigenvalues(backend):
    if backend == "numba" and not _kernels.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    rng = np.random.default_rng(2)
    for n in range(1, 7):
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        c = _kernels.charpoly(A, backend)
        assert c[n] == 1
        for ev in np.linalg.eigvals(A):
            assert abs(np.polynomial.polynomial.polyval(ev, c)) <= 1e-9 * max(1.0, np.max(np.abs(c)))


def test_backend_flag_reported():
    assert _kernels.backend_name() in ("numba", "numpy")
