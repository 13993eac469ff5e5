import numpy as np


def rank_tolerance(s, shape, tol_factor):
    smax = s.max(axis=-1, initial=0.0) if s.size else np.zeros(s.shape[:-1])
    return tol_factor * smax * max(shape[-2:])


def numerical_rank(a, tol_factor=1e-10):
    """Count singular values above ``tol_factor * sigma_max * max(shape)``."""
    a = np.asarray(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > rank_tolerance(s, a.shape, tol_factor)))


def crandn(rng, *shape):
    """Circularly symmetric complex Gaussian entries with unit variance."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def normalize_columns(a):
    if a.shape[1] == 0:
        return a
    return a / np.linalg.norm(a, axis=0, keepdims=True)


def random_unit_columns(rng, rows, cols):
    return normalize_columns(crandn(rng, rows, cols))


def null_basis(a, dim):
    """Orthonormal basis (``cols x dim``) of the generic null space of ``a``.

    ``dim`` is the null-space dimension implied by generic rank; the right
    singular vectors of the smallest ``dim`` singular values are returned.
    """
    ncols = a.shape[1]
    if dim == 0:
        return np.zeros((ncols, 0), dtype=complex)
    _, _, vh = np.linalg.svd(a, full_matrices=True)
    return vh[ncols - dim:].conj().T


def random_null_basis(rng, a, dim):
    """Random unit-norm columns spanning the null space of ``a``."""
    q = null_basis(a, dim)
    if dim == 0:
        return q
    return normalize_columns(q @ crandn(rng, dim, dim))
