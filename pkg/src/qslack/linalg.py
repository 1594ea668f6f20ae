"""Dense complex linear algebra for small (dim <= 64) matrices.

Everything operates on plain ``numpy`` arrays in row-major layout.  Matrices
representing observables are Hermitian; states are Hermitian, PSD and unit
trace.  Validation helpers enforce those invariants at module boundaries.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

# Tolerances used by the validators below.
HERMITIAN_ATOL = 1e-12
PSD_EIG_ATOL = 1e-10
TRACE_ATOL = 1e-10


def as_complex(m: np.ndarray) -> np.ndarray:
    return np.asarray(m, dtype=complex)


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    m = as_complex(m)
    return m.shape[0] == m.shape[1] and bool(np.allclose(m, m.conj().T, atol=atol, rtol=0.0))


def check_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    m = as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.allclose(m, m.conj().T, atol=atol, rtol=0.0):
        raise ValueError("matrix is not Hermitian within tolerance")
    return m


def check_density(rho: np.ndarray, eig_atol: float = PSD_EIG_ATOL, trace_atol: float = TRACE_ATOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, eigenvalues >= -eig_atol, unit trace."""
    rho = check_hermitian(rho, atol=1e-10)
    w = np.linalg.eigvalsh(rho)
    if w.min() < -eig_atol:
        raise ValueError(f"matrix has negative eigenvalue {w.min():.3e}")
    if abs(np.trace(rho).real - 1.0) > trace_atol:
        raise ValueError(f"trace {np.trace(rho).real!r} is not 1 within tolerance")
    return rho


def hermitianize(m: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (m + m^dag) / 2."""
    m = as_complex(m)
    return (m + m.conj().T) / 2


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with complex dtype."""
    return np.kron(as_complex(a), as_complex(b))


def kron_all(*factors: np.ndarray) -> np.ndarray:
    out = as_complex(factors[0])
    for f in factors[1:]:
        out = np.kron(out, as_complex(f))
    return out


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: Sequence[bool]) -> np.ndarray:
    """Trace out the factors whose ``keep`` mask entry is False.

    ``dims`` lists the tensor-factor dimensions (their product must equal the
    matrix dimension); ``keep`` is a boolean mask of the same length.  Kept
    factors retain their original order.  Tracing everything returns a 1x1
    matrix holding the full trace.
    """
    m = as_complex(m)
    dims = list(dims)
    keep = [bool(k) for k in keep]
    if len(keep) != len(dims):
        raise ValueError("keep mask length must match dims")
    d = int(np.prod(dims))
    if m.shape != (d, d):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    n = len(dims)
    t = m.reshape(tuple(dims) + tuple(dims))
    # Row axis i and column axis n+i of factor i are contracted when traced.
    row_idx = list(range(n))
    col_idx = list(range(n, 2 * n))
    out_rows = [row_idx[i] for i in range(n) if keep[i]]
    out_cols = [col_idx[i] for i in range(n) if keep[i]]
    for i in range(n):
        if not keep[i]:
            col_idx[i] = row_idx[i]
    t = np.einsum(t, row_idx + col_idx, out_rows + out_cols)
    d_keep = int(np.prod([dims[i] for i in range(n) if keep[i]])) if any(keep) else 1
    return t.reshape(d_keep, d_keep)


def partial_transpose_b(m: np.ndarray, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose the second tensor factor of a (dim_a * dim_b)-dimensional matrix."""
    m = as_complex(m)
    d = dim_a * dim_b
    if m.shape != (d, d):
        raise ValueError(f"matrix shape {m.shape} does not match dims ({dim_a}, {dim_b})")
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    return np.transpose(t, (0, 3, 2, 1)).reshape(d, d)


def eig_hermitian(m: np.ndarray, atol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns eigenvalues in ascending order and the matrix whose columns are
    the corresponding orthonormal eigenvectors.  Raises on non-Hermitian
    input.
    """
    m = check_hermitian(m, atol=atol)
    w, v = np.linalg.eigh(m)
    return w, v


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values; for Hermitian input, the sum of |eigenvalues|."""
    m = as_complex(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("trace norm expects a square matrix")
    if is_hermitian(m, atol=1e-10):
        return float(np.sum(np.abs(np.linalg.eigvalsh(m))))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product Tr[a^dag b]."""
    a = as_complex(a)
    b = as_complex(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def hs_norm_sq(a: np.ndarray) -> float:
    """Squared Hilbert-Schmidt norm Tr[a^dag a] (real and non-negative)."""
    a = as_complex(a)
    return float(np.vdot(a, a).real)


def mat_sqrt_psd(m: np.ndarray, neg_atol: float = 1e-8) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix.

    Eigenvalues in [-neg_atol, 0) are clamped to zero; anything below
    -neg_atol raises.
    """
    w, v = eig_hermitian(m)
    if w.min() < -neg_atol:
        raise ValueError(f"matrix is not PSD: eigenvalue {w.min():.3e}")
    w = np.maximum(w, 0.0)
    return hermitianize((v * np.sqrt(w)) @ v.conj().T)


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return hermitianize(g) * scale


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random density matrix (Wishart-style)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return hermitianize(rho / np.trace(rho).real)
