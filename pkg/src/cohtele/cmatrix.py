"""
Dense complex linear algebra for small multi-qubit operators.

Matrices are plain ``numpy.ndarray`` objects of complex dtype. Where a
matrix is a multipartite operator the subsystem dimensions are passed
explicitly (``dims``), ordered system 1 (input), system 2 (Alice's half of
the resource), system 3 (Bob's half), each in the binary basis
|0>, |1>.

All functions are pure and never modify their arguments.
"""

from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

from cohtele.errors import DimensionError, ValidationError

HERMITIAN_TOL = 1e-10
EIGEN_CLAMP = 1e-10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, SX, SY, SZ)


class HermEigResult(NamedTuple):
    """Spectral decomposition ``m = V diag(w) V^dagger``.

    ``eigenvalues`` are real and sorted in descending order; column ``k`` of
    ``eigenvectors`` belongs to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def ket(*bits: int) -> np.ndarray:
    """Computational basis vector, e.g. ``ket(0, 1)`` is |01>."""
    v = np.ones(1, dtype=complex)
    for b in bits:
        e = np.zeros(2, dtype=complex)
        e[b] = 1
        v = np.kron(v, e)
    return v


def projector(v) -> np.ndarray:
    """|v><v| for a (not necessarily normalized) vector ``v``."""
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())


def dagger(m) -> np.ndarray:
    return np.asarray(m).conj().T


def tensor(*ops) -> np.ndarray:
    """Kronecker product of the operands, left to right.

    The subsystem dimensions of the result are the concatenation of the
    operands' dimensions.
    """
    if not ops:
        raise DimensionError("tensor needs at least one operand")
    return reduce(_kron, (np.asarray(o, dtype=complex) for o in ops))


def _kron(a, b):
    if a.ndim == 1 and b.ndim == 1:
        return (a[:, None] * b[None, :]).ravel()
    if a.ndim != 2 or b.ndim != 2:
        return np.kron(a, b)
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def partial_trace(m, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Parameters
    ----------
    m : array_like
        Square operator on the product space ``dims[0] x dims[1] x ...``.
    dims : sequence of int
        Subsystem dimensions; their product must equal the size of ``m``.
    keep : sequence of int
        Indices of the subsystems that survive, strictly increasing. An
        empty ``keep`` returns the full trace as a 1x1 matrix.
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    keep = [int(k) for k in keep]
    total = 1
    for d in dims:
        total *= d
    if m.shape != (total, total) or any(d < 1 for d in dims):
        raise DimensionError(f"dims {dims} do not match a matrix of shape {m.shape}")
    if any(k < 0 or k >= len(dims) for k in keep) or any(a >= b for a, b in zip(keep, keep[1:])):
        raise DimensionError(f"keep indices {keep} must be strictly increasing and within range")

    n = len(dims)
    if n > 26:
        raise DimensionError("at most 26 subsystems are supported")
    # traced systems share a row and column label, kept ones get a fresh column label
    rows = [chr(ord("a") + k) for k in range(n)]
    cols = [chr(ord("A") + k) if k in keep else rows[k] for k in range(n)]
    out = "".join(rows[k] for k in keep) + "".join(cols[k] for k in keep)
    t = np.einsum("".join(rows) + "".join(cols) + "->" + out, m.reshape(dims + dims))
    d_keep = 1
    for k in keep:
        d_keep *= dims[k]
    return t.reshape(d_keep, d_keep)


def hermiticity_defect(m) -> float:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix of shape {m.shape} is not square")
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_defect(m) <= tol


def herm_eig(m) -> HermEigResult:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Raises ValidationError when ``max|m - m^dagger| > 1e-10``.
    """
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_TOL:
        raise ValidationError(f"matrix is not Hermitian (max |m - m^dagger| = {defect:.3e})")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return HermEigResult(w[::-1].copy(), v[:, ::-1].copy())


def psd_sqrt(m) -> np.ndarray:
    """Positive semidefinite square root.

    Eigenvalues in ``[-1e-10, 0)`` are treated as zero; anything more
    negative raises ValidationError.
    """
    w, v = herm_eig(m)
    if w.size and w[-1] < -EIGEN_CLAMP:
        raise ValidationError(f"matrix is not positive semidefinite (min eigenvalue {w[-1]:.3e})")
    root = np.sqrt(np.clip(w, 0.0, None))
    s = (v * root) @ v.conj().T
    return (s + s.conj().T) / 2


def matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    """The d x d matrix unit |i><j|."""
    if not (0 <= i < d and 0 <= j < d):
        raise DimensionError(f"matrix unit ({i}, {j}) out of range for dimension {d}")
    e = np.zeros((d, d), dtype=complex)
    e[i, j] = 1
    return e


def is_unitary(u, tol: float = HERMITIAN_TOL) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))) <= tol
