"""
Completely positive maps in operator-sum form and their CJKS (Choi)
matrices.

The Choi matrix of a map ``f`` on d_in-dimensional inputs is the
unnormalized block matrix ``sum_ij e_ij (x) f(e_ij)``, with the input index
on the left tensor factor. A trace-preserving map therefore has a Choi
matrix of trace d_in, and a unit-trace two-qubit state read as a Choi
matrix describes a map that halves traces.
"""

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from cohtele.cmatrix import EIGEN_CLAMP, HERMITIAN_TOL, as_matrix, herm_eig, matrix_unit
from cohtele.errors import DimensionError, NotCompletelyPositiveError, ValidationError

KRAUS_CUTOFF = 1e-12


@dataclass(frozen=True, eq=False)
class KrausMap:
    """rho -> sum_k K_k rho K_k^dagger.

    All operators share the shape (d_out, d_in). With
    ``trace_preserving=True`` the completeness relation
    sum_k K_k^dagger K_k = I is checked at construction.
    """

    ops: tuple
    trace_preserving: bool = False

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.ops)
        if not ops:
            raise ValidationError("a Kraus map needs at least one operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise DimensionError(f"Kraus operators have mixed shapes {[k.shape for k in ops]}")
        object.__setattr__(self, "ops", ops)
        if self.trace_preserving and not is_tp(self):
            raise ValidationError("Kraus operators do not satisfy sum K^dagger K = I")

    @property
    def d_in(self) -> int:
        return self.ops[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.ops[0].shape[0]

    def __call__(self, rho):
        return apply(self, rho)

    def __len__(self):
        return len(self.ops)


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    mat: np.ndarray
    d_in: int
    d_out: int

    def __post_init__(self):
        mat = as_matrix(self.mat)
        n = self.d_in * self.d_out
        if mat.shape != (n, n):
            raise DimensionError(
                f"Choi matrix of a {self.d_in}->{self.d_out} map must be {n}x{n}, got {mat.shape}"
            )
        object.__setattr__(self, "mat", mat)


def identity_map(d: int = 2) -> KrausMap:
    return KrausMap((np.eye(d, dtype=complex),), trace_preserving=True)


def unitary_map(u) -> KrausMap:
    return KrausMap((as_matrix(u),), trace_preserving=True)


def apply(m: KrausMap, rho) -> np.ndarray:
    """sum_k K rho K^dagger. The result is not renormalized."""
    rho = as_matrix(rho)
    if rho.shape != (m.d_in, m.d_in):
        raise DimensionError(f"map expects {m.d_in}x{m.d_in} input, got {rho.shape}")
    out = np.zeros((m.d_out, m.d_out), dtype=complex)
    for k in m.ops:
        out += k @ rho @ k.conj().T
    return out


def choi_of_linear(f: Callable, d_in: int, d_out: int) -> ChoiMatrix:
    """Choi matrix of an arbitrary linear map given as a callable."""
    mat = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            mat += np.kron(matrix_unit(d_in, i, j), as_matrix(f(matrix_unit(d_in, i, j))))
    return ChoiMatrix(mat, d_in, d_out)


def choi_of_map(m: KrausMap) -> ChoiMatrix:
    return choi_of_linear(lambda e: apply(m, e), m.d_in, m.d_out)


def _choi_parts(c, d_in, d_out):
    if isinstance(c, ChoiMatrix):
        return c.mat, c.d_in, c.d_out
    c = as_matrix(c)
    if d_in is None and d_out is None:
        d = int(round(np.sqrt(c.shape[0])))
        if d * d != c.shape[0]:
            raise DimensionError(f"cannot infer square channel dimensions from shape {c.shape}")
        d_in = d_out = d
    elif d_in is None:
        d_in = c.shape[0] // d_out
    elif d_out is None:
        d_out = c.shape[0] // d_in
    return ChoiMatrix(c, d_in, d_out).mat, d_in, d_out


def min_choi_eigenvalue(c, d_in=None, d_out=None) -> float:
    mat, _, _ = _choi_parts(c, d_in, d_out)
    return float(herm_eig(mat).eigenvalues[-1])


def map_of_choi(c, d_in: int | None = None, d_out: int | None = None) -> KrausMap:
    """Kraus operators read off the spectral decomposition of a Choi matrix.

    Each eigenpair (w, v) with w > 1e-12 contributes sqrt(w) * K_v, where
    K_v[a, i] = v[i * d_out + a]. Raises NotCompletelyPositiveError when the
    smallest eigenvalue is below -1e-10.
    """
    mat, d_in, d_out = _choi_parts(c, d_in, d_out)
    w, v = herm_eig(mat)
    if w[-1] < -EIGEN_CLAMP:
        raise NotCompletelyPositiveError(w[-1])
    ops = [
        np.sqrt(wk) * v[:, k].reshape(d_in, d_out).T
        for k, wk in enumerate(w)
        if wk > KRAUS_CUTOFF
    ]
    if not ops:
        ops = [np.zeros((d_out, d_in), dtype=complex)]
    return KrausMap(tuple(ops))


def conjugate_map(m: KrausMap) -> KrausMap:
    """Entrywise complex conjugate of every Kraus operator (computational basis)."""
    return KrausMap(tuple(k.conj() for k in m.ops), trace_preserving=m.trace_preserving)


def compose(outer: KrausMap, inner: KrausMap) -> KrausMap:
    """The map rho -> outer(inner(rho)), with Kraus family {A_i B_j}."""
    if inner.d_out != outer.d_in:
        raise DimensionError(
            f"cannot compose: inner map outputs dimension {inner.d_out}, outer expects {outer.d_in}"
        )
    return KrausMap(tuple(a @ b for a in outer.ops for b in inner.ops))


def is_cp(c, d_in: int | None = None, d_out: int | None = None) -> bool:
    return min_choi_eigenvalue(c, d_in, d_out) >= -EIGEN_CLAMP


def is_tp(m: KrausMap, tol: float = HERMITIAN_TOL) -> bool:
    s = sum(k.conj().T @ k for k in m.ops)
    return float(np.max(np.abs(s - np.eye(m.d_in)))) <= tol


def maps_agree(a: KrausMap, b: KrausMap, states: Sequence) -> float:
    """Largest entrywise difference of the two maps over ``states``."""
    return max(float(np.max(np.abs(apply(a, r) - apply(b, r)))) for r in states)
