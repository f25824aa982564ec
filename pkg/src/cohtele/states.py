"""
States used by the coherence-teleportation protocols, plus the l1-norm
coherence and two-qubit entanglement diagnostics.

Density matrices are complex ``numpy`` arrays; ``check_density`` is the
gatekeeper for the Hermitian / unit-trace / positive invariants.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from cohtele.cmatrix import (
    EIGEN_CLAMP,
    HERMITIAN_TOL,
    SY,
    as_matrix,
    hermiticity_defect,
    herm_eig,
    is_unitary,
    ket,
    projector,
    psd_sqrt,
)
from cohtele.errors import DimensionError, ValidationError

INCOHERENT_TOL = 1e-10
MEMS_SUM_TOL = 1e-12

_SQRT2 = math.sqrt(2.0)

BELL_LABELS = ("phi+", "phi-", "psi+", "psi-")
_LABEL_ALIASES = {
    "Φ+": "phi+", "Φ-": "phi-", "Φ−": "phi-",
    "Ψ+": "psi+", "Ψ-": "psi-", "Ψ−": "psi-",
}


def check_density(rho, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``rho`` as a complex array or raise ValidationError."""
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got {rho.shape}")
    defect = hermiticity_defect(rho)
    if defect > tol:
        raise ValidationError(f"density matrix is not Hermitian (defect {defect:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1) > tol:
        raise ValidationError(f"density matrix has trace {tr:.12g}, expected 1")
    lo = herm_eig(rho).eigenvalues[-1]
    if lo < -tol:
        raise ValidationError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def is_density(rho, tol: float = HERMITIAN_TOL) -> bool:
    try:
        check_density(rho, tol)
    except (ValidationError, DimensionError):
        return False
    return True


@dataclass(frozen=True)
class PureQubit:
    """cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>.

    ``theta`` must lie in [0, pi]. ``phi`` is a phase and is accepted for any
    real value; the canonical range is [0, 2 pi).
    """

    theta: float
    phi: float

    def __post_init__(self):
        if not (-1e-12 <= self.theta <= math.pi + 1e-12):
            raise ValidationError(f"theta={self.theta!r} outside [0, pi]")
        if not math.isfinite(self.phi):
            raise ValidationError(f"phi={self.phi!r} is not finite")

    @property
    def alpha(self) -> complex:
        return complex(math.cos(self.theta / 2))

    @property
    def beta(self) -> complex:
        return math.sin(self.theta / 2) * complex(math.cos(self.phi), math.sin(self.phi))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def density(self) -> np.ndarray:
        return pure_qubit_density(self)

    # The two circles on which one cbit suffices: cos(phi) = +-1 and sin(phi) = +-1.
    def on_real_circle(self, tol: float = 1e-12) -> bool:
        return abs(abs(math.cos(self.phi)) - 1) <= tol

    def on_imaginary_circle(self, tol: float = 1e-12) -> bool:
        return abs(abs(math.sin(self.phi)) - 1) <= tol


def pure_qubit_density(q: PureQubit) -> np.ndarray:
    return projector(q.vector)


def bell_vector(label: str) -> np.ndarray:
    key = _LABEL_ALIASES.get(label, str(label).lower())
    if key == "phi+":
        return (ket(0, 0) + ket(1, 1)) / _SQRT2
    if key == "phi-":
        return (ket(0, 0) - ket(1, 1)) / _SQRT2
    if key == "psi+":
        return (ket(0, 1) + ket(1, 0)) / _SQRT2
    if key == "psi-":
        return (ket(0, 1) - ket(1, 0)) / _SQRT2
    raise ValueError(f"unknown Bell label {label!r}; expected one of {BELL_LABELS}")


def bell_state(label: str) -> np.ndarray:
    return projector(bell_vector(label))


def n_basis(n: complex):
    """Orthonormal two-qubit basis built around (|00> + n|11>)/sqrt(1+|n|^2).

    Returns the vectors ``(phi_n_plus, phi_n_minus, psi_n_plus, psi_n_minus)``::

        phi_n+ ~ |00> + n |11>        phi_n- ~ n*|00> - |11>
        psi_n+ ~ |01> + n*|10>        psi_n- ~ n |01> - |10>

    each scaled by 1/sqrt(1+|n|^2). At |n| = 1 and n = 1 these are the Bell
    vectors; at n = 0 they are product vectors.
    """
    n = complex(n)
    c = 1 / math.sqrt(1 + abs(n) ** 2)
    nc = n.conjugate()
    return (
        c * (ket(0, 0) + n * ket(1, 1)),
        c * (nc * ket(0, 0) - ket(1, 1)),
        c * (ket(0, 1) + nc * ket(1, 0)),
        c * (n * ket(0, 1) - ket(1, 0)),
    )


def nonmax_state(n: complex) -> np.ndarray:
    """The shared pure resource (|00> + n|11>)/sqrt(1+|n|^2) as a density matrix."""
    return projector(n_basis(n)[0])


@dataclass(frozen=True)
class MemsParams:
    """Weights of the maximally entangled mixed state family.

    The weights must be probabilities summing to one. They are expected in
    non-increasing order; with ``strict=False`` an ordering violation only
    emits a warning, which is what parameter sweeps use.
    """

    p1: float
    p2: float
    p3: float
    p4: float
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        ps = self.as_tuple()
        if any(not (-MEMS_SUM_TOL <= p <= 1 + MEMS_SUM_TOL) for p in ps):
            raise ValidationError(f"MEMS weights {ps} must lie in [0, 1]")
        if abs(sum(ps) - 1) > MEMS_SUM_TOL:
            raise ValidationError(f"MEMS weights {ps} sum to {sum(ps)!r}, expected 1")
        if not all(a >= b for a, b in zip(ps, ps[1:])):
            msg = f"MEMS weights {ps} are not in non-increasing order"
            if self.strict:
                raise ValidationError(msg)
            warnings.warn(msg, stacklevel=3)

    def as_tuple(self):
        return (self.p1, self.p2, self.p3, self.p4)


def mems_state(p: MemsParams) -> np.ndarray:
    """p1|psi-><psi-| + p2|00><00| + p3|psi+><psi+| + p4|11><11|."""
    return (
        p.p1 * bell_state("psi-")
        + p.p2 * projector(ket(0, 0))
        + p.p3 * bell_state("psi+")
        + p.p4 * projector(ket(1, 1))
    )


def werner_state(p: float) -> np.ndarray:
    """p|psi-><psi-| + (1-p) I/4 for 0 <= p <= 1."""
    if not (0 <= p <= 1):
        raise ValidationError(f"Werner weight p={p!r} outside [0, 1]")
    return p * bell_state("psi-") + (1 - p) / 4 * np.eye(4, dtype=complex)


def l1_coherence(rho, basis_unitary=None) -> float:
    """Sum of the moduli of the off-diagonal entries of ``rho``.

    With ``basis_unitary`` U the entries are taken in the basis formed by
    the columns of U, i.e. of ``U^dagger rho U``.
    """
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"expected a square matrix, got {rho.shape}")
    if basis_unitary is not None:
        u = as_matrix(basis_unitary)
        if u.shape != rho.shape or not is_unitary(u):
            raise ValidationError("basis_unitary must be a unitary of the same size as rho")
        rho = u.conj().T @ rho @ u
    a = np.abs(rho)
    return float(a.sum() - np.trace(a))


def is_incoherent(rho, basis_unitary=None) -> bool:
    return l1_coherence(rho, basis_unitary) < INCOHERENT_TOL


def concurrence(rho) -> float:
    """Two-qubit concurrence from the spin-flip construction.

    Uses the singular values of sqrt(rho) sqrt(rho~), with
    rho~ = (Y x Y) rho* (Y x Y), which are the square roots of the
    eigenvalues of rho rho~ but come from a Hermitian problem.
    """
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise DimensionError(f"concurrence needs a 4x4 two-qubit state, got {rho.shape}")
    yy = np.kron(SY, SY)
    flipped = yy @ rho.conj() @ yy
    s = psd_sqrt(rho)
    lam = herm_eig(s @ flipped @ s).eigenvalues
    lam = np.sqrt(np.clip(lam, 0.0, None))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def partial_transpose(rho, dims=(2, 2), sys: int = 1) -> np.ndarray:
    rho = as_matrix(rho)
    dims = list(dims)
    n = len(dims)
    t = rho.reshape(dims + dims)
    t = np.swapaxes(t, sys, sys + n)
    return t.reshape(rho.shape)


def is_ppt(rho, dims=(2, 2), sys: int = 1, tol: float = EIGEN_CLAMP) -> bool:
    """Positive partial transpose test (separability for two qubits)."""
    return bool(herm_eig(partial_transpose(rho, dims, sys)).eigenvalues[-1] >= -tol)
