"""Seeded random generators for property checks and verification suites."""

import math

import numpy as np

from cohtele.channels import KrausMap
from cohtele.states import MemsParams, PureQubit

DEFAULT_SEED = 20240917


def rng_from(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(DEFAULT_SEED if seed is None else seed)


def ginibre(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_density(rng, d: int = 2, rank: int | None = None, real: bool = False) -> np.ndarray:
    g = ginibre(rng, d, rank or d)
    if real:
        g = g.real.astype(complex)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_qubit(rng) -> PureQubit:
    return PureQubit(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi)))


def random_unitary(rng, d: int) -> np.ndarray:
    q, r = np.linalg.qr(ginibre(rng, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def haar_su2(rng):
    """(a, b) with [[a, b], [-b*, a*]] Haar distributed on SU(2).

    |a|^2 is uniform on [0, 1] and both phases are uniform, which is the
    Hopf parametrization of the uniform measure on the 3-sphere.
    """
    u = rng.uniform()
    psi, chi = rng.uniform(0, 2 * math.pi, size=2)
    a = math.sqrt(u) * complex(math.cos(psi), math.sin(psi))
    b = math.sqrt(1 - u) * complex(math.cos(chi), math.sin(chi))
    return a, b


def haar_su2_batch(rng, size: int):
    """Vectorized ``haar_su2``: arrays ``a`` and ``b`` of length ``size``."""
    u = rng.uniform(size=size)
    psi = rng.uniform(0, 2 * math.pi, size=size)
    chi = rng.uniform(0, 2 * math.pi, size=size)
    return np.sqrt(u) * np.exp(1j * psi), np.sqrt(1 - u) * np.exp(1j * chi)


def random_projector(rng, d: int = 4, rank: int | None = None) -> np.ndarray:
    rank = int(rng.integers(1, d)) if rank is None else rank
    q = random_unitary(rng, d)[:, :rank]
    return q @ q.conj().T


def random_povm_pair(rng, d: int = 4):
    """Two-outcome POVM (E, I - E) with E having eigenvalues in [0, 1]."""
    u = random_unitary(rng, d)
    w = rng.uniform(0, 1, size=d)
    e = (u * w) @ u.conj().T
    return e, np.eye(d) - e


def random_mems_params(rng, p4_zero: bool = False) -> MemsParams:
    k = 3 if p4_zero else 4
    w = np.sort(rng.dirichlet(np.ones(k)))[::-1]
    w = list(w) + [0.0] * (4 - k)
    # fold the rounding residue into the largest weight so the sum is exact to 1 ulp
    w[0] = 1.0 - sum(w[1:])
    return MemsParams(*map(float, w))


def random_complex(rng, max_abs: float = 10.0) -> complex:
    r = rng.uniform(0, max_abs)
    t = rng.uniform(0, 2 * math.pi)
    return complex(r * math.cos(t), r * math.sin(t))


def random_kraus_map(rng, d_in: int = 2, d_out: int = 2, n_ops: int = 2) -> KrausMap:
    """Trace-preserving map from an isometry d_in -> n_ops * d_out."""
    g = ginibre(rng, n_ops * d_out, d_in)
    v, _ = np.linalg.qr(g)
    ops = tuple(v[k * d_out:(k + 1) * d_out, :] for k in range(n_ops))
    return KrausMap(ops, trace_preserving=True)
