"""
One-cbit teleportation of l1 coherence.

Alice holds the input qubit (system 1) and half of a shared two-qubit
resource (system 2); Bob holds the other half (system 3). Alice measures a
two-outcome POVM on systems 1 and 2 and announces the outcome. Bob's
conditional state is obtained two independent ways:

* ``teleport_direct`` builds the three-qubit operator and takes the partial
  trace over systems 1 and 2;
* ``teleport_via_theorem`` reads the resource and the POVM element as Choi
  matrices of maps T and Phi_E and evaluates T(Phi_E^*(rho)), where
  Phi_E^* has the complex-conjugated Kraus operators of Phi_E.

Bob applies no correction unitary; the announced outcome only selects
which conditional state is realized.
"""

import math
from dataclasses import dataclass

import numpy as np

from cohtele.channels import apply, compose, conjugate_map, map_of_choi
from cohtele.cmatrix import I2, SX, SY, SZ, as_matrix, partial_trace, projector, psd_sqrt, tensor
from cohtele.errors import DegenerateOutcomeError, DimensionError, ValidationError
from cohtele.states import (
    MemsParams,
    PureQubit,
    bell_vector,
    check_density,
    l1_coherence,
    mems_state,
    n_basis,
    nonmax_state,
    werner_state,
)

CASES = ("I", "II", "III")
FAMILIES = ("maxent", "nonmax", "mems", "werner")
MIN_PROBABILITY = 1e-12
RATIO_FLOOR = 1e-15
PROJECTOR_TOL = 1e-10

_CASE_ALIASES = {"1": "I", "2": "II", "3": "III", "e": "I", "pi": "II", "π": "II", "f": "III"}


def normalize_case(case_id) -> str:
    key = str(case_id).strip()
    key = _CASE_ALIASES.get(key.lower(), _CASE_ALIASES.get(key, key.upper()))
    if key not in CASES:
        raise ValueError(f"unknown case {case_id!r}; expected one of {CASES}")
    return key


def normalize_family(family) -> str:
    key = str(family).strip().lower()
    if key not in FAMILIES:
        raise ValueError(f"unknown resource family {family!r}; expected one of {FAMILIES}")
    return key


@dataclass(frozen=True, eq=False)
class PovmElement:
    """One element of a two-outcome measurement on systems 1 and 2.

    ``case_id`` and ``resource_family`` are ``None`` for user-supplied
    elements that are not part of the built-in catalog.
    """

    mat: np.ndarray
    case_id: str | None = None
    resource_family: str | None = None
    outcome: int | None = None
    n: complex | None = None

    def __post_init__(self):
        mat = as_matrix(self.mat)
        if mat.shape != (4, 4):
            raise DimensionError(f"POVM element must be 4x4, got {mat.shape}")
        object.__setattr__(self, "mat", mat)
        proj = float(np.max(np.abs(mat @ mat - mat))) <= PROJECTOR_TOL
        object.__setattr__(self, "is_projector", proj)
        # projectors are their own square root
        object.__setattr__(self, "_sqrt", mat if proj else psd_sqrt(mat))

    def sqrt(self) -> np.ndarray:
        return self._sqrt


# index pairs into (phi+, phi-, psi+, psi-)
_PAIRINGS = {
    "maxent": {"I": ((0, 2), (1, 3)), "II": ((0, 3), (1, 2)), "III": ((0, 1), (2, 3))},
    "nonmax": {"I": ((0, 3), (1, 2)), "II": ((0, 2), (1, 3)), "III": ((0, 1), (2, 3))},
}


def povm_catalog(case_id, resource_family: str = "maxent", n: complex | None = None):
    """The two POVM elements of a named case.

    Maximally entangled resource::

        I   : phi+ + psi+ , phi- + psi-
        II  : phi+ + psi- , phi- + psi+
        III : phi+ + phi- , psi+ + psi-

    For ``nonmax`` the elements are built from ``n_basis(n)``::

        I   : phi_n+ + psi_n- , phi_n- + psi_n+
        II  : phi_n+ + psi_n+ , phi_n- + psi_n-
        III : phi_n+ + phi_n- , psi_n+ + psi_n-

    Note that at n = 1 the nonmax case I pairing coincides with maxent case
    II and vice versa. The ``mems`` and ``werner`` families use the maxent
    elements; case I is the measurement analysed for them.
    """
    case = normalize_case(case_id)
    family = normalize_family(resource_family)
    if family == "nonmax":
        if n is None:
            raise ValueError("the nonmax catalog needs the resource parameter n")
        n = complex(n)
        projs = [projector(v) for v in n_basis(n)]
        pairing = _PAIRINGS["nonmax"][case]
    else:
        if n is not None:
            raise ValueError(f"parameter n only applies to the nonmax family, not {family!r}")
        projs = [projector(bell_vector(lbl)) for lbl in ("phi+", "phi-", "psi+", "psi-")]
        pairing = _PAIRINGS["maxent"][case]
    m0, m1 = (projs[i] + projs[j] for i, j in pairing)
    return (
        PovmElement(m0, case, family, 0, n),
        PovmElement(m1, case, family, 1, n),
    )


def resource_state(resource_family: str, *, n=None, p=None, mems=None) -> np.ndarray:
    """Shared two-qubit state (systems 2, 3) for a resource family."""
    family = normalize_family(resource_family)
    if family == "maxent":
        return projector(bell_vector("phi+"))
    if family == "nonmax":
        if n is None:
            raise ValueError("nonmax resource needs n")
        return nonmax_state(n)
    if family == "werner":
        if p is None:
            raise ValueError("werner resource needs p")
        return werner_state(p)
    if mems is None:
        raise ValueError("mems resource needs MemsParams")
    if not isinstance(mems, MemsParams):
        mems = MemsParams(*mems)
    return mems_state(mems)


@dataclass(frozen=True, eq=False)
class TeleportOutcome:
    probability: float
    bob_state: np.ndarray
    coherence_in: float
    coherence_out: float
    route: str

    @property
    def ratio(self) -> float | None:
        if self.coherence_in < RATIO_FLOOR:
            return None
        return self.coherence_out / self.coherence_in


def _input_density(rho_in, validate=True) -> np.ndarray:
    if isinstance(rho_in, PureQubit):
        return rho_in.density()
    rho = check_density(rho_in) if validate else as_matrix(rho_in)
    if rho.shape != (2, 2):
        raise DimensionError(f"input must be a single qubit, got {rho.shape}")
    return rho


def _resource(tau, validate=True) -> np.ndarray:
    tau = check_density(tau) if validate else as_matrix(tau)
    if tau.shape != (4, 4):
        raise DimensionError(f"resource must be a two-qubit state, got {tau.shape}")
    return tau


def _element(e) -> PovmElement:
    return e if isinstance(e, PovmElement) else PovmElement(e)


def _outcome(unnormalized, rho, route) -> TeleportOutcome:
    prob = float(np.trace(unnormalized).real)
    if prob < MIN_PROBABILITY:
        raise DegenerateOutcomeError(prob)
    bob = unnormalized / prob
    bob = (bob + bob.conj().T) / 2
    return TeleportOutcome(prob, bob, l1_coherence(rho), l1_coherence(bob), route)


def teleport_direct(rho_in, tau, e, *, validate=True) -> TeleportOutcome:
    """Bob's conditional state by partial trace of the three-qubit operator.

    probability = Tr[(sqrt(E) x I)(rho x tau)(sqrt(E) x I)] and the state is
    the system-3 reduction divided by it. ``validate=False`` skips the
    density-matrix checks on ``rho_in`` and ``tau`` (for tight loops over
    inputs that are valid by construction).
    """
    rho = _input_density(rho_in, validate)
    tau = _resource(tau, validate)
    k = tensor(_element(e).sqrt(), I2)
    post = k @ tensor(rho, tau) @ k
    return _outcome(partial_trace(post, [2, 2, 2], keep=[2]), rho, "direct")


def teleport_via_theorem(rho_in, tau, e, *, validate=True) -> TeleportOutcome:
    """Bob's conditional state as T(Phi_E^*(rho)).

    T is the map whose Choi matrix is ``tau`` (system 2 is the map's input)
    and Phi_E the map whose Choi matrix is the POVM element (system 1 is the
    input). Either one failing the positivity test raises
    NotCompletelyPositiveError.
    """
    rho = _input_density(rho_in, validate)
    tau = _resource(tau, validate)
    t_map = map_of_choi(tau, 2, 2)
    e_map = map_of_choi(_element(e).mat, 2, 2)
    unnormalized = apply(compose(t_map, conjugate_map(e_map)), rho)
    return _outcome(unnormalized, rho, "theorem")


def teleport(state, resource_family="maxent", case_id="I", outcome=0, *,
             n=None, p=None, mems=None, route="direct") -> TeleportOutcome:
    """Run one catalog protocol instance end to end."""
    family = normalize_family(resource_family)
    tau = resource_state(family, n=n, p=p, mems=mems)
    element = povm_catalog(case_id, family, n if family == "nonmax" else None)[int(outcome)]
    if route == "direct":
        return teleport_direct(state, tau, element)
    if route == "theorem":
        return teleport_via_theorem(state, tau, element)
    raise ValueError(f"unknown route {route!r}; expected 'direct' or 'theorem'")


@dataclass(frozen=True)
class BobUnitary:
    """SU(2) element [[a, b], [-b*, a*]]."""

    a: complex
    b: complex

    def __post_init__(self):
        if abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1) > 1e-12:
            raise ValidationError(f"|a|^2 + |b|^2 must be 1, got {abs(self.a) ** 2 + abs(self.b) ** 2!r}")

    @property
    def matrix(self) -> np.ndarray:
        a, b = complex(self.a), complex(self.b)
        return np.array([[a, b], [-b.conjugate(), a.conjugate()]], dtype=complex)


def bob_unitary_coherence(outcome, u: BobUnitary) -> float:
    """l1 coherence of U rho_B U^dagger."""
    rho = outcome.bob_state if isinstance(outcome, TeleportOutcome) else as_matrix(outcome)
    m = u.matrix
    return l1_coherence(m @ rho @ m.conj().T)


def rotated_real_coherence(offdiag: float, u: BobUnitary) -> float:
    """Closed form for U (I/2 + c X) U^dagger: 2|c| sqrt(1 - (2 Re(a b*))^2)."""
    x = 2 * (complex(u.a) * complex(u.b).conjugate()).real
    return 2 * abs(offdiag) * math.sqrt(max(0.0, 1 - x * x))


def unitary_scan(outcome, rng, samples: int = 10_000):
    """Largest coherence Bob reaches over Haar-sampled SU(2) rotations.

    Returns ``(best_value, best_unitary)``.
    """
    from cohtele.sampling import haar_su2_batch

    rho = outcome.bob_state if isinstance(outcome, TeleportOutcome) else as_matrix(outcome)
    a, b = haar_su2_batch(rng, samples)
    u = np.empty((samples, 2, 2), dtype=complex)
    u[:, 0, 0], u[:, 0, 1], u[:, 1, 0], u[:, 1, 1] = a, b, -b.conj(), a.conj()
    rotated = u @ rho @ u.conj().transpose(0, 2, 1)
    values = np.abs(rotated[:, 0, 1]) + np.abs(rotated[:, 1, 0])
    k = int(np.argmax(values))
    return float(values[k]), BobUnitary(complex(a[k]), complex(b[k]))


# |psi> x |phi+> = 1/2 sum_i |B_i> x u_i |psi>; the psi- member carries a -i phase.
BELL_DECOMPOSITION = (
    ("phi+", 1, I2),
    ("psi+", 1, SX),
    ("psi-", -1j, SY),
    ("phi-", 1, SZ),
)


def bell_decomposition_check(q: PureQubit) -> float:
    """Norm of |psi>|phi+> - 1/2 sum_i |B_i> u_i |psi>."""
    psi = q.vector
    lhs = np.kron(psi, bell_vector("phi+"))
    rhs = sum(
        phase * np.kron(bell_vector(lbl), u @ psi) for lbl, phase, u in BELL_DECOMPOSITION
    ) / 2
    return float(np.linalg.norm(lhs - rhs))
