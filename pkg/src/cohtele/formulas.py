"""
Closed-form outcome probabilities, teleported coherences and Bob states.

Inputs are described by their 2x2 density matrix entries r00, r11 and
r01 (for a pure qubit r01 = alpha beta*), so every expression applies to
mixed inputs as well.

MEMS and Werner resources
-------------------------
The commonly quoted closed forms for these two families weight each Bell
projector of the resource as if it were the unnormalized vector
|00> + |11> (Choi weight 1 instead of 1/2), while the product parts keep
their actual weight. With the resource normalized as a state, Bob's
conditional state is affine in the resource weights (both outcomes occur
with probability 1/2) and the coherences become::

    MEMS   : 2 |p1 - p3| |Re r01|        quoted: 4 |p1 - p3| / (1 + p1 + p3) |Re r01|
    Werner : p |2 Re r01|                quoted: 2p / (1 + p) |2 Re r01|

The two agree only at the endpoints (p = 0 or 1 for Werner, p1 + p3 = 1
for MEMS). Functions here return the quoted expressions by default;
``normalized=True`` selects the expressions that direct simulation of
the unit-trace resource reproduces.
"""

import math

import numpy as np

from cohtele.cmatrix import SX, SY, SZ, as_matrix, projector, ket
from cohtele.protocol import normalize_case, normalize_family
from cohtele.states import MemsParams, PureQubit

# How each family's outcome probability is known: "closed_form" values are
# stated expressions, "symmetry" values are 1/2 for every input.
PROBABILITY_ORIGIN = {
    "maxent": "symmetry",
    "nonmax": "closed_form",
    "mems": "symmetry",
    "werner": "symmetry",
}


def _entries(state):
    if isinstance(state, PureQubit):
        a, b = state.alpha, state.beta
        return abs(a) ** 2, abs(b) ** 2, a * b.conjugate()
    rho = as_matrix(state)
    return rho[0, 0].real, rho[1, 1].real, complex(rho[0, 1])


def _mems(mems):
    if mems is None:
        raise ValueError("MEMS formulas need MemsParams")
    return mems if isinstance(mems, MemsParams) else MemsParams(*mems, strict=False)


def coherence_formula(case_id, resource_family, state, *, outcome=0, n=None, p=None,
                      mems=None, normalized=False) -> float:
    """Teleported l1 coherence for a catalog protocol, in closed form.

    ``state`` is a ``PureQubit`` or a 2x2 density matrix. Family-specific
    parameters: ``n`` (nonmax), ``p`` (werner), ``mems`` (MemsParams or a
    4-tuple). MEMS and Werner are defined for case I only.
    """
    case = normalize_case(case_id)
    family = normalize_family(resource_family)
    r00, r11, r01 = _entries(state)
    re, im = abs(r01.real), abs(r01.imag)
    if case == "III" and family in ("maxent", "nonmax"):
        return 0.0
    if family == "maxent":
        return 2 * re if case == "I" else 2 * im
    if family == "nonmax":
        m2 = abs(complex(n)) ** 2
        if case == "I":
            return 4 * m2 / (1 + m2 * m2) * im if outcome == 0 else 2 * im
        weight = r00 + r11 * m2 if outcome == 0 else r00 * m2 + r11
        return 4 * m2 / ((1 + m2) * weight) * re
    if case != "I":
        raise ValueError(f"no closed form for the {family} resource under case {case}")
    if family == "mems":
        q = _mems(mems)
        if normalized:
            return 2 * abs(q.p1 - q.p3) * re
        return 4 * abs(q.p1 - q.p3) / (1 + q.p1 + q.p3) * re
    if p is None:
        raise ValueError("Werner formulas need p")
    if normalized:
        return p * 2 * re
    return 2 * p / (1 + p) * 2 * re


def probability_formula(case_id, resource_family, state=None, *, outcome=0, n=None) -> float:
    """Closed-form probability of a catalog outcome.

    Maximally entangled, MEMS and Werner resources give 1/2 for every input
    and case (see ``PROBABILITY_ORIGIN``).
    """
    case = normalize_case(case_id)
    family = normalize_family(resource_family)
    if family != "nonmax":
        return 0.5
    m2 = abs(complex(n)) ** 2
    if case == "I":
        return (1 + m2 * m2) / (1 + m2) ** 2 if outcome == 0 else 2 * m2 / (1 + m2) ** 2
    if state is None:
        raise ValueError("nonmax cases II and III need the input state")
    r00, r11, _ = _entries(state)
    if outcome == 0:
        return (r00 + r11 * m2) / (1 + m2)
    return (r00 * m2 + r11) / (1 + m2)


def _sandwich(u, rho):
    return u @ rho @ u.conj().T


def mems_bob_state(mems, rho, *, outcome=0, normalized=False) -> np.ndarray:
    """Bob's (trace-one) state for a MEMS resource under the case I measurement.

    The quoted expression is the same for both outcomes; the normalized one
    exchanges p1 and p3 between them.
    """
    q = _mems(mems)
    rho = as_matrix(rho)
    p00, p11 = projector(ket(0)), projector(ket(1))
    if not normalized:
        out = (q.p1 * (_sandwich(SZ, rho) + _sandwich(SY, rho))
               + q.p3 * (_sandwich(SX, rho) + rho)
               + q.p2 * p00 + q.p4 * p11)
        return out / (1 + q.p1 + q.p3)
    w_yz, w_x = (q.p1, q.p3) if outcome == 0 else (q.p3, q.p1)
    out = (w_yz * (_sandwich(SY, rho) + _sandwich(SZ, rho))
           + w_x * (_sandwich(SX, rho) + rho)
           + 2 * q.p2 * p00 + 2 * q.p4 * p11)
    return out / 2


def werner_bob_state(p, rho, *, outcome=0, normalized=False) -> np.ndarray:
    """Bob's (trace-one) state for a Werner resource under the case I measurement."""
    rho = as_matrix(rho)
    if outcome == 0:
        pair = _sandwich(SY, rho) + _sandwich(SZ, rho)
    else:
        pair = _sandwich(SX, rho) + rho
    if normalized:
        return p / 2 * pair + (1 - p) / 2 * np.eye(2)
    out = p * pair + (1 - p) / 2 * np.eye(2)
    return out / (1 + p)


def mixed_input_bob_state(rho, *, outcome=0) -> np.ndarray:
    """Maximally entangled resource, case I: (rho + X rho X)/2 or (Z rho Z + Y rho Y)/2."""
    rho = as_matrix(rho)
    if outcome == 0:
        return (rho + _sandwich(SX, rho)) / 2
    return (_sandwich(SZ, rho) + _sandwich(SY, rho)) / 2


def mems_concurrence(mems, *, general=True) -> float:
    """Concurrence of a MEMS resource.

    The state is an X-state with populations (p2, (p1+p3)/2, (p1+p3)/2, p4)
    and coherence (p3 - p1)/2 between |01> and |10>, which gives
    max(0, |p1 - p3| - 2 sqrt(p2 p4)). ``general=False`` returns the
    often-quoted max(0, p1 - p3 - sqrt(p2 p4)); the two coincide when
    p2 p4 = 0.
    """
    q = _mems(mems)
    root = math.sqrt(q.p2 * q.p4)
    if general:
        return max(0.0, abs(q.p1 - q.p3) - 2 * root)
    return max(0.0, q.p1 - q.p3 - root)


def mems_coherence_bound(mems) -> float:
    """Multiplier 2C/(1+C) bounding coherence_out / coherence_in when p4 = 0."""
    c = mems_concurrence(mems)
    return 2 * c / (1 + c)
