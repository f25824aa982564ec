import math

import numpy as np
import pytest

from cohtele.cmatrix import I2, SX, SY, SZ, tensor
from cohtele.errors import DegenerateOutcomeError, DimensionError, ValidationError
from cohtele.protocol import (
    BobUnitary,
    PovmElement,
    bell_decomposition_check,
    bob_unitary_coherence,
    normalize_case,
    normalize_family,
    povm_catalog,
    resource_state,
    rotated_real_coherence,
    teleport,
    teleport_direct,
    teleport_via_theorem,
    unitary_scan,
)
from cohtele.sampling import random_density, random_povm_pair, random_pure_qubit
from cohtele.states import PureQubit, bell_state, werner_state

MAXENT = resource_state("maxent")
PLUS = PureQubit(math.pi / 2, 0.0)
PLUS_I = PureQubit(math.pi / 2, math.pi / 2)


def brute_force_bob_state(rho, tau, e):
    """Explicit index sums over systems 1 and 2, no partial_trace helper."""
    m = tensor(e, I2) @ tensor(rho, tau) @ tensor(e, I2)
    t = m.reshape(2, 2, 2, 2, 2, 2)
    out = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            out += t[i, j, :, i, j, :]
    return out


# ---------------------------------------------------------------- catalog

def test_case_aliases():
    assert normalize_case(1) == normalize_case("i") == normalize_case("I") == "I"
    assert normalize_case("3") == "III"
    with pytest.raises(ValueError):
        normalize_case("IV")
    assert normalize_family("Maxent") == "maxent"
    with pytest.raises(ValueError):
        normalize_family("ghz")


@pytest.mark.parametrize("case", ["I", "II", "III"])
@pytest.mark.parametrize("family,n", [("maxent", None), ("nonmax", 2), ("nonmax", 0.3 - 1.1j)])
def test_catalog_complete_and_projective(case, family, n):
    e0, e1 = povm_catalog(case, family, n)
    np.testing.assert_allclose(e0.mat + e1.mat, np.eye(4), atol=1e-12)
    for k, e in enumerate((e0, e1)):
        assert e.is_projector and e.outcome == k and e.case_id == case
        np.testing.assert_allclose(e.mat @ e.mat, e.mat, atol=1e-10)
        assert np.linalg.eigvalsh(e.mat).min() > -1e-10


def test_case_three_element():
    e0 = povm_catalog("III", "maxent")[0].mat
    np.testing.assert_allclose(e0, bell_state("phi+") + bell_state("phi-"), atol=1e-15)
    np.testing.assert_allclose(e0, np.diag([1, 0, 0, 1]), atol=1e-15)


def test_nonmax_at_one_matches_maxent(rng):
    # at n = 1 the nonmax case I pairing is the maxent case II pairing and vice versa
    for nonmax_case, maxent_case in (("I", "II"), ("II", "I"), ("III", "III")):
        for a, b in zip(povm_catalog(nonmax_case, "nonmax", 1), povm_catalog(maxent_case, "maxent")):
            for _ in range(5):
                rho = random_density(rng)
                x, y = teleport_direct(rho, MAXENT, a), teleport_direct(rho, MAXENT, b)
                assert x.probability == pytest.approx(y.probability, abs=1e-12)
                np.testing.assert_allclose(x.bob_state, y.bob_state, atol=1e-12)


def test_catalog_parameter_rules():
    with pytest.raises(ValueError):
        povm_catalog("I", "nonmax")
    with pytest.raises(ValueError):
        povm_catalog("I", "maxent", 2)
    assert np.allclose(povm_catalog("I", "werner")[0].mat, povm_catalog("I", "maxent")[0].mat)


def test_povm_element_non_projector(rng):
    e0, _ = random_povm_pair(rng)
    e = PovmElement(e0)
    assert not e.is_projector
    np.testing.assert_allclose(e.sqrt() @ e.sqrt(), e0, atol=1e-12)
    with pytest.raises(DimensionError):
        PovmElement(np.eye(2))


# ---------------------------------------------------------------- teleport_direct

def test_direct_plus_case_one():
    o = teleport_direct(PLUS, MAXENT, povm_catalog("I", "maxent")[0])
    assert o.probability == pytest.approx(0.5, abs=1e-12)
    assert o.coherence_out == pytest.approx(1, abs=1e-12)
    assert o.route == "direct"


def test_direct_imaginary_plus_case_one():
    o = teleport_direct(PLUS_I, MAXENT, povm_catalog("I", "maxent")[0])
    assert o.coherence_out == pytest.approx(0, abs=1e-12)


def test_direct_nonmax_two():
    n = 2
    o = teleport_direct(PLUS_I, resource_state("nonmax", n=n), povm_catalog("I", "nonmax", n)[0])
    assert o.probability == pytest.approx(0.68, abs=1e-12)
    assert o.coherence_out == pytest.approx(8 / 17, abs=1e-12)


def test_case_three_is_incoherent(rng):
    for _ in range(50):
        rho = random_density(rng)
        for e in povm_catalog("III", "maxent"):
            assert teleport_direct(rho, MAXENT, e).coherence_out < 1e-12


def test_case_three_bob_state_is_diagonal_population(rng):
    # F0 keeps |000> and |111>, so Bob holds diag(|alpha|^2, |beta|^2)
    for _ in range(20):
        q = random_pure_qubit(rng)
        a2, b2 = abs(q.alpha) ** 2, abs(q.beta) ** 2
        e0, e1 = povm_catalog("III", "maxent")
        np.testing.assert_allclose(teleport_direct(q, MAXENT, e0).bob_state, np.diag([a2, b2]), atol=1e-12)
        np.testing.assert_allclose(teleport_direct(q, MAXENT, e1).bob_state, np.diag([b2, a2]), atol=1e-12)


def test_case_three_maximally_mixed_on_the_equator():
    for phi in np.linspace(0, 2 * math.pi, 8, endpoint=False):
        for e in povm_catalog("III", "maxent"):
            o = teleport_direct(PureQubit(math.pi / 2, float(phi)), MAXENT, e)
            np.testing.assert_allclose(o.bob_state, I2 / 2, atol=1e-12)


@pytest.mark.xfail(strict=True, reason="I/2 holds only for |alpha| = |beta|")
def test_case_three_maximally_mixed_for_every_input():
    q = PureQubit(1.0, 0.3)
    np.testing.assert_allclose(teleport_direct(q, MAXENT, povm_catalog("III", "maxent")[0]).bob_state,
                               I2 / 2, atol=1e-12)


def test_direct_matches_brute_force(rng):
    for family in ("maxent", "nonmax", "werner"):
        tau = {"maxent": MAXENT, "nonmax": resource_state("nonmax", n=0.4 + 0.9j),
               "werner": werner_state(0.6)}[family]
        n = 0.4 + 0.9j if family == "nonmax" else None
        for e in povm_catalog("II", family, n):
            rho = random_density(rng)
            raw = brute_force_bob_state(rho, tau, e.mat)
            o = teleport_direct(rho, tau, e)
            assert o.probability == pytest.approx(np.trace(raw).real, abs=1e-12)
            np.testing.assert_allclose(o.bob_state, raw / np.trace(raw), atol=1e-12)


def test_outcome_probabilities_sum_to_one(rng):
    for _ in range(30):
        rho = random_density(rng)
        for case in ("I", "II", "III"):
            for family, n in (("maxent", None), ("nonmax", complex(*rng.normal(size=2)))):
                tau = resource_state(family, n=n)
                total = sum(teleport_direct(rho, tau, e).probability for e in povm_catalog(case, family, n))
                assert total == pytest.approx(1, abs=1e-10)


def test_direct_validation_and_degenerate():
    with pytest.raises(ValidationError):
        teleport_direct(np.diag([0.6, 0.6]), MAXENT, povm_catalog("I")[0])
    with pytest.raises(DimensionError):
        teleport_direct(np.eye(4) / 4, MAXENT, povm_catalog("I")[0])
    n = 1e-9
    with pytest.raises(DegenerateOutcomeError) as info:
        teleport_direct(PureQubit(math.pi, 0), resource_state("nonmax", n=n), povm_catalog("II", "nonmax", n)[0])
    assert info.value.probability < 1e-12


def test_ratio_none_for_incoherent_input():
    o = teleport(PureQubit(0, 0), "maxent", "I", 0)
    assert o.ratio is None
    assert teleport(PLUS, "maxent", "I", 0).ratio == pytest.approx(1)


# ---------------------------------------------------------------- theorem route

def test_theorem_matches_direct_on_catalogs(rng):
    for case in ("I", "II", "III"):
        for family, n in (("maxent", None), ("nonmax", 1.7 - 0.2j)):
            tau = resource_state(family, n=n)
            for e in povm_catalog(case, family, n):
                for _ in range(5):
                    rho = random_density(rng)
                    a, b = teleport_direct(rho, tau, e), teleport_via_theorem(rho, tau, e)
                    assert b.route == "theorem"
                    assert a.probability == pytest.approx(b.probability, abs=1e-9)
                    np.testing.assert_allclose(a.bob_state, b.bob_state, atol=1e-9)


def test_theorem_case_one_states(rng):
    e0, e1 = povm_catalog("I", "maxent")
    for _ in range(10):
        rho = random_density(rng)
        np.testing.assert_allclose(teleport_via_theorem(rho, MAXENT, e0).bob_state,
                                   (rho + SX @ rho @ SX) / 2, atol=1e-12)
        np.testing.assert_allclose(teleport_via_theorem(rho, MAXENT, e1).bob_state,
                                   (SZ @ rho @ SZ + SY @ rho @ SY) / 2, atol=1e-12)


def test_theorem_with_non_projective_povm(rng):
    for _ in range(10):
        e0, e1 = random_povm_pair(rng)
        tau, rho = random_density(rng, 4), random_density(rng)
        for e in (e0, e1):
            a, b = teleport_direct(rho, tau, e), teleport_via_theorem(rho, tau, e)
            assert a.probability == pytest.approx(b.probability, abs=1e-9)
            np.testing.assert_allclose(a.bob_state, b.bob_state, atol=1e-9)


def test_teleport_wrapper_routes():
    a = teleport(PLUS_I, "nonmax", "I", 0, n=2, route="theorem")
    assert a.coherence_out == pytest.approx(8 / 17, abs=1e-12)
    with pytest.raises(ValueError):
        teleport(PLUS, route="teleportron")


# ---------------------------------------------------------------- Bob's unitary

def test_bob_unitary_identity_keeps_coherence():
    o = teleport(PureQubit(1.1, 0.4), "maxent", "I", 0)
    assert bob_unitary_coherence(o, BobUnitary(1, 0)) == pytest.approx(o.coherence_out, abs=1e-15)


def test_bob_unitary_orthogonal_rotation_reaches_ceiling():
    q = PureQubit(1.1, 0.4)
    o = teleport(q, "maxent", "I", 0)
    c = (q.alpha * q.beta.conjugate()).real
    for a, b in ((1, 0), (1j, 0), (math.sqrt(0.5), 1j * math.sqrt(0.5))):
        u = BobUnitary(a, b)
        assert (complex(a) * complex(b).conjugate()).real == pytest.approx(0)
        assert bob_unitary_coherence(o, u) == pytest.approx(2 * abs(c), abs=1e-12)


def test_bob_unitary_matches_closed_form(rng):
    from cohtele.sampling import haar_su2
    o = teleport(random_pure_qubit(rng), "maxent", "I", 1)
    for _ in range(200):
        u = BobUnitary(*haar_su2(rng))
        assert bob_unitary_coherence(o, u) == pytest.approx(
            rotated_real_coherence(o.bob_state[0, 1].real, u), abs=1e-10)


def test_bob_unitary_scan_stays_below_sin_theta(rng):
    q = PureQubit(1.2, 0.9)
    o = teleport(q, "maxent", "I", 0)
    best, u = unitary_scan(o, rng, 10_000)
    ceiling = 2 * abs((q.alpha * q.beta.conjugate()).real)
    assert ceiling * (1 - 1e-4) <= best <= ceiling * (1 + 1e-9)
    assert best < math.sin(q.theta) - 1e-3
    np.testing.assert_allclose(u.matrix.conj().T @ u.matrix, I2, atol=1e-12)


def test_bob_unitary_validation():
    with pytest.raises(ValidationError):
        BobUnitary(1, 1)


# ---------------------------------------------------------------- Bell decomposition

def test_bell_decomposition_examples(rng):
    assert bell_decomposition_check(PureQubit(0, 0)) < 1e-12
    assert bell_decomposition_check(PLUS) < 1e-12
    assert max(bell_decomposition_check(random_pure_qubit(rng)) for _ in range(100)) < 1e-12
