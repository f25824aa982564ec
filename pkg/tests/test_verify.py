import pytest

from cohtele import verify
from cohtele.sampling import DEFAULT_SEED


def test_check_status_follows_tolerance():
    assert verify.Check("a", 1e-12, 1e-10).passed
    assert not verify.Check("b", 1e-9, 1e-10).passed
    assert not verify.Check("c", 0.0, 1e-10, passed=False).passed


def test_report_overall():
    report = verify.VerificationReport("x", 1, [verify.Check("a", 0, 1), verify.Check("b", 2, 1)])
    assert not report.passed
    d = report.as_dict()
    assert d["overall"] == "fail"
    assert [c["status"] for c in d["checks"]] == ["pass", "fail"]
    assert verify.VerificationReport("y", 1, [verify.Check("a", 0, 1)]).passed


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify.run_suite("everything")


def test_default_seed_is_reported():
    assert verify.run_suite("basis").seed == DEFAULT_SEED


@pytest.mark.parametrize("suite", ["basis", "bounds"])
def test_suites_pass(suite):
    report = verify.run_suite(suite, seed=11)
    assert report.passed, [c for c in report.checks if not c.passed]
    assert all(c.name.startswith(suite + ": ") for c in report.checks)


def test_formulas_suite_on_a_coarse_grid():
    report = verify.run_suite("formulas", grid=6)
    assert report.passed, [c for c in report.checks if not c.passed]


def test_theorem_suite_tolerance():
    report = verify.run_suite("theorem", seed=123)
    assert report.passed
    for c in report.checks:
        if "route equivalence" in c.name:
            assert c.max_deviation < 1e-9


def test_reports_are_reproducible():
    a = verify.run_suite("theorem").as_dict()
    b = verify.run_suite("theorem").as_dict()
    assert a == b


def test_grids():
    assert len(verify.qubit_grid(4)) == 16
    assert verify.phi_grid(4)[-1] < 6.2832
    assert len(verify.N_VALUES) == 16
    assert any(isinstance(n, complex) for n in verify.N_VALUES)
