import logging

import numpy as np
import pytest

from mechspace.datatypes import Flavor
from mechspace.exceptions import MechSpaceException, ValidationError
from mechspace.verification import (
    Suite,
    SweepOptions,
    VerificationReport,
    get_suite,
    registered_suites,
    run_suite,
    verification_suite,
)

SUITES = {
    "invariance-newton",
    "invariance-einstein",
    "factorization",
    "measure",
    "dynamics",
    "light",
    "cayley",
    "symplectic",
    "scaling",
    "hamiltonian",
    "cotangent",
}


def test_builtin_suites_are_registered():
    suites = registered_suites()
    assert set(suites) == SUITES
    for name, suite in suites.items():
        assert suite.name == name
        assert suite.docstring


def test_unknown_suite():
    with pytest.raises(ValidationError, match="Expected one of .* 'warp'"):
        get_suite("warp")


def test_duplicate_registration_is_rejected():
    registered_suites()
    with pytest.raises(MechSpaceException, match="already registered"):

        @verification_suite("measure")
        def measure_again(options: SweepOptions) -> VerificationReport:
            raise NotImplementedError


def test_suite_signature_is_validated():
    def two_arguments(options: SweepOptions, extra: int) -> VerificationReport:
        raise NotImplementedError

    def wrong_return(options: SweepOptions) -> int:
        return 0

    with pytest.raises(MechSpaceException, match="single SweepOptions"):
        Suite(two_arguments, "two")
    with pytest.raises(MechSpaceException, match="VerificationReport"):
        Suite(wrong_return, "wrong")


def test_trials_must_be_positive():
    with pytest.raises(ValidationError, match="trials >= 1"):
        SweepOptions(seed=1, trials=0)


def test_render():
    report = VerificationReport(
        "light", 3, 0.5, True, {"scale": 1.0, "equivalent": False, "generator": "x"}
    )
    assert report.render() == (
        "suite = light\n"
        "trials = 3\n"
        "max_residual = 0.5\n"
        "passed = true\n"
        "scale = 1\n"
        "equivalent = false\n"
        "generator = x\n"
    )


def test_merge():
    a = VerificationReport("scaling-newton", 10, 1e-9, True, {"m1": 1.0})
    b = VerificationReport("scaling-newton", 5, 1e-7, False, {"m2": 2.0})
    merged = a.merge(b)
    assert merged.trials == 15
    assert merged.max_residual == 1e-7
    assert not merged.passed
    assert merged.details == {"m1": 1.0, "m2": 2.0}


@pytest.mark.parametrize(
    "name, flavor, report_name",
    [
        ("invariance-newton", Flavor.NEWTON, "invariance-newton"),
        ("invariance-einstein", Flavor.NEWTON, "invariance-einstein"),
        ("factorization", Flavor.NEWTON, "factorization"),
        ("measure", Flavor.NEWTON, "measure"),
        ("dynamics", Flavor.NEWTON, "dynamics-newton"),
        ("dynamics", Flavor.EINSTEIN, "dynamics-einstein"),
        ("light", Flavor.EINSTEIN, "light"),
        ("cayley", Flavor.EINSTEIN, "cayley"),
        ("symplectic", Flavor.NEWTON, "symplectic-newton"),
        ("symplectic", Flavor.EINSTEIN, "symplectic-einstein"),
        ("scaling", Flavor.NEWTON, "scaling-newton"),
        ("scaling", Flavor.EINSTEIN, "scaling-einstein"),
        ("cotangent", Flavor.EINSTEIN, "cotangent-einstein"),
        ("cotangent", Flavor.NEWTON, "cotangent-newton"),
    ],
)
def test_suites_pass(name: str, flavor: Flavor, report_name: str):
    report = run_suite(name, SweepOptions(seed=7, trials=3, flavor=flavor))
    assert report.name == report_name
    assert report.passed, report.render()


def test_suites_are_deterministic():
    options = SweepOptions(seed=42, trials=50)
    assert run_suite("measure", options) == run_suite("measure", options)
    einstein = SweepOptions(seed=3, trials=5, flavor=Flavor.EINSTEIN)
    first, second = (run_suite("light", einstein).render() for _ in range(2))
    assert first == second


def test_suite_runs_are_logged(caplog: pytest.LogCaptureFixture):
    with caplog.at_level(logging.INFO, logger="mechspace.verification"):
        run_suite("measure", SweepOptions(seed=7, trials=2))
    assert "Running measure with seed 7" in caplog.text
    assert "measure finished" in caplog.text


@pytest.mark.parametrize(
    "name, trials",
    [
        ("invariance-newton", 1000),
        ("invariance-einstein", 1000),
        ("factorization", 500),
        ("measure", 1000),
        ("cayley", 10_000),
        ("symplectic", 500),
        ("light", 100),
    ],
)
def test_suites_carry_their_acceptance_trials(name: str, trials: int):
    assert get_suite(name).trials == trials


def test_default_trials_must_be_positive():
    def sweep(options: SweepOptions) -> VerificationReport:
        raise NotImplementedError

    with pytest.raises(MechSpaceException, match="trials >= 1"):
        Suite(sweep, "empty", trials=0)


def test_cayley_sweep_reaches_rapidity_five():
    options = SweepOptions(seed=11, trials=3, flavor=Flavor.EINSTEIN)
    report = run_suite("cayley", options)
    assert report.passed, report.render()
    assert report.details["monotonicity_violations"] == 0
    assert report.details["max_ball_norm"] == pytest.approx(np.tanh(5.0), abs=1e-12)
