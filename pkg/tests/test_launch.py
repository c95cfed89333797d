import json
from pathlib import Path

import pytest
from pytest_mock import MockerFixture
from typer.testing import CliRunner

from mechspace import __version__
from mechspace.exceptions import FieldDomainError
from mechspace.launch import USAGE_ERROR, create_app
from mechspace.scenario import scenario_model
from mechspace.verification import VerificationReport

runner = CliRunner()


@pytest.fixture
def app():
    return create_app()


def test_schema(app):
    result = runner.invoke(app, ["schema"])
    assert result.exit_code == 0
    assert json.loads(result.stdout) == scenario_model().model_json_schema()

    # # store a schema to use for debugging
    # with open(data / "schema.json", mode="w") as f:
    #     json.dump(json.loads(result.stdout), f, indent=2)


def test_version(app):
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert result.stdout == f"mechspace: {__version__}\n"


def test_version_option(app):
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert result.stdout == f"{__version__}\n"


def test_run(app, data, tmp_path: Path):
    result = runner.invoke(
        app, ["run", str(data / "free_particle.yaml"), "--out", str(tmp_path)]
    )
    assert result.exit_code == 0, result.output
    assert (tmp_path / "manifest.txt").read_text().splitlines() == [
        "free.csv",
        "free.shifted.csv",
        "measure.txt",
    ]


def test_run_with_failed_verification(app, data, tmp_path: Path, mocker: MockerFixture):
    run_scenario = mocker.patch("mechspace.launch.run_scenario", return_value=False)
    result = runner.invoke(
        app, ["run", str(data / "free_particle.yaml"), "--out", str(tmp_path)]
    )
    assert result.exit_code == 1
    run_scenario.assert_called_once()


def test_run_invalid_scenario(app, data, tmp_path: Path, mocker: MockerFixture):
    run_scenario = mocker.patch("mechspace.launch.run_scenario")
    result = runner.invoke(
        app, ["run", str(data / "off_shell.yaml"), "--out", str(tmp_path)]
    )
    assert result.exit_code == USAGE_ERROR
    assert "ValidationError" in result.output
    assert "Mass shell" in result.output
    run_scenario.assert_not_called()


def test_run_failure(app, data, tmp_path: Path, mocker: MockerFixture):
    mocker.patch(
        "mechspace.launch.run_scenario",
        side_effect=FieldDomainError("field undefined at x = 0"),
    )
    result = runner.invoke(
        app, ["run", str(data / "free_particle.yaml"), "--out", str(tmp_path)]
    )
    assert result.exit_code == 1
    assert "FieldDomainError: field undefined at x = 0" in result.output


def test_classify_newtonian(app, data):
    result = runner.invoke(app, ["classify", str(data / "vectors.txt")])
    assert result.exit_code == 0
    assert result.stdout.splitlines() == [
        "HyperplaneM m=3",
        "HyperplaneE mt=-2",
        "SphereS md=3",
        "Origin",
    ]


def test_classify_einsteinian(app, data):
    result = runner.invoke(
        app, ["classify", str(data / "einstein_vectors.txt"), "--flavor", "e"]
    )
    assert result.exit_code == 0
    assert result.stdout.splitlines() == [
        "HyperboloidH mt=1 sheet=future",
        "LightCone",
        "QuadricS md=3",
        "HyperboloidH mt=-2 sheet=past",
    ]


def test_classify_unknown_flavor(app, data):
    result = runner.invoke(
        app, ["classify", str(data / "vectors.txt"), "--flavor", "x"]
    )
    assert result.exit_code == 2
    assert "Unknown flavor" in result.output


def test_classify_malformed_file(app, tmp_path: Path):
    path = tmp_path / "bad.txt"
    path.write_text("1, 2, 3\n")
    result = runner.invoke(app, ["classify", str(path)])
    assert result.exit_code == USAGE_ERROR
    assert "ParseError" in result.output


def test_transform(app, data):
    group, vectors = str(data / "galilei_shift.yaml"), str(data / "vectors.txt")
    result = runner.invoke(app, ["transform", group, vectors])
    assert result.exit_code == 0
    assert result.stdout.splitlines() == [
        "3,0,0,1.5,3",
        "5,0,1,-2,0",
        "1,2,2,0,0",
        "0,0,0,0,0",
    ]
    result = runner.invoke(app, ["transform", group, vectors, "--inverse"])
    assert result.exit_code == 0
    assert result.stdout.splitlines()[0] == "-3,0,0,-1.5,3"


def test_transform_invalid_group(app, data, tmp_path: Path):
    path = tmp_path / "group.yaml"
    path.write_text("family: galilei\nparameters: [2, 0, 0]\n")
    result = runner.invoke(app, ["transform", str(path), str(data / "vectors.txt")])
    assert result.exit_code == USAGE_ERROR
    assert "ValidationError" in result.output


def test_verify(app):
    result = runner.invoke(
        app, ["verify", "symplectic", "--seed", "7", "--trials", "5", "--mass", "2"]
    )
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert lines[:2] == ["suite = symplectic-newton", "trials = 5"]
    assert "passed = true" in lines
    assert "mass = 2" in lines


def test_verify_failure(app, mocker: MockerFixture):
    mocker.patch(
        "mechspace.launch.run_suite",
        return_value=VerificationReport("light", 1, 1.0, False),
    )
    result = runner.invoke(app, ["verify", "light", "--seed", "1"])
    assert result.exit_code == 1
    assert "passed = false" in result.stdout


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "warp", "--seed", "1"],
        ["verify", "light", "--seed", "1", "--trials", "0"],
        ["verify", "light"],
    ],
)
def test_verify_usage_errors(app, args: list[str]):
    result = runner.invoke(app, args)
    assert result.exit_code == USAGE_ERROR


def test_suites(app):
    result = runner.invoke(app, ["suites"])
    assert result.exit_code == 0
    assert (
        "measure: Exact identities of the dimension algebra and parser round trips."
        in result.stdout.splitlines()
    )
    assert len(result.stdout.splitlines()) == 11


def test_dims(app):
    result = runner.invoke(app, ["dims", "kgs/kg"])
    assert result.exit_code == 0
    assert result.stdout == "kg^-1*kgs\n"


def test_dims_parse_error(app):
    result = runner.invoke(app, ["dims", "kg*"])
    assert result.exit_code == USAGE_ERROR
    assert "ParseError" in result.output
    assert "at position 3" in result.output


def test_verify_uses_the_sweep_default_trials(app, mocker: MockerFixture):
    run_suite = mocker.patch(
        "mechspace.launch.run_suite",
        return_value=VerificationReport("invariance-newton", 1000, 0.0, True),
    )
    result = runner.invoke(app, ["verify", "invariance-newton", "--seed", "1"])
    assert result.exit_code == 0, result.output
    name, options = run_suite.call_args.args
    assert name == "invariance-newton"
    assert options.trials == 1000


@pytest.mark.parametrize(
    "args",
    [
        ["run", "missing.yaml", "--out", "."],
        ["classify", "missing.yaml"],
        ["transform", "missing.yaml", "vectors.txt"],
    ],
)
def test_missing_input_file_is_a_usage_error(app, args: list[str]):
    result = runner.invoke(app, args)
    assert result.exit_code == USAGE_ERROR
    assert "missing.yaml" in result.output
