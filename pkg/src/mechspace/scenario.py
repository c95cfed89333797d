"""Scenario files: what to integrate, which frames to report in and which sweeps
to run."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import MISSING, dataclass, field, fields
from pathlib import Path
from typing import Annotated, Any, Literal, get_type_hints

import numpy as np
import pydantic
from pydantic import BaseModel, Field, create_model
from ruamel.yaml import YAML
from ruamel.yaml.error import MarkedYAMLError

from .datatypes import STANDARD_FRAME, FiveVector, Flavor, MechanicalSpace
from .dynamics import (
    FIELDS,
    ForceField,
    Trajectory,
    check_initial_data,
    derive_kinematics,
    integrate,
)
from .exceptions import (
    BadInitialData,
    MembershipViolation,
    NotInExtendedGroup,
    ParseError,
    ValidationError,
)
from .groups import GroupElement, GroupFamily, element_from_parameters
from .verification import SweepOptions, VerificationReport, get_suite, run_suite

logger = logging.getLogger(__name__)


@dataclass
class GroupElementOptions:
    name: str
    family: GroupFamily
    parameters: list[float]


@dataclass
class ParticleOptions:
    name: str
    mass: float
    point: list[float]
    momentum: list[float]
    frame: str = STANDARD_FRAME
    #: Add momentum, velocity, force and acceleration columns to the CSV
    derived: bool = False


@dataclass
class ZeroFieldOptions:
    kind: Literal["zero"] = "zero"
    serial: bool = False


@dataclass
class IsotropicOscillatorOptions:
    kind: Literal["isotropic-oscillator"] = "isotropic-oscillator"
    k: float = 1.0
    serial: bool = False


@dataclass
class InverseSquareOptions:
    kind: Literal["inverse-square"] = "inverse-square"
    kappa: float = 1.0
    serial: bool = False


@dataclass
class AntisymmetricOptions:
    kind: Literal["antisymmetric-relativistic"] = "antisymmetric-relativistic"
    lam: float = 1.0
    serial: bool = False


FieldOptions = Annotated[
    ZeroFieldOptions
    | IsotropicOscillatorOptions
    | InverseSquareOptions
    | AntisymmetricOptions,
    Field(discriminator="kind"),
]


@dataclass
class IntegrationOptions:
    h: float = 0.01
    n: int = 100


@dataclass
class VerificationRequest:
    suite: str
    seed: int
    trials: int = 100
    masses: list[float] = field(default_factory=lambda: [1.0])
    #: Defaults to the flavor of the scenario
    flavor: Flavor | None = None


@dataclass
class ScenarioOptions:
    flavor: Flavor = Flavor.NEWTON
    oriented: bool = False
    frames: list[str] = field(default_factory=lambda: [STANDARD_FRAME])
    group_elements: list[GroupElementOptions] = field(default_factory=list)
    particles: list[ParticleOptions] = field(default_factory=list)
    force_field: FieldOptions = field(default_factory=ZeroFieldOptions)
    integration: IntegrationOptions = field(default_factory=IntegrationOptions)
    verifications: list[VerificationRequest] = field(default_factory=list)


def options_model(options_class: type, name: str) -> type[BaseModel]:
    """Pydantic model with one field per field of an options dataclass."""
    hints = get_type_hints(options_class, include_extras=True)
    definitions: dict[str, Any] = {}
    for option in fields(options_class):
        if option.default_factory is not MISSING:
            default = Field(default_factory=option.default_factory)
        elif option.default is not MISSING:
            default = option.default
        else:
            default = ...
        definitions[option.name] = (hints[option.name], default)
    return create_model(
        name,
        __config__={"extra": "forbid"},
        **definitions,
    )


def scenario_model() -> type[BaseModel]:
    return options_model(ScenarioOptions, "Scenario")


@dataclass
class Scenario:
    options: ScenarioOptions
    space: MechanicalSpace
    elements: dict[str, GroupElement]
    force_field: ForceField


def build_field(options: FieldOptions, flavor: Flavor) -> ForceField:
    parameters = {k: v for k, v in vars(options).items() if k != "kind"}
    return FIELDS[options.kind](flavor=flavor, **parameters)


def _check_particle(particle: ParticleOptions, options: ScenarioOptions) -> None:
    if particle.frame not in options.frames:
        raise ValidationError(
            f"Particle {particle.name!r} uses undeclared frame {particle.frame!r}"
        )
    for name in ("point", "momentum"):
        values = getattr(particle, name)
        if len(values) != 5:
            raise ValidationError(
                f"Expected 5 coordinates for the {name} of particle "
                f"{particle.name!r} but received {len(values)}"
            )
    m = particle.point[4]
    if abs(m - particle.mass) > 1e-9 * max(1.0, abs(particle.mass)):
        raise ValidationError(
            f"Particle {particle.name!r} has mass {particle.mass} but its initial "
            f"point lies in the hyperplane m = {m}"
        )
    try:
        check_initial_data(options.flavor, particle.point, particle.momentum)
    except BadInitialData as e:
        raise ValidationError(f"Particle {particle.name!r}: {e}") from e


def _build_elements(options: ScenarioOptions) -> dict[str, GroupElement]:
    elements = {}
    for element in options.group_elements:
        if element.family.flavor is not options.flavor:
            raise ValidationError(
                f"Group element {element.name!r} of family {element.family.value} "
                f"does not act on a {options.flavor.value} space"
            )
        try:
            elements[element.name] = element_from_parameters(
                element.family, element.parameters
            )
        except (MembershipViolation, NotInExtendedGroup) as e:
            raise ValidationError(f"Group element {element.name!r}: {e}") from e
    return elements


def validate_scenario(data: Any) -> Scenario:
    """Validate a parsed scenario document and every load-time precondition."""
    try:
        model = scenario_model().model_validate(data or {})
    except pydantic.ValidationError as e:
        raise ValidationError(str(e)) from e
    values = {f.name: getattr(model, f.name) for f in fields(ScenarioOptions)}
    options = ScenarioOptions(**values)
    if options.integration.h <= 0 or options.integration.n < 1:
        raise ValidationError(
            f"Expected h > 0 and n >= 1 but received {options.integration}"
        )
    names = [particle.name for particle in options.particles]
    if len(set(names)) != len(names):
        raise ValidationError(f"Particle names must be unique: {names}")
    for particle in options.particles:
        _check_particle(particle, options)
    for request in options.verifications:
        get_suite(request.suite)
        if not request.masses:
            raise ValidationError(f"Expected at least one mass for {request.suite!r}")
        if request.trials < 1:
            raise ValidationError(
                f"Expected trials >= 1 for {request.suite!r} "
                f"but received {request.trials}"
            )
    return Scenario(
        options,
        MechanicalSpace(options.flavor, options.frames[0], options.oriented),
        _build_elements(options),
        build_field(options.force_field, options.flavor),
    )


def load_scenario(path: Path) -> Scenario:
    """Read and validate a YAML scenario file.

    Raises:
        ParseError: if the file is not valid YAML.
        ValidationError: if a field or precondition is violated.
    """
    return validate_scenario(_load_yaml(path, "scenario"))


def _load_yaml(path: Path, what: str) -> Any:
    yaml = YAML(typ="safe")
    try:
        return yaml.load(Path(path))
    except MarkedYAMLError as e:
        mark = e.problem_mark or e.context_mark
        position = mark.index if mark is not None else 0
        raise ParseError(f"Invalid {what} file {path}: {e.problem}", position) from e


@dataclass
class GroupFileOptions:
    family: GroupFamily
    parameters: list[float]


def load_group_element(path: Path) -> GroupElement:
    """Read a YAML document ``{family, parameters}`` describing one element."""
    try:
        model = options_model(GroupFileOptions, "GroupElement").model_validate(
            _load_yaml(path, "group element")
        )
        return element_from_parameters(model.family, model.parameters)
    except pydantic.ValidationError as e:
        raise ValidationError(str(e)) from e
    except (MembershipViolation, NotInExtendedGroup) as e:
        raise ValidationError(f"Group element in {path}: {e}") from e


def read_vectors(path: Path, frame: str = STANDARD_FRAME) -> list[FiveVector]:
    """Five numbers per line, separated by commas or whitespace.

    Blank lines and ``#`` comments are skipped. A malformed line raises
    `ParseError` positioned at the start of that line.
    """
    vectors = []
    position = 0
    for line in Path(path).read_text().splitlines(keepends=True):
        text = line.split("#", 1)[0].replace(",", " ").split()
        if text:
            try:
                vectors.append(FiveVector([float(v) for v in text], frame))
            except ValueError as e:
                raise ParseError(f"Invalid vector in {path}: {e}", position) from e
        position += len(line)
    return vectors


# Output


def trajectory_table(f: Trajectory, derived: bool = False) -> tuple[str, np.ndarray]:
    """Column names and rows of the CSV form of a trajectory."""
    columns = ["parameter"] + [f"x{i}" for i in range(1, 6)]
    blocks = [f.parameters[:, None], f.points]
    if derived:
        kinematics = derive_kinematics(f)
        for prefix, values in (
            ("p", kinematics.momentum),
            ("v", kinematics.velocity),
            ("F", kinematics.force),
            ("a", kinematics.acceleration),
        ):
            columns += [f"{prefix}{i}" for i in range(1, 6)]
            blocks.append(values)
    return ",".join(columns), np.hstack(blocks)


def write_trajectory(path: Path, f: Trajectory, derived: bool = False) -> None:
    columns, rows = trajectory_table(f, derived)
    header = f"# frame={f.frame} flavor={f.flavor.value}\n{columns}"
    np.savetxt(path, rows, fmt="%.17g", delimiter=",", header=header, comments="")


def _integrate_particle(scenario: Scenario, particle: ParticleOptions) -> Trajectory:
    integration = scenario.options.integration
    logger.info("Integrating %s", particle.name)
    return integrate(
        scenario.force_field,
        FiveVector(particle.point, particle.frame),
        FiveVector(particle.momentum, particle.frame),
        integration.h,
        integration.n,
    )


def integrate_particles(scenario: Scenario) -> list[Trajectory]:
    """Integrate every particle, concurrently unless the field is serial."""
    particles = scenario.options.particles
    if scenario.force_field.serial or len(particles) < 2:
        return [_integrate_particle(scenario, p) for p in particles]
    with ThreadPoolExecutor() as pool:
        return list(pool.map(lambda p: _integrate_particle(scenario, p), particles))


def run_verifications(scenario: Scenario) -> list[VerificationReport]:
    reports = []
    for request in scenario.options.verifications:
        flavor = request.flavor or scenario.options.flavor
        report = None
        for mass in request.masses:
            partial = run_suite(
                request.suite,
                SweepOptions(request.seed, request.trials, mass, flavor),
            )
            report = partial if report is None else report.merge(partial)
        assert report is not None
        reports.append(report)
    return reports


def run_scenario(scenario: Scenario, out_dir: Path) -> bool:
    """Write trajectories, transformed trajectories, reports and a manifest.

    Returns whether every verification passed.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    produced: list[str] = []

    particles = scenario.options.particles
    for particle, f in zip(particles, integrate_particles(scenario), strict=True):
        name = f"{particle.name}.csv"
        write_trajectory(out_dir / name, f, particle.derived)
        produced.append(name)
        for label, g in scenario.elements.items():
            name = f"{particle.name}.{label}.csv"
            write_trajectory(out_dir / name, f.transformed(g), particle.derived)
            produced.append(name)

    passed = True
    used: dict[str, int] = {}
    for report in run_verifications(scenario):
        count = used[report.name] = used.get(report.name, 0) + 1
        name = f"{report.name}.txt" if count == 1 else f"{report.name}.{count}.txt"
        (out_dir / name).write_text(report.render())
        produced.append(name)
        passed = passed and report.passed

    (out_dir / "manifest.txt").write_text("".join(f"{p}\n" for p in produced))
    logger.info("Wrote %d files to %s", len(produced), out_dir)
    return passed
