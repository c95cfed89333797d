import json
import logging
from pathlib import Path
from typing import Annotated

import typer

from . import __version__
from .datatypes import Flavor, describe_orbit
from .einstein_space import classify_causal
from .exceptions import MechSpaceException, ParseError, ValidationError
from .measure import format_dimension, parse_dimension
from .newton_space import classify_orbit
from .scenario import (
    load_group_element,
    load_scenario,
    read_vectors,
    run_scenario,
    scenario_model,
)
from .util import format_vector
from .verification import SweepOptions, get_suite, registered_suites, run_suite

#: Exit code of a scenario or input file that fails to parse or validate
USAGE_ERROR = 2


def _parse_flavor(value: str) -> Flavor:
    try:
        return Flavor.parse(value)
    except ValueError as e:
        raise typer.BadParameter(str(e)) from e


def _print_version(value: bool) -> None:
    if value:
        print(__version__)
        raise typer.Exit()


def _fail(error: MechSpaceException, code: int) -> typer.Exit:
    typer.echo(f"{type(error).__name__}: {error}", err=True)
    return typer.Exit(code)


FlavorOption = Annotated[
    str,
    typer.Option(
        metavar="n|e",
        help="Newtonian (n) or Einsteinian (e) space",
    ),
]


def create_app() -> typer.Typer:
    app = typer.Typer(no_args_is_help=True)

    @app.callback()
    def configure(
        log_level: Annotated[
            str, typer.Option(help="Logging level of the mechspace loggers")
        ] = "WARNING",
        version: Annotated[
            bool,
            typer.Option(
                "--version",
                callback=_print_version,
                is_eager=True,
                help="Print the version and exit",
            ),
        ] = False,
    ):
        logging.basicConfig(level=log_level.upper())

    @app.command(help="Produce json schema for a scenario file")
    def schema():
        print(json.dumps(scenario_model().model_json_schema(), indent=2))

    @app.command(help="Integrate the particles of a scenario and run its sweeps")
    def run(
        scenario: Annotated[
            Path,
            typer.Argument(
                help="A yaml file matching the scenario schema",
                exists=True,
                dir_okay=False,
            ),
        ],
        out: Annotated[
            Path, typer.Option("--out", help="Directory for CSV files and reports")
        ],
    ):
        try:
            loaded = load_scenario(scenario)
        except (ParseError, ValidationError) as e:
            raise _fail(e, USAGE_ERROR) from e
        try:
            passed = run_scenario(loaded, out)
        except MechSpaceException as e:
            raise _fail(e, 1) from e
        if not passed:
            raise typer.Exit(1)

    @app.command(help="Print the orbit of every vector in a file")
    def classify(
        vectors: Annotated[
            Path,
            typer.Argument(
                help="Five numbers per line, comma separated",
                exists=True,
                dir_okay=False,
            ),
        ],
        flavor: FlavorOption = "n",
    ):
        space = _parse_flavor(flavor)
        try:
            points = read_vectors(vectors)
        except ParseError as e:
            raise _fail(e, USAGE_ERROR) from e
        classifier = classify_orbit if space is Flavor.NEWTON else classify_causal
        for p in points:
            print(describe_orbit(classifier(p)))

    @app.command(help="Apply a group element to every vector in a file")
    def transform(
        group: Annotated[
            Path,
            typer.Argument(
                help="A yaml file with family and parameters",
                exists=True,
                dir_okay=False,
            ),
        ],
        vectors: Annotated[
            Path,
            typer.Argument(
                help="Five numbers per line, comma separated",
                exists=True,
                dir_okay=False,
            ),
        ],
        inverse: Annotated[
            bool, typer.Option(help="Apply the inverse element instead")
        ] = False,
    ):
        try:
            g = load_group_element(group)
            points = read_vectors(vectors)
        except (ParseError, ValidationError) as e:
            raise _fail(e, USAGE_ERROR) from e
        if inverse:
            g = g.inverse()
        for p in points:
            print(format_vector(g.apply(p).coords))

    @app.command(help="Run a named verification sweep")
    def verify(
        suite: Annotated[str, typer.Argument(help="Name of the sweep")],
        seed: Annotated[int, typer.Option(help="Seed of the random generator")],
        mass: Annotated[float, typer.Option(help="Mass of the sampled lines")] = 1.0,
        trials: Annotated[
            int | None,
            typer.Option(help="Number of samples, the sweep's own default if omitted"),
        ] = None,
        flavor: FlavorOption = "n",
    ):
        space = _parse_flavor(flavor)
        try:
            if trials is None:
                trials = get_suite(suite).trials
            report = run_suite(suite, SweepOptions(seed, trials, mass, space))
        except ValidationError as e:
            raise _fail(e, USAGE_ERROR) from e
        print(report.render(), end="")
        if not report.passed:
            raise typer.Exit(1)

    @app.command(help="List the registered verification sweeps")
    def suites():
        for name, suite in sorted(registered_suites().items()):
            summary = (suite.docstring or "").split("\n", 1)[0]
            print(f"{name}: {summary}" if summary else name)

    @app.command(help="Print the canonical form of a dimension expression")
    def dims(expression: Annotated[str, typer.Argument(help="e.g. 'kgs/kg'")]):
        try:
            dimension = parse_dimension(expression)
        except ParseError as e:
            raise _fail(e, USAGE_ERROR) from e
        print(format_dimension(dimension))

    @app.command(name="version", help="mechspace version")
    def version_command():
        print(f"mechspace: {__version__}")

    return app
