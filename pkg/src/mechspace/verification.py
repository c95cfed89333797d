"""Registry of named verification sweeps and their reports."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from inspect import Signature, getdoc, signature
from typing import Any

from .datatypes import Flavor
from .exceptions import MechSpaceException, ValidationError
from .util import format_float

logger = logging.getLogger(__name__)

Detail = str | float | int | bool


@dataclass(frozen=True)
class SweepOptions:
    """Inputs shared by every sweep. The seed is mandatory."""

    seed: int
    trials: int = 100
    mass: float = 1.0
    flavor: Flavor = Flavor.NEWTON

    def __post_init__(self):
        if self.trials < 1:
            raise ValidationError(f"Expected trials >= 1 but received {self.trials}")


def _render_value(value: Detail) -> str:
    match value:
        case bool():
            return "true" if value else "false"
        case float():
            return format_float(value)
        case _:
            return str(value)


@dataclass(frozen=True)
class VerificationReport:
    name: str
    trials: int
    max_residual: float
    passed: bool
    details: dict[str, Detail] = field(default_factory=dict)

    def merge(self, other: VerificationReport) -> VerificationReport:
        """Combine two partial sweeps of the same check."""
        return VerificationReport(
            self.name,
            self.trials + other.trials,
            max(self.max_residual, other.max_residual),
            self.passed and other.passed,
            {**self.details, **other.details},
        )

    def render(self) -> str:
        lines = [
            f"suite = {self.name}",
            f"trials = {self.trials}",
            f"max_residual = {_render_value(float(self.max_residual))}",
            f"passed = {_render_value(self.passed)}",
        ]
        lines += [f"{key} = {_render_value(v)}" for key, v in self.details.items()]
        return "\n".join(lines) + "\n"


SuiteCallback = Callable[[SweepOptions], VerificationReport]


class Suite:
    def __init__(self, fn: SuiteCallback, name: str, trials: int = 100) -> None:
        self._docstring = getdoc(fn)

        sig = signature(fn, eval_str=True)
        self._parameters = sig.parameters
        self._return_type = sig.return_annotation
        self._validate(fn)

        if trials < 1:
            raise MechSpaceException(f"Expected trials >= 1 but received {trials}")
        self._fn = fn
        self._name = name
        self._trials = trials

    def _validate(self, fn: SuiteCallback) -> None:
        if self._return_type not in (VerificationReport, Signature.empty):
            raise MechSpaceException("Suite must return a VerificationReport")

        if not len(self._parameters) == 1:
            raise MechSpaceException("Suite must take a single SweepOptions argument")

    @property
    def name(self) -> str:
        return self._name

    @property
    def docstring(self) -> str | None:
        return self._docstring

    @property
    def trials(self) -> int:
        """Acceptance-size number of trials, used when none is requested."""
        return self._trials

    def __call__(self, options: SweepOptions) -> VerificationReport:
        logger.info("Running %s with seed %d", self._name, options.seed)
        report = self._fn(options)
        logger.info(
            "%s finished: max residual %.3e, passed=%s",
            self._name,
            report.max_residual,
            report.passed,
        )
        return report


_SUITES: dict[str, Suite] = {}


def verification_suite(name: str, trials: int = 100) -> Any:
    """Register a sweep under ``name`` for ``mechspace verify``, run with
    ``trials`` samples unless told otherwise."""

    def wrapper(fn):
        if name in _SUITES:
            raise MechSpaceException(f"Suite {name!r} is already registered")
        fn.mechspace_suite = _SUITES[name] = Suite(fn, name, trials)
        return fn

    return wrapper


def registered_suites() -> dict[str, Suite]:
    from . import suites  # noqa: F401

    return dict(_SUITES)


def get_suite(name: str) -> Suite:
    available = registered_suites()
    try:
        return available[name]
    except KeyError:
        raise ValidationError(
            f"Expected one of {sorted(available)} but received suite {name!r}"
        ) from None


def run_suite(name: str, options: SweepOptions) -> VerificationReport:
    return get_suite(name)(options)
