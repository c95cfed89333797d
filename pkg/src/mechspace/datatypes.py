from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .exceptions import DomainError, FrameMismatch
from .measure import Quantity
from .util import format_float

#: Frame label of the coordinate space itself.
STANDARD_FRAME = "standard"

#: Tolerance of the unit norm of Einsteinian four-velocities.
TOL_UNIT = 1e-9


class Flavor(Enum):
    """Which symmetry group the mechanical space carries."""

    NEWTON = "newton"
    EINSTEIN = "einstein"

    @classmethod
    def parse(cls, value: str | Flavor) -> Flavor:
        """Accept ``newton``/``einstein`` and the short forms ``n``/``e``."""
        if isinstance(value, Flavor):
            return value
        match value.lower():
            case "n" | "newton" | "newtonian":
                return cls.NEWTON
            case "e" | "einstein" | "einsteinian":
                return cls.EINSTEIN
            case _:
                raise ValueError(f"Unknown flavor {value!r}, expected 'n' or 'e'")


def _coords(values, size: int = 5) -> np.ndarray:
    coords = np.array(values, dtype=float).reshape(-1)
    if coords.shape != (size,):
        raise ValueError(f"Expected {size} coordinates but received {coords.shape[0]}")
    if not np.all(np.isfinite(coords)):
        raise ValueError(f"Coordinates must be finite, received {coords}")
    coords.setflags(write=False)
    return coords


@dataclass(frozen=True, eq=False)
class FiveVector:
    """Coordinates of an element of the mechanical space in a named frame.

    Newtonian layout is ``(mx, mt, m)``; Einsteinian layout is ``(mx^mu, m)`` with
    the time component at index 3.
    """

    coords: np.ndarray
    frame: str = STANDARD_FRAME

    def __post_init__(self):
        object.__setattr__(self, "coords", _coords(self.coords))

    @classmethod
    def of(cls, *values: float, frame: str = STANDARD_FRAME) -> FiveVector:
        return cls(np.array(values, dtype=float), frame)

    @property
    def spatial(self) -> np.ndarray:
        return self.coords[:3]

    @property
    def time(self) -> float:
        return float(self.coords[3])

    @property
    def mass(self) -> float:
        return float(self.coords[4])

    @property
    def spacetime(self) -> np.ndarray:
        return self.coords[:4]

    def with_coords(self, coords: np.ndarray) -> FiveVector:
        return FiveVector(coords, self.frame)

    def __add__(self, other: FiveVector) -> FiveVector:
        _same_frame(self, other)
        return FiveVector(self.coords + other.coords, self.frame)

    def __sub__(self, other: FiveVector) -> FiveVector:
        _same_frame(self, other)
        return FiveVector(self.coords - other.coords, self.frame)

    def __mul__(self, scalar: float) -> FiveVector:
        return FiveVector(self.coords * scalar, self.frame)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> FiveVector:
        return FiveVector(self.coords / scalar, self.frame)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiveVector):
            return NotImplemented
        return self.frame == other.frame and bool(
            np.array_equal(self.coords, other.coords)
        )

    __hash__ = None  # type: ignore

    def __repr__(self) -> str:
        return f"FiveVector({self.coords.tolist()}, frame={self.frame!r})"


def _same_frame(a: FiveVector, b: FiveVector) -> None:
    if a.frame != b.frame:
        raise FrameMismatch(f"Frames {a.frame!r} and {b.frame!r} differ")


@dataclass(frozen=True, eq=False)
class Event(FiveVector):
    """Normalized representative ``(x, t, 1)`` of a point of space-time."""

    def __post_init__(self):
        super().__post_init__()
        if self.coords[4] != 1.0:
            raise DomainError(
                f"Expected an event with fifth coordinate 1 but received {self.coords}"
            )


@dataclass(frozen=True, eq=False)
class FourVelocity(FiveVector):
    """Element of ``V(1)``: fifth coordinate exactly 0.

    A Newtonian four-velocity also has fourth coordinate exactly 1; an
    Einsteinian one is a future pointing unit timelike vector. Without a flavor
    only the fifth coordinate is checked.
    """

    flavor: Flavor | None = field(default=None, kw_only=True)

    def __post_init__(self):
        super().__post_init__()
        v = self.coords
        if v[4] != 0.0:
            raise DomainError(
                f"Expected a four-velocity with fifth coordinate 0 but received {v}"
            )
        match self.flavor:
            case Flavor.NEWTON if v[3] != 1.0:
                raise DomainError(
                    f"Expected a Newtonian four-velocity with fourth coordinate 1 "
                    f"but received {v}"
                )
            case Flavor.EINSTEIN:
                square = float(v[3] ** 2 - v[:3] @ v[:3])
                if v[3] <= 0 or abs(square - 1.0) > TOL_UNIT * max(1.0, v[3] ** 2):
                    raise DomainError(
                        f"Expected a future pointing unit timelike vector "
                        f"but received {v}"
                    )


@dataclass(frozen=True)
class MechanicalSpace:
    """The coordinate model of a mechanical space as seen from one frame."""

    flavor: Flavor
    frame: str = STANDARD_FRAME
    #: Oriented Newtonian spaces carry orientations of [kg], [kgs] and E0.
    oriented: bool = False


class Sheet(Enum):
    FUTURE = "future"
    PAST = "past"


# Orbits of the group action on the five-dimensional space. Parameters are
# quantities so that the scale part of an extended element acts on them.


@dataclass(frozen=True)
class HyperplaneM:
    """The hyperplane of constant mass ``m != 0``."""

    m: Quantity


@dataclass(frozen=True)
class HyperplaneE:
    """Newtonian hyperplane of constant mass-time ``mt != 0`` inside ``M0``."""

    mt: Quantity


@dataclass(frozen=True)
class SphereS:
    """Newtonian sphere of constant mass-distance inside ``E0``."""

    md: Quantity


@dataclass(frozen=True)
class HyperboloidH:
    """One sheet of the hyperboloid of constant (signed) mass-time."""

    mt: Quantity
    sheet: Sheet


@dataclass(frozen=True)
class QuadricS:
    """Einsteinian quadric of spacelike vectors with constant mass-distance."""

    md: Quantity


@dataclass(frozen=True)
class LightCone:
    pass


@dataclass(frozen=True)
class Origin:
    pass


OrbitClass = HyperplaneM | HyperplaneE | SphereS | Origin
CausalClass = HyperplaneM | HyperboloidH | QuadricS | LightCone | Origin


def describe_orbit(orbit: OrbitClass | CausalClass) -> str:
    """One line text form, e.g. ``HyperboloidH mt=1 sheet=future``."""
    match orbit:
        case HyperplaneM(m=m):
            return f"HyperplaneM m={format_float(m.magnitude)}"
        case HyperplaneE(mt=mt):
            return f"HyperplaneE mt={format_float(mt.magnitude)}"
        case SphereS(md=md):
            return f"SphereS md={format_float(md.magnitude)}"
        case HyperboloidH(mt=mt, sheet=sheet):
            return f"HyperboloidH mt={format_float(mt.magnitude)} sheet={sheet.value}"
        case QuadricS(md=md):
            return f"QuadricS md={format_float(md.magnitude)}"
        case LightCone():
            return "LightCone"
        case Origin():
            return "Origin"
    raise TypeError(f"Not an orbit class: {orbit!r}")
