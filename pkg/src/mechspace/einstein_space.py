"""Evaluation maps, light cone and Cayley map of the Einsteinian mechanical space.

Coordinates are ``(mx^mu, m)`` with the time component at index 3 and the
Minkowski product of signature (+++-).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
import sys
from typing import TYPE_CHECKING, Final

if sys.version_info >= (3, 11):
    from typing import Self
else:
    from typing_extensions import Self

import numpy as np

from .datatypes import (
    STANDARD_FRAME,
    CausalClass,
    FiveVector,
    FourVelocity,
    Flavor,
    HyperboloidH,
    HyperplaneM,
    LightCone,
    Origin,
    QuadricS,
    Sheet,
)
from .exceptions import DomainError, OnEPlane, OutOfInterval
from .groups import ETA, MAX_RAPIDITY, random_lorentz
from .measure import (
    KG,
    KGM,
    KGS,
    M,
    S,
    SPEED,
    Quantity,
    dim_abs,
    dim_div,
    dim_mul,
    dim_pow,
)
from .util import five_point_derivative

if TYPE_CHECKING:
    from .dynamics import Trajectory

TOL_CLASS: Final = 1e-9
TOL_FRAME: Final = 1e-10

PRODUCT_DIM: Final = dim_pow(KGM, 2)
MT_DIM: Final = KGS
MD_DIM: Final = dim_abs(KGM)
CAYLEY_DIM: Final = dim_div(KGM, dim_abs(KGS))
PROPER_TIME_DIM: Final = dim_abs(S)
REST_ENERGY_DIM: Final = dim_mul(KG, dim_pow(SPEED, 2))


def minkowski(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.asarray(a) @ ETA @ np.asarray(b))


def _spacetime(v: FiveVector | np.ndarray) -> np.ndarray:
    if isinstance(v, FiveVector):
        if abs(v.mass) > TOL_CLASS * max(1.0, float(np.max(np.abs(v.coords)))):
            raise DomainError(f"Expected an element of M0 but {v!r} has mass {v.mass}")
        return np.array(v.spacetime)
    array = np.asarray(v, dtype=float)
    if array.shape != (4,):
        raise DomainError(f"Expected a four-vector but received shape {array.shape}")
    return array


def _product_tolerance(x: np.ndarray) -> float:
    return TOL_CLASS * float(np.max(np.abs(x))) ** 2


def lorentz_product(v: FiveVector, w: FiveVector) -> Quantity:
    """``v1 w1 + v2 w2 + v3 w3 - v4 w4`` on ``M0``, valued in ``[kgm]^2``.

    >>> lorentz_product(FiveVector.of(3, 0, 0, 5, 0), FiveVector.of(3, 0, 0, 5, 0))
    Quantity(-16.0, 'kgm^2')
    """
    return Quantity(minkowski(_spacetime(v), _spacetime(w)), PRODUCT_DIM)


def classify_causal(p: FiveVector) -> CausalClass:
    """Orbit of ``p`` under the Poincare group, including the time sheet."""
    if abs(p.mass) > TOL_CLASS * max(1.0, float(np.max(np.abs(p.coords)))):
        return HyperplaneM(Quantity(p.mass, KG))
    x = np.array(p.spacetime)
    if not np.any(x):
        return Origin()
    square = minkowski(x, x)
    tol = _product_tolerance(x)
    if square < -tol:
        sheet = Sheet.FUTURE if x[3] > 0 else Sheet.PAST
        mt = np.sqrt(-square) * (1.0 if sheet is Sheet.FUTURE else -1.0)
        return HyperboloidH(Quantity(mt, MT_DIM), sheet)
    if square > tol:
        return QuadricS(Quantity(np.sqrt(square), MD_DIM))
    return LightCone()


def eval_m(p: FiveVector) -> Quantity:
    return Quantity(p.mass, KG)


def eval_mt(p: FiveVector) -> Quantity:
    """Signed mass-time of a timelike or lightlike element of ``M0``.

    Future pointing vectors have positive mass-time, lightlike vectors zero.
    """
    x = _spacetime(p)
    square = minkowski(x, x)
    if square > _product_tolerance(x):
        raise DomainError(f"mt is defined on timelike vectors but {p!r} is spacelike")
    magnitude = np.sqrt(max(0.0, -square))
    return Quantity(float(np.copysign(magnitude, x[3])), MT_DIM)


def eval_md(p: FiveVector) -> Quantity:
    """Mass-distance of a spacelike or lightlike element of ``M0``."""
    x = _spacetime(p)
    square = minkowski(x, x)
    if square < -_product_tolerance(x):
        raise DomainError(f"md is defined on spacelike vectors but {p!r} is timelike")
    return Quantity(float(np.sqrt(max(0.0, square))), MD_DIM)


def speed_of_light() -> Quantity:
    """The velocity of light, 1 in every inertial frame."""
    return Quantity(1.0, SPEED)


# Light reflections


@dataclass(frozen=True, eq=False)
class LorentzianPlane:
    """A two-plane of ``M0`` spanned by a unit timelike ``u`` and a unit
    spacelike ``s`` orthogonal to it."""

    u: np.ndarray
    s: np.ndarray

    @classmethod
    def random(
        cls, rng: np.random.Generator, max_rapidity: float = MAX_RAPIDITY
    ) -> Self:
        L = random_lorentz(rng, max_rapidity)
        return cls(L[:, 3], L[:, 0])

    def null_directions(self) -> tuple[np.ndarray, np.ndarray]:
        return (self.u + self.s) / np.sqrt(2.0), (self.u - self.s) / np.sqrt(2.0)

    def reflect(self, v: np.ndarray) -> np.ndarray:
        """Fix the first light line, reverse the second."""
        n1, n2 = self.null_directions()
        # coefficients in the null basis, using <n1, n2> = -1
        a = -minkowski(v, n2)
        b = -minkowski(v, n1)
        return a * n1 - b * n2

    def unit_hyperbola(self, theta: float) -> np.ndarray:
        return np.cosh(theta) * self.u + np.sinh(theta) * self.s

    def transformed(self, A: np.ndarray) -> LorentzianPlane:
        """Image of the plane under ``A = n L``, renormalized."""
        u, s = A @ self.u, A @ self.s
        return LorentzianPlane(
            u / np.sqrt(-minkowski(u, u)), s / np.sqrt(minkowski(s, s))
        )

    def light_velocities(self) -> tuple[float, float]:
        """Velocities of the two light lines measured along ``s`` against ``u``."""
        return tuple(  # type: ignore
            minkowski(n, self.s) / -minkowski(n, self.u) for n in self.null_directions()
        )


def light_reflection(plane: LorentzianPlane, theta: float) -> tuple[float, float]:
    """``(mt(h), md(R h))`` for ``h`` on the unit hyperbola of ``plane``."""
    h = plane.unit_hyperbola(theta)
    reflected = plane.reflect(h)
    mt = float(np.sqrt(-minkowski(h, h)))
    md = float(np.sqrt(max(0.0, minkowski(reflected, reflected))))
    return mt, md


def velocity_of_light_residual(plane: LorentzianPlane, theta: float) -> float:
    """Largest deviation of the reflection construction from ``c = 1``.

    Combines the hyperbola to quadric mapping, the relation ``c1 = -c2`` and the
    frame speed ``|x| / |t|`` of both light lines.
    """
    mt, md = light_reflection(plane, theta)
    c1, c2 = plane.light_velocities()
    speeds = [
        np.linalg.norm(n[:3]) / abs(n[3]) for n in plane.null_directions()
    ]
    return max(
        abs(md - mt),
        abs(c1 + c2),
        abs(abs(c1) - 1.0),
        *(abs(float(v) - 1.0) for v in speeds),
    )


# Distances and proper time


class Separation(Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


@dataclass(frozen=True)
class SpacetimeDistance:
    """Spacelike distances are in ``[m]``, timelike ones in ``|[s]|``."""

    separation: Separation
    value: Quantity


def _event_coords(a: FiveVector) -> np.ndarray:
    if a.mass != 1.0:
        raise DomainError(f"Expected a normalized event but received {a!r}")
    return np.array(a.spacetime)


def spacetime_distance(a: FiveVector, b: FiveVector) -> SpacetimeDistance:
    """Minkowski distance of two events, tagged by their causal relation."""
    d = _event_coords(a) - _event_coords(b)
    square = minkowski(d, d)
    tol = _product_tolerance(d)
    if square > tol:
        return SpacetimeDistance(Separation.SPACELIKE, Quantity(np.sqrt(square), M))
    if square < -tol:
        return SpacetimeDistance(
            Separation.TIMELIKE, Quantity(np.sqrt(-square), PROPER_TIME_DIM)
        )
    return SpacetimeDistance(Separation.LIGHTLIKE, Quantity(0.0, M))


def _check_interval(f: Trajectory, *points: float) -> None:
    lo, hi = float(f.parameters[0]), float(f.parameters[-1])
    slack = 1e-12 * max(1.0, abs(lo), abs(hi))
    for point in points:
        if not lo - slack <= point <= hi + slack:
            raise OutOfInterval(f"Parameter {point} is outside [{lo}, {hi}]")


def proper_time(f: Trajectory, a: float, b: float) -> Quantity:
    """Proper time between two parameters, the parameter being proper time."""
    _check_interval(f, a, b)
    return Quantity(abs(b - a), PROPER_TIME_DIM)


def proper_time_by_quadrature(f: Trajectory, a: float, b: float) -> Quantity:
    """Integral of ``||f'|| / m`` over ``[a, b]`` along the samples."""
    _check_interval(f, a, b)
    velocity = five_point_derivative(f.points[:, :4], f.step)
    squares = np.einsum("ij,jk,ik->i", velocity, ETA, velocity)
    integrand = np.sqrt(np.clip(-squares, 0.0, None)) / abs(f.mass.magnitude)
    steps = 0.5 * (integrand[1:] + integrand[:-1]) * np.diff(f.parameters)
    cumulative = np.concatenate([[0.0], np.cumsum(steps)])
    elapsed = np.interp(b, f.parameters, cumulative) - np.interp(
        a, f.parameters, cumulative
    )
    return Quantity(abs(float(elapsed)), PROPER_TIME_DIM)


# Spacelike subspaces and the Cayley map


@dataclass(frozen=True, eq=False)
class SpacelikeSubspaceE:
    """A Lorentz-orthonormal spacelike triple ``e`` (rows) and the unit future
    timelike ``n`` orthogonal to it."""

    e: np.ndarray
    n: np.ndarray

    def __post_init__(self):
        e = np.array(self.e, dtype=float).reshape(3, 4)
        n = np.array(self.n, dtype=float).reshape(4)
        gram = e @ ETA @ e.T
        tol = TOL_FRAME * max(1.0, float(np.max(np.abs(e))) ** 2)
        if np.max(np.abs(gram - np.eye(3))) > tol:
            raise DomainError(f"Expected an orthonormal spacelike triple:\n{e}")
        if np.max(np.abs(e @ ETA @ n)) > tol or abs(minkowski(n, n) + 1.0) > tol:
            raise DomainError("Expected a unit timelike n orthogonal to the triple")
        if n[3] <= 0:
            raise DomainError("Expected a future pointing n")
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "n", n)

    @classmethod
    def standard(cls) -> SpacelikeSubspaceE:
        return cls(np.eye(4)[:3], np.eye(4)[3])

    @classmethod
    def from_lorentz(cls, L: np.ndarray) -> SpacelikeSubspaceE:
        """The spatial subspace of the frame boosted by ``L``."""
        L = np.asarray(L, dtype=float)
        return cls(L[:, :3].T, L[:, 3])

    def adapted(self, v: FiveVector | np.ndarray) -> tuple[np.ndarray, float]:
        """Coordinates ``(x, t)`` of ``v`` in the frame adapted to this subspace."""
        x = _spacetime(v)
        return self.e @ ETA @ x, -minkowski(x, self.n)


def orthogonal_projections(
    E: SpacelikeSubspaceE, v: FiveVector | np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """``(P_E(v), P_E^perp(v))`` as four-vectors summing to ``v``."""
    x, _ = E.adapted(v)
    along = x @ E.e
    return along, _spacetime(v) - along


def cayley_map(E: SpacelikeSubspaceE, v: FiveVector | np.ndarray) -> Quantity:
    """``P_E(v) / |P_E^perp(v)|`` in E-adapted coordinates; zero maps to zero."""
    x, t = E.adapted(v)
    if not np.any(x) and t == 0.0:
        return Quantity(np.zeros(3), CAYLEY_DIM)
    if abs(t) <= TOL_CLASS * max(1.0, float(np.max(np.abs(x)))):
        raise OnEPlane(f"{v!r} lies in the spacelike subspace")
    return Quantity(x / abs(t), CAYLEY_DIM)


def inverse_cayley_map(E: SpacelikeSubspaceE, w: Sequence[float]) -> FourVelocity:
    """The four-velocity whose Cayley image is ``w``, ``|w| < 1``."""
    w = np.asarray(w, dtype=float)
    norm2 = float(w @ w)
    if norm2 >= 1.0:
        raise DomainError(f"Expected a point of the open unit ball but |w| = {norm2}")
    gamma = 1.0 / np.sqrt(1.0 - norm2)
    return FourVelocity(
        np.append(gamma * (w @ E.e + E.n), 0.0), flavor=Flavor.EINSTEIN
    )


def four_velocity(w: Sequence[float], frame: str = STANDARD_FRAME) -> FourVelocity:
    """Standard frame four-velocity of three-velocity ``w``."""
    v = inverse_cayley_map(SpacelikeSubspaceE.standard(), w)
    return FourVelocity(v.coords, frame, flavor=Flavor.EINSTEIN)


def rapidity(v: FiveVector | np.ndarray) -> float:
    """Rapidity of a unit future timelike vector relative to the standard frame."""
    return float(np.arccosh(max(1.0, _spacetime(v)[3])))


def hyperbolic_distance(
    v: FiveVector | np.ndarray, w: FiveVector | np.ndarray
) -> float:
    """Geodesic distance ``arccosh(-<v, w>)`` on ``V(1)``."""
    return float(np.arccosh(max(1.0, -minkowski(_spacetime(v), _spacetime(w)))))


def klein_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Hyperbolic distance between two points of the open unit ball."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    cosh = (1.0 - a @ b) / np.sqrt((1.0 - a @ a) * (1.0 - b @ b))
    return float(np.arccosh(max(1.0, cosh)))


# Four-momenta


def mass_shell_residual(p: FiveVector | np.ndarray, m: float) -> float:
    x = _spacetime(p)
    return abs(np.sqrt(max(0.0, -minkowski(x, x))) - abs(m))


def rest_energy(p: FiveVector | np.ndarray, m: float) -> Quantity:
    """``||p||^2 / m``, equal to ``m c^2`` on the mass shell."""
    x = _spacetime(p)
    return Quantity(-minkowski(x, x) / m, REST_ENERGY_DIM)
