"""Pointlike particles, force fields and equations of motion.

A particle is a sampled curve ``f`` in the hyperplane of its mass. Its
four-momentum is ``p = f'``, its four-velocity ``v = p / m``, the force acting on
it ``F = p'`` and its acceleration ``a = F / m``.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import ClassVar, Final

import numpy as np

from .datatypes import STANDARD_FRAME, FiveVector, Flavor, MechanicalSpace
from .einstein_space import minkowski
from .exceptions import (
    BadInitialData,
    DomainError,
    FieldDomainError,
    FrameMismatch,
    NotOriented,
    OutOfInterval,
    TooFewSamples,
    ZeroMass,
)
from .groups import ETA, GroupElement
from .measure import KG, KGM, VELOCITY, Quantity, dim_mul
from .util import five_point_derivative

logger = logging.getLogger(__name__)

TOL_INITIAL: Final = 1e-9
TOL_TRAJECTORY: Final = 1e-9
TOL_SHELL: Final = 1e-6
TOL_FIELD: Final = 1e-8
MIN_SAMPLES: Final = 5

ANGULAR_MOMENTUM_DIM: Final = dim_mul(KGM, VELOCITY)


def _lorentz_norms(vectors: np.ndarray) -> np.ndarray:
    squares = np.einsum("ij,jk,ik->i", vectors[:, :4], ETA, vectors[:, :4])
    return np.sqrt(np.clip(-squares, 0.0, None))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """A particle sampled at uniformly spaced parameters.

    Newtonian parameters are the time of the sample; Einsteinian ones are proper
    time measured from an arbitrary origin.
    """

    flavor: Flavor
    mass: Quantity
    parameters: np.ndarray
    points: np.ndarray
    frame: str = STANDARD_FRAME
    momenta: np.ndarray | None = None

    def __post_init__(self):
        parameters = np.array(self.parameters, dtype=float).reshape(-1)
        points = np.array(self.points, dtype=float).reshape(-1, 5)
        if parameters.shape[0] != points.shape[0] or parameters.shape[0] == 0:
            raise ValueError(
                f"Expected one point per parameter but received "
                f"{points.shape[0]} points and {parameters.shape[0]} parameters"
            )
        steps = np.diff(parameters)
        if steps.size and (
            np.any(steps <= 0)
            or np.max(np.abs(steps - steps[0])) > 1e-9 * max(1.0, abs(steps[0]))
        ):
            raise ValueError("Trajectory parameters must be increasing and uniform")
        m = self.mass.magnitude
        if m == 0.0:
            raise ZeroMass("A particle must have a nonzero mass")
        if np.max(np.abs(points[:, 4] - m)) > TOL_TRAJECTORY * abs(m):
            raise DomainError(f"Every sample must lie in the mass hyperplane m = {m}")
        match self.flavor:
            case Flavor.NEWTON:
                times = points[:, 3] / points[:, 4]
                scale = np.maximum(1.0, np.abs(parameters))
                if np.any(np.abs(times - parameters) > TOL_TRAJECTORY * scale):
                    raise DomainError(
                        "Newtonian samples must be parametrized by their time"
                    )
            case Flavor.EINSTEIN:
                if points.shape[0] >= MIN_SAMPLES:
                    speed = _lorentz_norms(five_point_derivative(points, steps[0]))
                    drift = float(np.max(np.abs(speed - abs(m))))
                    if drift > TOL_SHELL * abs(m):
                        raise DomainError(
                            f"Einsteinian samples must satisfy ||f'|| = m, "
                            f"deviation is {drift:.3e}"
                        )
        for array in (parameters, points):
            array.setflags(write=False)
        object.__setattr__(self, "parameters", parameters)
        object.__setattr__(self, "points", points)
        if self.momenta is not None:
            momenta = np.array(self.momenta, dtype=float).reshape(points.shape)
            momenta.setflags(write=False)
            object.__setattr__(self, "momenta", momenta)

    @classmethod
    def sample(
        cls,
        flavor: Flavor,
        mass: float,
        path: Callable[[float], Sequence[float]],
        start: float,
        step: float,
        count: int,
        frame: str = STANDARD_FRAME,
    ) -> Trajectory:
        """Sample an analytic path ``parameter -> five-vector``."""
        parameters = start + step * np.arange(count)
        points = np.array([path(float(s)) for s in parameters], dtype=float)
        return cls(flavor, Quantity(mass, KG), parameters, points, frame)

    def __len__(self) -> int:
        return self.parameters.shape[0]

    @property
    def step(self) -> float:
        if len(self) < 2:
            raise TooFewSamples("A single sample has no step")
        return float(self.parameters[1] - self.parameters[0])

    @property
    def interval(self) -> tuple[float, float]:
        return float(self.parameters[0]), float(self.parameters[-1])

    def _locate(self, t: float) -> tuple[int, float]:
        lo, hi = self.interval
        slack = 1e-9 * max(1.0, abs(lo), abs(hi))
        if not lo - slack <= t <= hi + slack:
            raise OutOfInterval(f"Parameter {t} is outside [{lo}, {hi}]")
        if len(self) == 1:
            return 0, 0.0
        position = (min(max(t, lo), hi) - lo) / self.step
        index = min(int(np.floor(position)), len(self) - 2)
        return index, position - index

    def interpolate(self, values: np.ndarray, t: float) -> np.ndarray:
        """Value of a per-sample array at ``t``, linear between samples."""
        index, weight = self._locate(t)
        if weight <= 1e-9:
            return np.array(values[index])
        if weight >= 1.0 - 1e-9:
            return np.array(values[index + 1])
        return (1.0 - weight) * values[index] + weight * values[index + 1]

    def at(self, t: float) -> FiveVector:
        return FiveVector(self.interpolate(self.points, t), self.frame)

    def transformed(self, g: GroupElement) -> Trajectory:
        """Apply a (possibly extended) group element sample-wise.

        Newtonian parameters follow the transformed time; Einsteinian ones are
        rescaled to the proper time of the image.
        """
        matrix = g.as_matrix()
        points = g.apply_array(self.points)
        momenta = None if self.momenta is None else g.apply_array(self.momenta)
        match self.flavor:
            case Flavor.NEWTON:
                parameters = points[:, 3] / points[:, 4]
            case Flavor.EINSTEIN:
                alpha = abs(np.linalg.det(matrix[:4, :4])) ** 0.25
                parameters = self.parameters * alpha / abs(matrix[4, 4])
        if momenta is not None and len(parameters) > 1:
            momenta = momenta * (self.step / (parameters[1] - parameters[0]))
        if len(parameters) > 1 and parameters[1] < parameters[0]:
            parameters, points = parameters[::-1], points[::-1]
            momenta = None if momenta is None else momenta[::-1]
        return Trajectory(
            self.flavor,
            Quantity(float(points[0, 4]), KG),
            parameters,
            points,
            self.frame,
            momenta,
        )


def transform_trajectory(g: GroupElement, f: Trajectory) -> Trajectory:
    return f.transformed(g)


@dataclass(frozen=True, eq=False)
class Kinematics:
    momentum: np.ndarray
    velocity: np.ndarray
    force: np.ndarray
    acceleration: np.ndarray


def derive_kinematics(f: Trajectory) -> Kinematics:
    """Four-momentum, four-velocity, force and acceleration of a sampled particle.

    Derivatives use fourth order stencils, so ``p = m v`` and ``F = m a`` hold
    exactly.

    Raises:
        TooFewSamples: below five samples.
    """
    if len(f) < MIN_SAMPLES:
        raise TooFewSamples(
            f"Expected at least {MIN_SAMPLES} samples but received {len(f)}"
        )
    m = f.mass.magnitude
    p = five_point_derivative(f.points, f.step)
    F = five_point_derivative(p, f.step)
    return Kinematics(p, p / m, F, F / m)


def kinetic_energy(f: Trajectory, kinematics: Kinematics | None = None) -> np.ndarray:
    """Newtonian kinetic energy per sample in the trajectory's frame."""
    kinematics = kinematics or derive_kinematics(f)
    spatial = kinematics.velocity[:, :3]
    return 0.5 * f.mass.magnitude * np.einsum("ij,ij->i", spatial, spatial)


def rest_energy(f: Trajectory, kinematics: Kinematics | None = None) -> np.ndarray:
    """Einsteinian rest energy ``||p||^2 / m`` per sample."""
    kinematics = kinematics or derive_kinematics(f)
    return _lorentz_norms(kinematics.momentum) ** 2 / f.mass.magnitude


# Force fields


@dataclass(frozen=True, kw_only=True)
class ForceField(ABC):
    """Force as a function of position and four-momentum.

    Einsteinian fields must be Lorentz-orthogonal to the momentum. Fields that
    cannot be evaluated concurrently declare ``serial``.
    """

    kind: ClassVar[str]

    flavor: Flavor = Flavor.NEWTON
    serial: bool = False

    @property
    @abstractmethod
    def description(self) -> str: ...

    @abstractmethod
    def force(self, point: np.ndarray, momentum: np.ndarray) -> np.ndarray:
        """Raw force; must raise `FieldDomainError` outside the field's domain."""

    def evaluate(self, point: np.ndarray, momentum: np.ndarray) -> np.ndarray:
        value = np.asarray(self.force(point, momentum), dtype=float).reshape(5)
        if not np.all(np.isfinite(value)):
            raise FieldDomainError(f"{self.description} is not finite at {point}")
        match self.flavor:
            case Flavor.NEWTON:
                space, outside = "E0", float(np.max(np.abs(value[3:])))
            case Flavor.EINSTEIN:
                space, outside = "M0", abs(float(value[4]))
        if outside > TOL_FIELD * max(1.0, float(np.max(np.abs(value)))):
            raise FieldDomainError(
                f"{self.description} is not valued in {space}: {value.tolist()}"
            )
        if self.flavor is Flavor.EINSTEIN:
            orthogonality = abs(minkowski(value[:4], momentum[:4]))
            scale = max(1.0, float(np.max(np.abs(value)) * np.max(np.abs(momentum))))
            if orthogonality > TOL_FIELD * scale:
                raise FieldDomainError(
                    f"{self.description} violates <F, p> = 0 by {orthogonality:.3e}"
                )
        return value

    def _spatial(self, spatial: np.ndarray, momentum: np.ndarray) -> np.ndarray:
        """Embed a spatial force; Einsteinian fields drop the part along ``p``."""
        value = np.zeros(5)
        value[:3] = spatial
        if self.flavor is Flavor.EINSTEIN:
            value[:4] -= minkowski(value[:4], momentum[:4]) / minkowski(
                momentum[:4], momentum[:4]
            ) * momentum[:4]
        return value


def _place(point: np.ndarray) -> np.ndarray:
    return point[:3] / point[4]


@dataclass(frozen=True, kw_only=True)
class ZeroField(ForceField):
    kind: ClassVar[str] = "zero"

    @property
    def description(self) -> str:
        return "zero field"

    def force(self, point: np.ndarray, momentum: np.ndarray) -> np.ndarray:
        return np.zeros(5)


@dataclass(frozen=True, kw_only=True)
class IsotropicOscillator(ForceField):
    """``F = -k x`` towards the spatial origin of the frame."""

    kind: ClassVar[str] = "isotropic-oscillator"
    k: float = 1.0

    @property
    def description(self) -> str:
        return f"isotropic oscillator k={self.k}"

    def force(self, point: np.ndarray, momentum: np.ndarray) -> np.ndarray:
        return self._spatial(-self.k * _place(point), momentum)


@dataclass(frozen=True, kw_only=True)
class InverseSquare(ForceField):
    """``F = -kappa x / |x|^3``; undefined at the centre."""

    kind: ClassVar[str] = "inverse-square"
    kappa: float = 1.0

    @property
    def description(self) -> str:
        return f"inverse square kappa={self.kappa}"

    def force(self, point: np.ndarray, momentum: np.ndarray) -> np.ndarray:
        x = _place(point)
        r = float(np.linalg.norm(x))
        if r == 0.0:
            raise FieldDomainError("The inverse square field is undefined at x = 0")
        return self._spatial(-self.kappa * x / r**3, momentum)


@dataclass(frozen=True, kw_only=True)
class Antisymmetric(ForceField):
    """Magnetic type force ``lam * (p2, -p1, 0, 0, 0)``."""

    kind: ClassVar[str] = "antisymmetric-relativistic"
    lam: float = 1.0

    @property
    def description(self) -> str:
        return f"antisymmetric lambda={self.lam}"

    def force(self, point: np.ndarray, momentum: np.ndarray) -> np.ndarray:
        return self.lam * np.array([momentum[1], -momentum[0], 0.0, 0.0, 0.0])


FIELDS: Final[dict[str, type[ForceField]]] = {
    cls.kind: cls
    for cls in (ZeroField, IsotropicOscillator, InverseSquare, Antisymmetric)
}


# Equations of motion


def _check_newtonian(f0: np.ndarray, p0: np.ndarray) -> float:
    m0 = float(f0[4])
    if m0 == 0.0:
        raise BadInitialData("Initial condition m(f(t0)) != 0 violated")
    if abs(p0[3] - m0) > TOL_INITIAL * abs(m0) or abs(p0[4]) > TOL_INITIAL * abs(m0):
        raise BadInitialData(
            f"Initial condition m0 = mt(f'(t0)) violated: m0 = {m0}, "
            f"f'(t0) = {p0.tolist()}"
        )
    return m0


def _check_einsteinian(f0: np.ndarray, p0: np.ndarray) -> float:
    m0 = float(f0[4])
    if m0 == 0.0:
        raise BadInitialData("Initial point must have a nonzero mass")
    if abs(p0[4]) > TOL_INITIAL * abs(m0):
        raise BadInitialData("Initial momentum must lie in M0")
    norm = float(np.sqrt(max(0.0, -minkowski(p0[:4], p0[:4]))))
    if abs(norm - abs(m0)) > TOL_INITIAL * abs(m0):
        raise BadInitialData(
            f"Mass shell condition ||f'|| = m(f) violated: ||p0|| = {norm}, m = {m0}"
        )
    if p0[3] <= 0:
        raise BadInitialData("Initial momentum must be future pointing")
    return m0


def check_initial_data(
    flavor: Flavor, point: np.ndarray, momentum: np.ndarray
) -> float:
    """Validate initial point and momentum, returning the particle mass.

    Raises:
        BadInitialData: naming the violated condition.
    """
    f0 = np.asarray(point, dtype=float).reshape(5)
    p0 = np.asarray(momentum, dtype=float).reshape(5)
    match flavor:
        case Flavor.NEWTON:
            return _check_newtonian(f0, p0)
        case Flavor.EINSTEIN:
            return _check_einsteinian(f0, p0)


def integrate(
    field: ForceField,
    initial_point: FiveVector,
    initial_momentum: FiveVector,
    h: float,
    n: int,
    t0: float = 0.0,
) -> Trajectory:
    """Solve ``f'' = F(f, f')`` with fixed step fourth order Runge-Kutta.

    Newtonian trajectories start at the time of the initial point; Einsteinian
    ones at proper time ``t0``, and their momentum is renormalized onto the mass
    shell after every step.

    Raises:
        BadInitialData: if the initial data violate the particle constraints.
        FieldDomainError: if the field rejects a visited state.
    """
    if initial_point.frame != initial_momentum.frame:
        raise FrameMismatch("Initial point and momentum are in different frames")
    if h <= 0 or n < 1:
        raise ValueError(f"Expected h > 0 and n >= 1 but received h={h}, n={n}")
    f0 = np.array(initial_point.coords)
    p0 = np.array(initial_momentum.coords)
    m0 = check_initial_data(field.flavor, f0, p0)
    start = float(f0[3] / m0) if field.flavor is Flavor.NEWTON else float(t0)

    logger.debug("Integrating %s for %d steps of %g", field.description, n, h)
    points = np.empty((n + 1, 5))
    momenta = np.empty((n + 1, 5))
    points[0], momenta[0] = f0, p0
    f, p = f0, p0
    for i in range(1, n + 1):
        k1f, k1p = p, field.evaluate(f, p)
        k2f = p + 0.5 * h * k1p
        k2p = field.evaluate(f + 0.5 * h * k1f, k2f)
        k3f = p + 0.5 * h * k2p
        k3p = field.evaluate(f + 0.5 * h * k2f, k3f)
        k4f = p + h * k3p
        k4p = field.evaluate(f + h * k3f, k4f)
        f = f + h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)
        p = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        if field.flavor is Flavor.EINSTEIN:
            p = p * (abs(m0) / np.sqrt(-minkowski(p[:4], p[:4])))
        points[i], momenta[i] = f, p
    logger.debug("Integration finished at parameter %g", start + n * h)

    return Trajectory(
        field.flavor,
        Quantity(m0, KG),
        start + h * np.arange(n + 1),
        points,
        initial_point.frame,
        momenta,
    )


# Systems of particles


@dataclass(frozen=True, eq=False)
class Aggregate:
    center_of_mass: FiveVector
    total_momentum: FiveVector
    #: Only available in oriented spaces.
    internal_angular_momentum: Quantity | None


def _common_frame(fs: Sequence[Trajectory]) -> str:
    if not fs:
        raise ValueError("Expected at least one particle")
    frames = {f.frame for f in fs}
    if len(frames) > 1:
        raise FrameMismatch(f"Particles are given in different frames {sorted(frames)}")
    if any(f.flavor is not Flavor.NEWTON for f in fs):
        raise DomainError("Aggregates are defined for Newtonian particles")
    return fs[0].frame


def internal_angular_momentum(
    fs: Sequence[Trajectory], t: float, space: MechanicalSpace
) -> Quantity:
    """Pairwise sum of ``(m_j f_i - m_i f_j) / (m_i + m_j)`` wedged with the
    relative velocity ``(f_i / m_i - f_j / m_j)'``.

    The wedge is the cross product of the oriented space ``E0``.
    """
    _common_frame(fs)
    if not space.oriented:
        raise NotOriented("Internal angular momentum needs an oriented space")
    points = [f.at(t).coords for f in fs]
    momenta = [f.interpolate(derive_kinematics(f).momentum, t) for f in fs]
    masses = [f.mass.magnitude for f in fs]
    J = np.zeros(3)
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            mi, mj = masses[i], masses[j]
            lever = (mj * points[i] - mi * points[j]) / (mi + mj)
            relative = momenta[i] / mi - momenta[j] / mj
            J += np.cross(lever[:3], relative[:3])
    return Quantity(J, ANGULAR_MOMENTUM_DIM)


def aggregate(
    fs: Sequence[Trajectory],
    t: float,
    space: MechanicalSpace | None = None,
) -> Aggregate:
    """Center of mass, total momentum and, in oriented spaces, internal angular
    momentum of a system of Newtonian particles at parameter ``t``."""
    frame = _common_frame(fs)
    center = np.sum([f.at(t).coords for f in fs], axis=0)
    momentum = np.sum(
        [f.interpolate(derive_kinematics(f).momentum, t) for f in fs], axis=0
    )
    J = None
    if space is not None and space.oriented:
        J = internal_angular_momentum(fs, t, space)
    return Aggregate(FiveVector(center, frame), FiveVector(momentum, frame), J)
