"""Matrix realizations of the Galilei and Poincare groups and their extensions.

Every element is stored as its block parameters; the 5x5 matrix acting on
coordinates is derived on demand. Galilei elements act on ``(mx, mt, m)`` as::

    [[O, v, x],
     [0, 1, t],
     [0, 0, 1]]

and Poincare elements act on ``(mx^mu, m)`` as ``[[L, x], [0, 1]]``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
import sys
from typing import ClassVar, Final

if sys.version_info >= (3, 11):
    from typing import Self
else:
    from typing_extensions import Self

import numpy as np

from .datatypes import FiveVector, Flavor
from .exceptions import MembershipViolation, NotInExtendedGroup

#: Minkowski metric, signature (+++-), time at index 3.
ETA: Final = np.diag([1.0, 1.0, 1.0, -1.0])
TOL_ORTH: Final = 1e-10
TOL_CLASS: Final = 1e-10
MAX_RAPIDITY: Final = 2.0


class GroupFamily(Enum):
    GALILEI = "galilei"
    EXTENDED_GALILEI = "extended-galilei"
    POINCARE = "poincare"
    EXTENDED_POINCARE = "extended-poincare"

    @property
    def flavor(self) -> Flavor:
        if self in (GroupFamily.GALILEI, GroupFamily.EXTENDED_GALILEI):
            return Flavor.NEWTON
        return Flavor.EINSTEIN

    @property
    def extended(self) -> bool:
        return self in (GroupFamily.EXTENDED_GALILEI, GroupFamily.EXTENDED_POINCARE)


class SubgroupTag(Enum):
    """Named subgroups of the Galilei and Poincare lattices."""

    T4 = "T4"
    B = "B"
    SOg = "SOg"
    BT4 = "BT4"
    T3 = "T3"
    BT3 = "BT3"
    SOBT3 = "SOBT3"
    SOB = "SOB"
    L_FULL = "L_full"
    STAB_TIMELIKE = "stab_timelike"
    STAB_SPACELIKE = "stab_spacelike"
    STAB_LIGHTLIKE = "stab_lightlike"
    BOOST = "boost"


#: Tags of the normal subgroups of the Galilei group.
GALILEI_NORMAL_TAGS: Final = frozenset(
    {
        SubgroupTag.T3,
        SubgroupTag.T4,
        SubgroupTag.BT3,
        SubgroupTag.BT4,
        SubgroupTag.SOBT3,
    }
)


def _array(value, shape: tuple[int, ...]) -> np.ndarray:
    array = np.array(value, dtype=float)
    if array.shape != shape:
        array = array.reshape(shape)
    if not np.all(np.isfinite(array)):
        raise MembershipViolation(f"Entries must be finite, received {array}")
    array.setflags(write=False)
    return array


def _inf_norm(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def lorentz_residual(L: np.ndarray) -> float:
    """``max |L^T eta L - eta|``."""
    return _inf_norm(L.T @ ETA @ L - ETA)


def _lorentz_tol(L: np.ndarray, tol: float) -> float:
    return tol * max(1.0, _inf_norm(L) ** 2)


def _check_lorentz(L: np.ndarray, tol: float) -> None:
    residual = lorentz_residual(L)
    if residual > _lorentz_tol(L, tol):
        raise MembershipViolation(
            f"Expected L^T eta L = eta but residual is {residual:.3e}"
        )
    det = float(np.linalg.det(L))
    if abs(det - 1.0) > _lorentz_tol(L, tol) * 4:
        raise MembershipViolation(f"Expected det L = 1 but received {det}")
    if L[3, 3] < 1.0 - _lorentz_tol(L, tol):
        raise MembershipViolation(
            f"Expected an orthochronous L with L44 >= 1 but received {L[3, 3]}"
        )


def _check_rotation(O: np.ndarray, tol: float) -> None:
    residual = _inf_norm(O.T @ O - np.eye(3))
    if residual > tol:
        raise MembershipViolation(f"Expected O^T O = I but residual is {residual:.3e}")
    det = float(np.linalg.det(O))
    if abs(det - 1.0) > tol:
        raise MembershipViolation(f"Expected det O = 1 but received {det}")


def _check_zero(block: np.ndarray, what: str, tol: float) -> None:
    if _inf_norm(block) > tol:
        raise MembershipViolation(f"Expected {what} to vanish but received {block}")


class GroupElement(ABC):
    """Common interface of all group elements."""

    family: ClassVar[GroupFamily]
    n_parameters: ClassVar[int]

    @abstractmethod
    def as_matrix(self) -> np.ndarray:
        """The 5x5 matrix acting on coordinates."""

    @classmethod
    @abstractmethod
    def from_matrix(cls, matrix: np.ndarray) -> Self:
        """Read block parameters back from a matrix, validating membership."""

    @classmethod
    @abstractmethod
    def identity(cls) -> Self: ...

    @abstractmethod
    def inverse(self) -> Self: ...

    @abstractmethod
    def to_parameters(self) -> list[float]:
        """Flat block parameters in declaration order."""

    @classmethod
    @abstractmethod
    def from_parameters(cls, parameters: Sequence[float]) -> Self: ...

    @abstractmethod
    def membership_residual(self) -> float: ...

    @abstractmethod
    def normalized(self) -> Self:
        """Re-orthonormalize the orthogonal part. Never applied implicitly."""

    def compose(self, other: GroupElement) -> Self:
        if type(other) is not type(self):
            raise MembershipViolation(
                f"Cannot compose {self.family.value} with {other.family.value}"
            )
        return type(self).from_matrix(self.as_matrix() @ other.as_matrix())

    def __matmul__(self, other: GroupElement) -> Self:
        return self.compose(other)

    def apply(self, p: FiveVector) -> FiveVector:
        return FiveVector(self.as_matrix() @ p.coords, p.frame)

    def apply_array(self, points: np.ndarray) -> np.ndarray:
        """Act on an ``(N, 5)`` array of coordinates."""
        return np.asarray(points, dtype=float) @ self.as_matrix().T

    @classmethod
    def _check_parameters(cls, parameters: Sequence[float]) -> np.ndarray:
        values = np.asarray(parameters, dtype=float).reshape(-1)
        if values.size != cls.n_parameters:
            raise MembershipViolation(
                f"Expected {cls.n_parameters} parameters for {cls.family.value} "
                f"but received {values.size}"
            )
        return values


def _gram_schmidt(O: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(O)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 2] = -q[:, 2]
    return q


def _eta_dot(a: np.ndarray, b: np.ndarray) -> float:
    return float(a @ ETA @ b)


def _eta_gram_schmidt(L: np.ndarray) -> np.ndarray:
    columns = [np.array(L[:, i], dtype=float) for i in range(4)]
    time = columns[3] / np.sqrt(-_eta_dot(columns[3], columns[3]))
    if time[3] < 0:
        time = -time
    spatial: list[np.ndarray] = []
    for column in columns[:3]:
        c = column + _eta_dot(column, time) * time
        for e in spatial:
            c = c - _eta_dot(c, e) * e
        spatial.append(c / np.sqrt(_eta_dot(c, c)))
    result = np.column_stack([*spatial, time])
    if np.linalg.det(result) < 0:
        result[:, 2] = -result[:, 2]
    return result


@dataclass(frozen=True, eq=False)
class GalileiElement(GroupElement):
    O: np.ndarray
    v: np.ndarray
    x: np.ndarray
    t: float

    family: ClassVar[GroupFamily] = GroupFamily.GALILEI
    n_parameters: ClassVar[int] = 16

    def __post_init__(self):
        object.__setattr__(self, "O", _array(self.O, (3, 3)))
        object.__setattr__(self, "v", _array(self.v, (3,)))
        object.__setattr__(self, "x", _array(self.x, (3,)))
        object.__setattr__(self, "t", float(self.t))
        _check_rotation(self.O, TOL_ORTH)

    def as_matrix(self) -> np.ndarray:
        matrix = np.eye(5)
        matrix[:3, :3] = self.O
        matrix[:3, 3] = self.v
        matrix[:3, 4] = self.x
        matrix[3, 4] = self.t
        return matrix

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> GalileiElement:
        matrix = np.asarray(matrix, dtype=float)
        _check_zero(matrix[3:, :3], "the lower left block", TOL_ORTH)
        expected = np.array([[1.0, matrix[3, 4]], [0.0, 1.0]])
        _check_zero(matrix[3:, 3:] - expected, "the time block offset", TOL_ORTH)
        return cls(matrix[:3, :3], matrix[:3, 3], matrix[:3, 4], matrix[3, 4])

    @classmethod
    def identity(cls) -> GalileiElement:
        return cls(np.eye(3), np.zeros(3), np.zeros(3), 0.0)

    def inverse(self) -> GalileiElement:
        Ot = self.O.T
        return GalileiElement(
            Ot, -Ot @ self.v, -Ot @ (self.x - self.v * self.t), -self.t
        )

    def to_parameters(self) -> list[float]:
        return [*self.O.reshape(-1), *self.v, *self.x, self.t]

    @classmethod
    def from_parameters(cls, parameters: Sequence[float]) -> GalileiElement:
        p = cls._check_parameters(parameters)
        return cls(p[:9].reshape(3, 3), p[9:12], p[12:15], p[15])

    def membership_residual(self) -> float:
        return max(
            _inf_norm(self.O.T @ self.O - np.eye(3)),
            abs(float(np.linalg.det(self.O)) - 1.0),
        )

    def normalized(self) -> GalileiElement:
        return GalileiElement(_gram_schmidt(self.O), self.v, self.x, self.t)


@dataclass(frozen=True, eq=False)
class PoincareElement(GroupElement):
    L: np.ndarray
    x: np.ndarray

    family: ClassVar[GroupFamily] = GroupFamily.POINCARE
    n_parameters: ClassVar[int] = 20

    def __post_init__(self):
        object.__setattr__(self, "L", _array(self.L, (4, 4)))
        object.__setattr__(self, "x", _array(self.x, (4,)))
        _check_lorentz(self.L, TOL_ORTH)

    def as_matrix(self) -> np.ndarray:
        matrix = np.eye(5)
        matrix[:4, :4] = self.L
        matrix[:4, 4] = self.x
        return matrix

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> PoincareElement:
        matrix = np.asarray(matrix, dtype=float)
        _check_zero(matrix[4, :4], "the mass row", TOL_ORTH)
        _check_zero(matrix[4:, 4] - 1.0, "the mass entry minus one", TOL_ORTH)
        return cls(matrix[:4, :4], matrix[:4, 4])

    @classmethod
    def identity(cls) -> PoincareElement:
        return cls(np.eye(4), np.zeros(4))

    def inverse(self) -> PoincareElement:
        L_inv = ETA @ self.L.T @ ETA
        return PoincareElement(L_inv, -L_inv @ self.x)

    def to_parameters(self) -> list[float]:
        return [*self.L.reshape(-1), *self.x]

    @classmethod
    def from_parameters(cls, parameters: Sequence[float]) -> PoincareElement:
        p = cls._check_parameters(parameters)
        return cls(p[:16].reshape(4, 4), p[16:20])

    def membership_residual(self) -> float:
        return lorentz_residual(self.L)

    def normalized(self) -> PoincareElement:
        return PoincareElement(_eta_gram_schmidt(self.L), self.x)


# Scale elements


@dataclass(frozen=True)
class GalileiScale:
    """``diag(alpha, alpha, alpha, beta, gamma)``; rescales [kgm], [kgs], [kg]."""

    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0

    flavor: ClassVar[Flavor] = Flavor.NEWTON

    def __post_init__(self):
        if 0.0 in (self.alpha, self.beta, self.gamma):
            raise NotInExtendedGroup(f"Scale factors must be nonzero: {self}")

    def as_matrix(self) -> np.ndarray:
        return np.diag([self.alpha] * 3 + [self.beta, self.gamma])

    def line_factors(self) -> dict[str, float]:
        return {"kg": self.gamma, "kgs": self.beta, "kgm": self.alpha}

    def as_extended(self) -> ExtendedGalileiElement:
        return ExtendedGalileiElement.from_matrix(self.as_matrix())

    def apply(self, p: FiveVector) -> FiveVector:
        return FiveVector(self.as_matrix() @ p.coords, p.frame)


@dataclass(frozen=True)
class PoincareScale:
    """``diag(alpha, alpha, alpha, alpha, beta)``; rescales [kgm] = [kgs] and [kg]."""

    alpha: float = 1.0
    beta: float = 1.0

    flavor: ClassVar[Flavor] = Flavor.EINSTEIN

    def __post_init__(self):
        if 0.0 in (self.alpha, self.beta):
            raise NotInExtendedGroup(f"Scale factors must be nonzero: {self}")

    def as_matrix(self) -> np.ndarray:
        return np.diag([self.alpha] * 4 + [self.beta])

    def line_factors(self) -> dict[str, float]:
        return {"kg": self.beta, "kgs": self.alpha, "kgm": self.alpha}

    def as_extended(self) -> ExtendedPoincareElement:
        return ExtendedPoincareElement.from_matrix(self.as_matrix())

    def apply(self, p: FiveVector) -> FiveVector:
        return FiveVector(self.as_matrix() @ p.coords, p.frame)


ScaleElement = GalileiScale | PoincareScale


@dataclass(frozen=True, eq=False)
class ExtendedGalileiElement(GroupElement):
    """``[[A, a, b], [0, d, c], [0, 0, e]]`` with ``A A^T = n Id``, ``n > 0``."""

    A: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: float
    d: float
    e: float

    family: ClassVar[GroupFamily] = GroupFamily.EXTENDED_GALILEI
    n_parameters: ClassVar[int] = 18

    def __post_init__(self):
        object.__setattr__(self, "A", _array(self.A, (3, 3)))
        object.__setattr__(self, "a", _array(self.a, (3,)))
        object.__setattr__(self, "b", _array(self.b, (3,)))
        for name in ("c", "d", "e"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.d == 0.0 or self.e == 0.0:
            raise NotInExtendedGroup(
                f"Expected nonzero d and e but received d={self.d}, e={self.e}"
            )
        n = self.n
        if n <= 0.0:
            raise NotInExtendedGroup("Expected A A^T = n Id with n > 0")
        residual = _inf_norm(self.A @ self.A.T - n * np.eye(3))
        if residual > TOL_ORTH * max(1.0, n):
            raise NotInExtendedGroup(
                f"Expected A A^T = n Id but residual is {residual:.3e}"
            )

    @property
    def n(self) -> float:
        return float(np.trace(self.A @ self.A.T) / 3.0)

    def as_matrix(self) -> np.ndarray:
        matrix = np.zeros((5, 5))
        matrix[:3, :3] = self.A
        matrix[:3, 3] = self.a
        matrix[:3, 4] = self.b
        matrix[3, 3] = self.d
        matrix[3, 4] = self.c
        matrix[4, 4] = self.e
        return matrix

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> ExtendedGalileiElement:
        matrix = np.asarray(matrix, dtype=float)
        tol = TOL_ORTH * max(1.0, _inf_norm(matrix))
        if _inf_norm(matrix[3:, :3]) > tol or abs(matrix[4, 3]) > tol:
            raise NotInExtendedGroup(f"Matrix is not block triangular:\n{matrix}")
        return cls(
            matrix[:3, :3],
            matrix[:3, 3],
            matrix[:3, 4],
            matrix[3, 4],
            matrix[3, 3],
            matrix[4, 4],
        )

    @classmethod
    def identity(cls) -> ExtendedGalileiElement:
        return cls.from_matrix(np.eye(5))

    def inverse(self) -> ExtendedGalileiElement:
        scale, g = factorize_extended(self)
        inv_scale = GalileiScale(1 / scale.alpha, 1 / scale.beta, 1 / scale.gamma)
        return ExtendedGalileiElement.from_matrix(
            g.inverse().as_matrix() @ inv_scale.as_matrix()
        )

    def to_parameters(self) -> list[float]:
        return [*self.A.reshape(-1), *self.a, *self.b, self.c, self.d, self.e]

    @classmethod
    def from_parameters(cls, parameters: Sequence[float]) -> ExtendedGalileiElement:
        p = cls._check_parameters(parameters)
        return cls(p[:9].reshape(3, 3), p[9:12], p[12:15], p[15], p[16], p[17])

    def membership_residual(self) -> float:
        return _inf_norm(self.A @ self.A.T - self.n * np.eye(3)) / self.n

    def normalized(self) -> ExtendedGalileiElement:
        scale, g = factorize_extended(self)
        return ExtendedGalileiElement.from_matrix(
            scale.as_matrix() @ g.normalized().as_matrix()
        )


@dataclass(frozen=True, eq=False)
class ExtendedPoincareElement(GroupElement):
    """``[[A, a], [0, b]]`` with ``A = n L``, ``n != 0`` and ``L`` in SO+(3,1)."""

    A: np.ndarray
    a: np.ndarray
    b: float

    family: ClassVar[GroupFamily] = GroupFamily.EXTENDED_POINCARE
    n_parameters: ClassVar[int] = 21

    def __post_init__(self):
        object.__setattr__(self, "A", _array(self.A, (4, 4)))
        object.__setattr__(self, "a", _array(self.a, (4,)))
        object.__setattr__(self, "b", float(self.b))
        if self.b == 0.0:
            raise NotInExtendedGroup("Expected a nonzero mass scale b")
        alpha = self.alpha
        try:
            _check_lorentz(self.A / alpha, TOL_ORTH)
        except MembershipViolation as e:
            raise NotInExtendedGroup(f"A / n is not in SO+(3,1): {e}") from e

    @property
    def alpha(self) -> float:
        """The signed scale ``n`` with ``A / n`` orthochronous."""
        det = float(np.linalg.det(self.A))
        if det <= 0.0 or self.A[3, 3] == 0.0:
            raise NotInExtendedGroup(
                f"Expected det A > 0 and A44 != 0 but received det A = {det}, "
                f"A44 = {self.A[3, 3]}"
            )
        return float(np.copysign(det**0.25, self.A[3, 3]))

    def as_matrix(self) -> np.ndarray:
        matrix = np.zeros((5, 5))
        matrix[:4, :4] = self.A
        matrix[:4, 4] = self.a
        matrix[4, 4] = self.b
        return matrix

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> ExtendedPoincareElement:
        matrix = np.asarray(matrix, dtype=float)
        if _inf_norm(matrix[4, :4]) > TOL_ORTH * max(1.0, _inf_norm(matrix)):
            raise NotInExtendedGroup(f"Matrix is not block triangular:\n{matrix}")
        return cls(matrix[:4, :4], matrix[:4, 4], matrix[4, 4])

    @classmethod
    def identity(cls) -> ExtendedPoincareElement:
        return cls.from_matrix(np.eye(5))

    def inverse(self) -> ExtendedPoincareElement:
        scale, g = factorize_extended(self)
        inv_scale = PoincareScale(1 / scale.alpha, 1 / scale.beta)
        return ExtendedPoincareElement.from_matrix(
            g.inverse().as_matrix() @ inv_scale.as_matrix()
        )

    def to_parameters(self) -> list[float]:
        return [*self.A.reshape(-1), *self.a, self.b]

    @classmethod
    def from_parameters(cls, parameters: Sequence[float]) -> ExtendedPoincareElement:
        p = cls._check_parameters(parameters)
        return cls(p[:16].reshape(4, 4), p[16:20], p[20])

    def membership_residual(self) -> float:
        return lorentz_residual(self.A / self.alpha)

    def normalized(self) -> ExtendedPoincareElement:
        scale, g = factorize_extended(self)
        return ExtendedPoincareElement.from_matrix(
            scale.as_matrix() @ g.normalized().as_matrix()
        )


ExtendedElement = ExtendedGalileiElement | ExtendedPoincareElement

FAMILIES: Final[dict[GroupFamily, type[GroupElement]]] = {
    GroupFamily.GALILEI: GalileiElement,
    GroupFamily.EXTENDED_GALILEI: ExtendedGalileiElement,
    GroupFamily.POINCARE: PoincareElement,
    GroupFamily.EXTENDED_POINCARE: ExtendedPoincareElement,
}


def element_from_parameters(
    family: GroupFamily | str, parameters: Sequence[float]
) -> GroupElement:
    return FAMILIES[GroupFamily(family)].from_parameters(parameters)


def factorize_extended(
    g: GroupElement,
) -> tuple[GalileiScale, GalileiElement] | tuple[PoincareScale, PoincareElement]:
    """Split an extended element uniquely as ``scale . element``.

    >>> scale, g = factorize_extended(
    ...     ExtendedGalileiElement.from_matrix(np.diag([2.0, 2, 2, 3, 5]))
    ... )
    >>> scale
    GalileiScale(alpha=2.0, beta=3.0, gamma=5.0)
    """
    match g:
        case GalileiElement():
            return GalileiScale(), g
        case PoincareElement():
            return PoincareScale(), g
        case ExtendedGalileiElement():
            alpha = float(np.copysign(np.sqrt(g.n), np.linalg.det(g.A)))
            scale = GalileiScale(alpha, g.d, g.e)
            try:
                element = GalileiElement(
                    g.A / alpha, g.a / alpha, g.b / alpha, g.c / g.d
                )
            except MembershipViolation as e:
                raise NotInExtendedGroup(str(e)) from e
            return scale, element
        case ExtendedPoincareElement():
            alpha = g.alpha
            try:
                element = PoincareElement(g.A / alpha, g.a / alpha)
            except MembershipViolation as e:
                raise NotInExtendedGroup(str(e)) from e
            return PoincareScale(alpha, g.b), element
        case _:
            raise NotInExtendedGroup(f"Cannot factorize {g!r}")


def extend(scale: ScaleElement, g: GroupElement) -> ExtendedElement:
    """The extended element ``scale . g``."""
    match scale:
        case GalileiScale():
            return ExtendedGalileiElement.from_matrix(scale.as_matrix() @ g.as_matrix())
        case PoincareScale():
            return ExtendedPoincareElement.from_matrix(
                scale.as_matrix() @ g.as_matrix()
            )


def conjugate(g: GroupElement, n: GroupElement) -> GroupElement:
    """``g n g^-1``."""
    return g.compose(n).compose(g.inverse())


# Named one-parameter subgroups


def galilei_rotation(O: np.ndarray) -> GalileiElement:
    return GalileiElement(O, np.zeros(3), np.zeros(3), 0.0)


def galilei_boost(v: Sequence[float]) -> GalileiElement:
    return GalileiElement(np.eye(3), v, np.zeros(3), 0.0)


def galilei_translation(
    x: Sequence[float] = (0.0, 0.0, 0.0), t: float = 0.0
) -> GalileiElement:
    return GalileiElement(np.eye(3), np.zeros(3), x, t)


def rotation_matrix(axis: Sequence[float], angle: float) -> np.ndarray:
    """Right-handed rotation by ``angle`` about ``axis``."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    K = np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


def lorentz_rotation(O: np.ndarray) -> np.ndarray:
    L = np.eye(4)
    L[:3, :3] = O
    return L


def lorentz_boost(direction: Sequence[float], rapidity: float) -> np.ndarray:
    """Pure boost along ``direction``; maps ``e4`` to ``(sinh r n, cosh r)``."""
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    L = np.eye(4)
    L[:3, :3] += (np.cosh(rapidity) - 1.0) * np.outer(n, n)
    L[:3, 3] = np.sinh(rapidity) * n
    L[3, :3] = np.sinh(rapidity) * n
    L[3, 3] = np.cosh(rapidity)
    return L


def poincare_translation(x: Sequence[float]) -> PoincareElement:
    return PoincareElement(np.eye(4), x)


def time_translation(family: GroupFamily, duration: float) -> GroupElement:
    """Translation by ``duration`` along the time axis of the frame."""
    match family.flavor:
        case Flavor.NEWTON:
            return galilei_translation(t=duration)
        case Flavor.EINSTEIN:
            return poincare_translation([0.0, 0.0, 0.0, duration])


# Sampling


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform rotation from a normalized Gaussian quaternion."""
    q = rng.normal(size=4)
    w, x, y, z = q / np.linalg.norm(q)
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )


def random_lorentz(
    rng: np.random.Generator, max_rapidity: float = MAX_RAPIDITY
) -> np.ndarray:
    rapidity = rng.uniform(-max_rapidity, max_rapidity)
    return (
        lorentz_rotation(random_rotation(rng))
        @ lorentz_boost([1.0, 0.0, 0.0], rapidity)
        @ lorentz_rotation(random_rotation(rng))
    )


def sample(
    family: GroupFamily | str,
    rng: int | np.random.Generator,
    scale: float = 1.0,
    max_rapidity: float = MAX_RAPIDITY,
) -> GroupElement:
    """Draw a random element; deterministic for an integer seed.

    Extended families get a random scale part as in `sample_extended`.
    """
    if scale <= 0:
        raise ValueError(f"Expected a positive sampling scale but received {scale}")
    family = GroupFamily(family)
    rng = np.random.default_rng(rng)
    if family.extended:
        return sample_extended(family, rng, scale, max_rapidity)
    match family.flavor:
        case Flavor.NEWTON:
            return GalileiElement(
                random_rotation(rng),
                rng.uniform(-scale, scale, 3),
                rng.uniform(-scale, scale, 3),
                rng.uniform(-scale, scale),
            )
        case Flavor.EINSTEIN:
            return PoincareElement(
                random_lorentz(rng, max_rapidity), rng.uniform(-scale, scale, 4)
            )


def _random_factor(rng: np.random.Generator) -> float:
    return float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0))


def sample_scale(flavor: Flavor, rng: int | np.random.Generator) -> ScaleElement:
    rng = np.random.default_rng(rng)
    match flavor:
        case Flavor.NEWTON:
            return GalileiScale(
                _random_factor(rng), _random_factor(rng), _random_factor(rng)
            )
        case Flavor.EINSTEIN:
            return PoincareScale(_random_factor(rng), _random_factor(rng))


def sample_extended(
    family: GroupFamily | str,
    rng: int | np.random.Generator,
    scale: float = 1.0,
    max_rapidity: float = MAX_RAPIDITY,
) -> ExtendedElement:
    """Random scale factors of both signs, magnitudes in [0.5, 2], times a random
    group element."""
    flavor = GroupFamily(family).flavor
    rng = np.random.default_rng(rng)
    base = GroupFamily.GALILEI if flavor is Flavor.NEWTON else GroupFamily.POINCARE
    g = sample(base, rng, scale, max_rapidity)
    return extend(sample_scale(flavor, rng), g)


# Subgroup lattice


def _close(a: np.ndarray | float, b: np.ndarray | float, tol: float) -> bool:
    return _inf_norm(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) <= tol


def _galilei_tags(g: GalileiElement, tol: float) -> set[SubgroupTag]:
    O_id = _close(g.O, np.eye(3), tol)
    v0 = _close(g.v, 0.0, tol)
    x0 = _close(g.x, 0.0, tol)
    t0 = abs(g.t) <= tol
    conditions = {
        SubgroupTag.T4: O_id and v0,
        SubgroupTag.T3: O_id and v0 and t0,
        SubgroupTag.B: O_id and x0 and t0,
        SubgroupTag.SOg: v0 and x0 and t0,
        SubgroupTag.BT4: O_id,
        SubgroupTag.BT3: O_id and t0,
        SubgroupTag.SOBT3: t0,
        SubgroupTag.SOB: x0 and t0,
    }
    return {tag for tag, holds in conditions.items() if holds}


def _poincare_tags(g: PoincareElement, tol: float) -> set[SubgroupTag]:
    L = g.L
    tol = tol * max(1.0, _inf_norm(L))
    tags: set[SubgroupTag] = set()
    x0 = _close(g.x, 0.0, tol)
    if _close(L, np.eye(4), tol):
        tags.add(SubgroupTag.T4)
    if x0:
        tags.add(SubgroupTag.L_FULL)
        if _close(L, L.T, tol) and np.all(np.linalg.eigvalsh((L + L.T) / 2) > 0):
            tags.add(SubgroupTag.BOOST)

    # fixed vectors of L in M0
    _, sigma, vt = np.linalg.svd(L - np.eye(4))
    fixed = vt[sigma <= tol].T
    if fixed.shape[1]:
        restricted = np.linalg.eigvalsh(fixed.T @ ETA @ fixed)
        negative = bool(np.any(restricted < -tol))
        positive = bool(np.any(restricted > tol))
        null = bool(np.any(np.abs(restricted) <= tol))
        if negative:
            tags.add(SubgroupTag.STAB_TIMELIKE)
        if positive:
            tags.add(SubgroupTag.STAB_SPACELIKE)
        if null or (negative and positive):
            tags.add(SubgroupTag.STAB_LIGHTLIKE)
    return tags


def classify_subgroup(g: GroupElement, tol: float = TOL_CLASS) -> set[SubgroupTag]:
    """All lattice subgroups containing ``g``.

    Poincare stabilizer tags refer to the action on ``M0``, where translations
    act trivially.
    """
    match g:
        case GalileiElement():
            return _galilei_tags(g, tol)
        case PoincareElement():
            return _poincare_tags(g, tol)
        case _:
            raise MembershipViolation(
                f"Subgroup tags are defined for the Galilei and Poincare groups, "
                f"not {g.family.value}"
            )
