"""The manifold of timelike lines of a mass hyperplane and its symplectic form.

A line of ``M_m`` is stored as its four-velocity ``v`` and an offset ``q = m y``,
where ``y`` is the canonical point of the line: the point at ``t = 0``
(Newtonian) or the point Lorentz-orthogonal to ``v`` (Einsteinian). Newtonian
charts are ``(w, q)`` with ``v = (w, 1, 0)``; Einsteinian ones are ``(u, q)``
with ``u`` the four-velocity in spacetime coordinates.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Final

import numpy as np

from .datatypes import STANDARD_FRAME, Flavor, FourVelocity
from .einstein_space import four_velocity as einstein_four_velocity
from .einstein_space import minkowski
from .exceptions import (
    MembershipViolation,
    NotTimelike,
    ScaleMismatch,
    TangencyViolation,
    ZeroMass,
)
from .groups import (
    GroupElement,
    GroupFamily,
    factorize_extended,
    sample,
    time_translation,
)
from .measure import KG, KGM, KGS, Quantity, dim_div, dim_pow
from .verification import VerificationReport

logger = logging.getLogger(__name__)

TOL_TANGENT: Final = 1e-10
TOL_ACTION: Final = 1e-6
TOL_EQUIVALENCE: Final = 1e-9
FD_STEP: Final = 1e-4
GRADIENT_STEP: Final = 1e-6

#: Value line of the form: [kgm][m]/[s] with [m] = [kgm]/[kg] and [s] = [kgs]/[kg].
OMEGA_DIM: Final = dim_div(dim_pow(KGM, 2), KGS)


def _dot(flavor: Flavor, a: np.ndarray, b: np.ndarray) -> float:
    match flavor:
        case Flavor.NEWTON:
            return float(a @ b)
        case Flavor.EINSTEIN:
            return minkowski(a, b)


def _readonly(values, size: int) -> np.ndarray:
    array = np.array(values, dtype=float).reshape(size)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LinePoint:
    """A timelike line of ``M_mass``."""

    flavor: Flavor
    mass: Quantity
    velocity: FourVelocity
    offset: np.ndarray
    frame: str = STANDARD_FRAME

    def __post_init__(self):
        m = self.mass.magnitude
        if m == 0.0:
            raise ZeroMass("Lines live in a mass hyperplane with m != 0")
        match self.flavor:
            case Flavor.NEWTON:
                if abs(self.velocity.time - 1.0) > TOL_TANGENT:
                    raise ValueError(
                        f"Expected mt(v) = 1 but received {self.velocity.time}"
                    )
                offset = _readonly(self.offset, 3)
            case Flavor.EINSTEIN:
                u = self.velocity.spacetime
                if abs(minkowski(u, u) + 1.0) > TOL_TANGENT * max(1.0, u[3] ** 2):
                    raise ValueError(f"Expected ||v|| = 1 but received {u}")
                if u[3] <= 0:
                    raise ValueError("Expected a future pointing velocity")
                offset = _readonly(self.offset, 4)
                scale = max(1.0, float(np.max(np.abs(offset)))) * u[3]
                if abs(minkowski(offset, u)) > TOL_TANGENT * scale:
                    raise ValueError("The offset must be orthogonal to the velocity")
        object.__setattr__(self, "offset", offset)

    @property
    def m(self) -> float:
        return self.mass.magnitude

    @property
    def chart(self) -> np.ndarray:
        """Velocity and offset coordinates as one flat array."""
        match self.flavor:
            case Flavor.NEWTON:
                return np.concatenate([self.velocity.spatial, self.offset])
            case Flavor.EINSTEIN:
                return np.concatenate([self.velocity.spacetime, self.offset])

    def points(self) -> np.ndarray:
        """Two points of the line in ``M_m``, at line parameters 0 and 1."""
        m = self.m
        match self.flavor:
            case Flavor.NEWTON:
                start = np.array([*self.offset, 0.0, m])
            case Flavor.EINSTEIN:
                start = np.array([*self.offset, m])
        step = np.zeros(5)
        step[:4] = m * self.velocity.spacetime
        return np.stack([start, start + step])


def line_through(
    flavor: Flavor,
    mass: float,
    event: Sequence[float],
    velocity: Sequence[float],
    frame: str = STANDARD_FRAME,
) -> LinePoint:
    """The line of ``M_mass`` through the space-time ``event`` with the given
    spatial velocity.

    Newtonian velocities are ``w`` in ``v = (w, 1, 0)``; Einsteinian ones are the
    three-velocity of the four-velocity.
    """
    y = np.asarray(event, dtype=float).reshape(4)
    match flavor:
        case Flavor.NEWTON:
            w = np.asarray(velocity, dtype=float).reshape(3)
            return LinePoint(
                flavor,
                Quantity(mass, KG),
                FourVelocity(np.array([*w, 1.0, 0.0]), frame, flavor=flavor),
                mass * (y[:3] - w * y[3]),
                frame,
            )
        case Flavor.EINSTEIN:
            v = einstein_four_velocity(velocity, frame)
            u = v.spacetime
            return LinePoint(
                flavor, Quantity(mass, KG), v, mass * (y + minkowski(y, u) * u), frame
            )


def _from_chart(
    flavor: Flavor, mass: float, chart: np.ndarray, frame: str
) -> LinePoint:
    """Inverse of `LinePoint.chart`, projecting back onto the constraints."""
    match flavor:
        case Flavor.NEWTON:
            velocity = np.array([*chart[:3], 1.0, 0.0])
            offset = chart[3:]
        case Flavor.EINSTEIN:
            u = chart[:4]
            norm = -minkowski(u, u)
            if norm <= 0 or u[3] <= 0:
                raise NotTimelike(f"Expected a future timelike velocity but got {u}")
            u = u / np.sqrt(norm)
            velocity = np.array([*u, 0.0])
            offset = chart[4:] + minkowski(chart[4:], u) * u
    v = FourVelocity(velocity, frame, flavor=flavor)
    return LinePoint(flavor, Quantity(mass, KG), v, offset, frame)


@dataclass(frozen=True, eq=False)
class TangentPair:
    """Tangent vector ``(dv, dq)`` at a line, in the line's chart."""

    dv: np.ndarray
    dq: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dv", np.array(self.dv, dtype=float).reshape(-1))
        object.__setattr__(self, "dq", np.array(self.dq, dtype=float).reshape(-1))

    @classmethod
    def from_chart(cls, x: LinePoint, delta: np.ndarray) -> TangentPair:
        n = 3 if x.flavor is Flavor.NEWTON else 4
        return cls(delta[:n], delta[n:])

    def __add__(self, other: TangentPair) -> TangentPair:
        return TangentPair(self.dv + other.dv, self.dq + other.dq)

    def __mul__(self, factor: float) -> TangentPair:
        return TangentPair(factor * self.dv, factor * self.dq)

    __rmul__ = __mul__


def _check_tangent(x: LinePoint, u: TangentPair) -> None:
    size = 3 if x.flavor is Flavor.NEWTON else 4
    if u.dv.shape != (size,) or u.dq.shape != (size,):
        raise TangencyViolation(
            f"Expected tangent components of size {size} but received "
            f"{u.dv.shape[0]} and {u.dq.shape[0]}"
        )
    if x.flavor is Flavor.EINSTEIN:
        v = x.velocity.spacetime
        residual = abs(minkowski(u.dv, v))
        if residual > TOL_TANGENT * max(1.0, float(np.max(np.abs(u.dv))) * v[3]):
            raise TangencyViolation(
                f"Expected <dv, v> = 0 for a tangent to V(1) but received {residual}"
            )


def omega(x: LinePoint, u1: TangentPair, u2: TangentPair) -> Quantity:
    """``<dv1, dq2> - <dv2, dq1>``.

    >>> x = line_through(Flavor.NEWTON, 1.0, [0, 0, 0, 0], [0, 0, 0])
    >>> e1 = np.array([1.0, 0, 0])
    >>> omega(x, TangentPair(e1, np.zeros(3)), TangentPair(np.zeros(3), e1))
    Quantity(1.0, 'kgs^-1*kgm^2')
    """
    _check_tangent(x, u1)
    _check_tangent(x, u2)
    value = _dot(x.flavor, u1.dv, u2.dq) - _dot(x.flavor, u2.dv, u1.dq)
    return Quantity(value, OMEGA_DIM)


def random_line(
    flavor: Flavor, mass: float, rng: np.random.Generator, frame: str = STANDARD_FRAME
) -> LinePoint:
    event = rng.uniform(-1.0, 1.0, 4)
    match flavor:
        case Flavor.NEWTON:
            velocity = rng.uniform(-1.0, 1.0, 3)
        case Flavor.EINSTEIN:
            direction = rng.normal(size=3)
            velocity = rng.uniform(0.0, 0.8) * direction / np.linalg.norm(direction)
    return line_through(flavor, mass, event, velocity, frame)


def random_tangent(x: LinePoint, rng: np.random.Generator) -> TangentPair:
    """Random tangent vector; Einsteinian ones respect both constraints."""
    match x.flavor:
        case Flavor.NEWTON:
            return TangentPair(rng.normal(size=3), rng.normal(size=3))
        case Flavor.EINSTEIN:
            u = x.velocity.spacetime
            dv = rng.normal(size=4)
            dv = dv + minkowski(dv, u) * u
            dq = rng.normal(size=4)
            dq = dq + (minkowski(dq, u) + minkowski(x.offset, dv)) * u
            return TangentPair(dv, dq)


# Group action


def act_on_line(g: GroupElement, x: LinePoint) -> LinePoint:
    """Image of a line under a (possibly extended) group element.

    The line through the images of two of its points, in canonical form; the
    mass is read off the images so extended elements land in their target
    hyperplane.
    """
    if g.family.flavor is not x.flavor:
        raise MembershipViolation(
            f"Cannot act with {g.family.value} on a {x.flavor.value} line"
        )
    images = g.apply_array(x.points())
    mass = float(images[0, 4])
    places = images[:, :4] / images[:, 4:5]
    start, delta = places[0], places[1] - places[0]
    match x.flavor:
        case Flavor.NEWTON:
            if abs(delta[3]) <= TOL_TANGENT:
                raise NotTimelike(f"Image of the line is not timelike: {delta}")
            w = delta[:3] / delta[3]
            return line_through(x.flavor, mass, start, w, x.frame)
        case Flavor.EINSTEIN:
            norm = -minkowski(delta, delta)
            if norm <= TOL_TANGENT * float(delta @ delta):
                raise NotTimelike(f"Image of the line is not timelike: {delta}")
            u = np.copysign(1.0, delta[3]) * delta / np.sqrt(norm)
            return LinePoint(
                x.flavor,
                Quantity(mass, KG),
                FourVelocity(np.array([*u, 0.0]), x.frame, flavor=x.flavor),
                mass * (start + minkowski(start, u) * u),
                x.frame,
            )


def _curve(x: LinePoint, u: TangentPair, eps: float) -> LinePoint:
    return _from_chart(
        x.flavor,
        x.m,
        x.chart + eps * np.concatenate([u.dv, u.dq]),
        x.frame,
    )


def pushforward(
    f: Callable[[LinePoint], LinePoint], x: LinePoint, u: TangentPair
) -> tuple[LinePoint, TangentPair]:
    """Differential of a map of lines, by Richardson-extrapolated central
    differences."""
    image = f(x)

    def central(eps: float) -> np.ndarray:
        forward = f(_curve(x, u, eps)).chart
        backward = f(_curve(x, u, -eps)).chart
        return (forward - backward) / (2.0 * eps)

    delta = (4.0 * central(FD_STEP / 2.0) - central(FD_STEP)) / 3.0
    tangent = TangentPair.from_chart(image, delta)
    if image.flavor is Flavor.EINSTEIN:
        v = image.velocity.spacetime
        tangent = TangentPair(tangent.dv + minkowski(tangent.dv, v) * v, tangent.dq)
    return image, tangent


def _relative(value: float, reference: float, scale: float) -> float:
    return abs(value - reference) / max(1.0, abs(reference), scale)


def _family(flavor: Flavor) -> GroupFamily:
    return GroupFamily.GALILEI if flavor is Flavor.NEWTON else GroupFamily.POINCARE


def verify_symplectic_action(
    flavor: Flavor, m: float, trials: int, seed: int = 0
) -> VerificationReport:
    """Check that group elements preserve ``omega`` on random lines and tangents."""
    if trials < 1:
        raise ValueError(f"Expected trials >= 1 but received {trials}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        g = sample(_family(flavor), rng, max_rapidity=1.0)
        x = random_line(flavor, m, rng)
        u1, u2 = random_tangent(x, rng), random_tangent(x, rng)
        before = omega(x, u1, u2).magnitude
        image, v1 = pushforward(lambda y: act_on_line(g, y), x, u1)
        _, v2 = pushforward(lambda y: act_on_line(g, y), x, u2)
        after = omega(image, v1, v2).magnitude
        worst = max(worst, _relative(after, before, abs(m)))
    logger.debug("Symplectic action sweep: %d trials, worst %.3e", trials, worst)
    return VerificationReport(
        f"symplectic-{flavor.value}",
        trials,
        worst,
        worst < TOL_ACTION,
        {"mass": float(m)},
    )


# Mass scaling


def value_line_factor(g: GroupElement) -> float:
    """Factor by which an extended element rescales the value line of ``omega``."""
    scale, _ = factorize_extended(g)
    return OMEGA_DIM.scale_factor(**scale.line_factors())


def _mass_factor(g: GroupElement) -> float:
    scale, _ = factorize_extended(g)
    return scale.gamma if scale.flavor is Flavor.NEWTON else scale.beta


def intertwiner(x: LinePoint, m2: float) -> LinePoint:
    """Unit-scale comparison map from ``M_m1`` to ``M_m2``.

    Keeps the velocity and moves the canonical point by the sign of ``m1 m2``;
    it preserves ``omega`` exactly when ``|m1| = |m2|``.
    """
    sign = np.copysign(1.0, x.m * m2)
    return LinePoint(
        x.flavor,
        Quantity(m2, KG),
        x.velocity,
        sign * (m2 / x.m) * x.offset,
        x.frame,
    )


def _intertwiner_ratio(
    flavor: Flavor, m1: float, m2: float, rng: np.random.Generator, trials: int
) -> tuple[float, float]:
    """Largest relative residual and typical ratio of ``omega`` through the
    unit-scale comparison map."""
    worst, ratio = 0.0, 1.0
    for _ in range(trials):
        x = random_line(flavor, m1, rng)
        u1, u2 = random_tangent(x, rng), random_tangent(x, rng)
        before = omega(x, u1, u2).magnitude
        image, v1 = pushforward(lambda y: intertwiner(y, m2), x, u1)
        _, v2 = pushforward(lambda y: intertwiner(y, m2), x, u2)
        after = omega(image, v1, v2).magnitude
        worst = max(worst, _relative(after, before, 0.0))
        if abs(before) > 1e-3:
            ratio = after / before
    return worst, ratio


def equivalence_verdict(
    flavor: Flavor, m1: float, m2: float, trials: int = 20, seed: int = 0
) -> bool:
    """Whether the line manifolds of ``M_m1`` and ``M_m2`` are symplectomorphic,
    decided by measuring the unit-scale comparison map."""
    rng = np.random.default_rng(seed)
    worst, _ = _intertwiner_ratio(flavor, m1, m2, rng, trials)
    return worst < TOL_EQUIVALENCE


def verify_scaling_diagram(
    flavor: Flavor,
    m1: float,
    m2: float,
    gbar: GroupElement,
    trials: int = 100,
    seed: int = 0,
) -> VerificationReport:
    """Check ``omega_2(Tg u, Tg w) = g~ omega_1(u, w)`` for an extended element
    carrying ``M_m1`` to ``M_m2``, and decide equivalence of the two manifolds.

    Raises:
        ScaleMismatch: if ``gbar`` does not send ``m1`` to ``m2``.
    """
    if gbar.family.flavor is not flavor:
        raise MembershipViolation(f"Expected a {flavor.value} element")
    mapped = _mass_factor(gbar) * m1
    if abs(mapped - m2) > 1e-12 * max(1.0, abs(m2)):
        raise ScaleMismatch(f"Expected the element to send m={m1} to {m2} not {mapped}")
    factor = value_line_factor(gbar)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x = random_line(flavor, m1, rng)
        u1, u2 = random_tangent(x, rng), random_tangent(x, rng)
        expected = factor * omega(x, u1, u2).magnitude
        image, v1 = pushforward(lambda y: act_on_line(gbar, y), x, u1)
        _, v2 = pushforward(lambda y: act_on_line(gbar, y), x, u2)
        worst = max(worst, _relative(omega(image, v1, v2).magnitude, expected, 0.0))
    residual, ratio = _intertwiner_ratio(flavor, m1, m2, rng, min(trials, 20))
    return VerificationReport(
        f"scaling-{flavor.value}",
        trials,
        worst,
        worst < TOL_ACTION,
        {
            "m1": float(m1),
            "m2": float(m2),
            "value_line_factor": factor,
            "intertwiner_residual": residual,
            "intertwiner_ratio": ratio,
            "equivalent": residual < TOL_EQUIVALENCE,
        },
    )


# Cotangent chart and Hamiltonians


def cotangent_chart(x: LinePoint) -> np.ndarray:
    """Canonical coordinates ``(v, pi)`` in which ``omega = dv ^ dpi``.

    Newtonian lines use ``(w, q)``. Einsteinian lines use the spatial part ``v``
    of the four-velocity and ``pi = q_s - (q_4 / u_4) v``.
    """
    match x.flavor:
        case Flavor.NEWTON:
            return x.chart
        case Flavor.EINSTEIN:
            u, q = x.velocity.spacetime, x.offset
            return np.concatenate([u[:3], q[:3] - q[3] / u[3] * u[:3]])


def from_cotangent_chart(
    flavor: Flavor, mass: float, z: Sequence[float], frame: str = STANDARD_FRAME
) -> LinePoint:
    z = np.asarray(z, dtype=float).reshape(6)
    match flavor:
        case Flavor.NEWTON:
            return _from_chart(flavor, mass, z, frame)
        case Flavor.EINSTEIN:
            v, pi = z[:3], z[3:]
            u4 = np.sqrt(1.0 + v @ v)
            offset = np.array([*(pi + (pi @ v) * v), u4 * (pi @ v)])
            return _from_chart(flavor, mass, np.concatenate([v, [u4], offset]), frame)


def _chart_basis(x: LinePoint) -> list[TangentPair]:
    """Tangent vectors of the cotangent coordinate directions at ``x``."""
    z = cotangent_chart(x)

    def line(delta: np.ndarray) -> np.ndarray:
        return from_cotangent_chart(x.flavor, x.m, z + delta, x.frame).chart

    basis = []
    for i in range(6):
        e = np.zeros(6)
        e[i] = FD_STEP

        def central(scale: float, e=e) -> np.ndarray:
            return (line(scale * e) - line(-scale * e)) / (2.0 * scale * FD_STEP)

        delta = (4.0 * central(0.5) - central(1.0)) / 3.0
        tangent = TangentPair.from_chart(x, delta)
        if x.flavor is Flavor.EINSTEIN:
            v = x.velocity.spacetime
            tangent = TangentPair(tangent.dv + minkowski(tangent.dv, v) * v, tangent.dq)
        basis.append(tangent)
    return basis


def form_matrix(x: LinePoint) -> np.ndarray:
    """``omega`` at ``x`` in cotangent coordinates."""
    basis = _chart_basis(x)
    return np.array([[omega(x, a, b).magnitude for b in basis] for a in basis])


CANONICAL_FORM: Final = np.block(
    [[np.zeros((3, 3)), np.eye(3)], [-np.eye(3), np.zeros((3, 3))]]
)


def check_nondegenerate(x: LinePoint) -> float:
    """Smallest singular value of the form matrix at ``x``."""
    return float(np.linalg.svd(form_matrix(x), compute_uv=False)[-1])


def _chart_derivative(x: LinePoint, u: TangentPair) -> np.ndarray:
    """Cotangent coordinates of a tangent vector, by extrapolated differences."""

    def central(eps: float) -> np.ndarray:
        forward = cotangent_chart(_curve(x, u, eps))
        backward = cotangent_chart(_curve(x, u, -eps))
        return (forward - backward) / (2.0 * eps)

    return (4.0 * central(FD_STEP / 2.0) - central(FD_STEP)) / 3.0


def verify_cotangent_chart(
    m: float, trials: int, seed: int = 0, flavor: Flavor = Flavor.EINSTEIN
) -> VerificationReport:
    """Check that the cotangent chart pulls the canonical form back to ``omega``
    on random tangent pairs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x = random_line(flavor, m, rng)
        u1, u2 = random_tangent(x, rng), random_tangent(x, rng)
        dz = [_chart_derivative(x, u) for u in (u1, u2)]
        canonical = float(dz[0] @ CANONICAL_FORM @ dz[1])
        worst = max(worst, _relative(canonical, omega(x, u1, u2).magnitude, 0.0))
    return VerificationReport(
        f"cotangent-{flavor.value}", trials, worst, worst < TOL_ACTION, {"mass": m}
    )


Hamiltonian = Callable[[np.ndarray], float]


def hamiltonians(flavor: Flavor, m: float) -> dict[str, Hamiltonian]:
    """Candidate generators of time translation on cotangent coordinates.

    Einsteinian candidates carry the sign of the mass so that lines of negative
    mass are treated like their positive counterparts.
    """
    sign = float(np.copysign(1.0, m))
    match flavor:
        case Flavor.NEWTON:
            return {"newtonian": lambda z: 0.5 * m * float(z[:3] @ z[:3])}
        case Flavor.EINSTEIN:
            return {
                "standard": lambda z: sign
                * float(np.sqrt(m**2 + m**2 * (z[:3] @ z[:3]))),
                "printed": lambda z: sign
                * float(np.sqrt(m**2 + m**2 * (z[:3] @ z[:3]) ** 2)),
            }


def _gradient(H: Hamiltonian, z: np.ndarray) -> np.ndarray:
    grad = np.empty(6)
    for i in range(6):
        e = np.zeros(6)
        e[i] = GRADIENT_STEP
        grad[i] = (H(z + e) - H(z - e)) / (2.0 * GRADIENT_STEP)
    return grad


def hamiltonian_vector_field(
    H: Hamiltonian, flavor: Flavor, mass: float, frame: str = STANDARD_FRAME
) -> Callable[[np.ndarray], np.ndarray]:
    """``X`` with ``omega(X, .) = dH`` in cotangent coordinates."""

    def field(z: np.ndarray) -> np.ndarray:
        Omega = form_matrix(from_cotangent_chart(flavor, mass, z, frame))
        return np.linalg.solve(Omega.T, _gradient(H, z))

    return field


def _flow(X: Callable[[np.ndarray], np.ndarray], z: np.ndarray, h: float, n: int):
    for _ in range(n):
        k1 = X(z)
        k2 = X(z + 0.5 * h * k1)
        k3 = X(z + 0.5 * h * k2)
        k4 = X(z + h * k3)
        z = z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return z


def hamiltonian_flow_check(
    flavor: Flavor,
    m: float,
    frame: str = STANDARD_FRAME,
    h: float = 1e-3,
    n: int = 1000,
    velocity: Sequence[float] = (0.5, 0.0, 0.0),
    event: Sequence[float] = (0.0, 0.0, 0.0, 0.0),
) -> VerificationReport:
    """Compare the Hamiltonian flow for time ``h n`` with the group's time
    translation applied directly to the line.

    Every candidate Hamiltonian is flowed; the report passes when the first
    candidate, the standard one, reproduces the time translation.
    """
    x = line_through(flavor, m, event, velocity, frame)
    duration = h * n
    shift = time_translation(_family(flavor), duration)
    target = cotangent_chart(act_on_line(shift, x))
    deviations = {}
    for name, H in hamiltonians(flavor, m).items():
        X = hamiltonian_vector_field(H, flavor, m, frame)
        z = _flow(X, cotangent_chart(x), h, n)
        deviations[name] = float(np.max(np.abs(z - target)))
        logger.debug("Hamiltonian %s deviates by %.3e", name, deviations[name])
    generator = [name for name, d in deviations.items() if d < TOL_ACTION]
    primary = next(iter(deviations))
    return VerificationReport(
        f"hamiltonian-{flavor.value}",
        n,
        deviations[primary],
        deviations[primary] < TOL_ACTION,
        {
            **{f"deviation_{name}": d for name, d in deviations.items()},
            "generator": ",".join(generator) or "none",
        },
    )
