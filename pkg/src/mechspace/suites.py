"""Built-in verification sweeps, runnable by name from the command line."""

from __future__ import annotations

from dataclasses import fields
from fractions import Fraction

import numpy as np

from . import einstein_space, newton_space
from .datatypes import CausalClass, FiveVector, Flavor, OrbitClass
from .dynamics import Antisymmetric, ZeroField, derive_kinematics, integrate
from .einstein_space import (
    LorentzianPlane,
    SpacelikeSubspaceE,
    cayley_map,
    hyperbolic_distance,
    klein_distance,
    velocity_of_light_residual,
)
from .groups import (
    ETA,
    GalileiScale,
    GroupFamily,
    PoincareScale,
    extend,
    factorize_extended,
    random_lorentz,
    sample,
    sample_scale,
)
from .measure import (
    Dimension,
    Quantity,
    dim_abs,
    dim_div,
    dim_mul,
    dim_pow,
    dim_root,
    format_dimension,
    parse_dimension,
)
from .symplectic import (
    equivalence_verdict,
    hamiltonian_flow_check,
    verify_cotangent_chart,
    verify_scaling_diagram,
    verify_symplectic_action,
)
from .verification import SweepOptions, VerificationReport, verification_suite

TOL_INVARIANCE = 1e-12
TOL_RECONSTRUCTION = 1e-12
TOL_UNIQUENESS = 1e-10
TOL_STRAIGHT = 1e-12
TOL_COVARIANCE = 1e-10
TOL_UNIT_VELOCITY = 1e-8
TOL_ORTHOGONAL_ACCELERATION = 1e-6
TOL_LIGHT = 1e-12
TOL_HYPERBOLIC = 1e-9

POINTS_PER_ELEMENT = 100
#: Rapidity bound of the planes, frames and hyperbola points of the light sweep
LIGHT_RAPIDITY = 1.0
#: Largest rapidity of the ray of four-velocities in the Cayley sweep
CAYLEY_RAPIDITY = 5.0
CAYLEY_RAY_POINTS = 11
MASS_GRID = (1.0, -1.0, 2.0, -2.0, 3.0)


def _family(flavor: Flavor) -> GroupFamily:
    return GroupFamily.GALILEI if flavor is Flavor.NEWTON else GroupFamily.POINCARE


def _orbit_residual(a: OrbitClass | CausalClass, b: OrbitClass | CausalClass) -> float:
    """Relative difference of orbit parameters; infinite for different orbits."""
    if type(a) is not type(b):
        return float("inf")
    worst = 0.0
    for field in fields(a):  # type: ignore
        x, y = getattr(a, field.name), getattr(b, field.name)
        if isinstance(x, Quantity):
            scale = max(1.0, abs(x.magnitude))
            worst = max(worst, abs(x.magnitude - y.magnitude) / scale)
        elif x != y:
            return float("inf")
    return worst


def _newtonian_point(rng: np.random.Generator) -> np.ndarray:
    p = rng.uniform(-2.0, 2.0, 5)
    match rng.integers(4):
        case 0:
            p[3:] = 0.0
        case 1:
            p[4] = 0.0
        case 2:
            p[:] = 0.0
    return p


def _einsteinian_point(rng: np.random.Generator) -> np.ndarray:
    p = np.zeros(5)
    direction = rng.normal(size=3)
    spatial = rng.uniform(0.5, 1.5) * direction / np.linalg.norm(direction)
    sign = rng.choice([-1.0, 1.0])
    match rng.integers(5):
        case 0:
            p[:4] = rng.uniform(-2.0, 2.0, 4)
            p[4] = rng.uniform(0.5, 2.0) * sign
        case 1:
            p[:3] = spatial
            p[3] = sign * np.sqrt(spatial @ spatial + rng.uniform(0.25, 4.0))
        case 2:
            p[:3] = spatial
            p[3] = sign * rng.uniform(0.0, 0.5) * np.linalg.norm(spatial)
        case 3:
            p[:3] = spatial
            p[3] = sign * np.linalg.norm(spatial)
    return p


def _invariance(flavor: Flavor, options: SweepOptions) -> VerificationReport:
    rng = np.random.default_rng(options.seed)
    match flavor:
        case Flavor.NEWTON:
            classify, draw = newton_space.classify_orbit, _newtonian_point
        case Flavor.EINSTEIN:
            classify, draw = einstein_space.classify_causal, _einsteinian_point
    worst = 0.0
    for _ in range(options.trials):
        g = sample(_family(flavor), rng, max_rapidity=1.0)
        for _ in range(POINTS_PER_ELEMENT):
            p = FiveVector(draw(rng))
            worst = max(worst, _orbit_residual(classify(p), classify(g.apply(p))))
    return VerificationReport(
        f"invariance-{flavor.value}",
        options.trials,
        worst,
        worst <= TOL_INVARIANCE,
        {"points_per_element": POINTS_PER_ELEMENT},
    )


@verification_suite("invariance-newton", trials=1000)
def invariance_newton(options: SweepOptions) -> VerificationReport:
    """m, mt and md are invariant under random Galilei elements."""
    return _invariance(Flavor.NEWTON, options)


@verification_suite("invariance-einstein", trials=1000)
def invariance_einstein(options: SweepOptions) -> VerificationReport:
    """m, signed mt, md and the causal class are invariant under random Poincare
    elements."""
    return _invariance(Flavor.EINSTEIN, options)


def _scale_factors(scale: GalileiScale | PoincareScale) -> np.ndarray:
    return np.array(list(scale.line_factors().values()))


@verification_suite("factorization", trials=500)
def factorization(options: SweepOptions) -> VerificationReport:
    """Extended elements factor uniquely as a scale part times a group element."""
    rng = np.random.default_rng(options.seed)
    reconstruction = uniqueness = 0.0
    for flavor in Flavor:
        for _ in range(options.trials):
            scale, g = sample_scale(flavor, rng), sample(_family(flavor), rng)
            gbar = extend(scale, g)
            scale2, g2 = factorize_extended(gbar)
            matrix = gbar.as_matrix()
            rebuilt = extend(scale2, g2).as_matrix()
            reconstruction = max(
                reconstruction,
                float(np.max(np.abs(rebuilt - matrix)) / np.max(np.abs(matrix))),
            )
            uniqueness = max(
                uniqueness,
                float(np.max(np.abs(_scale_factors(scale2) - _scale_factors(scale)))),
                float(np.max(np.abs(g2.as_matrix() - g.as_matrix()))),
            )
    return VerificationReport(
        "factorization",
        2 * options.trials,
        max(reconstruction, uniqueness),
        reconstruction <= TOL_RECONSTRUCTION and uniqueness <= TOL_UNIQUENESS,
        {"reconstruction": reconstruction, "uniqueness": uniqueness},
    )


def _random_exponents(rng: np.random.Generator) -> dict[str, Fraction]:
    return {
        base: Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 7)))
        for base in ("kg", "kgs", "kgm")
    }


def random_dimension(rng: np.random.Generator) -> Dimension:
    """A product of an oriented part and, sometimes, an absolute part."""
    dim = Dimension.from_map(_random_exponents(rng))
    if rng.random() < 0.3:
        dim = dim_mul(dim, dim_abs(Dimension.from_map(_random_exponents(rng))))
    if rng.random() < 0.1:
        dim = dim_abs(dim)
    return dim


@verification_suite("measure", trials=1000)
def measure(options: SweepOptions) -> VerificationReport:
    """Exact identities of the dimension algebra and parser round trips."""
    rng = np.random.default_rng(options.seed)
    failures: dict[str, int] = {
        "cancellation": 0,
        "division": 0,
        "root_of_power": 0,
        "square_oriented": 0,
        "round_trip": 0,
    }
    for _ in range(options.trials):
        v, a, b = (random_dimension(rng) for _ in range(3))
        n = int(rng.integers(1, 7))
        cancelled = dim_mul(a, dim_div(v, a))
        if cancelled.exponents != v.exponents or (
            not (a.absolute or v.absolute) and cancelled != v
        ):
            failures["cancellation"] += 1
        if dim_div(dim_div(v, a), b) != dim_div(v, dim_mul(a, b)):
            failures["division"] += 1
        if dim_root(dim_pow(v, n), n).exponents != v.exponents:
            failures["root_of_power"] += 1
        if not dim_pow(v, 2).oriented:
            failures["square_oriented"] += 1
        if parse_dimension(format_dimension(v)) != v:
            failures["round_trip"] += 1
    total = sum(failures.values())
    return VerificationReport(
        "measure", options.trials, float(total), total == 0, dict(failures)
    )


def _newtonian_dynamics(options: SweepOptions) -> VerificationReport:
    rng = np.random.default_rng(options.seed)
    m, h, n = options.mass, 1e-2, 1000
    field = ZeroField()
    straight = covariance = 0.0
    for _ in range(options.trials):
        x, w, t = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3), rng.uniform(-1, 1)
        f0 = FiveVector(m * np.array([*x, t, 1.0]))
        p0 = FiveVector(m * np.array([*w, 1.0, 0.0]))
        f = integrate(field, f0, p0, h, n)
        line = f0.coords + np.outer(f.parameters - t, p0.coords)
        scale = max(1.0, float(np.max(np.abs(line))))
        straight = max(straight, float(np.max(np.abs(f.points - line))) / scale)

        g = sample(GroupFamily.GALILEI, rng)
        moved = integrate(field, g.apply(f0), g.apply(p0), h, n)
        expected = g.apply_array(f.points)
        scale = max(1.0, float(np.max(np.abs(expected))))
        covariance = max(
            covariance, float(np.max(np.abs(moved.points - expected))) / scale
        )
    return VerificationReport(
        "dynamics-newton",
        options.trials,
        max(straight, covariance),
        straight <= TOL_STRAIGHT and covariance <= TOL_COVARIANCE,
        {"straightness": straight, "covariance": covariance},
    )


def _einsteinian_dynamics(options: SweepOptions) -> VerificationReport:
    rng = np.random.default_rng(options.seed)
    m, h, n = abs(options.mass), 1e-2, 200
    field = Antisymmetric(flavor=Flavor.EINSTEIN, lam=0.5)
    unit = orthogonal = 0.0
    for _ in range(options.trials):
        direction = rng.normal(size=3)
        w = rng.uniform(0.0, 0.8) * direction / np.linalg.norm(direction)
        u = einstein_space.four_velocity(w).coords
        f0 = FiveVector(np.array([*(m * rng.uniform(-1, 1, 4)), m]))
        f = integrate(field, f0, FiveVector(m * u), h, n)
        k = derive_kinematics(f)
        v, a = k.velocity[:, :4], k.acceleration[:, :4]
        norms = np.sqrt(-np.einsum("ij,jk,ik->i", v, ETA, v))
        unit = max(unit, float(np.max(np.abs(norms - 1.0))))
        products = np.einsum("ij,jk,ik->i", a, ETA, v)
        orthogonal = max(orthogonal, float(np.max(np.abs(products))))
    return VerificationReport(
        "dynamics-einstein",
        options.trials,
        max(unit, orthogonal),
        unit <= TOL_UNIT_VELOCITY and orthogonal <= TOL_ORTHOGONAL_ACCELERATION,
        {"unit_velocity": unit, "orthogonal_acceleration": orthogonal},
    )


@verification_suite("dynamics", trials=20)
def dynamics(options: SweepOptions) -> VerificationReport:
    """Free motion is straight and Galilei covariant; relativistic motion keeps
    ``||v|| = 1`` and ``<a, v> = 0``."""
    match options.flavor:
        case Flavor.NEWTON:
            return _newtonian_dynamics(options)
        case Flavor.EINSTEIN:
            return _einsteinian_dynamics(options)


@verification_suite("light")
def light(options: SweepOptions) -> VerificationReport:
    """The reflection construction yields c = 1 in random planes and frames."""
    rng = np.random.default_rng(options.seed)
    worst = 0.0
    for _ in range(options.trials):
        plane = LorentzianPlane.random(rng, LIGHT_RAPIDITY)
        theta = rng.uniform(-LIGHT_RAPIDITY, LIGHT_RAPIDITY)
        worst = max(worst, velocity_of_light_residual(plane, theta))
        conjugated = plane.transformed(random_lorentz(rng, LIGHT_RAPIDITY))
        worst = max(worst, velocity_of_light_residual(conjugated, theta))
    return VerificationReport("light", options.trials, worst, worst < TOL_LIGHT)


@verification_suite("cayley", trials=10_000)
def cayley(options: SweepOptions) -> VerificationReport:
    """Four-velocities map into the open unit ball and hyperbolic distances are
    Lorentz invariant and agree with the ball model."""
    rng = np.random.default_rng(options.seed)
    standard = SpacelikeSubspaceE.standard()
    largest = worst = 0.0
    violations = 0
    rapidities = np.linspace(0.0, CAYLEY_RAPIDITY, CAYLEY_RAY_POINTS)
    for _ in range(options.trials):
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        ray = np.column_stack(
            [np.outer(np.sinh(rapidities), direction), np.cosh(rapidities)]
        )
        norms = np.array(
            [np.linalg.norm(cayley_map(standard, u).magnitude) for u in ray]
        )
        violations += int(np.count_nonzero(np.diff(norms) <= 0.0))
        largest = max(largest, float(norms[-1]))
        E = SpacelikeSubspaceE.from_lorentz(random_lorentz(rng))
        v, w = random_lorentz(rng)[:, 3], random_lorentz(rng)[:, 3]
        largest = max(largest, float(np.linalg.norm(cayley_map(E, v).magnitude)))
        d = hyperbolic_distance(v, w)
        L = random_lorentz(rng)
        ball = klein_distance(
            cayley_map(standard, v).magnitude, cayley_map(standard, w).magnitude
        )
        worst = max(
            worst,
            abs(hyperbolic_distance(L @ v, L @ w) - d) / max(1.0, d),
            abs(ball - d) / max(1.0, d),
        )
    return VerificationReport(
        "cayley",
        options.trials,
        worst,
        largest < 1.0 and worst < TOL_HYPERBOLIC and violations == 0,
        {"max_ball_norm": largest, "monotonicity_violations": violations},
    )


@verification_suite("symplectic", trials=500)
def symplectic(options: SweepOptions) -> VerificationReport:
    """Group elements act symplectically on the manifold of lines."""
    return verify_symplectic_action(
        options.flavor, options.mass, options.trials, options.seed
    )


def _reflection(flavor: Flavor, factor: float) -> GalileiScale | PoincareScale:
    match flavor:
        case Flavor.NEWTON:
            return GalileiScale(gamma=factor)
        case Flavor.EINSTEIN:
            return PoincareScale(beta=factor)


@verification_suite("scaling")
def scaling(options: SweepOptions) -> VerificationReport:
    """Mass scaling squares commute and equivalence holds iff ``|m1| = |m2|``."""
    rng = np.random.default_rng(options.seed)
    m, flavor = options.mass, options.flavor
    report = None
    for factor in (-1.0, 2.0):
        gbar = extend(_reflection(flavor, factor), sample(_family(flavor), rng, 0.5))
        seed = int(rng.integers(2**31))
        partial = verify_scaling_diagram(
            flavor, m, factor * m, gbar, options.trials, seed
        )
        report = partial if report is None else report.merge(partial)
    assert report is not None
    mismatches = sum(
        equivalence_verdict(flavor, m1, m2, seed=options.seed)
        != (abs(m1) == abs(m2))
        for m1 in MASS_GRID
        for m2 in MASS_GRID
    )
    return VerificationReport(
        f"scaling-{flavor.value}",
        report.trials,
        report.max_residual,
        report.passed and mismatches == 0,
        {"verdict_mismatches": mismatches},
    )


@verification_suite("hamiltonian", trials=1)
def hamiltonian(options: SweepOptions) -> VerificationReport:
    """The Hamiltonian flow reproduces the time translation of a moving line."""
    match options.flavor:
        case Flavor.NEWTON:
            velocity = (0.5, 0.0, 0.0)
        case Flavor.EINSTEIN:
            velocity = (float(np.tanh(1.0)), 0.0, 0.0)
    return hamiltonian_flow_check(options.flavor, options.mass, velocity=velocity)


@verification_suite("cotangent")
def cotangent(options: SweepOptions) -> VerificationReport:
    """The cotangent chart pulls the canonical form back to the line form."""
    return verify_cotangent_chart(
        options.mass, options.trials, options.seed, options.flavor
    )

