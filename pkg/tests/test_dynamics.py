from dataclasses import dataclass
from typing import ClassVar

import numpy as np
import pytest

from mechspace.datatypes import FiveVector, Flavor, MechanicalSpace
from mechspace.dynamics import (
    FIELDS,
    Antisymmetric,
    ForceField,
    InverseSquare,
    IsotropicOscillator,
    Trajectory,
    ZeroField,
    aggregate,
    check_initial_data,
    derive_kinematics,
    integrate,
    internal_angular_momentum,
    kinetic_energy,
    rest_energy,
)
from mechspace.einstein_space import four_velocity, minkowski
from mechspace.exceptions import (
    BadInitialData,
    DomainError,
    FieldDomainError,
    FrameMismatch,
    NotOriented,
    OutOfInterval,
    TooFewSamples,
    ZeroMass,
)
from mechspace.groups import (
    GalileiScale,
    GroupFamily,
    galilei_translation,
    sample,
)
from mechspace.measure import KG, Quantity

ORIENTED = MechanicalSpace(Flavor.NEWTON, oriented=True)
ORIGIN = FiveVector.of(0, 0, 0, 0, 1)
AT_REST = FiveVector.of(0, 0, 0, 1, 0)


@dataclass(frozen=True, kw_only=True)
class TimelikePush(ForceField):
    kind: ClassVar[str] = "timelike-push"

    @property
    def description(self) -> str:
        return "timelike push"

    def force(self, point: np.ndarray, momentum: np.ndarray) -> np.ndarray:
        return np.array([0.0, 0.0, 0.0, 1.0, 0.0])


@dataclass(frozen=True, kw_only=True)
class Singular(ForceField):
    kind: ClassVar[str] = "singular"

    @property
    def description(self) -> str:
        return "singular"

    def force(self, point: np.ndarray, momentum: np.ndarray) -> np.ndarray:
        return np.full(5, np.nan)


def uniform_motion(x0, w, mass: float = 1.0, start: float = -0.2, count: int = 5):
    def path(t: float) -> list[float]:
        return [*(mass * (np.asarray(x0) + t * np.asarray(w))), mass * t, mass]

    return Trajectory.sample(Flavor.NEWTON, mass, path, start, 0.1, count)


def test_field_registry():
    assert set(FIELDS) == {
        "zero",
        "isotropic-oscillator",
        "inverse-square",
        "antisymmetric-relativistic",
    }


def test_free_particle_moves_on_a_straight_line():
    f0 = FiveVector.of(2, 4, 6, 0, 2)
    p0 = FiveVector.of(2, 0, -1, 2, 0)
    f = integrate(ZeroField(), f0, p0, 0.1, 1000)
    assert len(f) == 1001
    assert f.interval == pytest.approx((0.0, 100.0))
    line = f0.coords + np.outer(f.parameters, p0.coords)
    np.testing.assert_allclose(f.points, line, rtol=1e-12, atol=1e-9)
    np.testing.assert_allclose(f.momenta, np.tile(p0.coords, (1001, 1)))


def test_newtonian_integration_starts_at_the_time_of_the_point():
    f0, p0 = FiveVector.of(0, 0, 0, 3, 2), FiveVector.of(0, 0, 0, 2, 0)
    f = integrate(ZeroField(), f0, p0, 0.5, 4)
    np.testing.assert_allclose(f.parameters, [1.5, 2.0, 2.5, 3.0, 3.5])


def test_free_motion_is_galilei_covariant(rng):
    f0 = FiveVector.of(1, -1, 0.5, 0.2, 1)
    p0 = FiveVector.of(0.3, 0.2, -0.1, 1, 0)
    f = integrate(ZeroField(), f0, p0, 0.01, 200)
    for _ in range(10):
        g = sample(GroupFamily.GALILEI, rng)
        moved = integrate(ZeroField(), g.apply(f0), g.apply(p0), 0.01, 200)
        expected = g.apply_array(f.points)
        scale = max(1.0, float(np.max(np.abs(expected))))
        assert np.max(np.abs(moved.points - expected)) <= 1e-10 * scale


def test_isotropic_oscillator():
    f0 = FiveVector.of(1, 0, 0, 0, 1)
    p0 = FiveVector.of(0, 0, 0, 1, 0)
    f = integrate(IsotropicOscillator(k=1.0), f0, p0, 0.01, 629)
    np.testing.assert_allclose(f.points[:, 0], np.cos(f.parameters), atol=1e-6)
    np.testing.assert_allclose(f.points[:, 1:3], 0.0)
    np.testing.assert_allclose(f.points[:, 3], f.parameters, atol=1e-12)
    np.testing.assert_allclose(f.momenta[:, 3], 1.0)


def test_relativistic_charge_keeps_its_mass_shell():
    m = 2.0
    p0 = FiveVector([*(m * four_velocity([0.6, 0.0, 0.0]).coords[:4]), 0.0])
    field = Antisymmetric(flavor=Flavor.EINSTEIN, lam=0.5)
    f = integrate(field, FiveVector.of(0, 0, 0, 0, m), p0, 0.01, 300, t0=1.0)
    assert f.parameters[0] == 1.0
    norms = np.sqrt([-minkowski(p[:4], p[:4]) for p in f.momenta])
    np.testing.assert_allclose(norms, m, rtol=1e-12)
    speeds = np.linalg.norm(f.momenta[:, :3], axis=1)
    np.testing.assert_allclose(speeds, speeds[0], rtol=1e-8)
    for point, p in zip(f.points, f.momenta, strict=True):
        assert abs(minkowski(field.evaluate(point, p)[:4], p[:4])) < 1e-12


@pytest.mark.parametrize(
    "flavor, point, momentum, message",
    [
        (Flavor.NEWTON, [0, 0, 0, 0, 1], [1, 0, 0, 2, 0], "m0 = mt"),
        (Flavor.NEWTON, [0, 0, 0, 0, 0], [1, 0, 0, 0, 0], "m\\(f\\(t0\\)\\)"),
        (Flavor.EINSTEIN, [0, 0, 0, 0, 1], [0, 0, 0, 2, 0], "Mass shell"),
        (Flavor.EINSTEIN, [0, 0, 0, 0, 1], [0, 0, 0, -1, 0], "future"),
        (Flavor.EINSTEIN, [0, 0, 0, 0, 1], [0, 0, 0, 1, 1], "M0"),
    ],
)
def test_initial_data_is_checked(flavor, point, momentum, message):
    with pytest.raises(BadInitialData, match=message):
        check_initial_data(flavor, np.array(point), np.array(momentum))


def test_integrate_rejects_bad_steps():
    with pytest.raises(ValueError, match="h > 0"):
        integrate(ZeroField(), ORIGIN, AT_REST, 0.0, 5)


def test_integrate_rejects_mixed_frames():
    with pytest.raises(FrameMismatch):
        integrate(
            ZeroField(),
            FiveVector.of(0, 0, 0, 0, 1, frame="lab"),
            FiveVector.of(0, 0, 0, 1, 0),
            0.1,
            5,
        )


def test_inverse_square_is_undefined_at_its_centre():
    with pytest.raises(FieldDomainError, match="x = 0"):
        integrate(InverseSquare(kappa=1.0), ORIGIN, AT_REST, 0.1, 5)


def test_relativistic_forces_must_be_orthogonal_to_the_momentum():
    with pytest.raises(FieldDomainError, match="<F, p> = 0"):
        integrate(TimelikePush(flavor=Flavor.EINSTEIN), ORIGIN, AT_REST, 0.1, 5)


def test_forces_must_be_finite():
    with pytest.raises(FieldDomainError, match="not finite"):
        Singular().evaluate(np.zeros(5), np.zeros(5))


def test_spatial_forces_are_projected_in_einstein_space():
    field = IsotropicOscillator(flavor=Flavor.EINSTEIN, k=2.0)
    p = 3.0 * four_velocity([0.0, 0.5, 0.0]).coords
    force = field.evaluate(np.array([1.0, 1.0, 0.0, 0.0, 1.0]), p)
    assert minkowski(force[:4], p[:4]) == pytest.approx(0.0, abs=1e-12)


def test_kinematics_of_uniform_acceleration():
    m, a = 2.0, np.array([0.0, 0.0, -9.8])
    w = np.array([1.0, 0.5, 3.0])

    def path(t: float) -> list[float]:
        return [*(m * (w * t + 0.5 * a * t**2)), m * t, m]

    f = Trajectory.sample(Flavor.NEWTON, m, path, 0.0, 0.05, 21)
    k = derive_kinematics(f)
    t = f.parameters[:, None]
    np.testing.assert_allclose(k.velocity[:, :3], w + a * t, atol=1e-9)
    np.testing.assert_allclose(k.velocity[:, 3], 1.0, atol=1e-9)
    np.testing.assert_allclose(k.momentum, m * k.velocity)
    np.testing.assert_allclose(k.acceleration[:, :3], np.tile(a, (21, 1)), atol=1e-7)
    np.testing.assert_allclose(k.force, m * k.acceleration)
    energy = kinetic_energy(f, k)
    np.testing.assert_allclose(
        energy, 0.5 * m * np.sum((w + a * t) ** 2, axis=1), rtol=1e-9
    )


def test_rest_energy_of_a_relativistic_particle():
    m = 3.0
    u = four_velocity([0.0, 0.0, 0.8]).coords
    f = Trajectory.sample(
        Flavor.EINSTEIN, m, lambda s: [*(m * s * u[:4]), m], 0.0, 0.1, 10
    )
    np.testing.assert_allclose(rest_energy(f), m, rtol=1e-9)


def test_kinematics_need_five_samples():
    with pytest.raises(TooFewSamples):
        derive_kinematics(uniform_motion([0, 0, 0], [1, 0, 0], count=4))


def test_trajectory_validation():
    with pytest.raises(ZeroMass):
        Trajectory(Flavor.NEWTON, Quantity(0.0, KG), [0.0], [[0, 0, 0, 0, 0]])
    with pytest.raises(DomainError, match="mass hyperplane"):
        Trajectory(Flavor.NEWTON, Quantity(1.0, KG), [0.0], [[0, 0, 0, 0, 2]])
    with pytest.raises(DomainError, match="parametrized by their time"):
        Trajectory(Flavor.NEWTON, Quantity(1.0, KG), [1.0], [[0, 0, 0, 0, 1]])
    with pytest.raises(ValueError, match="uniform"):
        Trajectory(
            Flavor.NEWTON,
            Quantity(1.0, KG),
            [0.0, 1.0, 3.0],
            [[0, 0, 0, 0, 1], [0, 0, 0, 1, 1], [0, 0, 0, 3, 1]],
        )


def test_trajectory_lookup():
    f = uniform_motion([0, 0, 0], [1, 0, 0])
    np.testing.assert_allclose(f.at(0.05).coords, [0.05, 0, 0, 0.05, 1])
    np.testing.assert_allclose(f.at(-0.2).coords, [-0.2, 0, 0, -0.2, 1])
    with pytest.raises(OutOfInterval):
        f.at(0.3)


def test_translated_trajectory_follows_the_new_time():
    f = uniform_motion([0, 0, 0], [1, 0, 0])
    moved = f.transformed(galilei_translation([1.0, 0.0, 0.0], 0.5))
    np.testing.assert_allclose(moved.parameters, f.parameters + 0.5)
    np.testing.assert_allclose(moved.points[:, 0], f.points[:, 0] + 1.0)


def test_time_reversal_keeps_parameters_increasing():
    f = uniform_motion([0, 0, 0], [1, 0, 0], start=0.0)
    reversed_f = f.transformed(GalileiScale(beta=-1.0).as_extended())
    np.testing.assert_allclose(reversed_f.parameters, -f.parameters[::-1])
    np.testing.assert_allclose(reversed_f.points[0], [0.4, 0, 0, -0.4, 1])


def test_time_scaling_rescales_momenta():
    f = integrate(
        ZeroField(), FiveVector.of(0, 0, 0, 0, 2), FiveVector.of(2, 0, 0, 2, 0), 0.1, 10
    )
    slow = f.transformed(GalileiScale(beta=2.0).as_extended())
    assert slow.step == pytest.approx(0.2)
    np.testing.assert_allclose(slow.momenta[:, 0], 1.0)
    np.testing.assert_allclose(slow.momenta[:, 3], 2.0)


def two_orbiting_masses() -> list[Trajectory]:
    return [
        uniform_motion([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
        uniform_motion([-1.0, 0.0, 0.0], [0.0, -1.0, 0.0]),
    ]


def test_aggregate():
    result = aggregate(two_orbiting_masses(), 0.0, ORIENTED)
    np.testing.assert_allclose(result.center_of_mass.coords, 2 * ORIGIN.coords)
    np.testing.assert_allclose(
        result.total_momentum.coords, 2 * AT_REST.coords, atol=1e-12
    )
    assert result.internal_angular_momentum is not None
    np.testing.assert_allclose(
        result.internal_angular_momentum.magnitude, [0, 0, 2], atol=1e-12
    )


def test_angular_momentum_needs_an_orientation():
    fs = two_orbiting_masses()
    assert aggregate(fs, 0.0).internal_angular_momentum is None
    with pytest.raises(NotOriented):
        internal_angular_momentum(fs, 0.0, MechanicalSpace(Flavor.NEWTON))


def test_aggregate_rejects_mixed_frames():
    f = uniform_motion([0, 0, 0], [0, 0, 0])
    g = Trajectory(Flavor.NEWTON, f.mass, f.parameters, f.points, frame="lab")
    with pytest.raises(FrameMismatch):
        aggregate([f, g], 0.0)


def test_relativistic_charge_has_unit_velocity_and_orthogonal_acceleration():
    m = 2.0
    p0 = FiveVector(m * four_velocity([0.6, 0.0, 0.0]).coords)
    field = Antisymmetric(flavor=Flavor.EINSTEIN, lam=0.5)
    f = integrate(field, FiveVector.of(0, 0, 0, 0, m), p0, 0.01, 300)
    k = derive_kinematics(f)
    v, a = k.velocity[:, :4], k.acceleration[:, :4]
    norms = np.sqrt([-minkowski(u, u) for u in v])
    assert np.max(np.abs(norms - 1.0)) < 1e-8
    assert max(abs(minkowski(b, u)) for b, u in zip(a, v, strict=True)) < 1e-6


def test_angular_momentum_of_a_circular_orbit_is_conserved():
    m1, m2 = 1.0, 2.0

    def orbit(mass: float, arm: float):
        def path(t: float) -> list[float]:
            d = np.array([np.cos(t), np.sin(t), 0.0])
            return [*(mass * arm * d), mass * t, mass]

        return Trajectory.sample(
            Flavor.NEWTON, mass, path, 0.0, 2 * np.pi / 1000, 1001
        )

    fs = [orbit(m1, 2.0 / 3.0), orbit(m2, -1.0 / 3.0)]
    for t in fs[0].parameters[::50]:
        J = internal_angular_momentum(fs, float(t), ORIENTED)
        np.testing.assert_allclose(J.magnitude, [0.0, 0.0, 2.0 / 3.0], atol=1e-8)


@dataclass(frozen=True, kw_only=True)
class MassLeak(ForceField):
    kind: ClassVar[str] = "mass-leak"

    @property
    def description(self) -> str:
        return "mass leak"

    def force(self, point: np.ndarray, momentum: np.ndarray) -> np.ndarray:
        return np.array([1.0, 0.0, 0.0, 0.0, 0.1])


@pytest.mark.parametrize("field", [TimelikePush(), MassLeak()])
def test_newtonian_forces_must_be_valued_in_e0(field: ForceField):
    with pytest.raises(FieldDomainError, match="not valued in E0"):
        field.evaluate(ORIGIN.coords, AT_REST.coords)
    with pytest.raises(FieldDomainError, match="not valued in E0"):
        integrate(field, ORIGIN, AT_REST, 0.1, 5)


def test_relativistic_forces_must_be_valued_in_m0():
    field = MassLeak(flavor=Flavor.EINSTEIN)
    with pytest.raises(FieldDomainError, match="not valued in M0"):
        field.evaluate(ORIGIN.coords, AT_REST.coords)
