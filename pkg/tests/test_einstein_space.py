import numpy as np
import pytest

from mechspace.datatypes import (
    FiveVector,
    Flavor,
    FourVelocity,
    HyperboloidH,
    HyperplaneM,
    LightCone,
    Origin,
    QuadricS,
    Sheet,
    describe_orbit,
)
from mechspace.dynamics import Trajectory
from mechspace.einstein_space import (
    CAYLEY_DIM,
    MD_DIM,
    MT_DIM,
    PROPER_TIME_DIM,
    LorentzianPlane,
    Separation,
    SpacelikeSubspaceE,
    cayley_map,
    classify_causal,
    eval_md,
    eval_mt,
    four_velocity,
    hyperbolic_distance,
    inverse_cayley_map,
    klein_distance,
    lorentz_product,
    mass_shell_residual,
    orthogonal_projections,
    proper_time,
    proper_time_by_quadrature,
    rapidity,
    rest_energy,
    spacetime_distance,
    speed_of_light,
    velocity_of_light_residual,
)
from mechspace.exceptions import DomainError, OnEPlane, OutOfInterval
from mechspace.groups import lorentz_boost, random_lorentz
from mechspace.measure import KG, M, Quantity


@pytest.mark.parametrize(
    "coords, expected",
    [
        ([0, 0, 0, 1, 0], HyperboloidH(Quantity(1.0, MT_DIM), Sheet.FUTURE)),
        ([0, 0, 0, -2, 0], HyperboloidH(Quantity(-2.0, MT_DIM), Sheet.PAST)),
        ([1, 0, 0, 1, 0], LightCone()),
        ([0, 3, 0, 0, 0], QuadricS(Quantity(3.0, MD_DIM))),
        ([1, 2, 3, 4, 2], HyperplaneM(Quantity(2.0, KG))),
        ([0, 0, 0, 0, 0], Origin()),
    ],
)
def test_classify_causal(coords, expected):
    assert classify_causal(FiveVector(coords)) == expected


def test_describe_causal_class():
    orbit = classify_causal(FiveVector.of(0, 0, 0, 1, 0))
    assert describe_orbit(orbit) == "HyperboloidH mt=1 sheet=future"
    assert describe_orbit(LightCone()) == "LightCone"


def test_lorentz_product():
    v = FiveVector.of(3, 0, 0, 5, 0)
    assert lorentz_product(v, v).magnitude == -16.0
    with pytest.raises(DomainError, match="M0"):
        lorentz_product(v, FiveVector.of(0, 0, 0, 0, 1))


def test_eval_mt_and_md():
    assert eval_mt(FiveVector.of(0, 0, 0, 5, 0)) == Quantity(5.0, MT_DIM)
    assert eval_mt(FiveVector.of(0, 0, 0, -5, 0)).magnitude == -5.0
    assert eval_mt(FiveVector.of(1, 0, 0, 1, 0)).magnitude == 0.0
    assert eval_md(FiveVector.of(0, 3, 4, 0, 0)).magnitude == 5.0
    with pytest.raises(DomainError, match="spacelike"):
        eval_mt(FiveVector.of(2, 0, 0, 1, 0))
    with pytest.raises(DomainError, match="timelike"):
        eval_md(FiveVector.of(1, 0, 0, 2, 0))


def test_causal_classes_are_invariant(rng):
    for _ in range(100):
        L = random_lorentz(rng)
        for x in (rng.normal(size=4), [0.3, 0.4, 0.0, 0.5], [0.0, 0.0, 0.0, -1.0]):
            p = FiveVector([*x, 0.0])
            image = FiveVector([*(L @ np.asarray(x, dtype=float)), 0.0])
            before, after = classify_causal(p), classify_causal(image)
            assert type(before) is type(after)
            if isinstance(before, HyperboloidH):
                assert before.sheet is after.sheet
                assert after.mt.magnitude == pytest.approx(
                    before.mt.magnitude, rel=1e-8
                )


def test_speed_of_light():
    assert speed_of_light().magnitude == 1.0


def test_light_reflection_gives_unit_velocity(rng):
    for _ in range(100):
        plane = LorentzianPlane.random(rng)
        theta = rng.uniform(-2.0, 2.0)
        assert velocity_of_light_residual(plane, theta) < 1e-8


def test_light_velocity_is_frame_independent(rng):
    plane = LorentzianPlane.random(rng)
    for _ in range(20):
        boosted = plane.transformed(random_lorentz(rng))
        c1, c2 = boosted.light_velocities()
        assert abs(c1) == pytest.approx(1.0)
        assert c1 == pytest.approx(-c2)


def test_spacetime_distance():
    origin = FiveVector.of(0, 0, 0, 0, 1)
    spacelike = spacetime_distance(origin, FiveVector.of(3, 0, 0, 0, 1))
    assert spacelike.separation is Separation.SPACELIKE
    assert spacelike.value == Quantity(3.0, M)
    timelike = spacetime_distance(origin, FiveVector.of(0, 0, 0, 2, 1))
    assert timelike.separation is Separation.TIMELIKE
    assert timelike.value == Quantity(2.0, PROPER_TIME_DIM)
    light = spacetime_distance(origin, FiveVector.of(1, 0, 0, 1, 1))
    assert light.separation is Separation.LIGHTLIKE
    with pytest.raises(DomainError, match="normalized"):
        spacetime_distance(origin, FiveVector.of(0, 0, 0, 2, 2))


def _rest_trajectory() -> Trajectory:
    return Trajectory.sample(
        Flavor.EINSTEIN, 2.0, lambda tau: [0.0, 0.0, 0.0, 2.0 * tau, 2.0], 0.0, 0.5, 11
    )


def test_proper_time():
    f = _rest_trajectory()
    assert proper_time(f, 1.0, 4.0) == Quantity(3.0, PROPER_TIME_DIM)
    assert proper_time(f, 4.0, 1.0).magnitude == 3.0
    with pytest.raises(OutOfInterval):
        proper_time(f, 0.0, 6.0)


def test_proper_time_by_quadrature_of_a_boosted_line():
    w = np.array([0.6, 0.0, 0.0])
    velocity = four_velocity(w).coords[:4]
    f = Trajectory.sample(
        Flavor.EINSTEIN, 1.0, lambda tau: [*(tau * velocity), 1.0], 0.0, 0.1, 51
    )
    assert proper_time_by_quadrature(f, 1.0, 4.0).magnitude == pytest.approx(
        3.0, rel=1e-9
    )


def test_orthogonal_projections_sum_to_vector(rng):
    E = SpacelikeSubspaceE.from_lorentz(random_lorentz(rng))
    v = rng.normal(size=4)
    along, perp = orthogonal_projections(E, v)
    np.testing.assert_allclose(along + perp, v, atol=1e-12)
    assert perp @ np.diag([1.0, 1.0, 1.0, -1.0]) @ along == pytest.approx(
        0.0, abs=1e-9
    )


def test_cayley_map():
    E = SpacelikeSubspaceE.standard()
    light = cayley_map(E, np.array([1.0, 0.0, 0.0, 1.0]))
    assert float(np.linalg.norm(light.magnitude)) == pytest.approx(1.0)
    assert light.dim == CAYLEY_DIM
    image = cayley_map(E, four_velocity([0.6, 0.0, 0.0]))
    np.testing.assert_allclose(image.magnitude, [0.6, 0.0, 0.0], atol=1e-12)
    np.testing.assert_array_equal(cayley_map(E, np.zeros(4)).magnitude, 0.0)
    with pytest.raises(OnEPlane):
        cayley_map(E, np.array([1.0, 0.0, 0.0, 0.0]))


def test_cayley_map_of_boosted_subspace(rng):
    L = lorentz_boost([0.0, 0.0, 1.0], 0.7)
    E = SpacelikeSubspaceE.from_lorentz(L)
    for _ in range(20):
        w = rng.uniform(-0.5, 0.5, size=3)
        v = inverse_cayley_map(E, w)
        np.testing.assert_allclose(cayley_map(E, v).magnitude, w, atol=1e-10)


def test_inverse_cayley_map_rejects_points_outside_ball():
    with pytest.raises(DomainError, match="unit ball"):
        inverse_cayley_map(SpacelikeSubspaceE.standard(), [0.6, 0.8, 0.0])


def test_subspace_must_be_orthonormal():
    with pytest.raises(DomainError, match="orthonormal"):
        SpacelikeSubspaceE(2 * np.eye(4)[:3], np.eye(4)[3])
    with pytest.raises(DomainError, match="future"):
        SpacelikeSubspaceE(np.eye(4)[:3], -np.eye(4)[3])


def test_hyperbolic_distances_agree(rng):
    for _ in range(50):
        a, b = rng.uniform(-0.5, 0.5, size=(2, 3))
        va, vb = four_velocity(a), four_velocity(b)
        assert hyperbolic_distance(va, vb) == pytest.approx(
            klein_distance(a, b), abs=1e-7
        )


def test_rapidity():
    assert rapidity(four_velocity([np.tanh(0.5), 0.0, 0.0])) == pytest.approx(0.5)
    assert rapidity(four_velocity([0.0, 0.0, 0.0])) == 0.0


def test_mass_shell():
    p = FiveVector([*(3.0 * four_velocity([0.0, 0.8, 0.0]).coords[:4]), 0.0])
    assert mass_shell_residual(p, 3.0) < 1e-12
    assert rest_energy(p, 3.0).magnitude == pytest.approx(3.0)


def test_small_vectors_keep_their_causal_class():
    timelike = classify_causal(FiveVector.of(0, 0, 0, 1e-6, 0))
    assert isinstance(timelike, HyperboloidH)
    assert timelike.sheet is Sheet.FUTURE
    assert timelike.mt.magnitude == pytest.approx(1e-6, rel=1e-12)
    assert eval_mt(FiveVector.of(0, 0, 0, 1e-6, 0)).magnitude == pytest.approx(1e-6)
    spacelike = classify_causal(FiveVector.of(1e-6, 0, 0, 0, 0))
    assert isinstance(spacelike, QuadricS)
    assert spacelike.md.magnitude == pytest.approx(1e-6, rel=1e-12)
    assert classify_causal(FiveVector.of(1e-6, 0, 0, 1e-6, 0)) == LightCone()


def test_four_velocities_are_unit_and_future_pointing():
    assert four_velocity([0.6, 0.0, 0.0]).flavor is Flavor.EINSTEIN
    with pytest.raises(DomainError, match="unit timelike"):
        FourVelocity(np.array([0.0, 0.0, 0.0, 2.0, 0.0]), flavor=Flavor.EINSTEIN)
    with pytest.raises(DomainError, match="unit timelike"):
        FourVelocity(np.array([0.0, 0.0, 0.0, -1.0, 0.0]), flavor=Flavor.EINSTEIN)
