"""Evaluation maps and orbits of the Newtonian mechanical space.

Coordinates are ``(mx, mt, m)``: a point of mass ``m`` at place ``x`` and time ``t``
is the five-vector ``m * (x, t, 1)``.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Final

import numpy as np

from .datatypes import (
    STANDARD_FRAME,
    Event,
    FiveVector,
    FourVelocity,
    Flavor,
    HyperplaneE,
    HyperplaneM,
    OrbitClass,
    Origin,
    SphereS,
)
from .exceptions import DomainError, NotSynchronous, ZeroMass
from .measure import KG, KGM, KGS, M, S, SPEED, Quantity, dim_abs, dim_pow

TOL_CLASS: Final = 1e-9
TOL_SYNC: Final = 1e-9

MD_DIM: Final = dim_abs(KGM)
SCALAR_PRODUCT_DIM: Final = dim_pow(KGM, 2)


def class_tolerance(p: FiveVector) -> float:
    """Scale aware tolerance for orbit boundary decisions."""
    return TOL_CLASS * max(1.0, float(np.max(np.abs(p.coords))))


def in_m0(p: FiveVector, tol: float | None = None) -> bool:
    tol = class_tolerance(p) if tol is None else tol
    return abs(p.mass) <= tol


def in_e0(p: FiveVector, tol: float | None = None) -> bool:
    tol = class_tolerance(p) if tol is None else tol
    return abs(p.mass) <= tol and abs(p.time) <= tol


def eval_m(p: FiveVector) -> Quantity:
    """Mass of a five-vector.

    >>> eval_m(FiveVector.of(2, 4, 6, 3, 1.5)).magnitude
    1.5
    """
    return Quantity(p.mass, KG)


def eval_mt(p: FiveVector) -> Quantity:
    """Mass-time of an element of ``M0``."""
    if not in_m0(p):
        raise DomainError(f"mt is defined on M0 but {p!r} has mass {p.mass}")
    return Quantity(p.time, KGS)


def eval_md(p: FiveVector) -> Quantity:
    """Mass-distance of an element of ``E0``, the Euclidean norm of ``mx``."""
    if not in_e0(p):
        raise DomainError(f"md is defined on E0 but received {p!r}")
    return Quantity(float(np.linalg.norm(p.spatial)), MD_DIM)


def scalar_product(v: FiveVector, w: FiveVector) -> Quantity:
    """The generalized Euclidean scalar product on ``E0`` by polarization."""
    md_sum = eval_md(v + w).magnitude
    md_diff = eval_md(v - w).magnitude
    return Quantity(0.25 * (md_sum**2 - md_diff**2), SCALAR_PRODUCT_DIM)


def classify_orbit(p: FiveVector) -> OrbitClass:
    """Orbit of ``p`` under the Galilei group.

    >>> classify_orbit(FiveVector.of(1, 2, 2, 0, 0)).md.magnitude
    3.0
    """
    tol = class_tolerance(p)
    if abs(p.mass) > tol:
        return HyperplaneM(eval_m(p))
    if abs(p.time) > tol:
        return HyperplaneE(Quantity(p.time, KGS))
    md = float(np.linalg.norm(p.spatial))
    if md > tol:
        return SphereS(Quantity(md, MD_DIM))
    return Origin()


def _nonzero_mass(p: FiveVector) -> float:
    if p.mass == 0.0:
        raise ZeroMass(f"Expected a nonzero mass but received {p!r}")
    return p.mass


def eval_u(p: FiveVector) -> Event:
    """Space-time place ``p / m(p)``."""
    return Event(p.coords / _nonzero_mass(p), p.frame)


place = eval_u


def eval_tau(p: FiveVector) -> Quantity:
    """Time of the place of ``p``."""
    return Quantity(p.time / _nonzero_mass(p), S)


def event(
    x: Sequence[float], t: float, frame: str = STANDARD_FRAME
) -> Event:
    return Event(np.array([*x, t, 1.0]), frame)


def is_synchronous(a: FiveVector, b: FiveVector, tol: float = TOL_SYNC) -> bool:
    ta = eval_tau(a).magnitude
    tb = eval_tau(b).magnitude
    return abs(ta - tb) <= tol * max(1.0, abs(ta), abs(tb))


def synchronous_distance(a: FiveVector, b: FiveVector) -> Quantity:
    """Distance between two simultaneous places.

    Raises:
        NotSynchronous: if the places have different times.
    """
    if not is_synchronous(a, b):
        raise NotSynchronous(
            f"Expected simultaneous events but received times "
            f"{eval_tau(a).magnitude} and {eval_tau(b).magnitude}"
        )
    ua, ub = eval_u(a), eval_u(b)
    return Quantity(float(np.linalg.norm(ua.spatial - ub.spatial)), M)


# Four-velocities


def four_velocity(w: Sequence[float], frame: str = STANDARD_FRAME) -> FourVelocity:
    """The element ``(w, 1, 0)`` of ``V(1)``."""
    return FourVelocity(np.array([*w, 1.0, 0.0]), frame, flavor=Flavor.NEWTON)


def split_m0(p: FiveVector) -> tuple[FourVelocity, Quantity]:
    """Split ``p`` in ``M0 \\ E0`` into its four-velocity and its mass-time."""
    mt = eval_mt(p)
    if abs(mt.magnitude) <= class_tolerance(p):
        raise DomainError(f"Expected an element of M0 outside E0 but received {p!r}")
    coords = p.coords / mt.magnitude
    coords[3], coords[4] = 1.0, 0.0
    return FourVelocity(coords, p.frame, flavor=Flavor.NEWTON), mt


def velocity_distance(v: FourVelocity, w: FourVelocity) -> Quantity:
    """Euclidean distance of the affine space ``V(1)``."""
    return Quantity(float(np.linalg.norm(v.spatial - w.spatial)), SPEED)
