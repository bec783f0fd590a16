"""Shared builders and seeded random-instance generators for the tests."""

from __future__ import annotations

import math
import random

from tcshift.diagram import FlatInstance, TCInstance
from tcshift.measures import AtomicMeasure1D, atom_difference, combine, dirac


def m1(*pairs: tuple[float, float], probability: bool = False) -> AtomicMeasure1D:
    return AtomicMeasure1D(tuple(pairs), probability=probability)


def half_half() -> AtomicMeasure1D:
    return m1((0.0, 0.5), (1.0, 0.5))


def f1_instance() -> TCInstance:
    return TCInstance(half_half(), half_half(), dirac(1.0), dirac(1.0), math.sqrt(0.5))


def n1_instance() -> TCInstance:
    return TCInstance(
        m1((0.0, 0.1), (1.0, 0.9)), half_half(), dirac(1.0), dirac(1.0), math.sqrt(0.5)
    )


def trivial_instance() -> TCInstance:
    return TCInstance(dirac(1.0), dirac(1.0), dirac(1.0), dirac(1.0), 1.0)


def spike_instance(a: float = 2.0) -> TCInstance:
    """All core weights one, oversized joining weight; not even hyponormal."""
    return TCInstance(dirac(1.0), dirac(1.0), dirac(1.0), dirac(1.0), a)


def f1_flat() -> FlatInstance:
    return FlatInstance(p=0.5, q=0.5, l=0.5, m=0.5, b=1.0, a=math.sqrt(0.5))


def n1_flat() -> FlatInstance:
    return FlatInstance(p=0.1, q=0.9, l=0.5, m=0.5, b=1.0, a=math.sqrt(0.5))


def assert_scalar_close(actual: float, expected: float, tol: float = 1e-12) -> None:
    assert abs(actual - expected) <= tol * max(1.0, abs(expected)), (actual, expected)


def assert_measures_close(actual, expected, tol: float = 1e-12) -> None:
    diff = atom_difference(actual, expected)
    assert diff <= tol, f"measures differ by {diff!r} > {tol!r}:\n  {actual}\n  {expected}"


def random_locations(rng, count, lo=0.1, hi=4.0, avoid=(), spacing=1e-3):
    locations: list[float] = []
    while len(locations) < count:
        candidate = rng.uniform(lo, hi)
        if all(abs(candidate - other) > spacing for other in (*locations, *avoid)):
            locations.append(candidate)
    return locations


def random_probability(
    rng: random.Random,
    n_atoms: tuple[int, int] = (1, 4),
    lo: float = 0.1,
    hi: float = 4.0,
    avoid: tuple[float, ...] = (),
    spacing: float = 1e-3,
    zero_prob: float = 0.0,
) -> AtomicMeasure1D:
    """Random probability measure with Dirichlet-uniform masses on [lo, hi],
    optionally moving one atom to the origin."""
    count = rng.randint(*n_atoms)
    locations = random_locations(rng, count, lo, hi, avoid, spacing)
    if zero_prob and count >= 2 and rng.random() < zero_prob:
        locations[0] = 0.0
    masses = [rng.gammavariate(1.0, 1.0) + 1e-3 for _ in locations]
    total = sum(masses)
    return AtomicMeasure1D(
        tuple((loc, mass / total) for loc, mass in zip(locations, masses)),
        probability=True,
    )


def _constructive_column_data(rng, eta, u):
    """Column measure eta_y engineered so the vertical slack has mass 1 - u
    and is nonnegative.  Returns (eta_y, slack atoms, ell, y0_sq)."""
    slack_mass = 1.0 - u
    slack = random_probability(rng, n_atoms=(1, 3), avoid=eta.locations)
    slack_atoms = tuple((loc, slack_mass * mass) for loc, mass in slack.atoms)
    tail = combine([(u, eta), (1.0, AtomicMeasure1D(slack_atoms))]).as_positive(
        0.0, probability=True
    )
    ell = rng.uniform(0.0, 0.5)
    y0_sq = (1.0 - ell) / tail.reciprocal_norm()
    atoms = [(t, y0_sq * mass / t) for t, mass in tail.atoms]
    if ell > 1e-12:
        atoms.append((0.0, ell))
    return AtomicMeasure1D(tuple(atoms), probability=True), slack_atoms, ell, y0_sq


def _constructive_row_measure(rng, xi, eta, u, slack_atoms, ell, y0_sq):
    """Row-0 measure dominating the forced part of the horizontal slack, so
    that slack comes out nonnegative with a free remainder of mass ell."""
    recip_slack = sum(mass / loc for loc, mass in slack_atoms)
    forced = [
        (loc, u * y0_sq * eta.reciprocal_norm() * mass)
        for loc, mass in xi.tilde().atoms
    ]
    if recip_slack:
        forced.append((0.0, y0_sq * recip_slack))
    if ell > 1e-12:
        free = random_probability(rng, n_atoms=(1, 3), lo=0.05, hi=4.0, zero_prob=0.3)
        forced.extend((loc, ell * mass) for loc, mass in free.atoms)
    return AtomicMeasure1D(tuple(forced), probability=True)


def random_subnormal_instance(rng: random.Random) -> TCInstance:
    """Instance built so both slack measures come out nonnegative."""
    xi = random_probability(rng)
    eta = random_probability(rng)
    u = rng.uniform(0.2, 0.95)
    a = math.sqrt(u / xi.reciprocal_norm())
    eta_y, slack_atoms, ell, y0_sq = _constructive_column_data(rng, eta, u)
    xi_x = _constructive_row_measure(rng, xi, eta, u, slack_atoms, ell, y0_sq)
    return TCInstance(xi_x, eta_y, xi, eta, a)


def random_psi_positive_instance(rng: random.Random) -> TCInstance:
    """Vertical slack engineered nonnegative, so the verdict is decided by
    the horizontal slack alone; that one is made nonnegative half the time."""
    xi = random_probability(rng)
    eta = random_probability(rng)
    u = rng.uniform(0.2, 0.95)
    a = math.sqrt(u / xi.reciprocal_norm())
    eta_y, slack_atoms, ell, y0_sq = _constructive_column_data(rng, eta, u)
    if rng.random() < 0.5:
        xi_x = _constructive_row_measure(rng, xi, eta, u, slack_atoms, ell, y0_sq)
    else:
        xi_x = random_probability(rng, lo=0.05, zero_prob=0.4)
    return TCInstance(xi_x, eta_y, xi, eta, a)


def random_tc_instance(rng: random.Random) -> TCInstance:
    """Fully mixed generator covering both verdict branches: engineered
    subnormal instances, instances that fail only on the horizontal slack,
    and arbitrary ones where the bound a^2 ||1/s|| <= 1 holds half the time
    and fails half the time."""
    roll = rng.random()
    if roll < 1.0 / 3.0:
        return random_subnormal_instance(rng)
    if roll < 2.0 / 3.0:
        return random_psi_positive_instance(rng)
    xi = random_probability(rng)
    eta = random_probability(rng)
    if rng.random() < 0.5:
        u = rng.uniform(0.05, 0.95)
    else:
        u = rng.uniform(1.0 + 1e-6, 2.0)
    a = math.sqrt(u / xi.reciprocal_norm())
    eta_y = random_probability(rng, zero_prob=0.4)
    xi_x = random_probability(rng, lo=0.05, zero_prob=0.4)
    return TCInstance(xi_x, eta_y, xi, eta, a)


def random_flat_instance(rng: random.Random) -> FlatInstance:
    b = rng.uniform(0.5, 2.0)
    a = b * rng.uniform(0.1, 1.0)

    def masses():
        if rng.random() < 0.4:
            core = rng.uniform(0.1, 0.9)
            return 1.0 - core, core, 0.0
        while True:
            raw = [rng.gammavariate(1.5, 1.0) for _ in range(3)]
            total = sum(raw)
            zero_part, core, rest = (value / total for value in raw)
            if zero_part > 0.01 and core > 0.01 and rest > 0.01:
                return zero_part, core, rest

    p, q, rest_x = masses()
    l, m, rest_y = masses()
    rho = (
        random_probability(rng, n_atoms=(1, 3), avoid=(1.0,), spacing=0.05)
        if rest_x > 0.0
        else None
    )
    sigma = (
        random_probability(rng, n_atoms=(1, 3), avoid=(b**2,), spacing=0.05)
        if rest_y > 0.0
        else None
    )
    return FlatInstance(p=p, q=q, l=l, m=m, b=b, a=a, rho=rho, sigma=sigma)
