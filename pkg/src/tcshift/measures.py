"""Finitely atomic measures on the half line and the quarter plane.

Every quantity in this package reduces to arithmetic on (location, mass)
atom lists: monomial moments, reciprocal norms, the tilde and extremal
renormalisations, marginals, Cartesian products, signed linear combinations
and positivity checks with an explicit witness.  Keeping that arithmetic
exact up to float rounding is what makes the brute-force verification
oracles trustworthy.

Conventions: locations are nonnegative, probability measures have total
mass one, and two locations closer than ``MERGE_REL_TOL`` (relative to the
larger of the two and to one) denote the same point and are merged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence, Union

from .errors import AtomAtZero, NotProbability, PreconditionViolated

#: Two atom locations within this relative distance are one atom.
MERGE_REL_TOL = 1e-12

#: Default positivity slack, relative to the total variation of the measure.
POSITIVITY_REL_TOL = 1e-12

#: Slack accepted when a measure claims total mass one.
PROBABILITY_TOL = 1e-9

Axis = Literal["x", "y"]


def same_location(u: float, v: float) -> bool:
    """True when two atom locations should be treated as the same point."""
    return abs(u - v) <= MERGE_REL_TOL * max(1.0, abs(u), abs(v))


def _finite(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{what} must be finite, got {value!r}")
    return value


def _merge_1d(atoms: Iterable[Sequence[float]]) -> tuple[tuple[float, float], ...]:
    """Sort atoms by location, merge coincident locations, drop exact zeros."""
    prepared = [
        (_finite(loc, "atom location"), _finite(mass, "atom mass"))
        for loc, mass in atoms
    ]
    merged: list[list[float]] = []
    for loc, mass in sorted(prepared):
        if merged and same_location(merged[-1][0], loc):
            merged[-1][1] += mass
        else:
            merged.append([loc, mass])
    return tuple((loc, mass) for loc, mass in merged if mass != 0.0)


def _merge_2d(atoms: Iterable[Sequence[float]]) -> tuple[tuple[float, float, float], ...]:
    prepared = []
    for atom in atoms:
        s, t, mass = atom
        prepared.append(
            (_finite(s, "atom s-coordinate"), _finite(t, "atom t-coordinate"), _finite(mass, "atom mass"))
        )
    merged: list[list[float]] = []
    for s, t, mass in sorted(prepared):
        if merged and same_location(merged[-1][0], s) and same_location(merged[-1][1], t):
            merged[-1][2] += mass
        else:
            merged.append([s, t, mass])
    return tuple((s, t, mass) for s, t, mass in merged if mass != 0.0)


@dataclass(frozen=True)
class AtomicMeasure1D:
    """Finitely atomic nonnegative measure on [0, inf).

    ``atoms`` is kept sorted by location with coincident locations merged.
    When ``probability`` is set the constructor insists on total mass one
    (within ``PROBABILITY_TOL``).
    """

    atoms: tuple[tuple[float, float], ...]
    probability: bool = False

    def __post_init__(self) -> None:
        merged = _merge_1d(self.atoms)
        for loc, mass in merged:
            if loc < 0.0:
                raise ValueError(f"atom location must be nonnegative, got {loc!r}")
            if mass <= 0.0:
                raise ValueError(f"atom mass must be positive, got {mass!r} at {loc!r}")
        object.__setattr__(self, "atoms", merged)
        if self.probability and abs(self.total_mass - 1.0) > PROBABILITY_TOL:
            raise NotProbability(f"total mass is {self.total_mass!r}, expected 1")

    @property
    def total_mass(self) -> float:
        return sum(mass for _, mass in self.atoms)

    @property
    def locations(self) -> tuple[float, ...]:
        return tuple(loc for loc, _ in self.atoms)

    def is_probability(self, tol: float = PROBABILITY_TOL) -> bool:
        return abs(self.total_mass - 1.0) <= tol

    def mass_at(self, location: float) -> float:
        return sum(mass for loc, mass in self.atoms if same_location(loc, location))

    def moment(self, k: int) -> float:
        """Integral of s^k; the total mass when k = 0."""
        if k < 0:
            raise ValueError("moment order must be nonnegative")
        return sum(mass * loc**k for loc, mass in self.atoms)

    def reciprocal_norm(self) -> float:
        """Integral of 1/s.  Raises AtomAtZero when the origin carries mass."""
        if self.mass_at(0.0) != 0.0:
            raise AtomAtZero("measure has an atom at 0, so 1/s is not integrable")
        return sum(mass / loc for loc, mass in self.atoms)

    def tilde(self) -> "AtomicMeasure1D":
        """Reweight by 1/s and renormalise to a probability measure."""
        norm = self.reciprocal_norm()
        raw = [(loc, mass / (loc * norm)) for loc, mass in self.atoms]
        total = sum(mass for _, mass in raw)
        return AtomicMeasure1D(
            tuple((loc, mass / total) for loc, mass in raw), probability=True
        )


@dataclass(frozen=True)
class SignedMeasure1D:
    """Finite signed combination of point masses on [0, inf)."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        merged = _merge_1d(self.atoms)
        for loc, _ in merged:
            if loc < 0.0:
                raise ValueError(f"atom location must be nonnegative, got {loc!r}")
        object.__setattr__(self, "atoms", merged)

    @property
    def total_mass(self) -> float:
        return sum(mass for _, mass in self.atoms)

    @property
    def total_variation(self) -> float:
        return sum(abs(mass) for _, mass in self.atoms)

    def mass_at(self, location: float) -> float:
        return sum(mass for loc, mass in self.atoms if same_location(loc, location))

    def moment(self, k: int) -> float:
        if k < 0:
            raise ValueError("moment order must be nonnegative")
        return sum(mass * loc**k for loc, mass in self.atoms)

    def reciprocal_norm(self) -> float:
        """Signed integral of 1/s; an atom at the origin is an error."""
        if any(same_location(loc, 0.0) for loc, _ in self.atoms):
            raise AtomAtZero("signed measure has an atom at 0, so 1/s is not integrable")
        return sum(mass / loc for loc, mass in self.atoms)

    def as_positive(
        self, tol: float = POSITIVITY_REL_TOL, *, probability: bool = False
    ) -> AtomicMeasure1D:
        """Drop rounding-level negative atoms; reject genuinely negative ones."""
        check = positivity(self, tol)
        if not check.positive:
            raise PreconditionViolated(
                f"measure has a negative atom of mass {check.mass!r} at {check.location!r}"
            )
        return AtomicMeasure1D(
            tuple((loc, mass) for loc, mass in self.atoms if mass > 0.0),
            probability=probability,
        )


@dataclass(frozen=True)
class AtomicMeasure2D:
    """Finitely atomic nonnegative measure on the closed quarter plane."""

    atoms: tuple[tuple[float, float, float], ...]
    probability: bool = False

    def __post_init__(self) -> None:
        merged = _merge_2d(self.atoms)
        for s, t, mass in merged:
            if s < 0.0 or t < 0.0:
                raise ValueError(f"atom coordinates must be nonnegative, got ({s!r}, {t!r})")
            if mass <= 0.0:
                raise ValueError(f"atom mass must be positive, got {mass!r} at ({s!r}, {t!r})")
        object.__setattr__(self, "atoms", merged)
        if self.probability and abs(self.total_mass - 1.0) > PROBABILITY_TOL:
            raise NotProbability(f"total mass is {self.total_mass!r}, expected 1")

    @property
    def total_mass(self) -> float:
        return sum(mass for _, _, mass in self.atoms)

    def is_probability(self, tol: float = PROBABILITY_TOL) -> bool:
        return abs(self.total_mass - 1.0) <= tol

    def mass_at(self, s: float, t: float) -> float:
        return sum(
            mass
            for u, v, mass in self.atoms
            if same_location(u, s) and same_location(v, t)
        )

    def moment(self, k1: int, k2: int) -> float:
        """Integral of s^k1 t^k2."""
        if k1 < 0 or k2 < 0:
            raise ValueError("moment orders must be nonnegative")
        return sum(mass * s**k1 * t**k2 for s, t, mass in self.atoms)

    def marginal(self, axis: Axis) -> AtomicMeasure1D:
        """Project atoms onto one coordinate, summing coincident masses."""
        index = _axis_index(axis)
        return AtomicMeasure1D(
            tuple((atom[index], atom[2]) for atom in self.atoms),
            probability=self.probability,
        )

    def reciprocal_norm(self, axis: Axis) -> float:
        """Integral of 1/s or 1/t over the chosen coordinate."""
        index = _axis_index(axis)
        if any(same_location(atom[index], 0.0) for atom in self.atoms):
            raise AtomAtZero(
                f"measure has an atom with zero {axis}-coordinate, reciprocal not integrable"
            )
        return sum(atom[2] / atom[index] for atom in self.atoms)

    def extremal(self) -> "AtomicMeasure2D":
        """Reweight by 1/t and renormalise; a probability measure again."""
        norm = self.reciprocal_norm("y")
        raw = [(s, t, mass / (t * norm)) for s, t, mass in self.atoms]
        total = sum(mass for _, _, mass in raw)
        return AtomicMeasure2D(
            tuple((s, t, mass / total) for s, t, mass in raw), probability=True
        )


@dataclass(frozen=True)
class SignedMeasure2D:
    """Finite signed combination of planar point masses."""

    atoms: tuple[tuple[float, float, float], ...]

    def __post_init__(self) -> None:
        merged = _merge_2d(self.atoms)
        for s, t, _ in merged:
            if s < 0.0 or t < 0.0:
                raise ValueError(f"atom coordinates must be nonnegative, got ({s!r}, {t!r})")
        object.__setattr__(self, "atoms", merged)

    @property
    def total_mass(self) -> float:
        return sum(mass for _, _, mass in self.atoms)

    @property
    def total_variation(self) -> float:
        return sum(abs(mass) for _, _, mass in self.atoms)

    def moment(self, k1: int, k2: int) -> float:
        if k1 < 0 or k2 < 0:
            raise ValueError("moment orders must be nonnegative")
        return sum(mass * s**k1 * t**k2 for s, t, mass in self.atoms)

    def marginal(self, axis: Axis) -> SignedMeasure1D:
        index = _axis_index(axis)
        return SignedMeasure1D(tuple((atom[index], atom[2]) for atom in self.atoms))

    def as_positive(
        self, tol: float = POSITIVITY_REL_TOL, *, probability: bool = False
    ) -> AtomicMeasure2D:
        check = positivity(self, tol)
        if not check.positive:
            raise PreconditionViolated(
                f"measure has a negative atom of mass {check.mass!r} at {check.location!r}"
            )
        return AtomicMeasure2D(
            tuple(atom for atom in self.atoms if atom[2] > 0.0),
            probability=probability,
        )


Measure1D = Union[AtomicMeasure1D, SignedMeasure1D]
Measure2D = Union[AtomicMeasure2D, SignedMeasure2D]
Measure = Union[Measure1D, Measure2D]


def _axis_index(axis: Axis) -> int:
    if axis == "x":
        return 0
    if axis == "y":
        return 1
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def dirac(location: float) -> AtomicMeasure1D:
    """Unit point mass at the given location."""
    return AtomicMeasure1D(((float(location), 1.0),), probability=True)


def dirac2(s: float, t: float) -> AtomicMeasure2D:
    """Unit planar point mass at (s, t)."""
    return AtomicMeasure2D(((float(s), float(t), 1.0),), probability=True)


def product(mx: Measure1D, my: Measure1D) -> Measure2D:
    """Cartesian product measure; masses multiply atom by atom.

    Returns an ``AtomicMeasure2D`` when both factors are nonnegative (the
    result is then a probability measure exactly when both factors are) and
    a ``SignedMeasure2D`` otherwise.
    """
    atoms = tuple(
        (s, t, ms * mt) for s, ms in mx.atoms for t, mt in my.atoms
    )
    if isinstance(mx, AtomicMeasure1D) and isinstance(my, AtomicMeasure1D):
        return AtomicMeasure2D(atoms, probability=mx.probability and my.probability)
    return SignedMeasure2D(atoms)


def combine(
    terms: Sequence[tuple[float, Measure]],
) -> SignedMeasure1D | SignedMeasure2D:
    """Signed linear combination of measures sharing one dimension.

    Coincident locations merge and exactly cancelled atoms are pruned, so a
    combination like ``[(1, m), (-1, m)]`` yields the empty (zero) measure.
    """
    dims = set()
    for _, measure in terms:
        dims.add(2 if isinstance(measure, (AtomicMeasure2D, SignedMeasure2D)) else 1)
    if len(dims) > 1:
        raise ValueError("cannot combine measures of different dimensions")
    dim = dims.pop() if dims else 1
    if dim == 1:
        atoms1 = [
            (loc, coeff * mass)
            for coeff, measure in terms
            if coeff != 0.0
            for loc, mass in measure.atoms
        ]
        return SignedMeasure1D(tuple(atoms1))
    atoms2 = [
        (s, t, coeff * mass)
        for coeff, measure in terms
        if coeff != 0.0
        for s, t, mass in measure.atoms
    ]
    return SignedMeasure2D(tuple(atoms2))


@dataclass(frozen=True)
class Positivity:
    """Outcome of a positivity check; the witness is the worst atom."""

    positive: bool
    location: float | tuple[float, float] | None = None
    mass: float | None = None


def positivity(measure: Measure, tol: float = POSITIVITY_REL_TOL) -> Positivity:
    """Decide whether a (signed) measure is positive.

    A mass is accepted when it is at least ``-tol`` times the total
    variation; the zero measure counts as positive.  When the check fails
    the most negative atom is reported as the witness.
    """
    if tol < 0.0:
        raise ValueError("tolerance must be nonnegative")
    atoms = measure.atoms
    if not atoms:
        return Positivity(True)
    variation = sum(abs(atom[-1]) for atom in atoms)
    worst = min(atoms, key=lambda atom: atom[-1])
    if worst[-1] >= -tol * variation:
        return Positivity(True)
    if len(worst) == 2:
        return Positivity(False, worst[0], worst[1])
    return Positivity(False, (worst[0], worst[1]), worst[2])


def atom_difference(a: Measure, b: Measure) -> float:
    """Largest atom mass of a - b; zero exactly when the measures agree."""
    diff = combine([(1.0, a), (-1.0, b)])
    if not diff.atoms:
        return 0.0
    return max(abs(atom[-1]) for atom in diff.atoms)


def measures_equal(a: Measure, b: Measure, tol: float = 1e-12) -> bool:
    """Atom-wise equality of two measures up to the given mass tolerance."""
    return atom_difference(a, b) <= tol
