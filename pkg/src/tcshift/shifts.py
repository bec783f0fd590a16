"""One-variable weighted-shift kernel: weights, moments, Berger measures.

A subnormal unilateral shift is equivalent data to a probability measure on
[0, norm^2]: the k-th monomial moment of the measure is the product of the
first k squared weights.  This module moves between the two descriptions
for finitely atomic measures, and provides the restriction and backward
extension constructions that the 2-variable model is assembled from.
Weight input is deliberately not supported: inputs enter as measures, and
weights are recovered lazily to any requested depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateMeasure, InvalidWeight, NotSubnormal
from .measures import POSITIVITY_REL_TOL, AtomicMeasure1D


@dataclass(frozen=True)
class WeightSequence:
    """Weights of a unilateral shift: an explicit prefix, optionally
    followed by a constant tail."""

    prefix: tuple[float, ...]
    tail: float | None = None
    norm_bound: float | None = None

    def __post_init__(self) -> None:
        entries = self.prefix + (() if self.tail is None else (self.tail,))
        for value in entries:
            if not (value > 0.0 and math.isfinite(value)):
                raise InvalidWeight(f"weights must be positive and finite, got {value!r}")
            if self.norm_bound is not None and value > self.norm_bound * (1.0 + 1e-12):
                raise InvalidWeight(
                    f"weight {value!r} exceeds the norm bound {self.norm_bound!r}"
                )

    def weight(self, k: int) -> float:
        if k < 0:
            raise ValueError("weight index must be nonnegative")
        if k < len(self.prefix):
            return self.prefix[k]
        if self.tail is None:
            raise IndexError(f"weight {k} beyond the stored prefix")
        return self.tail

    def as_tuple(self, n: int) -> tuple[float, ...]:
        return tuple(self.weight(k) for k in range(n))

    def moment(self, k: int) -> float:
        """Product of the first k squared weights (one when k = 0)."""
        value = 1.0
        for i in range(k):
            value *= self.weight(i) ** 2
        return value


@dataclass(frozen=True)
class MomentSequence:
    """Moments gamma_0 .. gamma_N of a shift; gamma_0 = 1, all positive."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("a moment sequence needs at least gamma_0")
        if abs(self.values[0] - 1.0) > 1e-9:
            raise ValueError(f"gamma_0 must be 1, got {self.values[0]!r}")
        if any(v <= 0.0 for v in self.values):
            raise ValueError("moments must be positive")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @classmethod
    def from_measure(cls, measure: AtomicMeasure1D, count: int) -> "MomentSequence":
        return cls(tuple(measure.moment(k) for k in range(count)))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> float:
        return self.values[k]


def weights_from_measure(measure: AtomicMeasure1D, n: int) -> WeightSequence:
    """First n weights of the subnormal shift with the given Berger measure.

    alpha_k = sqrt(gamma_{k+1} / gamma_k) with gamma_k the k-th moment, so
    the shift built from the result has the input as its Berger measure by
    construction.
    """
    if n < 1:
        raise ValueError("at least one weight must be requested")
    gammas = [measure.moment(k) for k in range(n + 1)]
    if gammas[1] <= 0.0:
        raise DegenerateMeasure("measure concentrated at 0 has no weight sequence")
    prefix = tuple(math.sqrt(gammas[k + 1] / gammas[k]) for k in range(n))
    bound = math.sqrt(max(loc for loc, _ in measure.atoms))
    return WeightSequence(prefix, norm_bound=bound)


def two_atom_measure(alpha: float, beta: float) -> AtomicMeasure1D:
    """Berger measure of shift(alpha, beta, beta, ...).

    Equals (1 - alpha^2/beta^2) delta_0 + (alpha^2/beta^2) delta_{beta^2};
    a single atom when alpha = beta.
    """
    if alpha <= 0.0 or beta <= 0.0:
        raise InvalidWeight("shift weights must be positive")
    if alpha > beta:
        raise NotSubnormal(
            f"shift({alpha}, {beta}, {beta}, ...) has decreasing weights"
        )
    ratio = (alpha / beta) ** 2
    atoms = [(beta**2, ratio)]
    if ratio < 1.0:
        atoms.append((0.0, 1.0 - ratio))
    return AtomicMeasure1D(tuple(atoms), probability=True)


def restriction_measure(measure: AtomicMeasure1D, h: int) -> AtomicMeasure1D:
    """Berger measure of the shift with its first h weights removed.

    The density is s^h / gamma_h; an atom at the origin is annihilated for
    h >= 1.
    """
    if h < 0:
        raise ValueError("restriction depth must be nonnegative")
    if h == 0:
        return AtomicMeasure1D(measure.atoms, probability=True)
    gamma_h = measure.moment(h)
    if gamma_h <= 0.0:
        raise DegenerateMeasure("measure concentrated at 0 cannot be restricted")
    atoms = tuple(
        (loc, mass * loc**h / gamma_h) for loc, mass in measure.atoms if loc > 0.0
    )
    return AtomicMeasure1D(atoms, probability=True)


@dataclass(frozen=True)
class Extension1D:
    """Outcome of prepending a weight to a subnormal shift."""

    subnormal: bool
    measure: AtomicMeasure1D | None
    ratio: float | None
    reason: str | None = None


def one_var_backward_extension(
    x0: float, measure: AtomicMeasure1D, tol: float = POSITIVITY_REL_TOL
) -> Extension1D:
    """Decide whether shift(x0, tail...) is subnormal when the tail has the
    given Berger measure, and reconstruct the extended measure if so.

    Subnormal exactly when the tail measure has no atom at 0 and
    r := x0^2 ||1/s|| <= 1; the extended measure is then r * tilde +
    (1 - r) delta_0.  Failure is a value, not an error.
    """
    if x0 <= 0.0:
        raise InvalidWeight("the prepended weight must be positive")
    if measure.mass_at(0.0) != 0.0:
        return Extension1D(False, None, None, "tail measure has an atom at 0")
    ratio = x0**2 * measure.reciprocal_norm()
    if ratio > 1.0 + tol:
        return Extension1D(False, None, ratio, "x0^2 ||1/s|| exceeds 1")
    atoms = [(loc, ratio * mass) for loc, mass in measure.tilde().atoms]
    rest = 1.0 - ratio
    if rest > tol:
        atoms.append((0.0, rest))
    return Extension1D(True, AtomicMeasure1D(tuple(atoms), probability=True), ratio)
