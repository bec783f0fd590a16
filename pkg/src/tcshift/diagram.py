"""Two-variable weight diagrams whose core is a tensor grid.

An instance is determined by five pieces of data: the Berger measures of
the row-0 shift (xi_x) and the column-0 shift (eta_y), the two core
measures xi and eta driving the horizontal and vertical core weights, and
the single weight ``a`` joining (0, 1) to (1, 1).  Row 0 and column 0 carry
the weights of their own shifts, the core region k1 >= 1, k2 >= 1 is the
tensor grid alpha_{k1} / beta_{k2}, and the remaining boundary weights are
forced by commutativity:

    beta[(k1, 0)]   = a y_0 (alpha_1 ... alpha_{k1-1}) / (x_0 ... x_{k1-1})
    alpha[(0, k2+1)] = alpha[(0, k2)] beta_{k2} / y_{k2},  alpha[(0, 1)] = a

Moments of order (k1, k2) are products of squared weights along any
nondecreasing lattice path; commutativity makes the value path independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

from .errors import AtomAtZero, DepthExceeded, InvalidFlat, InvalidWeight, NotProbability
from .measures import PROBABILITY_TOL, AtomicMeasure1D, dirac, same_location
from .shifts import (
    Extension1D,
    MomentSequence,
    one_var_backward_extension,
    restriction_measure,
    weights_from_measure,
)

Direction = Literal["h", "v"]

DEFAULT_DEPTH_LIMIT = 32


@dataclass(frozen=True)
class _WeightTables:
    x: tuple[float, ...]        # alpha[(k1, 0)]
    y: tuple[float, ...]        # beta[(0, k2)]
    core_h: tuple[float, ...]   # alpha_k, index shifted down by one
    core_v: tuple[float, ...]   # beta_k, index shifted down by one
    col0_h: tuple[float, ...]   # alpha[(0, k2)]
    row0_v: tuple[float, ...]   # beta[(k1, 0)]


@dataclass(frozen=True)
class H0Report:
    """Finite-depth check that every row and column shift is subnormal."""

    passed: bool
    depth: int
    first_failure: tuple[str, int] | None = None
    detail: str | None = None


@dataclass(frozen=True)
class RestrictionMoments:
    """Moment functional of the shift restricted to k2 >= i, k1 >= j.

    Moments renormalise so the restricted gamma_(0,0) is one; the (1, 1)
    restriction is the core.
    """

    instance: "TCInstance"
    i: int
    j: int

    @cached_property
    def _base(self) -> float:
        return self.instance.moment(self.j, self.i)

    def moment(self, k1: int, k2: int) -> float:
        return self.instance.moment(self.j + k1, self.i + k2) / self._base


@dataclass(frozen=True)
class TCInstance:
    """A 2-variable weighted shift with a tensor-form core.

    All four measures must be probability measures and the two core
    measures must keep 1/s (resp. 1/t) integrable, i.e. carry no atom at
    the origin.
    """

    xi_x: AtomicMeasure1D
    eta_y: AtomicMeasure1D
    xi: AtomicMeasure1D
    eta: AtomicMeasure1D
    a: float
    depth_limit: int = DEFAULT_DEPTH_LIMIT

    def __post_init__(self) -> None:
        named = (
            ("xi_x", self.xi_x),
            ("eta_y", self.eta_y),
            ("xi", self.xi),
            ("eta", self.eta),
        )
        for name, measure in named:
            if not measure.is_probability():
                raise NotProbability(
                    f"{name} must be a probability measure, total mass {measure.total_mass!r}"
                )
        for name, measure in (("xi", self.xi), ("eta", self.eta)):
            if measure.mass_at(0.0) != 0.0:
                raise AtomAtZero(f"{name} has an atom at 0")
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise InvalidWeight(f"the joining weight a must be positive, got {self.a!r}")
        if self.depth_limit < 1:
            raise ValueError("depth limit must be at least 1")

    # Derived scalars, cached once per instance.

    @cached_property
    def x0_sq(self) -> float:
        return self.xi_x.moment(1)

    @cached_property
    def y0_sq(self) -> float:
        return self.eta_y.moment(1)

    @cached_property
    def recip_s_xi(self) -> float:
        return self.xi.reciprocal_norm()

    @cached_property
    def recip_t_eta(self) -> float:
        return self.eta.reciprocal_norm()

    @cached_property
    def eta_y_tail(self) -> AtomicMeasure1D:
        """Berger measure of the column-0 shift with its first weight removed."""
        return restriction_measure(self.eta_y, 1)

    @cached_property
    def _tables(self) -> _WeightTables:
        limit = self.depth_limit
        x = weights_from_measure(self.xi_x, limit + 1).prefix
        y = weights_from_measure(self.eta_y, limit + 1).prefix
        core_h = weights_from_measure(self.xi, limit + 1).prefix
        core_v = weights_from_measure(self.eta, limit + 1).prefix
        col0 = [x[0], self.a]
        for k2 in range(1, limit):
            col0.append(col0[k2] * core_v[k2 - 1] / y[k2])
        row0 = [y[0], self.a * y[0] / x[0]]
        for k1 in range(1, limit):
            row0.append(row0[k1] * core_h[k1 - 1] / x[k1])
        return _WeightTables(x, y, core_h, core_v, tuple(col0), tuple(row0))

    def weight_at(self, k1: int, k2: int, direction: Direction) -> float:
        """Weight of the diagram at lattice point (k1, k2).

        Direction "h" is the horizontal weight alpha, "v" the vertical
        weight beta.
        """
        if k1 < 0 or k2 < 0:
            raise ValueError("weight indices must be nonnegative")
        if k1 > self.depth_limit or k2 > self.depth_limit:
            raise DepthExceeded(
                f"index ({k1}, {k2}) beyond the depth limit {self.depth_limit}"
            )
        tables = self._tables
        if direction == "h":
            if k2 == 0:
                return tables.x[k1]
            if k1 == 0:
                return tables.col0_h[k2]
            return tables.core_h[k1 - 1]
        if direction == "v":
            if k1 == 0:
                return tables.y[k2]
            if k2 == 0:
                return tables.row0_v[k1]
            return tables.core_v[k2 - 1]
        raise ValueError(f"direction must be 'h' or 'v', got {direction!r}")

    def moment(self, k1: int, k2: int) -> float:
        """Moment gamma_(k1, k2): squared weights along the row-first path."""
        if k1 < 0 or k2 < 0:
            raise ValueError("moment orders must be nonnegative")
        value = 1.0
        for i in range(k1):
            value *= self.weight_at(i, 0, "h") ** 2
        for j in range(k2):
            value *= self.weight_at(k1, j, "v") ** 2
        return value

    def check_membership_h0(self, depth: int = 8) -> H0Report:
        """Verify, to the given depth, that every row and column shift is
        subnormal.

        Row 0 and column 0 are subnormal by construction; row k2 >= 1 is the
        backward extension of the horizontal core shift by alpha[(0, k2)],
        and column k1 >= 1 of the vertical core shift by beta[(k1, 0)].
        """
        if depth < 1:
            raise ValueError("depth must be at least 1")
        for k2 in range(1, depth + 1):
            ext: Extension1D = one_var_backward_extension(
                self.weight_at(0, k2, "h"), self.xi
            )
            if not ext.subnormal:
                return H0Report(False, depth, ("row", k2), ext.reason)
        for k1 in range(1, depth + 1):
            ext = one_var_backward_extension(self.weight_at(k1, 0, "v"), self.eta)
            if not ext.subnormal:
                return H0Report(False, depth, ("column", k1), ext.reason)
        return H0Report(True, depth)

    def restrict(self, i: int, j: int) -> RestrictionMoments:
        """Moment functional of the restriction to indices k2 >= i, k1 >= j."""
        if i < 0 or j < 0:
            raise ValueError("restriction indices must be nonnegative")
        return RestrictionMoments(self, i, j)

    def row_moments(self, row: int, count: int) -> MomentSequence:
        """Moments of the one-variable shift along a fixed row."""
        restricted = self.restrict(row, 0)
        return MomentSequence(tuple(restricted.moment(k, 0) for k in range(count)))

    def column_moments(self, column: int, count: int) -> MomentSequence:
        """Moments of the one-variable shift along a fixed column."""
        restricted = self.restrict(0, column)
        return MomentSequence(tuple(restricted.moment(0, k) for k in range(count)))


def _check_unit_interval(name: str, value: float, *, allow_zero: bool) -> float:
    value = float(value)
    low_ok = value >= 0.0 if allow_zero else value > 0.0
    if not (math.isfinite(value) and low_ok and value <= 1.0):
        raise InvalidFlat(f"{name} must lie in the unit interval, got {value!r}")
    return value


def _check_support_avoids(measure: AtomicMeasure1D, name: str, banned: tuple[float, ...]) -> None:
    for loc, _ in measure.atoms:
        for point in banned:
            if same_location(loc, point):
                raise InvalidFlat(f"{name} must not charge {point!r}, found atom at {loc!r}")


@dataclass(frozen=True)
class FlatInstance:
    """Flat 2-variable shift: both core measures are single atoms.

    The horizontal core measure is normalised to delta_1 and the vertical
    one is delta_{b^2}; the marginal data is

        xi_x  = p delta_0 + q delta_1     + (1 - p - q) rho
        eta_y = l delta_0 + m delta_{b^2} + (1 - l - m) sigma

    with rho charging neither 0 nor 1 and sigma charging neither 0 nor b^2.
    The boundary values p = 0, l = 0, q = 1, m = 1 are admitted so that the
    degenerate tensor pair is representable.
    """

    p: float
    q: float
    l: float
    m: float
    b: float
    a: float
    rho: AtomicMeasure1D | None = None
    sigma: AtomicMeasure1D | None = None

    def __post_init__(self) -> None:
        _check_unit_interval("p", self.p, allow_zero=True)
        _check_unit_interval("q", self.q, allow_zero=False)
        _check_unit_interval("l", self.l, allow_zero=True)
        _check_unit_interval("m", self.m, allow_zero=False)
        if self.p + self.q > 1.0 + PROBABILITY_TOL:
            raise InvalidFlat(f"p + q must not exceed 1, got {self.p + self.q!r}")
        if self.l + self.m > 1.0 + PROBABILITY_TOL:
            raise InvalidFlat(f"l + m must not exceed 1, got {self.l + self.m!r}")
        if not (self.b > 0.0 and math.isfinite(self.b)):
            raise InvalidFlat(f"b must be positive, got {self.b!r}")
        if not (0.0 < self.a <= self.b * (1.0 + 1e-12)) or not math.isfinite(self.a):
            raise InvalidFlat(f"a must satisfy 0 < a <= b, got a={self.a!r}, b={self.b!r}")
        self._check_remainder("rho", self.rho, self.rest_x, (0.0, 1.0))
        self._check_remainder("sigma", self.sigma, self.rest_y, (0.0, self.b**2))

    def _check_remainder(
        self,
        name: str,
        measure: AtomicMeasure1D | None,
        weight: float,
        banned: tuple[float, float],
    ) -> None:
        if weight > PROBABILITY_TOL:
            if measure is None or not measure.atoms:
                raise InvalidFlat(f"{name} is required when its weight {weight!r} is positive")
            if not measure.is_probability():
                raise InvalidFlat(f"{name} must be a probability measure")
            _check_support_avoids(measure, name, banned)
        elif measure is not None and measure.atoms:
            raise InvalidFlat(f"{name} given but its weight is zero")

    @property
    def rest_x(self) -> float:
        return 1.0 - (self.p + self.q)

    @property
    def rest_y(self) -> float:
        return 1.0 - (self.l + self.m)

    @cached_property
    def xi_x(self) -> AtomicMeasure1D:
        atoms = []
        if self.p > 0.0:
            atoms.append((0.0, self.p))
        atoms.append((1.0, self.q))
        if self.rest_x > PROBABILITY_TOL and self.rho is not None:
            atoms.extend((loc, self.rest_x * mass) for loc, mass in self.rho.atoms)
        return AtomicMeasure1D(tuple(atoms), probability=True)

    @cached_property
    def eta_y(self) -> AtomicMeasure1D:
        atoms = []
        if self.l > 0.0:
            atoms.append((0.0, self.l))
        atoms.append((self.b**2, self.m))
        if self.rest_y > PROBABILITY_TOL and self.sigma is not None:
            atoms.extend((loc, self.rest_y * mass) for loc, mass in self.sigma.atoms)
        return AtomicMeasure1D(tuple(atoms), probability=True)

    def embed(self, depth_limit: int = DEFAULT_DEPTH_LIMIT) -> TCInstance:
        """The instance as a general tensor-core diagram."""
        return TCInstance(
            xi_x=self.xi_x,
            eta_y=self.eta_y,
            xi=dirac(1.0),
            eta=dirac(self.b**2),
            a=self.a,
            depth_limit=depth_limit,
        )
