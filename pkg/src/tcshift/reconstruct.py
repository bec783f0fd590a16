"""Subnormality verdicts and closed-form reconstruction of the joint
Berger measure for tensor-core diagrams.

Write tail for the measure of the column-0 shift with its first weight
removed, and r_s = ||1/s||_{L1(xi)}, r_t = ||1/t||_{L1(eta)}.  Two signed
measures carry the whole decision:

    psi = tail - a^2 r_s eta
    phi = xi_x - y0^2 ||1/t||_{L1(psi)} delta_0 - a^2 y0^2 r_s r_t xi~

The diagram is subnormal exactly when both are positive measures, and the
joint measure then splits into three mutually singular pieces: a tensor
part a^2 y0^2 r_s r_t (xi~ x eta~) in the open quadrant, a vertical-axis
part y0^2 ||1/t||_psi (delta_0 x psi~), and a horizontal-axis part
phi x delta_0.  An equivalent assembly writes the same measure as
xi_x x eta~ plus signed corrections supported on the two axes; both forms
are implemented and must agree atom for atom.

When psi fails positivity the diagram is not even subnormal after deleting
row 0; when only phi fails, the upper part is subnormal but no backward
extension by y0 exists.  ``backward_extension`` re-derives the same verdict
through the three classical conditions (reciprocal integrability, the norm
bound on the prepended weight, marginal domination), giving an independent
second route to every answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AtomAtZero, PreconditionViolated
from .diagram import FlatInstance, TCInstance
from .measures import (
    POSITIVITY_REL_TOL,
    PROBABILITY_TOL,
    AtomicMeasure1D,
    AtomicMeasure2D,
    SignedMeasure1D,
    atom_difference,
    combine,
    dirac,
    positivity,
    product,
    same_location,
)

DEFAULT_TOL = POSITIVITY_REL_TOL

BergerForm = str  # "split" or "correction"


@dataclass(frozen=True)
class Diagnostics:
    """Reciprocal norms feeding the criterion and the reconstruction."""

    recip_s_xi: float
    recip_t_eta: float
    recip_t_psi: float
    recip_t_eta_y_tail: float


@dataclass(frozen=True)
class Witness:
    """Most negative atom of the measure that failed positivity."""

    measure: str
    location: float
    mass: float


@dataclass(frozen=True)
class Verdict:
    """Subnormality decision together with its certificate.

    Exactly one of ``witness`` and ``berger`` is present: a witness for a
    negative verdict, the reconstructed joint measure otherwise.
    """

    subnormal: bool
    witness: Witness | None
    berger: AtomicMeasure2D | None
    diagnostics: Diagnostics
    psi: SignedMeasure1D
    phi: SignedMeasure1D
    reason: str | None = None

    def __post_init__(self) -> None:
        if self.subnormal and (self.witness is not None or self.berger is None):
            raise ValueError("a subnormal verdict carries a measure and no witness")
        if not self.subnormal and (self.witness is None or self.berger is not None):
            raise ValueError("a negative verdict carries a witness and no measure")


def compute_psi(instance: TCInstance) -> SignedMeasure1D:
    """The vertical slack measure tail - a^2 ||1/s||_{L1(xi)} eta."""
    return combine(
        [
            (1.0, instance.eta_y_tail),
            (-(instance.a**2) * instance.recip_s_xi, instance.eta),
        ]
    )


def compute_phi(
    instance: TCInstance, psi: SignedMeasure1D | None = None
) -> SignedMeasure1D:
    """The horizontal slack measure.

    Uses the signed integral of 1/t against psi, so it is defined whether
    or not psi is positive; an atom of psi at the origin (impossible for
    validated instances) raises AtomAtZero.
    """
    if psi is None:
        psi = compute_psi(instance)
    recip_t_psi = psi.reciprocal_norm()
    return combine(
        [
            (1.0, instance.xi_x),
            (-instance.y0_sq * recip_t_psi, dirac(0.0)),
            (
                -(instance.a**2)
                * instance.y0_sq
                * instance.recip_s_xi
                * instance.recip_t_eta,
                instance.xi.tilde(),
            ),
        ]
    )


def _diagnostics(instance: TCInstance, recip_t_psi: float) -> Diagnostics:
    return Diagnostics(
        recip_s_xi=instance.recip_s_xi,
        recip_t_eta=instance.recip_t_eta,
        recip_t_psi=recip_t_psi,
        recip_t_eta_y_tail=instance.eta_y_tail.reciprocal_norm(),
    )


def subnormality_verdict(instance: TCInstance, tol: float = DEFAULT_TOL) -> Verdict:
    """Decide subnormality via positivity of psi and phi.

    psi is checked first; when it fails, phi is still evaluated (with the
    signed reciprocal integral) so reports can show both measures.
    """
    psi = compute_psi(instance)
    try:
        recip_t_psi = psi.reciprocal_norm()
    except AtomAtZero:
        # 1/t fails to be integrable against the upper-part measure, which
        # rules out any backward extension to row 0.
        witness = Witness("psi", 0.0, psi.mass_at(0.0))
        diag = Diagnostics(
            recip_s_xi=instance.recip_s_xi,
            recip_t_eta=instance.recip_t_eta,
            recip_t_psi=math.inf,
            recip_t_eta_y_tail=instance.eta_y_tail.reciprocal_norm(),
        )
        return Verdict(
            False, witness, None, diag, psi, SignedMeasure1D(()),
            reason="1/t is not integrable against the upper-part measure",
        )
    phi = compute_phi(instance, psi)
    diag = _diagnostics(instance, recip_t_psi)
    psi_check = positivity(psi, tol)
    if not psi_check.positive:
        witness = Witness("psi", psi_check.location, psi_check.mass)
        return Verdict(False, witness, None, diag, psi, phi, reason="psi has a negative atom")
    phi_check = positivity(phi, tol)
    if not phi_check.positive:
        witness = Witness("phi", phi_check.location, phi_check.mass)
        return Verdict(False, witness, None, diag, psi, phi, reason="phi has a negative atom")
    mu = berger_measure(instance, tol=tol, psi=psi, phi=phi)
    return Verdict(True, None, mu, diag, psi, phi)


def berger_measure(
    instance: TCInstance,
    tol: float = DEFAULT_TOL,
    form: BergerForm = "split",
    psi: SignedMeasure1D | None = None,
    phi: SignedMeasure1D | None = None,
) -> AtomicMeasure2D:
    """Assemble the joint Berger measure of a subnormal instance.

    ``form="split"`` sums the three mutually singular nonnegative pieces;
    ``form="correction"`` starts from xi_x x eta~ and applies the signed
    axis corrections.  Both must produce the same measure.  Raises
    PreconditionViolated when psi or phi has a genuinely negative atom.
    """
    if psi is None:
        psi = compute_psi(instance)
    if phi is None:
        phi = compute_phi(instance, psi)
    psi_pos = psi.as_positive(tol)
    phi_pos = phi.as_positive(tol)
    recip_t_psi = psi_pos.reciprocal_norm() if psi_pos.atoms else 0.0
    c_tensor = (
        instance.a**2 * instance.y0_sq * instance.recip_s_xi * instance.recip_t_eta
    )
    c_axis = instance.y0_sq * recip_t_psi
    eta_tilde = instance.eta.tilde()
    origin = dirac(0.0)
    if form == "split":
        terms = [(c_tensor, product(instance.xi.tilde(), eta_tilde))]
        if psi_pos.atoms:
            terms.append((c_axis, product(origin, psi_pos.tilde())))
        if phi_pos.atoms:
            terms.append((1.0, product(phi_pos, origin)))
    elif form == "correction":
        terms = [(1.0, product(instance.xi_x, eta_tilde))]
        if phi_pos.atoms:
            terms.append((1.0, product(phi_pos, origin)))
            terms.append((-1.0, product(phi_pos, eta_tilde)))
        if psi_pos.atoms:
            terms.append((c_axis, product(origin, psi_pos.tilde())))
            terms.append((-c_axis, product(origin, eta_tilde)))
    else:
        raise ValueError(f"form must be 'split' or 'correction', got {form!r}")
    return combine(terms).as_positive(tol, probability=True)


def measure_M(
    instance: TCInstance,
    tol: float = DEFAULT_TOL,
    psi: SignedMeasure1D | None = None,
) -> AtomicMeasure2D:
    """Berger measure of the restriction to rows k2 >= 1.

    Equals a^2 ||1/s||_{L1(xi)} (xi~ x eta) + delta_0 x psi and exists
    exactly when psi is positive.
    """
    if psi is None:
        psi = compute_psi(instance)
    psi_pos = psi.as_positive(tol)
    terms = [
        (
            instance.a**2 * instance.recip_s_xi,
            product(instance.xi.tilde(), instance.eta),
        )
    ]
    if psi_pos.atoms:
        terms.append((1.0, product(dirac(0.0), psi_pos)))
    return combine(terms).as_positive(tol, probability=True)


@dataclass(frozen=True)
class BackwardExtension2D:
    """Outcome of prepending row 0 to a subnormal upper part.

    ``failed_condition`` indexes the three requirements in order:
    1 reciprocal integrability of 1/t, 2 the bound beta00^2 ||1/t|| <= 1,
    3 atom-wise domination of the scaled extremal marginal by nu.
    """

    subnormal: bool
    measure: AtomicMeasure2D | None
    failed_condition: int | None = None
    ratio: float | None = None
    witness: tuple[float, float] | None = None


def backward_extension(
    mu_m: AtomicMeasure2D,
    nu: AtomicMeasure1D,
    beta00: float,
    tol: float = DEFAULT_TOL,
) -> BackwardExtension2D:
    """Extend a planar measure downward by a new bottom row.

    Given the measure of the upper part, the measure nu of the new row-0
    shift and the prepended vertical weight beta00, the extension is
    subnormal exactly when (1) no atom of mu_m sits on the s-axis,
    (2) r := beta00^2 ||1/t||_{L1(mu_m)} <= 1 and (3) r (mu_m)_ext^X <= nu
    atom-wise; the extended measure is then

        r (mu_m)_ext + (nu - r (mu_m)_ext^X) x delta_0.

    When r = 1, condition (3) forces the extremal marginal to equal nu.
    """
    if any(same_location(atom[1], 0.0) for atom in mu_m.atoms):
        return BackwardExtension2D(False, None, failed_condition=1)
    ratio = beta00**2 * mu_m.reciprocal_norm("y")
    if ratio > 1.0 + tol:
        return BackwardExtension2D(False, None, failed_condition=2, ratio=ratio)
    extremal = mu_m.extremal()
    extremal_x = extremal.marginal("x")
    slack = combine([(1.0, nu), (-ratio, extremal_x)])
    check = positivity(slack, tol)
    if not check.positive:
        return BackwardExtension2D(
            False,
            None,
            failed_condition=3,
            ratio=ratio,
            witness=(check.location, check.mass),
        )
    if abs(ratio - 1.0) <= tol and atom_difference(extremal_x, nu) > 10.0 * max(tol, 1e-15):
        raise PreconditionViolated(
            "unit mass ratio forces the extremal marginal to equal nu"
        )
    rest = slack.as_positive(tol)
    terms = [(ratio, extremal)]
    if rest.atoms:
        terms.append((1.0, product(rest, dirac(0.0))))
    measure = combine(terms).as_positive(tol, probability=True)
    return BackwardExtension2D(True, measure, ratio=ratio)


def flat_verdict(flat: FlatInstance, tol: float = DEFAULT_TOL) -> Verdict:
    """Subnormality of a flat instance through the scalar criterion.

    Works entirely with the closed forms available in the flat case: psi is
    supported on {b^2} union supp(sigma), the domination condition on xi_x
    involves only the atoms at 0 and 1, and the reconstructed measure uses
    eta~ = delta_{b^2}.  The verdict must coincide with
    ``subnormality_verdict`` of the embedded instance.
    """
    b_sq = flat.b**2
    a_sq = flat.a**2
    rest_y = flat.rest_y if flat.rest_y > PROBABILITY_TOL else 0.0
    sigma_atoms = flat.sigma.atoms if flat.sigma is not None and rest_y > 0.0 else ()
    y0_sq = flat.m * b_sq + rest_y * sum(t * mass for t, mass in sigma_atoms)
    tail_atoms = [(b_sq, flat.m * b_sq / y0_sq)]
    tail_atoms.extend((t, rest_y * t * mass / y0_sq) for t, mass in sigma_atoms)
    tail = AtomicMeasure1D(tuple(tail_atoms), probability=True)
    recip_tail = tail.reciprocal_norm()

    # (b/a) sqrt(m) >= y0 is exactly positivity of psi at the atom b^2.
    psi = combine([(1.0, tail), (-a_sq, dirac(b_sq))])
    recip_t_psi = recip_tail - a_sq / b_sq

    xi_x = flat.xi_x
    phi = combine(
        [
            (1.0, xi_x),
            (-y0_sq * (recip_tail - a_sq / b_sq), dirac(0.0)),
            (-y0_sq * a_sq / b_sq, dirac(1.0)),
        ]
    )
    diag = Diagnostics(
        recip_s_xi=1.0,
        recip_t_eta=1.0 / b_sq,
        recip_t_psi=recip_t_psi,
        recip_t_eta_y_tail=recip_tail,
    )
    psi_check = positivity(psi, tol)
    if not psi_check.positive:
        witness = Witness("psi", psi_check.location, psi_check.mass)
        return Verdict(False, witness, None, diag, psi, phi, reason="psi has a negative atom")
    phi_check = positivity(phi, tol)
    if not phi_check.positive:
        witness = Witness("phi", phi_check.location, phi_check.mass)
        return Verdict(False, witness, None, diag, psi, phi, reason="phi has a negative atom")

    psi_pos = psi.as_positive(tol)
    phi_pos = phi.as_positive(tol)
    c_axis = y0_sq * (psi_pos.reciprocal_norm() if psi_pos.atoms else 0.0)
    origin = dirac(0.0)
    bottom = dirac(b_sq)
    terms = [(1.0, product(xi_x, bottom))]
    if phi_pos.atoms:
        terms.append((1.0, product(phi_pos, origin)))
        terms.append((-1.0, product(phi_pos, bottom)))
    if psi_pos.atoms:
        terms.append((c_axis, product(origin, psi_pos.tilde())))
        terms.append((-c_axis, product(origin, bottom)))
    mu = combine(terms).as_positive(tol, probability=True)
    return Verdict(True, None, mu, diag, psi, phi)
