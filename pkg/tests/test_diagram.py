"""Weight-diagram synthesis: boundary recursions, moments, membership."""

import math
import random

import pytest

from tcshift.diagram import FlatInstance, TCInstance
from tcshift.errors import (
    AtomAtZero,
    DepthExceeded,
    InvalidFlat,
    InvalidWeight,
    NotProbability,
)
from tcshift.measures import dirac

from helpers import (
    assert_measures_close,
    assert_scalar_close,
    f1_instance,
    half_half,
    m1,
    n1_instance,
    random_tc_instance,
    spike_instance,
    trivial_instance,
)


class TestBuild:
    def test_trivial_pair(self):
        inst = trivial_instance()
        assert inst.x0_sq == 1.0
        assert inst.recip_s_xi == 1.0

    def test_f1_is_valid(self):
        inst = f1_instance()
        assert inst.y0_sq == 0.5
        assert inst.recip_t_eta == 1.0

    def test_core_measure_with_atom_at_origin_rejected(self):
        with pytest.raises(AtomAtZero):
            TCInstance(dirac(1.0), dirac(1.0), m1((0.0, 0.75), (1.0, 0.25)), dirac(1.0), 1.0)

    def test_non_probability_rejected(self):
        with pytest.raises(NotProbability):
            TCInstance(m1((1.0, 0.9)), dirac(1.0), dirac(1.0), dirac(1.0), 1.0)

    def test_nonpositive_joining_weight_rejected(self):
        with pytest.raises(InvalidWeight):
            TCInstance(dirac(1.0), dirac(1.0), dirac(1.0), dirac(1.0), 0.0)


class TestWeights:
    def test_trivial_pair_is_all_ones(self):
        inst = trivial_instance()
        for k1, k2 in ((0, 0), (3, 0), (0, 5), (2, 4), (7, 7)):
            assert inst.weight_at(k1, k2, "h") == 1.0
            assert inst.weight_at(k1, k2, "v") == 1.0

    def test_f1_bottom_row_vertical(self):
        # commutativity forces beta[(1,0)] = a y0 / x0
        inst = f1_instance()
        assert_scalar_close(inst.weight_at(1, 0, "v"), math.sqrt(0.5))

    def test_f1_column_zero_horizontal(self):
        inst = f1_instance()
        assert_scalar_close(inst.weight_at(0, 2, "h"), math.sqrt(0.5))

    def test_n1_bottom_row_verticals_freeze(self):
        # a^2 y0^2 / x0^2 = 0.25 / 0.9, constant along the bottom row
        inst = n1_instance()
        for k1 in range(1, 8):
            assert_scalar_close(inst.weight_at(k1, 0, "v") ** 2, 0.25 / 0.9)

    def test_depth_limit(self):
        inst = f1_instance()
        with pytest.raises(DepthExceeded):
            inst.weight_at(inst.depth_limit + 1, 0, "h")

    def test_moment_ratios_recover_squared_weights(self):
        rng = random.Random(7)
        instances = [f1_instance(), n1_instance()] + [
            random_tc_instance(rng) for _ in range(3)
        ]
        for inst in instances:
            for k1 in range(6):
                for k2 in range(6):
                    gamma = inst.moment(k1, k2)
                    assert_scalar_close(
                        inst.moment(k1 + 1, k2) / gamma,
                        inst.weight_at(k1, k2, "h") ** 2,
                        1e-12,
                    )
                    assert_scalar_close(
                        inst.moment(k1, k2 + 1) / gamma,
                        inst.weight_at(k1, k2, "v") ** 2,
                        1e-12,
                    )


class TestMoments:
    def test_order_zero(self):
        assert trivial_instance().moment(0, 0) == 1.0
        assert f1_instance().moment(0, 0) == 1.0

    def test_f1_interior(self):
        assert_scalar_close(f1_instance().moment(2, 1), 0.25)

    def test_f1_bottom_row(self):
        assert_scalar_close(f1_instance().moment(3, 0), 0.5)

    def test_path_independence(self):
        rng = random.Random(13)
        instances = [f1_instance(), n1_instance(), trivial_instance()] + [
            random_tc_instance(rng) for _ in range(3)
        ]
        for inst in instances:
            for total in range(13):
                for k1 in range(total + 1):
                    k2 = total - k1
                    row_first = inst.moment(k1, k2)
                    column_first = 1.0
                    for j in range(k2):
                        column_first *= inst.weight_at(0, j, "v") ** 2
                    for i in range(k1):
                        column_first *= inst.weight_at(i, k2, "h") ** 2
                    assert_scalar_close(row_first, column_first, 1e-12)


class TestMembership:
    def test_trivial_pair_passes(self):
        assert trivial_instance().check_membership_h0(8).passed

    def test_f1_passes(self):
        assert f1_instance().check_membership_h0(8).passed

    def test_n1_passes(self):
        # in the base class yet not subnormal: the point of the criterion
        assert n1_instance().check_membership_h0(8).passed

    def test_oversized_joining_weight_fails_in_row_one(self):
        report = spike_instance(2.0).check_membership_h0(8)
        assert not report.passed
        assert report.first_failure == ("row", 1)


class TestRestriction:
    def test_identity(self):
        inst = f1_instance()
        restricted = inst.restrict(0, 0)
        for k1, k2 in ((0, 0), (2, 1), (4, 3)):
            assert restricted.moment(k1, k2) == inst.moment(k1, k2)

    def test_f1_core_is_the_unweighted_tensor_pair(self):
        core = f1_instance().restrict(1, 1)
        for k1 in range(5):
            for k2 in range(5):
                assert_scalar_close(core.moment(k1, k2), 1.0)

    def test_core_moments_factor(self):
        rng = random.Random(21)
        for _ in range(5):
            core = random_tc_instance(rng).restrict(1, 1)
            for k1 in range(1, 7):
                for k2 in range(1, 7):
                    assert_scalar_close(
                        core.moment(k1, k2),
                        core.moment(k1, 0) * core.moment(0, k2),
                        1e-12,
                    )

    def test_row_moments(self):
        # row 1 of F1 is shift(a, 1, 1, ...), so the moments freeze at a^2
        seq = f1_instance().row_moments(1, 5)
        assert seq.values == pytest.approx((1.0, 0.5, 0.5, 0.5, 0.5), abs=1e-12)


class TestFlatInstance:
    def test_embedding_reproduces_the_marginal_measures(self):
        flat = FlatInstance(p=0.5, q=0.5, l=0.5, m=0.5, b=1.0, a=math.sqrt(0.5))
        inst = flat.embed()
        assert_measures_close(inst.xi_x, half_half())
        assert_measures_close(inst.eta_y, half_half())
        assert inst.xi.atoms == ((1.0, 1.0),)
        assert inst.eta.atoms == ((1.0, 1.0),)

    def test_scaled_core(self):
        flat = FlatInstance(p=0.25, q=0.75, l=0.5, m=0.5, b=1.5, a=1.0)
        inst = flat.embed()
        assert inst.eta.atoms == ((2.25, 1.0),)
        assert_measures_close(inst.eta_y, m1((0.0, 0.5), (2.25, 0.5)))

    def test_mass_bounds(self):
        with pytest.raises(InvalidFlat):
            FlatInstance(p=0.7, q=0.7, l=0.5, m=0.5, b=1.0, a=1.0)
        with pytest.raises(InvalidFlat):
            FlatInstance(p=0.5, q=0.0, l=0.5, m=0.5, b=1.0, a=1.0)

    def test_joining_weight_bounded_by_core(self):
        with pytest.raises(InvalidFlat):
            FlatInstance(p=0.5, q=0.5, l=0.5, m=0.5, b=1.0, a=1.2)

    def test_remainder_required_when_weighted(self):
        with pytest.raises(InvalidFlat):
            FlatInstance(p=0.3, q=0.3, l=0.5, m=0.5, b=1.0, a=1.0)

    def test_remainder_support_restrictions(self):
        with pytest.raises(InvalidFlat):
            FlatInstance(
                p=0.3, q=0.3, l=0.5, m=0.5, b=1.0, a=1.0, rho=dirac(1.0)
            )
        with pytest.raises(InvalidFlat):
            FlatInstance(
                p=0.5, q=0.5, l=0.3, m=0.3, b=1.0, a=1.0, sigma=dirac(1.0)
            )

    def test_valid_remainders(self):
        flat = FlatInstance(
            p=0.3,
            q=0.3,
            l=0.3,
            m=0.3,
            b=1.0,
            a=0.5,
            rho=m1((2.0, 1.0)),
            sigma=m1((0.5, 0.5), (2.0, 0.5)),
        )
        assert_measures_close(
            flat.xi_x, m1((0.0, 0.3), (1.0, 0.3), (2.0, 0.4))
        )
        assert_measures_close(
            flat.eta_y, m1((0.0, 0.3), (0.5, 0.2), (1.0, 0.3), (2.0, 0.2))
        )
