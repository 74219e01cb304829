import math
import random
from fractions import Fraction
from itertools import product

import pytest

from wiretaplab.info_theory import (
    JointDistribution,
    check_han_collection,
    check_han_subsets,
    conditional_entropy,
    entropy,
    is_function_of,
    is_independent,
    marginal,
    mutual_information,
    random_rational_distribution,
)

H = Fraction(1, 2)


def uniform_pair():
    return JointDistribution.uniform((("A", 2), ("B", 2)))


def copied_bit():
    return JointDistribution((("A", 2), ("B", 2)), {(0, 0): H, (1, 1): H})


def standard_code_first_view(d=2):
    """Joint of (M, Y1, Y3) for the standard non-linear relay code.

    Built directly from the defining formulas Y1 = L, Y3 = L*(M+L-L) = L*M
    with M, L independent uniform; independent of the code engine.
    """
    weights = {}
    for m, l in product(range(d), repeat=2):
        weights[(m, l, (l * m) % d)] = 1
    return JointDistribution.from_weights((("M", d), ("Y1", d), ("Y3", d)), weights)


class TestConstruction:
    def test_sum_must_be_one(self):
        with pytest.raises(ValueError):
            JointDistribution((("A", 2),), {(0,): Fraction(1, 3)})

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            JointDistribution(
                (("A", 2),), {(0,): Fraction(3, 2), (1,): Fraction(-1, 2)})

    def test_key_outside_alphabet(self):
        with pytest.raises(ValueError):
            JointDistribution((("A", 2),), {(2,): Fraction(1)})

    def test_zero_entries_dropped(self):
        d = JointDistribution((("A", 2),), {(0,): Fraction(1), (1,): Fraction(0)})
        assert (1,) not in d.table

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            JointDistribution.uniform((("A", 2), ("A", 2)))

    def test_json_round_trip(self):
        d = standard_code_first_view()
        again = JointDistribution.from_json_dict(d.to_json_dict())
        assert again == d


class TestMarginal:
    def test_uniform_pair_onto_a(self):
        m = marginal(uniform_pair(), "A")
        assert m.table == {(0,): H, (1,): H}

    def test_point_mass_stays_point_mass(self):
        d = JointDistribution((("A", 2), ("B", 3)), {(1, 2): Fraction(1)})
        for names in ("A", "B", ("A", "B")):
            m = marginal(d, names)
            assert list(m.table.values()) == [Fraction(1)]

    def test_copied_bit_onto_b_is_uniform(self):
        m = marginal(copied_bit(), "B")
        assert m.table == {(0,): H, (1,): H}

    def test_unknown_name_raises(self):
        with pytest.raises(KeyError):
            marginal(uniform_pair(), "C")


class TestEntropy:
    def test_uniform_bit(self):
        d = JointDistribution.uniform((("A", 2),))
        assert entropy(d, "A") == 1.0

    def test_point_mass(self):
        d = JointDistribution((("A", 4),), {(3,): Fraction(1)})
        assert entropy(d, "A") == 0.0

    def test_uniform_z3(self):
        d = JointDistribution.uniform((("A", 3),))
        assert math.isclose(entropy(d, "A"), math.log2(3), rel_tol=1e-12)

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            entropy(uniform_pair(), ())

    def test_conditional_identity(self):
        d = copied_bit()
        assert conditional_entropy(d, "A", "B") == pytest.approx(0.0, abs=1e-12)
        assert conditional_entropy(d, "A", ()) == pytest.approx(1.0, abs=1e-12)


class TestMutualInformation:
    def test_independent_uniform_bits(self):
        assert mutual_information(uniform_pair(), "A", "B") == pytest.approx(
            0.0, abs=1e-12)
        assert is_independent(uniform_pair(), "A", "B")

    def test_copied_bit_one_bit(self):
        assert mutual_information(copied_bit(), "A", "B") == pytest.approx(
            1.0, abs=1e-12)
        assert not is_independent(copied_bit(), "A", "B")

    def test_standard_code_view_half_bit(self):
        # known half-bit leakage of the d=2 standard non-linear relay code
        d = standard_code_first_view()
        assert mutual_information(d, "M", ("Y1", "Y3")) == pytest.approx(
            0.5, abs=1e-12)

    def test_overlap_rejected(self):
        with pytest.raises(ValueError):
            mutual_information(uniform_pair(), "A", ("A", "B"))

    def test_symmetry_on_random(self):
        rng = random.Random(11)
        for _ in range(50):
            d = random_rational_distribution(rng, (("A", 2), ("B", 3), ("C", 2)))
            ab = mutual_information(d, "A", ("B", "C"))
            ba = mutual_information(d, ("B", "C"), "A")
            assert ab == pytest.approx(ba, abs=1e-12)
            assert ab >= -1e-12

    def test_zero_for_explicit_products(self):
        rng = random.Random(12)
        for _ in range(30):
            a = random_rational_distribution(rng, (("A", 3),))
            b = random_rational_distribution(rng, (("B", 2), ("C", 2)))
            d = JointDistribution.product_of(a, b)
            assert is_independent(d, "A", ("B", "C"))
            assert mutual_information(d, "A", ("B", "C")) == pytest.approx(
                0.0, abs=1e-12)


class TestIsFunctionOf:
    def test_copy_is_function(self):
        assert is_function_of(copied_bit(), "A", "B")

    def test_independent_is_not(self):
        assert not is_function_of(uniform_pair(), "A", "B")

    def test_standard_code_not_recoverable(self):
        assert not is_function_of(standard_code_first_view(), "M", ("Y1", "Y3"))

    def test_empty_given_is_point_mass_test(self):
        d = JointDistribution((("A", 2), ("B", 2)),
                              {(1, 0): H, (1, 1): H})
        assert is_function_of(d, "A", ())
        assert not is_function_of(d, "B", ())

    def test_function_implies_full_information(self):
        rng = random.Random(13)
        for _ in range(40):
            d = random_rational_distribution(rng, (("A", 3), ("B", 3)))
            if is_function_of(d, "A", "B"):
                assert mutual_information(d, "A", "B") == pytest.approx(
                    entropy(d, "A"), abs=1e-12)


def y_equal_pair():
    # Y1 = Y2 uniform bit, no conditioning
    return JointDistribution(
        (("Y1", 2), ("Y2", 2)), {(0, 0): H, (1, 1): H})


class TestHanCollection:
    def test_full_set_collection_is_equality(self):
        d = JointDistribution.uniform((("Y1", 2), ("Y2", 3), ("X", 2)))
        res = check_han_collection(d, ("Y1", "Y2"), "X", [(0, 1)], 1)
        assert res.holds
        assert res.slack == 0.0

    def test_copied_pair_slack_one_bit(self):
        res = check_han_collection(y_equal_pair(), ("Y1", "Y2"), (), [(0,), (1,)], 1)
        assert res.holds
        assert res.slack == pytest.approx(1.0, abs=1e-12)

    def test_cover_count_precondition(self):
        d = JointDistribution.uniform((("Y1", 2), ("Y2", 2)))
        with pytest.raises(ValueError):
            check_han_collection(d, ("Y1", "Y2"), (), [(0,), (0, 1)], 1)

    def test_random_sweep_k3(self):
        rng = random.Random(20240917)
        variables = (("X", 2), ("Y1", 2), ("Y2", 2), ("Y3", 2))
        groups = ("Y1", "Y2", "Y3")
        for _ in range(1000):
            d = random_rational_distribution(rng, variables)
            for r in (1, 2, 3):
                assert check_han_subsets(d, groups, "X", r).holds


class TestHanSubsets:
    def test_r_equals_k_exact_zero(self):
        rng = random.Random(5)
        for _ in range(25):
            d = random_rational_distribution(rng, (("X", 2), ("Y1", 3), ("Y2", 2)))
            res = check_han_subsets(d, ("Y1", "Y2"), "X", 2)
            assert res.holds
            assert res.slack == 0.0

    def test_independent_uniform_r1_is_tight(self):
        d = JointDistribution.uniform((("Y1", 2), ("Y2", 2), ("Y3", 2)))
        res = check_han_subsets(d, ("Y1", "Y2", "Y3"), (), 1)
        assert res.holds
        assert res.slack == 0.0

    def test_random_sweep_k4(self):
        rng = random.Random(31337)
        variables = (("X", 2), ("Y1", 2), ("Y2", 2), ("Y3", 2), ("Y4", 2))
        groups = ("Y1", "Y2", "Y3", "Y4")
        for _ in range(500):
            d = random_rational_distribution(rng, variables)
            assert check_han_subsets(d, groups, "X", 2).holds

    def test_r_out_of_range(self):
        d = JointDistribution.uniform((("Y1", 2), ("Y2", 2)))
        with pytest.raises(ValueError):
            check_han_subsets(d, ("Y1", "Y2"), (), 3)

    def test_vector_groups_supported(self):
        # Y groups may be tuples of variables, matching the vector setting
        d = JointDistribution.uniform(
            (("A1", 2), ("A2", 2), ("B", 2), ("X", 2)))
        res = check_han_subsets(d, (("A1", "A2"), "B"), "X", 1)
        assert res.holds


class TestEntropyMonotone:
    def test_monotone_on_random(self):
        rng = random.Random(99)
        for _ in range(60):
            d = random_rational_distribution(rng, (("A", 2), ("B", 3), ("C", 2)))
            assert entropy(d, "A") <= entropy(d, ("A", "B")) + 1e-12
            assert entropy(d, ("A", "B")) <= entropy(d, ("A", "B", "C")) + 1e-12
