import math
from itertools import product

import pytest

from wiretaplab.anti_latin import (
    AntiLatinSquare,
    find_decodable_pair,
    reference_decodable_pair,
)
from wiretaplab.info_theory import JointDistribution, is_independent, mutual_information
from wiretaplab.onehop_codes import (
    OneHopCode,
    anti_latin_code,
    check_correctness,
    enumerate_onehop_codes,
    is_equivalent_to_standard,
    scalar_linear_code,
    standard_equivalence_certificate,
    standard_nonlinear_code,
    vector_linear_code,
)

# fixed by the d=2 exhaustive enumeration (256 x 256 encoder/relay pairs)
ENUM_CORRECT_COUNT_D2 = 11232


def view_joint(code, view_symbols, d):
    """Joint law of (M, chosen wire symbols) built straight off the tables."""
    weights = {}
    for key in code.encoder_inputs():
        m, scrambles = key[0], key[1:]
        for lp in code.relay_random_values():
            first, y34, _ = code.transmit(m, scrambles, lp)
            symbols = {"Y1": first[0], "Y2": first[1], "Y3": y34[0], "Y4": y34[1]}
            if code.shots == 2:
                symbols["Y1p"], symbols["Y2p"] = first[2], first[3]
            k = (m,) + tuple(symbols[s] for s in view_symbols)
            weights[k] = weights.get(k, 0) + 1
    variables = [("M", d)] + [(s, d) for s in view_symbols]
    return JointDistribution.from_weights(variables, weights)


class TestScalarLinear:
    def test_single_transcript_d2(self):
        code = scalar_linear_code(2)
        first, y34, decoded = code.transmit(1, (0,), 1)
        assert first == (0, 1)
        assert y34 == (1, 0)
        assert decoded == 1

    def test_all_inputs_decode_d3(self):
        code = scalar_linear_code(3)
        for m, l, lp in product(range(3), repeat=3):
            assert code.transmit(m, (l,), lp)[2] == m

    def test_passive_views_leak_nothing(self):
        code = scalar_linear_code(3)
        for view in (("Y1", "Y3"), ("Y1", "Y4"), ("Y2", "Y3"), ("Y2", "Y4")):
            d = view_joint(code, view, 3)
            assert is_independent(d, "M", view)
            assert mutual_information(d, "M", view) == pytest.approx(0.0, abs=1e-12)


class TestStandardNonlinear:
    def test_d2_relay_formula(self):
        code = standard_nonlinear_code(2)
        for m, l in product(range(2), repeat=2):
            _, (y3, y4), _ = code.transmit(m, (l,))
            assert y3 == (l * m) % 2
            assert y4 == (l * m + m) % 2

    def test_zero_scramble_any_d(self):
        for d in (2, 3, 5, 7):
            code = standard_nonlinear_code(d)
            for m in range(d):
                _, (y3, y4), _ = code.transmit(m, (0,))
                assert (y3, y4) == (0, m)

    def test_all_inputs_decode_d5(self):
        code = standard_nonlinear_code(5)
        for m, l in product(range(5), repeat=2):
            assert code.transmit(m, (l,))[2] == m


class TestAntiLatinCode:
    def test_reference_pair_d3_builds(self):
        code = anti_latin_code(*reference_decodable_pair(3))
        assert check_correctness(code)

    def test_reference_pair_d4_builds(self):
        code = anti_latin_code(*reference_decodable_pair(4))
        assert check_correctness(code)

    def test_constant_pair_d2_rejected(self):
        zeros = AntiLatinSquare.from_rows([[0, 0], [0, 0]])
        ones = AntiLatinSquare.from_rows([[1, 1], [1, 1]])
        with pytest.raises(ValueError):
            anti_latin_code(zeros, ones)

    def test_decoder_inverts_xi_partition(self):
        for d in (3, 4):
            a, b = reference_decodable_pair(d)
            code = anti_latin_code(a, b)
            for l, m in product(range(d), repeat=2):
                y3 = a.entry(l, (l + m) % d)
                y4 = b.entry(l, (l + m) % d)
                assert code.decoder[(y3, y4)] == m


class TestVectorLinear:
    def test_all_inputs_decode_d3(self):
        code = vector_linear_code(3)
        for m, l1, l2, l3 in product(range(3), repeat=4):
            assert code.transmit(m, (l1, l2, l3))[2] == m

    def test_first_edge_view_independent_of_message(self):
        code = vector_linear_code(2)
        d = view_joint(code, ("Y1", "Y1p", "Y3"), 2)
        assert is_independent(d, "M", ("Y1", "Y1p", "Y3"))
        assert mutual_information(d, "M", ("Y1", "Y1p", "Y3")) == pytest.approx(
            0.0, abs=1e-12)

    def test_rate_is_half_log_d(self):
        for d in (2, 3, 4, 5):
            assert vector_linear_code(d).rate_bits == pytest.approx(
                0.5 * math.log2(d), abs=1e-12)


class TestCheckCorrectness:
    def test_built_in_codes(self):
        for d in (2, 3, 4, 5):
            assert check_correctness(scalar_linear_code(d))
            assert check_correctness(standard_nonlinear_code(d))
            assert check_correctness(vector_linear_code(d))
        for d in (3, 4):
            assert check_correctness(anti_latin_code(*reference_decodable_pair(d)))

    def test_built_in_codes_wider_range(self):
        for d in (6, 7):
            assert check_correctness(scalar_linear_code(d))
            assert check_correctness(standard_nonlinear_code(d))
            assert check_correctness(vector_linear_code(d))
        # anti-Latin pairs via the seeded search inside its supported range
        for d in (5, 6):
            result = find_decodable_pair(d)
            assert result.found
            assert check_correctness(anti_latin_code(*result.pair))

    def test_swapped_decoder_fails_d3(self):
        base = standard_nonlinear_code(3)
        swapped = OneHopCode(
            3, 1, 1, False, base.encoder, base.relay,
            {(y3, y4): (y3 - y4) % 3 for y3, y4 in product(range(3), repeat=2)},
            name="standard-swapped")
        assert not check_correctness(swapped)

    def test_identity_relay_code_is_correct(self):
        # Y1 = M on the wire: correct but obviously insecure
        encoder = {(m, l): ((m, l),) for m, l in product(range(2), repeat=2)}
        relay = {(y1, y2): (y1, y2) for y1, y2 in product(range(2), repeat=2)}
        decoder = {(y3, y4): y3 for y3, y4 in product(range(2), repeat=2)}
        code = OneHopCode(2, 1, 1, False, encoder, relay, decoder, name="identity")
        assert check_correctness(code)


@pytest.fixture(scope="module")
def codes():
    return list(enumerate_onehop_codes(2))


class TestEnumeration:

    def test_count_frozen(self, codes):
        assert len(codes) == ENUM_CORRECT_COUNT_D2
        assert len(codes) > 0

    def test_contains_standard_code(self, codes):
        std = standard_nonlinear_code(2)
        assert any(c == std for c in codes)

    def test_sample_is_correct(self, codes):
        for code in codes[::97]:
            assert check_correctness(code)

    def test_d3_rejected(self):
        with pytest.raises(ValueError):
            next(enumerate_onehop_codes(3))


class TestEquivalence:
    def test_standard_is_equivalent_to_itself(self):
        assert is_equivalent_to_standard(standard_nonlinear_code(2))

    def test_scalar_without_randomness_is_not(self):
        assert not is_equivalent_to_standard(scalar_linear_code(2, relay_randomness=False))

    def test_complemented_second_layer_is_equivalent(self):
        base = standard_nonlinear_code(2)
        relay = {k: ((v[0] + 1) % 2, (v[1] + 1) % 2) for k, v in base.relay.items()}
        support = {}
        for (m, l) in product(range(2), repeat=2):
            support[relay[base.encoder[(m, l)][0]]] = m
        decoder = {k: support.get(k, 0) for k in product(range(2), repeat=2)}
        code = OneHopCode(2, 1, 1, False, base.encoder, relay, decoder,
                          name="standard-complemented")
        assert check_correctness(code)
        cert = standard_equivalence_certificate(code)
        assert cert is not None
        # both second-layer symbols need the complement relabeling
        assert cert["flips"][2] == 1 and cert["flips"][3] == 1

    def test_certificate_reports_scramble_joint(self):
        cert = standard_equivalence_certificate(standard_nonlinear_code(2))
        assert cert is not None
        joint = cert["message_scramble_joint"]
        assert sum(joint.values()) == 1

    def test_requires_d2(self):
        with pytest.raises(ValueError):
            is_equivalent_to_standard(standard_nonlinear_code(3))


class TestSerialization:
    def test_json_round_trip_all_families(self):
        codes = [scalar_linear_code(3), standard_nonlinear_code(4),
                 vector_linear_code(2),
                 anti_latin_code(*reference_decodable_pair(3))]
        for code in codes:
            again = OneHopCode.from_json_dict(code.to_json_dict())
            assert again == code

    def test_partial_table_rejected(self):
        code = standard_nonlinear_code(2)
        bad_relay = dict(code.relay)
        del bad_relay[(0, 0)]
        with pytest.raises(ValueError):
            OneHopCode(2, 1, 1, False, code.encoder, bad_relay, code.decoder)
