"""Packed bit strings, run decomposition, numerals, and the prefix metric."""

import random

import pytest

from lookknave import (
    BitString,
    Run,
    as_bitstring,
    compose_runs,
    decompose_runs,
    lcp,
    metric,
    numeral,
    numeral_value,
    parse,
    ribbit_extend,
)
from lookknave.errors import (
    EmptyInputError,
    NonBinaryCharacterError,
    OutOfRangeError,
    ZeroOrNegativeError,
)


class TestParse:
    def test_round_trip(self):
        for text in ["1", "0", "10", "1011100", "0" * 17, "1" * 65, "10" * 40]:
            assert str(parse(text)) == text

    def test_empty_rejected(self):
        with pytest.raises(EmptyInputError):
            parse("")

    def test_bad_character_reports_position(self):
        with pytest.raises(NonBinaryCharacterError) as exc:
            parse("01x1")
        assert exc.value.position == 3

    def test_bad_character_first(self):
        with pytest.raises(NonBinaryCharacterError) as exc:
            parse("201")
        assert exc.value.position == 1

    def test_non_ascii_rejected(self):
        with pytest.raises(NonBinaryCharacterError) as exc:
            parse("10①")
        assert exc.value.position == 3

    def test_as_bitstring_passes_instances_through(self):
        s = parse("101")
        assert as_bitstring(s) is s
        assert as_bitstring("101") == s


class TestBitString:
    def test_len_and_equality(self):
        a = BitString("10110")
        assert len(a) == 5
        assert a == BitString([1, 0, 1, 1, 0])
        assert a != BitString("10111")
        assert a != BitString("1011")

    def test_hashable(self):
        seen = {BitString("101"), BitString("101"), BitString("1010")}
        assert len(seen) == 2

    def test_indexing(self):
        s = BitString("100")
        assert (s[0], s[1], s[2]) == (1, 0, 0)
        assert s[-1] == 0 and s[-3] == 1
        with pytest.raises(IndexError):
            s[3]
        with pytest.raises(TypeError):
            s[1:2]

    def test_iteration(self):
        assert list(BitString("1011")) == [1, 0, 1, 1]

    def test_prefix(self):
        s = BitString("101110")
        assert str(s.prefix(3)) == "101"
        assert str(s.prefix(6)) == "101110"
        assert len(s.prefix(0)) == 0
        with pytest.raises(OutOfRangeError):
            s.prefix(-1)

    def test_prefix_is_independent_of_trailing_bits(self):
        # two strings sharing the first 9 bits produce equal 9-bit prefixes
        # even though the shared byte boundary splits mid-byte
        a = BitString("101101011" + "1111")
        b = BitString("101101011" + "0000")
        assert a.prefix(9) == b.prefix(9)
        assert hash(a.prefix(9)) == hash(b.prefix(9))

    def test_last_and_tail_bit(self):
        assert BitString("10").last_bit == 0
        assert BitString("10").tail_bit == 1
        assert BitString("111").tail_bit == 0
        assert isinstance(BitString("10").last_bit, int)
        with pytest.raises(EmptyInputError):
            BitString().last_bit

    def test_sequence_prefix_extends_with_complement_tail(self):
        assert str(BitString("10").sequence_prefix(6)) == "101111"
        assert str(BitString("10").sequence_prefix(2)) == "10"
        assert str(BitString("10").sequence_prefix(1)) == "1"
        assert str(BitString("0").sequence_prefix(4)) == "0111"
        assert str(BitString("111").sequence_prefix(5)) == "11100"

    def test_array_round_trip(self):
        s = parse("1011100011101110")
        assert BitString.from_array(s.to_array()) == s


class TestRuns:
    def test_decompose_examples(self):
        assert decompose_runs("110") == [Run(1, 2), Run(0, 1)]
        assert decompose_runs("1011100") == [
            Run(1, 1), Run(0, 1), Run(1, 3), Run(0, 2),
        ]
        assert decompose_runs("0000") == [Run(0, 4)]

    def test_decompose_empty_rejected(self):
        with pytest.raises(EmptyInputError):
            decompose_runs(BitString())

    def test_compose_inverts_decompose(self):
        rng = random.Random(7)
        for _ in range(200):
            length = rng.randint(1, 300)
            text = "".join(rng.choice("01") for _ in range(length))
            runs = decompose_runs(text)
            assert str(compose_runs(runs)) == text
            # maximality: adjacent runs alternate bits
            assert all(x.bit != y.bit for x, y in zip(runs, runs[1:]))
            assert sum(r.length for r in runs) == length

    def test_compose_rejects_bad_runs(self):
        with pytest.raises(ValueError):
            compose_runs([Run(2, 1)])
        with pytest.raises(ValueError):
            compose_runs([Run(1, 0)])


class TestNumerals:
    def test_examples(self):
        assert str(numeral(1)) == "1"
        assert str(numeral(2)) == "10"
        assert str(numeral(5)) == "101"
        assert str(numeral(10)) == "1010"

    def test_round_trip_small_sweep(self):
        for n in range(1, 1 << 16):
            assert numeral_value(numeral(n)) == n

    def test_round_trip_sampled_large(self):
        rng = random.Random(11)
        for _ in range(2000):
            n = rng.randint(1 << 16, 10 ** 9)
            s = numeral(n)
            assert numeral_value(s) == n
            assert s[0] == 1  # numerals never carry leading zeros

    def test_rejects_nonpositive(self):
        with pytest.raises(ZeroOrNegativeError):
            numeral(0)
        with pytest.raises(ZeroOrNegativeError):
            numeral(-3)

    def test_numeral_value_accepts_text(self):
        assert numeral_value("1010") == 10
        with pytest.raises(EmptyInputError):
            numeral_value(BitString())


class TestLcp:
    def test_examples(self):
        assert lcp("1011", "1011100") == 4
        assert lcp("1011", "1011") == 4
        assert lcp("10", "11") == 1
        assert lcp("0", "1") == 0

    def test_crosses_byte_boundaries(self):
        a = "1" * 23 + "0" + "1" * 40
        b = "1" * 23 + "1" + "1" * 40
        assert lcp(a, b) == 23


class TestMetric:
    def test_first_difference(self):
        m = metric("10", "11111")
        assert not m.equal and m.exponent == 2
        assert m.as_float() == 0.25

    def test_equal_finite(self):
        m = metric("1011", "1011")
        assert m.equal and m.exponent is None
        assert m.as_float() == 0.0

    def test_tail_awareness(self):
        # "10" denotes 1 0 1 1 1 1 1 1 ...; "1011111" then 0 forever:
        # the first disagreement hides past both finite ends
        assert metric("10", "1011111").exponent == 8
        assert metric("1", "10").exponent == 3

    def test_distinct_strings_denote_distinct_sequences(self):
        # appending complement(last) flips the implied tail, so no two
        # distinct finite strings expand to the same infinite sequence
        assert metric("1", "100").exponent == 4
        assert metric("10", "101").exponent == 4
        assert metric("1", "10").equal is False

    def test_huge_exponent_underflows_to_zero(self):
        a = "1" * 5000
        b = "1" * 5000 + "10"
        m = metric(a, b)
        assert not m.equal and m.exponent > 4000
        assert m.as_float() == 0.0


class TestRibbitExtend:
    def test_extends_through_current_run(self):
        assert str(ribbit_extend("1100", 1)) == "11"
        assert str(ribbit_extend("1100", 2)) == "11"
        assert str(ribbit_extend("1100", 3)) == "1100"
        assert str(ribbit_extend("1100", 4)) == "1100"
        assert str(ribbit_extend("10111", 3)) == "10111"

    def test_bounds_checked(self):
        with pytest.raises(OutOfRangeError):
            ribbit_extend("1100", 0)
        with pytest.raises(OutOfRangeError):
            ribbit_extend("1100", 5)
        with pytest.raises(EmptyInputError):
            ribbit_extend(BitString(), 1)

    def test_result_ends_at_run_boundary(self):
        rng = random.Random(13)
        for _ in range(300):
            length = rng.randint(1, 120)
            text = "".join(rng.choice("01") for _ in range(length))
            ell = rng.randint(1, length)
            ext = str(ribbit_extend(text, ell))
            assert text.startswith(ext)
            assert len(ext) >= ell
            # the extension stops exactly where the run containing bit ell
            # flips (or at the end of the string)
            if len(ext) < length:
                assert text[len(ext)] != ext[-1]
                if len(ext) > ell:
                    assert ext[ell - 1:] == ext[-1] * (len(ext) - ell + 1)
