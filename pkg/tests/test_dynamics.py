"""Element table, run-length bounds, basin classification, and the
randomized attraction corpus."""

import math

import pytest

from lookknave import (
    check_attraction_corpus,
    check_element_table,
    check_ribbit_bounds,
    classify_basin,
    convergence_trace,
    fixed_point_prefix,
    knave_step,
    leading_ribbit_descent,
)
from lookknave.errors import InsufficientDataError, OutOfRangeError


class TestElementTable:
    def test_all_rows_match_the_map(self):
        report = check_element_table()
        assert len(report.rows) == 16
        assert report.all_match
        for row in report.rows:
            assert str(knave_step(row.fragment)) == row.actual == row.expected

    def test_exactly_one_row_shrinks(self):
        # fifteen images are at least as long as their source; the pair
        # 000 + 11111 maps 8 bits to 7, the lone exception
        report = check_element_table()
        shrinkers = [row for row in report.rows if not row.no_shorter]
        assert [row.fragment for row in shrinkers] == ["00011111"]
        assert shrinkers[0].actual == "1111010"
        assert not report.all_no_shorter

    def test_fragments_cover_run_pairs(self):
        # 0-runs of length 0..3 paired with 1-runs of length 1..5, minus
        # the (0,*) duplicates beyond numeral reach: 16 distinct fragments
        report = check_element_table()
        fragments = [row.fragment for row in report.rows]
        assert len(set(fragments)) == 16
        assert "1" in fragments and "00011111" in fragments


class TestRibbitBounds:
    def test_short_horizons(self):
        report = check_ribbit_bounds("1", steps=1)
        assert report.max_ribbit == 1
        assert report.n_range == (1, 1)
        report = check_ribbit_bounds("1", steps=5)
        assert report.max_ribbit == 4
        assert report.witness_index == 5

    def test_bounds_hold_to_thirty(self):
        report = check_ribbit_bounds("1", steps=30)
        assert report.n_range == (1, 30)
        assert report.max_ribbit == 5
        assert report.max_even_ribbit == 3
        assert report.witness_index == 7

    def test_cap_shortens_scan(self):
        report = check_ribbit_bounds("1", steps=50, max_bits=1 << 10)
        assert report.n_range[1] < 50
        assert report.max_ribbit <= 5

    def test_other_seeds_are_scanned_not_judged(self):
        report = check_ribbit_bounds("1" * 40, steps=2)
        assert report.max_ribbit == 40

    def test_rejects_zero_steps(self):
        with pytest.raises(OutOfRangeError):
            check_ribbit_bounds("1", steps=0)


class TestLeadingRibbitDescent:
    def test_long_leading_run_decays(self):
        first, second = leading_ribbit_descent("1" * 7)
        assert (first, second) == (3, 2)

    def test_descent_examples(self):
        for text in ["1" * 9, "1" * 12 + "0", "111100", "1" * 30]:
            first, second = leading_ribbit_descent(text)
            if first >= 2:
                assert second < first


class TestBasin:
    def test_every_short_seed_is_decided(self):
        results = classify_basin(6)
        assert len(results) == 2 ** 7 - 2
        assert all(r.attractor in ("even", "odd") for r in results)
        assert all(r.agreement_bits >= 64 for r in results)

    def test_known_seeds(self):
        by_seed = {str(r.seed): r for r in classify_basin(5)}
        assert by_seed["1"].attractor == "odd"
        assert by_seed["10"].attractor == "even"
        assert by_seed["11111"].attractor == "even"
        assert by_seed["0"].attractor == "even"

    def test_results_ordered_by_length_then_value(self):
        seeds = [str(r.seed) for r in classify_basin(3)]
        assert seeds == ["0", "1", "00", "01", "10", "11",
                         "000", "001", "010", "011", "100", "101", "110", "111"]

    def test_parallel_matches_serial(self):
        serial = classify_basin(8)
        parallel = classify_basin(8, parallel=True, workers=2)
        assert serial == parallel

    def test_undecided_on_tiny_step_budget(self):
        results = classify_basin(4, steps=1)
        assert any(r.attractor == "undecided" for r in results)
        # undecided rows still report the best agreement seen
        assert all(
            r.agreement_bits >= 0 for r in results if r.attractor == "undecided"
        )

    def test_weak_certificates_rejected(self):
        weak = {
            "odd": fixed_point_prefix("odd", 8),
            "even": fixed_point_prefix("even", 8),
        }
        if weak["odd"].certified_bits < 64:
            with pytest.raises(InsufficientDataError):
                classify_basin(3, certificates=weak)

    def test_rejects_bad_arguments(self):
        with pytest.raises(OutOfRangeError):
            classify_basin(0)
        with pytest.raises(OutOfRangeError):
            classify_basin(3, steps=0)


class TestConvergenceTrace:
    def test_seed_locks_onto_even_attractor(self):
        rows = convergence_trace("11111", steps=12)
        assert rows[0][0] == 0 and len(rows) == 13
        to_odd = [row[1] for row in rows]
        to_even = [row[2] for row in rows]
        # distance to the even orbit shrinks without bound ...
        assert all(a <= b for a, b in zip(to_even, to_even[1:]))
        assert to_even[-1] > 20  # 2 at step 0, 29 by step 12
        # ... while the odd orbit stays exactly one limit away: the
        # attractors part at bit 6, so the exponent pins there
        assert to_odd[-1] == 6
        assert max(to_odd) == 6

    def test_seed_on_its_own_orbit(self):
        rows = convergence_trace("1", steps=6)
        assert all(math.isinf(row[1]) for row in rows)
        assert all(not math.isinf(row[2]) for row in rows)


class TestAttractionCorpus:
    def test_default_corpus_passes(self):
        report = check_attraction_corpus(cases=2000)
        assert report.passed
        assert report.cases == 2000
        assert report.missing_10 == ()
        assert report.missing_canonical == ()
        assert report.descent_violations == ()
        assert 0 < report.max_steps_to_10 <= report.step_budget

    def test_deterministic_for_fixed_seed(self):
        a = check_attraction_corpus(cases=500, rng_seed=99)
        b = check_attraction_corpus(cases=500, rng_seed=99)
        assert a == b

    def test_different_seeds_still_pass(self):
        for seed in (1, 2, 3):
            assert check_attraction_corpus(cases=300, rng_seed=seed).passed
