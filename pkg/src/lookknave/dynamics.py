"""Verification suites for the run-length bounds and the frozen pair table,
plus basin-of-attraction experiments around the two squared-map fixed points.

Everything here reports; nothing asserts.  A failed bound or an undecided
seed comes back as data so the experiments can falsify the claims they test.
"""

from __future__ import annotations

import math
import multiprocessing
import random
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ._rundesc import step_with_stats, text_to_array
from .bitcore import BitString, as_bitstring, decompose_runs, metric
from .errors import EmptyInputError, InsufficientDataError, MemoryCapExceededError, OutOfRangeError
from .knave import (
    DEFAULT_MAX_BITS,
    FixedPointCertificate,
    _double_step,
    _lcp_arrays,
    fixed_point_prefix,
    knave_step,
)

#: Images under one description step of every ribbit pair admissible under
#: the run bounds: an even ribbit of length 1..3 followed by an odd ribbit of
#: length 1..5, preceded by the lone leading-1 case.  Fragments are read
#: literally (interior fragments, no implied tail).
ELEMENT_TABLE: tuple[tuple[str, str], ...] = (
    ("1", "10"),
    ("01", "1110"),
    ("001", "10110"),
    ("0001", "11110"),
    ("011", "11100"),
    ("0011", "101100"),
    ("00011", "111100"),
    ("0111", "11110"),
    ("00111", "101110"),
    ("000111", "111110"),
    ("01111", "111000"),
    ("001111", "1011000"),
    ("0001111", "1111000"),
    ("011111", "111010"),
    ("0011111", "1011010"),
    ("00011111", "1111010"),
)


@dataclass(frozen=True)
class ElementRow:
    fragment: str
    expected: str
    actual: str
    matches: bool
    no_shorter: bool


@dataclass(frozen=True)
class ElementTableReport:
    rows: tuple[ElementRow, ...]

    @property
    def all_match(self) -> bool:
        return all(r.matches for r in self.rows)

    @property
    def all_no_shorter(self) -> bool:
        return all(r.no_shorter for r in self.rows)


def check_element_table() -> ElementTableReport:
    """Recompute every frozen pair image and compare.

    matches compares the computed image against the frozen expectation;
    no_shorter records |image| >= |fragment|.  The latter holds for every
    row except 000·11111, whose image 1111010 drops one bit (the numeral of
    5 is two bits shorter than the run it counts).
    """
    rows = []
    for fragment, expected in ELEMENT_TABLE:
        actual = str(knave_step(fragment))
        rows.append(
            ElementRow(
                fragment,
                expected,
                actual,
                actual == expected,
                len(actual) >= len(fragment),
            )
        )
    return ElementTableReport(tuple(rows))


@dataclass(frozen=True)
class RibbitBoundReport:
    """Run-length maxima over a stretch of orbit terms.

    witness_index is the first term index attaining max_ribbit.  n_range is
    (first, last) scanned term indices; last < steps means the bit cap cut
    the orbit short.
    """

    n_range: tuple[int, int]
    max_ribbit: int
    max_even_ribbit: int
    witness_index: int


def check_ribbit_bounds(
    seed: Union[BitString, str] = "1",
    steps: int = 200,
    max_bits: int = DEFAULT_MAX_BITS,
) -> RibbitBoundReport:
    """Scan every computed orbit term's runs and report the maxima.

    The claim under test (for seed "1"): no run ever exceeds 5 and no 0-run
    ever exceeds 3.  Other seeds are scanned the same way; judging the
    result is the caller's business.
    """
    arr = as_bitstring(seed).to_array()
    if steps < 1:
        raise OutOfRangeError("steps must be >= 1")
    max_ribbit = 0
    max_even = 0
    witness = 1
    last = 0
    for n in range(1, steps + 1):
        building = n < steps
        res = step_with_stats(arr, complement=True, max_bits=max_bits, build=building)
        if res.max_run > max_ribbit:
            max_ribbit = res.max_run
            witness = n
        if res.max_zero_run > max_even:
            max_even = res.max_zero_run
        last = n
        if res.out is None:  # final term, or the next one would pass the cap
            break
        arr = res.out
    return RibbitBoundReport((1, last), max_ribbit, max_even, witness)


def leading_ribbit_descent(s: Union[BitString, str]) -> tuple[int, int]:
    """Lengths of the leading 1-runs of k(s) and k²(s).

    The property these feed: whenever the first value is >= 2 the second is
    strictly smaller, and whenever it is 1, k(s) begins with 10.  Iterating
    therefore drives every orbit onto a 10 prefix.
    """
    first = knave_step(s)
    second = knave_step(first)
    return _leading_ones(first), _leading_ones(second)


def _leading_ones(s: BitString) -> int:
    run = decompose_runs(s)[0]
    return run.length if run.bit == 1 else 0


@dataclass(frozen=True)
class BasinResult:
    seed: BitString
    attractor: str  # "even" | "odd" | "undecided"
    steps_used: int  # double steps taken before the decision (or the budget)
    agreement_bits: int


# worker globals for the parallel map; set once per worker by the initializer
_WORKER_ARGS: tuple = ()


def _basin_init(podd, peven, steps, threshold, max_bits):
    global _WORKER_ARGS
    _WORKER_ARGS = (podd, peven, steps, threshold, max_bits)


def _basin_task(text: str):
    return _classify_array(text_to_array(text), *_WORKER_ARGS)


def _classify_array(arr, podd, peven, steps, threshold, max_bits):
    best = 0
    for used in range(steps + 1):
        if used:
            try:
                arr = _double_step(arr, max_bits)
            except MemoryCapExceededError:
                return ("undecided", used - 1, best)
        agree_odd = _lcp_arrays(arr, podd)
        agree_even = _lcp_arrays(arr, peven)
        best = max(best, agree_odd, agree_even)
        if agree_odd >= threshold or agree_even >= threshold:
            if agree_odd >= agree_even:
                return ("odd", used, agree_odd)
            return ("even", used, agree_even)
    return ("undecided", steps, best)


def classify_basin(
    max_len: int,
    steps: int = 100,
    threshold_bits: int = 64,
    certificates: Optional[dict[str, FixedPointCertificate]] = None,
    max_bits: int = DEFAULT_MAX_BITS,
    parallel: bool = False,
    workers: Optional[int] = None,
) -> list[BasinResult]:
    """Classify every nonempty seed of length <= max_len by its limit.

    Each seed's squared-map orbit runs until its prefix agrees with one
    certified fixed-point prefix on at least threshold_bits bits; undecided
    appears only when the step budget or bit cap is exhausted first.  Seeds
    are enumerated (and results returned) in (length, value) order, and the
    parallel path returns bit-identical results in the same order.
    """
    if max_len < 1:
        raise OutOfRangeError("max_len must be >= 1")
    if steps < 1:
        raise OutOfRangeError("steps must be >= 1")
    if threshold_bits < 1:
        raise OutOfRangeError("threshold_bits must be >= 1")
    certs = _resolve_certificates(certificates, threshold_bits)
    podd = certs["odd"].prefix.to_array()
    peven = certs["even"].prefix.to_array()

    seeds = [
        format(value, f"0{length}b")
        for length in range(1, max_len + 1)
        for value in range(1 << length)
    ]
    if parallel:
        with multiprocessing.Pool(
            processes=workers,
            initializer=_basin_init,
            initargs=(podd, peven, steps, threshold_bits, max_bits),
        ) as pool:
            outcomes = pool.map(_basin_task, seeds, chunksize=256)
    else:
        outcomes = [
            _classify_array(text_to_array(t), podd, peven, steps, threshold_bits, max_bits)
            for t in seeds
        ]
    return [
        BasinResult(BitString(text), attractor, used, agreement)
        for text, (attractor, used, agreement) in zip(seeds, outcomes)
    ]


def _resolve_certificates(certificates, threshold_bits):
    if certificates is None:
        want = max(threshold_bits, 64)
        return {
            "odd": fixed_point_prefix("odd", want),
            "even": fixed_point_prefix("even", want),
        }
    certs = dict(certificates)
    for parity in ("odd", "even"):
        cert = certs.get(parity)
        if cert is None or cert.certified_bits < threshold_bits:
            have = 0 if cert is None else cert.certified_bits
            raise InsufficientDataError(
                f"{parity} certificate has {have} certified bits, "
                f"need >= {threshold_bits}"
            )
    return certs


def convergence_trace(
    seed: Union[BitString, str], steps: int = 50
) -> list[tuple[int, float, float]]:
    """Distance exponents from the orbits of "1" and "10", step by step.

    Row n holds (n, e1, e2) where the distance from k^n(seed) to k^n("1")
    is 2**-e1 and to k^n("10") is 2**-e2; math.inf marks equality.  Exactly
    one column should grow without bound as the orbit locks onto its
    attractor; the other stalls at the bit where the two limits part ways.
    """
    if steps < 0:
        raise OutOfRangeError("steps must be >= 0")
    a = as_bitstring(seed)
    if len(a) == 0:
        raise EmptyInputError("seed must be nonempty")
    b = BitString("1")
    c = BitString("10")
    rows = []
    for n in range(steps + 1):
        m1 = metric(a, b)
        m2 = metric(a, c)
        rows.append(
            (
                n,
                math.inf if m1.equal else m1.exponent,
                math.inf if m2.equal else m2.exponent,
            )
        )
        if n < steps:
            a = knave_step(a)
            b = knave_step(b)
            c = knave_step(c)
    return rows


DEFAULT_CORPUS_SEED = 1729

_PREFIX_10 = text_to_array("10")
_PREFIX_CANON = (text_to_array("1011110"), text_to_array("101110"))


@dataclass(frozen=True)
class AttractionReport:
    """Randomized-corpus check that every orbit funnels into the attractors.

    For each seed, some iterate k^m (m <= step budget) must begin with 10,
    some iterate must begin with 1011110 or 101110, and the leading-run
    descent rule must hold.  Violations are returned, not raised.
    """

    cases: int
    step_budget: int
    max_steps_to_10: int
    max_steps_to_canonical: int
    missing_10: tuple[str, ...]
    missing_canonical: tuple[str, ...]
    descent_violations: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not (self.missing_10 or self.missing_canonical or self.descent_violations)


def check_attraction_corpus(
    cases: int = 10000,
    max_steps: int = 64,
    max_len: int = 64,
    rng_seed: int = DEFAULT_CORPUS_SEED,
) -> AttractionReport:
    """Run the eventual-prefix and descent checks over a seeded random corpus."""
    if cases < 1:
        raise OutOfRangeError("cases must be >= 1")
    rng = random.Random(rng_seed)
    worst_10 = 0
    worst_canon = 0
    missing_10 = []
    missing_canon = []
    descent_bad = []
    for _ in range(cases):
        length = rng.randint(1, max_len)
        text = format(rng.getrandbits(length), f"0{length}b")
        arr = text_to_array(text)
        seen_10 = None
        seen_canon = None
        lead1 = lead2 = None
        for m in range(max_steps + 1):
            if seen_10 is None and _starts_with(arr, _PREFIX_10):
                seen_10 = m
            if seen_canon is None and (
                _starts_with(arr, _PREFIX_CANON[0]) or _starts_with(arr, _PREFIX_CANON[1])
            ):
                seen_canon = m
            if seen_10 is not None and seen_canon is not None and m >= 2:
                break
            if m < max_steps:
                arr = step_with_stats(arr).out
                if m == 0:
                    lead1 = _leading_ones_array(arr)
                elif m == 1:
                    lead2 = _leading_ones_array(arr)
        if seen_10 is None:
            missing_10.append(text)
        else:
            worst_10 = max(worst_10, seen_10)
        if seen_canon is None:
            missing_canon.append(text)
        else:
            worst_canon = max(worst_canon, seen_canon)
        if lead1 is not None and lead1 >= 2 and lead2 is not None and lead2 >= lead1:
            descent_bad.append(text)
    return AttractionReport(
        cases,
        max_steps,
        worst_10,
        worst_canon,
        tuple(missing_10),
        tuple(missing_canon),
        tuple(descent_bad),
    )


def _starts_with(arr, pattern) -> bool:
    k = pattern.shape[0]
    return arr.shape[0] >= k and bool(np.array_equal(arr[:k], pattern))


def _leading_ones_array(arr) -> int:
    if arr.shape[0] == 0 or arr[0] != 1:
        return 0
    zeros = np.flatnonzero(arr == 0)
    return int(zeros[0]) if zeros.shape[0] else int(arr.shape[0])
