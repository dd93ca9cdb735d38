"""Classic look-say steppers (decimal and base-2) and growth estimation.

The decimal stepper describes runs truthfully with single decimal digits;
the binary stepper does the same with base-2 numerals.  Both exist to
calibrate the growth-estimation machinery against systems whose constants
are known exactly, before pointing it at the complement-description map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from ._rundesc import runs_of, step_with_stats
from .bitcore import BitString, as_bitstring
from .errors import (
    EmptyInputError,
    InsufficientDataError,
    NonDigitError,
    OutOfRangeError,
    RunTooLongError,
)
from .knave import DEFAULT_MAX_BITS, iter_orbit

__all__ = [
    "VARIANTS",
    "GrowthEstimate",
    "looksay_step_decimal",
    "looksay_step_binary",
    "growth_ratios",
    "estimate_lambda",
]

#: steppers growth_ratios knows how to drive
VARIANTS = ("knave", "looksay10", "looksay2")


def _validated_digits(text: str) -> np.ndarray:
    if not text:
        raise EmptyInputError("empty digit string")
    try:
        raw = np.frombuffer(text.encode("ascii"), dtype=np.uint8)
    except UnicodeEncodeError as exc:
        raise NonDigitError(exc.start + 1, text[exc.start]) from None
    bad = np.flatnonzero((raw < ord("0")) | (raw > ord("9")))
    if bad.shape[0]:
        pos = int(bad[0])
        raise NonDigitError(pos + 1, text[pos])
    return raw


def _check_single_digit_counts(vals: np.ndarray, lengths: np.ndarray) -> None:
    over = np.flatnonzero(lengths > 9)
    if over.shape[0]:
        i = int(over[0])
        start = int(lengths[:i].sum()) + 1
        raise RunTooLongError(
            f"run of {int(lengths[i])} {chr(int(vals[i]))!r}s at position {start}: "
            "counts must stay single decimal digits"
        )


def _describe_digit_runs(vals: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    out = np.empty(2 * vals.shape[0], dtype=np.uint8)
    out[0::2] = lengths.astype(np.uint8) + ord("0")
    out[1::2] = vals
    return out


def looksay_step_decimal(s: str) -> str:
    """One truthful description step on a decimal digit string.

    Each maximal run of digit d with length n (n <= 9) becomes the two
    characters n then d.  Runs of 10 or more raise RunTooLongError: a
    multi-digit count would be indistinguishable from extra described runs.
    """
    raw = _validated_digits(s)
    vals, lengths = runs_of(raw)
    _check_single_digit_counts(vals, lengths)
    return _describe_digit_runs(vals, lengths).tobytes().decode("ascii")


def looksay_step_binary(s: Union[BitString, str]) -> BitString:
    """One truthful description step on bits: numeral(n) then the bit itself."""
    s = as_bitstring(s)
    if len(s) == 0:
        raise EmptyInputError("need at least one bit to describe")
    return BitString.from_array(step_with_stats(s.to_array(), complement=False).out)


def growth_ratios(
    stepper: str,
    seed: Union[BitString, str],
    steps: int,
    max_bits: int = DEFAULT_MAX_BITS,
) -> list[tuple[int, int, Optional[Fraction]]]:
    """Term lengths and consecutive length ratios for one of the steppers.

    Returns (n, length, length_n/length_{n-1}) for n = 1..steps with the
    seed as n = 1 (ratio None).  The list stops early, without error, before
    any term that would exceed max_bits.
    """
    if stepper == "knave":
        return [(r.n, r.length, r.ratio) for r in iter_orbit(seed, steps, max_bits)]
    if stepper == "looksay2":
        return _binary_growth(seed, steps, max_bits)
    if stepper == "looksay10":
        return _decimal_growth(seed, steps, max_bits)
    raise OutOfRangeError(
        f"unknown stepper {stepper!r}; choose one of {', '.join(VARIANTS)}"
    )


def _binary_growth(seed, steps, max_bits):
    s = as_bitstring(seed)
    if len(s) == 0:
        raise EmptyInputError("seed must be nonempty")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if steps == 0 or len(s) > max_bits:
        return []
    arr = s.to_array()
    points = [(1, arr.size, None)]
    prev = arr.size
    for n in range(2, steps + 1):
        res = step_with_stats(arr, complement=False, max_bits=max_bits)
        if res.out is None:
            break
        arr = res.out
        points.append((n, arr.size, Fraction(arr.size, prev)))
        prev = arr.size
    return points


def _decimal_growth(seed, steps, max_bits):
    if isinstance(seed, BitString):
        seed = str(seed)
    raw = _validated_digits(seed)
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if steps == 0 or raw.size > max_bits:
        return []
    points = [(1, int(raw.size), None)]
    prev = int(raw.size)
    for n in range(2, steps + 1):
        vals, lengths = runs_of(raw)
        _check_single_digit_counts(vals, lengths)
        nxt_len = 2 * vals.shape[0]
        if nxt_len > max_bits:
            break
        raw = _describe_digit_runs(vals, lengths)
        points.append((n, nxt_len, Fraction(nxt_len, prev)))
        prev = nxt_len
    return points


@dataclass(frozen=True)
class GrowthEstimate:
    """Least-squares growth constant over the tail of a length series.

    lambda_hat = exp(slope) of log(length) against n, fitted over the last
    half of the points (window gives the fitted n range).  ratios keeps
    every consecutive length ratio so oscillation stays visible next to the
    smoothed estimate; residual is the fit's sum of squared errors.
    """

    lambda_hat: float
    window: tuple[int, int]
    ratios: tuple[float, ...]
    residual: float


def estimate_lambda(
    points: Sequence[tuple[int, int, Optional[Fraction]]],
) -> GrowthEstimate:
    """Fit a growth constant to the output of growth_ratios.

    Needs at least 8 points; ratios oscillate too much for fewer to mean
    anything.  The fit window is the last half of whatever points exist,
    which discards the transient and tolerates cap-truncated series.
    """
    pts = list(points)
    if len(pts) < 8:
        raise InsufficientDataError(f"need at least 8 points to fit, got {len(pts)}")
    ratios = tuple(float(r) for _, _, r in pts if r is not None)
    fit = pts[len(pts) // 2 :]
    xs = np.array([n for n, _, _ in fit], dtype=np.float64)
    ys = np.log(np.array([length for _, length, _ in fit], dtype=np.float64))
    coeffs, residuals, *_ = np.polyfit(xs, ys, 1, full=True)
    residual = float(residuals[0]) if residuals.size else 0.0
    return GrowthEstimate(
        math.exp(float(coeffs[0])), (int(xs[0]), int(xs[-1])), ratios, residual
    )
