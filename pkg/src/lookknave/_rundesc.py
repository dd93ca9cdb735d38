"""Vectorized run-length machinery shared by the transducers.

Everything here works on plain numpy uint8 arrays of 0/1 values (one byte
per bit).  Packing to the at-rest representation happens at the BitString
boundary; the hot orbit loops stay in array form and never touch Python-level
per-bit iteration.

The description step itself has two interchangeable engines: compiled
single-pass kernels (_kernels, preferred) and the pure-numpy gather pipeline
below, which doubles as the reference implementation in tests.
"""

from __future__ import annotations

import numpy as np

try:
    from . import _kernels
except ImportError:  # numba missing; numpy path covers everything, slower
    _kernels = None

# Emission patterns are precomputed for run lengths 1..TABLE_MAX; anything
# longer takes the per-run fallback.  63 covers every run that occurs after
# the first step of any orbit we generate (a description can only contain
# runs about as long as the bit-width of the previous term's run lengths).
TABLE_MAX = 63
_PAT_WIDTH = 7  # numeral(63) has 6 bits, plus one description bit

# Segment size for very large inputs: keeps per-step temporaries at a few
# hundred MB instead of letting int64 index arrays balloon past a GB.
_SEGMENT_BITS = 1 << 24


def _build_tables(complement: bool):
    n_ids = 2 * (TABLE_MAX + 1)
    pats = np.zeros((n_ids, _PAT_WIDTH), dtype=np.uint8)
    keep = np.zeros((n_ids, _PAT_WIDTH), dtype=bool)
    for length in range(1, TABLE_MAX + 1):
        numeral_bits = [int(c) for c in format(length, "b")]
        for bit in (0, 1):
            emitted = numeral_bits + [1 - bit if complement else bit]
            i = 2 * length + bit
            pats[i, : len(emitted)] = emitted
            keep[i, : len(emitted)] = True
    return pats, keep


_PAT = {True: _build_tables(True), False: _build_tables(False)}


def runs_of(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Maximal-run decomposition of a 0/1 uint8 array.

    Returns (bits, lengths) with runs in order; adjacent runs carry
    different bits and lengths sum to arr.size.
    """
    n = arr.shape[0]
    if n == 0:
        return arr[:0], np.zeros(0, dtype=np.int64)
    changes = np.flatnonzero(arr[1:] != arr[:-1])
    r = changes.shape[0] + 1
    bounds = np.empty(r, dtype=np.int64)
    bounds[:-1] = changes
    bounds[:-1] += 1
    bounds[-1] = n
    lengths = np.diff(bounds, prepend=0)
    bits = arr[bounds - 1]
    return bits, lengths


def described_length(lengths: np.ndarray) -> int:
    """Length in bits of the description of these runs (numeral + one bit each)."""
    r = lengths.shape[0]
    if r == 0:
        return 0
    # frexp exponent == bit_length for exact positive integers
    exps = np.frexp(lengths.astype(np.float64))[1]
    return int(exps.sum()) + r


def describe_runs(bits: np.ndarray, lengths: np.ndarray, complement: bool) -> np.ndarray:
    """Emit numeral(length) plus one description bit per run, concatenated.

    complement=True flips each run's bit in the description (the Knave),
    complement=False reports it straight (binary look-say).
    """
    r = lengths.shape[0]
    if r == 0:
        return np.zeros(0, dtype=np.uint8)
    if int(lengths.max()) <= TABLE_MAX:
        pats, keep = _PAT[complement]
        ids = lengths * 2
        ids += bits
        return pats[ids][keep[ids]]
    return _describe_slow(bits, lengths, complement)


def _describe_slow(bits, lengths, complement):
    # Rare path: at least one run longer than TABLE_MAX (user-supplied seeds,
    # first step only).  Python loop over runs, not over bits.
    parts = []
    for b, ln in zip(bits.tolist(), lengths.tolist()):
        out_bit = 1 - b if complement else b
        parts.append(format(ln, "b"))
        parts.append("1" if out_bit else "0")
    joined = "".join(parts).encode("ascii")
    return np.frombuffer(joined, dtype=np.uint8) - ord("0")


class StepResult:
    """Outcome of one description step over an array.

    out is None when the description would exceed max_bits (or build=False);
    the run statistics always cover the whole *input* term either way.
    """

    __slots__ = ("out", "out_len", "max_run", "max_zero_run")

    def __init__(self, out, out_len, max_run, max_zero_run):
        self.out = out
        self.out_len = out_len
        self.max_run = max_run
        self.max_zero_run = max_zero_run


def _zero_run_max(bits, lengths):
    if bits.shape[0] == 0:
        return 0
    # runs alternate, so zero-runs sit at every other index
    offset = 0 if bits[0] == 0 else 1
    zeros = lengths[offset::2]
    return int(zeros.max()) if zeros.shape[0] else 0


def step_with_stats(arr, complement=True, max_bits=None, build=True):
    """One description step plus run statistics of the input term.

    Statistics (max run, max zero-run, total description length) always cover
    the entire input; out is None when build is False or the description
    would exceed max_bits.
    """
    if _kernels is not None:
        return _step_compiled(arr, complement, max_bits, build)
    return _step_numpy(arr, complement, max_bits, build)


def _step_compiled(arr, complement, max_bits, build):
    n = arr.shape[0]
    if n == 0:
        empty = np.zeros(0, dtype=np.uint8) if build else None
        return StepResult(empty, 0, 0, 0)
    out_len, max_run, max_zero = _kernels.scan_runs(arr)
    if not build or (max_bits is not None and out_len > max_bits):
        return StepResult(None, out_len, max_run, max_zero)
    out = np.empty(out_len, dtype=np.uint8)
    written = _kernels.emit_description(arr, out, complement)
    assert written == out_len
    return StepResult(out, out_len, max_run, max_zero)


def _step_numpy(arr, complement, max_bits, build):
    # Reference engine: run-aligned segments keep the int64 index temporaries
    # of one gather round at a few hundred MB.
    n = arr.shape[0]
    pieces = [] if build else None
    out_len = 0
    max_run = 0
    max_zero = 0
    start = 0
    while start < n:
        end = min(start + _SEGMENT_BITS, n)
        if end < n:
            end = _run_end(arr, end)
        bits, lengths = runs_of(arr[start:end])
        max_run = max(max_run, int(lengths.max()))
        max_zero = max(max_zero, _zero_run_max(bits, lengths))
        out_len += described_length(lengths)
        if pieces is not None:
            if max_bits is not None and out_len > max_bits:
                pieces = None
            else:
                pieces.append(describe_runs(bits, lengths, complement))
        start = end
    if pieces is None:
        return StepResult(None, out_len, max_run, max_zero)
    if not pieces:
        return StepResult(np.zeros(0, dtype=np.uint8), 0, 0, 0)
    out = pieces[0] if len(pieces) == 1 else np.concatenate(pieces)
    return StepResult(out, out_len, max_run, max_zero)


def _run_end(arr, pos):
    # First index >= pos where the run containing pos-1 stops.
    b = arr[pos - 1]
    n = arr.shape[0]
    window = 4096
    while pos < n:
        chunk = arr[pos : pos + window]
        hits = np.flatnonzero(chunk != b)
        if hits.shape[0]:
            return pos + int(hits[0])
        pos += chunk.shape[0]
        window = min(window * 8, 1 << 22)
    return n


def transduce(arr: np.ndarray, complement: bool = True) -> np.ndarray:
    """One full description step on a 0/1 array, uncapped."""
    return step_with_stats(arr, complement=complement).out


def text_to_array(text: str) -> np.ndarray:
    """ASCII 0/1 text to a uint8 array, without validation."""
    raw = np.frombuffer(text.encode("ascii"), dtype=np.uint8)
    return raw - ord("0")


def array_to_text(arr: np.ndarray) -> str:
    out = arr + ord("0")
    return out.tobytes().decode("ascii")
