"""Packed binary strings, run decomposition, numerals, and the prefix metric.

A BitString is a finite, immutable binary string stored bit-packed.  Position
counting in the docs is 1-based from the left (most significant end), matching
how the prefix metric is stated; Python-level indexing is the usual 0-based.

Every nonempty BitString doubles as a representative of an infinite binary
sequence: the string is followed by an implied infinite tail of the
complement of its final bit.  ``metric`` compares strings as such sequences;
``lcp`` compares the finite bits only.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple, Union

import numpy as np

from . import _rundesc
from .errors import (
    EmptyInputError,
    NonBinaryCharacterError,
    OutOfRangeError,
    ZeroOrNegativeError,
)

__all__ = [
    "BitString",
    "Run",
    "Metric",
    "parse",
    "decompose_runs",
    "compose_runs",
    "numeral",
    "numeral_value",
    "lcp",
    "metric",
    "ribbit_extend",
]


class Run(NamedTuple):
    """One maximal run: which bit, and how many of it."""

    bit: int
    length: int


class BitString:
    """Immutable packed bit string; extendable to a sequence via its implied tail."""

    __slots__ = ("_packed", "_nbits", "_hash")

    def __init__(self, bits: Union[str, Iterable[int], "BitString", np.ndarray] = ()):
        if isinstance(bits, BitString):
            self._packed = bits._packed
            self._nbits = bits._nbits
            self._hash = bits._hash
            return
        if isinstance(bits, str):
            arr = _validated_text(bits, allow_empty=True)
        elif isinstance(bits, np.ndarray):
            arr = np.ascontiguousarray(bits, dtype=np.uint8)
        else:
            arr = np.fromiter(bits, dtype=np.uint8)
        self._init_from_array(arr)

    def _init_from_array(self, arr):
        self._packed = np.packbits(arr)
        self._packed.flags.writeable = False
        self._nbits = int(arr.shape[0])
        self._hash = None

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitString":
        """Wrap a uint8 array of 0/1 values (not validated)."""
        self = object.__new__(cls)
        self._init_from_array(arr)
        return self

    @classmethod
    def _from_packed(cls, packed: np.ndarray, nbits: int) -> "BitString":
        self = object.__new__(cls)
        self._packed = packed
        self._packed.flags.writeable = False
        self._nbits = nbits
        self._hash = None
        return self

    def to_array(self) -> np.ndarray:
        """Unpacked uint8 array of 0/1 values (a fresh copy)."""
        return np.unpackbits(self._packed, count=self._nbits)

    def __len__(self) -> int:
        return self._nbits

    def __str__(self) -> str:
        return _rundesc.array_to_text(self.to_array())

    def __repr__(self) -> str:
        if self._nbits <= 64:
            return f"BitString({str(self)!r})"
        head = _rundesc.array_to_text(np.unpackbits(self._packed[:8]))
        return f"BitString({head!r}... len={self._nbits})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self._nbits == other._nbits and np.array_equal(self._packed, other._packed)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nbits, self._packed.tobytes()))
        return self._hash

    def __getitem__(self, index: int) -> int:
        if not isinstance(index, int):
            raise TypeError("BitString supports integer indexing only")
        n = self._nbits
        if index < 0:
            index += n
        if not 0 <= index < n:
            raise IndexError("bit index out of range")
        return int(self._packed[index >> 3] >> (7 - (index & 7))) & 1

    def __iter__(self) -> Iterator[int]:
        return iter(self.to_array().tolist())

    def prefix(self, nbits: int) -> "BitString":
        """The first nbits bits (the whole string if nbits >= len)."""
        if nbits >= self._nbits:
            return self
        if nbits < 0:
            raise OutOfRangeError("prefix length must be nonnegative")
        nbytes = (nbits + 7) >> 3
        packed = self._packed[:nbytes].copy()
        spare = 8 * nbytes - nbits
        if spare:
            packed[-1] &= (0xFF << spare) & 0xFF  # keep padding canonical zeros
        return BitString._from_packed(packed, nbits)

    @property
    def last_bit(self) -> int:
        if self._nbits == 0:
            raise EmptyInputError("empty BitString has no last bit")
        return self[self._nbits - 1]

    @property
    def tail_bit(self) -> int:
        """Bit repeated forever after the finite part (complement of the last bit)."""
        return 1 - self.last_bit

    def sequence_prefix(self, nbits: int) -> "BitString":
        """First nbits bits of the represented infinite sequence (tail included)."""
        if nbits <= self._nbits:
            return self.prefix(nbits)
        arr = np.full(nbits, self.tail_bit, dtype=np.uint8)
        arr[: self._nbits] = self.to_array()
        return BitString.from_array(arr)


def _validated_text(text: str, allow_empty: bool = False) -> np.ndarray:
    if not text:
        if allow_empty:
            return np.zeros(0, dtype=np.uint8)
        raise EmptyInputError("empty bit string")
    try:
        arr = _rundesc.text_to_array(text)
    except UnicodeEncodeError as exc:
        raise NonBinaryCharacterError(exc.start + 1, text[exc.start]) from None
    bad = np.flatnonzero(arr > 1)
    if bad.shape[0]:
        pos = int(bad[0])
        raise NonBinaryCharacterError(pos + 1, text[pos])
    return arr


def parse(text: str) -> BitString:
    """Parse an ASCII 0/1 string.

    Raises EmptyInputError for "", NonBinaryCharacterError (with 1-based
    position) for anything outside {0,1}.
    """
    return BitString.from_array(_validated_text(text))


def as_bitstring(value: Union[BitString, str]) -> BitString:
    """Accept a BitString or raw 0/1 text; text goes through parse()."""
    if isinstance(value, BitString):
        return value
    return parse(value)


def decompose_runs(s: Union[BitString, str]) -> list[Run]:
    """Split into maximal runs, in order.

    The runs alternate bits, every length is >= 1, and concatenating them
    reproduces the input exactly.
    """
    s = as_bitstring(s)
    if len(s) == 0:
        raise EmptyInputError("cannot decompose an empty string")
    bits, lengths = _rundesc.runs_of(s.to_array())
    return [Run(b, ln) for b, ln in zip(bits.tolist(), lengths.tolist())]


def compose_runs(runs: Iterable[Run]) -> BitString:
    """Concatenate runs back into a BitString (inverse of decompose_runs)."""
    runs = list(runs)
    if not runs:
        return BitString()
    bits = np.array([r[0] for r in runs], dtype=np.uint8)
    lengths = np.array([r[1] for r in runs], dtype=np.int64)
    if bits.max() > 1 or lengths.min() < 1:
        raise ValueError("runs must have bit in {0,1} and length >= 1")
    return BitString.from_array(np.repeat(bits, lengths))


def numeral(n: int) -> BitString:
    """Base-2 numeral of a positive integer, MSB first, no leading zeros."""
    if n < 1:
        raise ZeroOrNegativeError(f"numerals are defined for n >= 1, got {n}")
    return BitString(format(n, "b"))


def numeral_value(s: Union[BitString, str]) -> int:
    """Integer value of a binary numeral."""
    s = as_bitstring(s)
    if len(s) == 0:
        raise EmptyInputError("empty numeral")
    return int(str(s), 2)


def lcp(a: Union[BitString, str], b: Union[BitString, str]) -> int:
    """Length of the longest common prefix of the finite bits of a and b."""
    a, b = as_bitstring(a), as_bitstring(b)
    return _lcp_packed(a._packed, len(a), b._packed, len(b))


def _lcp_packed(pa, na, pb, nb) -> int:
    limit = min(na, nb)
    if limit == 0:
        return 0
    nbytes = (limit + 7) >> 3
    diff = np.flatnonzero(pa[:nbytes] != pb[:nbytes])
    if diff.shape[0] == 0:
        return limit
    i = int(diff[0])
    x = int(pa[i]) ^ int(pb[i])
    # leading matching bits inside the first differing byte
    agree = 8 - x.bit_length()
    return min(8 * i + agree, limit)


class Metric(NamedTuple):
    """Exact prefix distance: 0 if equal as sequences, else 2**-exponent.

    The value is kept as (equal, exponent) because the exponent routinely
    exceeds anything a float can hold.
    """

    equal: bool
    exponent: Union[int, None]

    def as_float(self) -> float:
        """Lossy convenience; underflows to 0.0 for large exponents."""
        if self.equal:
            return 0.0
        try:
            return 2.0 ** -self.exponent
        except OverflowError:
            return 0.0


def metric(a: Union[BitString, str], b: Union[BitString, str]) -> Metric:
    """Distance between the infinite sequences represented by a and b.

    Both strings are extended by their implied tails; the result is the
    1-based position of the first disagreement, as an exponent.  Distinct
    finite strings always represent distinct sequences, so the result is 0
    only for identical inputs.
    """
    a, b = as_bitstring(a), as_bitstring(b)
    if a == b:
        return Metric(True, None)
    # A first difference must occur within max(len) + 1 sequence positions:
    # past both finite parts the tails either differ immediately or one
    # string's tail already clashed with the other's bits.
    horizon = max(len(a), len(b)) + 1
    sa = a.sequence_prefix(horizon).to_array()
    sb = b.sequence_prefix(horizon).to_array()
    first = int(np.flatnonzero(sa != sb)[0])
    return Metric(False, first + 1)


def ribbit_extend(s: Union[BitString, str], ell: int) -> BitString:
    """First ell bits of s, extended right through the run containing bit ell.

    The result is a prefix of s whose final run is complete in s.
    """
    s = as_bitstring(s)
    if len(s) == 0:
        raise EmptyInputError("cannot take a prefix of an empty string")
    if not 1 <= ell <= len(s):
        raise OutOfRangeError(f"need 1 <= ell <= {len(s)}, got {ell}")
    arr = s.to_array()
    end = _rundesc._run_end(arr, ell)
    return s.prefix(end)
