"""The Knave transducer: complement-description of binary run lengths.

Each maximal run of n copies of bit b is reported as the base-2 numeral of n
followed by the complement of b.  Iterating the map from a seed produces the
Look-Knave orbit; iterating in double steps from the canonical seeds yields
ever-longer stable prefixes of the two fixed points of the squared map, which
this module certifies without ever materializing an infinite object.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Optional, Union

import numpy as np

from . import _rundesc
from .bitcore import BitString, as_bitstring, parse
from .errors import (
    EmptyInputError,
    IterationCapExceededError,
    MemoryCapExceededError,
    NonBinarySymbolError,
)

DEFAULT_MAX_BITS = 1 << 27
DEFAULT_MAX_ITERATIONS = 200

#: canonical seeds whose double-step orbits converge to the two fixed points
PARITY_SEEDS = {"odd": "1", "even": "10"}

CACHE_ENV_VAR = "KNAVE_CACHE"
DEFAULT_CACHE_PATH = Path(".lookknave") / "fixedpoints.txt"


def knave_step(s: Union[BitString, str]) -> BitString:
    """One application of the Knave map.

    The output always begins with 1, and its final bit is the complement of
    the input's final bit, so the implied-tail convention is preserved
    without any special casing.
    """
    s = as_bitstring(s)
    if len(s) == 0:
        raise EmptyInputError("the Knave needs at least one bit to describe")
    return BitString.from_array(_rundesc.transduce(s.to_array(), complement=True))


def knave_step_streaming(source: Iterable[int]) -> Iterator[int]:
    """Streaming form of the Knave map over a source of 0/1 integers.

    Each completed run (the next symbol differs, or the source ends) emits
    the count's binary digits followed by the complemented bit.  State is
    just the current run; exhaustion of the source is the end signal.  No
    implied-tail handling happens here: the finite symbols in are exactly
    the runs described.
    """
    run_bit = -1
    run_len = 0
    for sym in source:
        if sym != 0 and sym != 1:
            raise NonBinarySymbolError(f"expected 0 or 1, got {sym!r}")
        if sym == run_bit:
            run_len += 1
        else:
            if run_len:
                yield from _emit_description(run_bit, run_len)
            run_bit = sym
            run_len = 1
    if run_len:
        yield from _emit_description(run_bit, run_len)


def _emit_description(bit, length):
    for ch in format(length, "b"):
        yield 1 if ch == "1" else 0
    yield 1 - bit


@dataclass(frozen=True)
class OrbitRecord:
    """One orbit term: 1-based index, the term, and its length ratio to the
    previous term (None for the first record)."""

    n: int
    term: BitString
    length: int
    ratio: Optional[Fraction]


@dataclass(frozen=True)
class OrbitResult:
    records: list[OrbitRecord]
    truncated: bool  # True when the bit cap stopped the orbit early

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def iter_orbit(
    seed: Union[BitString, str], steps: int, max_bits: int = DEFAULT_MAX_BITS
) -> Iterator[OrbitRecord]:
    """Yield orbit records s_1 = seed, s_2 = k(s_1), ... up to s_steps.

    Stops silently before any term that would exceed max_bits; callers can
    detect truncation by counting records.
    """
    seed = as_bitstring(seed)
    if len(seed) == 0:
        raise EmptyInputError("orbit seed must be nonempty")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if steps == 0 or len(seed) > max_bits:
        return
    yield OrbitRecord(1, seed, len(seed), None)
    arr = seed.to_array()
    prev_len = len(seed)
    for n in range(2, steps + 1):
        res = _rundesc.step_with_stats(arr, complement=True, max_bits=max_bits)
        if res.out is None:
            return
        arr = res.out
        yield OrbitRecord(n, BitString.from_array(arr), arr.size, Fraction(arr.size, prev_len))
        prev_len = arr.size


def orbit(
    seed: Union[BitString, str], steps: int, max_bits: int = DEFAULT_MAX_BITS
) -> OrbitResult:
    """Materialized orbit; truncated is set when the bit cap cut it short."""
    records = list(iter_orbit(seed, steps, max_bits))
    return OrbitResult(records, truncated=len(records) < steps)


def _lcp_arrays(a: np.ndarray, b: np.ndarray) -> int:
    limit = min(a.shape[0], b.shape[0])
    if limit == 0:
        return 0
    diff = np.flatnonzero(a[:limit] != b[:limit])
    return int(diff[0]) if diff.shape[0] else limit


def stable_prefix(
    seed: Union[BitString, str], m: int, max_bits: int = DEFAULT_MAX_BITS
) -> int:
    """Agreement between orbit terms two apart: lcp(s_m, s_{m+2}).

    This is the certified-bit count available at iteration m; empirically it
    is nondecreasing in m.
    """
    seed = as_bitstring(seed)
    if len(seed) == 0:
        raise EmptyInputError("seed must be nonempty")
    if m < 1:
        raise ValueError("m must be >= 1")
    arr = seed.to_array()
    if arr.size > max_bits:
        raise MemoryCapExceededError(f"seed exceeds the {max_bits}-bit cap")
    kept = None
    for n in range(1, m + 2):
        if n == m:
            kept = arr
        res = _rundesc.step_with_stats(arr, complement=True, max_bits=max_bits)
        if res.out is None:
            raise MemoryCapExceededError(
                f"term {n + 1} would exceed the {max_bits}-bit cap"
            )
        arr = res.out
    return _lcp_arrays(kept, arr)


@dataclass(frozen=True)
class FixedPointCertificate:
    """Certified prefix of one of the two squared-map fixed points.

    The guarantee: the double-step iterates k^iterations(seed) and
    k^(iterations+2)(seed) agree on exactly the first certified_bits bits,
    and prefix is those bits.
    """

    parity: str
    prefix: BitString
    certified_bits: int
    iterations: int
    seed: BitString


def fixed_point_prefix(
    parity: str,
    want_bits: int,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    max_bits: int = DEFAULT_MAX_BITS,
) -> FixedPointCertificate:
    """Iterate the squared map from the canonical seed until at least
    want_bits of the fixed point are certified.

    Raises IterationCapExceededError (carrying the partial certificate) if
    the double-step budget runs out, MemoryCapExceededError if a term would
    pass max_bits.
    """
    if parity not in PARITY_SEEDS:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    if want_bits < 1:
        raise ValueError("want_bits must be >= 1")
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    seed = parse(PARITY_SEEDS[parity])
    prev = seed.to_array()
    applied = 0  # k-power of prev
    last_certified = 0
    for _ in range(max_iterations):
        nxt = _double_step(prev, max_bits)
        certified = _lcp_arrays(prev, nxt)
        if certified >= want_bits:
            prefix = BitString.from_array(nxt[:certified])
            return FixedPointCertificate(parity, prefix, certified, applied, seed)
        prev = nxt
        applied += 2
        last_certified = certified
    partial = FixedPointCertificate(
        parity,
        BitString.from_array(prev[:last_certified]),
        last_certified,
        applied - 2,
        seed,
    )
    raise IterationCapExceededError(
        f"only {last_certified} of {want_bits} bits certified after "
        f"{max_iterations} double steps",
        certificate=partial,
    )


def _double_step(arr, max_bits):
    for _ in range(2):
        res = _rundesc.step_with_stats(arr, complement=True, max_bits=max_bits)
        if res.out is None:
            raise MemoryCapExceededError(
                f"a term of {res.out_len} bits would exceed the {max_bits}-bit cap"
            )
        arr = res.out
    return arr


# --- fixed-point cache file -------------------------------------------------
# One record per line: parity SP certified_bits SP iterations SP prefix-bits.
# Only certificates grown from the canonical seeds are cached, so the seed
# column is redundant and omitted.


def certificate_to_line(cert: FixedPointCertificate) -> str:
    return f"{cert.parity} {cert.certified_bits} {cert.iterations} {cert.prefix}"


def certificate_from_line(line: str) -> FixedPointCertificate:
    fields = line.split()
    if len(fields) != 4:
        raise ValueError(f"expected 4 fields, got {len(fields)}")
    parity, certified_s, iterations_s, prefix_text = fields
    if parity not in PARITY_SEEDS:
        raise ValueError(f"unknown parity {parity!r}")
    certified = int(certified_s)
    iterations = int(iterations_s)
    prefix = parse(prefix_text)
    if certified < 0 or iterations < 0 or certified > len(prefix):
        raise ValueError("inconsistent certificate record")
    return FixedPointCertificate(
        parity, prefix, certified, iterations, parse(PARITY_SEEDS[parity])
    )


def resolve_cache_path(explicit: Optional[Union[str, Path]] = None) -> Path:
    """Explicit flag > KNAVE_CACHE environment variable > default dot-dir."""
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return DEFAULT_CACHE_PATH


def read_certificate_cache(path: Union[str, Path]) -> dict[str, FixedPointCertificate]:
    """Parse a cache file; raises on malformed content (callers regenerate)."""
    certs = {}
    for line in Path(path).read_text("ascii").splitlines():
        if not line.strip():
            continue
        cert = certificate_from_line(line)
        certs[cert.parity] = cert
    return certs


def write_certificate_cache(
    path: Union[str, Path], certs: dict[str, FixedPointCertificate]
) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [certificate_to_line(certs[p]) for p in sorted(certs)]
    path.write_text("".join(line + "\n" for line in lines), "ascii")
