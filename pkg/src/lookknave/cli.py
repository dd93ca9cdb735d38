"""Command-line surface: generation, verification, fixed points, basins,
growth, and the prefix metric.

Exit codes: 0 success, 1 invalid input, 2 cap exceeded (partial output is
still emitted), 3 verification failure.  All emissions are deterministic:
the same invocation produces the same bytes, parallel or not.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Optional

from ._rundesc import array_to_text, runs_of, step_with_stats
from .bitcore import as_bitstring, lcp, metric, ribbit_extend
from .dynamics import (
    check_attraction_corpus,
    check_element_table,
    check_ribbit_bounds,
    classify_basin,
)
from .errors import (
    CapExceededError,
    InputError,
    InsufficientDataError,
    IterationCapExceededError,
)
from .knave import (
    DEFAULT_MAX_BITS,
    DEFAULT_MAX_ITERATIONS,
    FixedPointCertificate,
    certificate_to_line,
    fixed_point_prefix,
    iter_orbit,
    knave_step,
    read_certificate_cache,
    resolve_cache_path,
    write_certificate_cache,
)
from .variants import (
    VARIANTS,
    _check_single_digit_counts,
    _describe_digit_runs,
    _validated_digits,
    estimate_lambda,
    growth_ratios,
)

EMIT_FORMATS = ("text", "json", "csv")

# verify runs each suite at its natural depth unless --steps overrides
_SUITE_STEPS = {"table": 0, "ribbits": 200, "prefixlemma": 60, "attraction": 64}


class _Parser(argparse.ArgumentParser):
    # usage errors are invalid input, not the usual argparse exit code 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lookknave", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def emit_flag(p):
        p.add_argument("--emit", choices=EMIT_FORMATS, default="text")

    def cap_flag(p):
        p.add_argument("--max-bits", type=_positive, default=DEFAULT_MAX_BITS)

    p = sub.add_parser("gen", help="emit orbit terms for a variant")
    p.add_argument("--variant", choices=VARIANTS, default="knave")
    p.add_argument("--seed", default="1")
    p.add_argument("--steps", type=_nonneg, default=100)
    cap_flag(p)
    emit_flag(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("step", help="apply the complement-description map once")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_step)

    p = sub.add_parser("fixedpoint", help="certify a fixed-point prefix")
    p.add_argument("--parity", choices=("even", "odd"), required=True)
    p.add_argument("--bits", type=_positive, default=1024)
    p.add_argument("--max-iterations", type=_positive, default=DEFAULT_MAX_ITERATIONS)
    p.add_argument("--cache", default=None)
    cap_flag(p)
    p.set_defaults(func=_cmd_fixedpoint)

    p = sub.add_parser("verify", help="run a built-in checking suite")
    p.add_argument(
        "--suite", choices=("table", "ribbits", "prefixlemma", "attraction"),
        required=True,
    )
    p.add_argument("--steps", type=_positive, default=None)
    p.add_argument("--cases", type=_positive, default=10000)
    cap_flag(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("basin", help="classify short seeds by attractor")
    p.add_argument("--max-len", type=_positive, required=True)
    p.add_argument("--steps", type=_positive, default=100)
    p.add_argument("--threshold", type=_positive, default=64)
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--workers", type=_positive, default=None)
    p.add_argument("--cache", default=None)
    cap_flag(p)
    emit_flag(p)
    p.set_defaults(func=_cmd_basin)

    p = sub.add_parser("growth", help="length series and growth-constant fit")
    p.add_argument("--variant", choices=VARIANTS, required=True)
    p.add_argument("--seed", default="1")
    p.add_argument("--steps", type=_nonneg, default=100)
    cap_flag(p)
    emit_flag(p)
    p.set_defaults(func=_cmd_growth)

    p = sub.add_parser("metric", help="prefix distance between two strings")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=_cmd_metric)

    return parser


def _ratio_str(ratio: Optional[Fraction]) -> Optional[str]:
    return None if ratio is None else str(ratio)


def _iter_terms(variant, seed, steps, max_bits):
    """Yield (n, length, text, ratio) for any of the three steppers."""
    if variant == "knave":
        for rec in iter_orbit(seed, steps, max_bits):
            yield rec.n, rec.length, str(rec.term), rec.ratio
        return
    if variant == "looksay2":
        arr = as_bitstring(seed).to_array()
        if steps == 0 or arr.size > max_bits:
            return
        yield 1, arr.size, array_to_text(arr), None
        prev = arr.size
        for n in range(2, steps + 1):
            res = step_with_stats(arr, complement=False, max_bits=max_bits)
            if res.out is None:
                return
            arr = res.out
            yield n, arr.size, array_to_text(arr), Fraction(arr.size, prev)
            prev = arr.size
        return
    raw = _validated_digits(seed)
    if steps == 0 or raw.size > max_bits:
        return
    yield 1, int(raw.size), raw.tobytes().decode("ascii"), None
    prev = int(raw.size)
    for n in range(2, steps + 1):
        vals, lengths = runs_of(raw)
        _check_single_digit_counts(vals, lengths)
        if 2 * vals.shape[0] > max_bits:
            return
        raw = _describe_digit_runs(vals, lengths)
        yield n, raw.size, raw.tobytes().decode("ascii"), Fraction(int(raw.size), prev)
        prev = int(raw.size)


def _cmd_gen(ns) -> int:
    records = list(_iter_terms(ns.variant, ns.seed, ns.steps, ns.max_bits))
    if ns.emit == "text":
        for _, _, text, _ in records:
            print(text)
    elif ns.emit == "json":
        for n, length, text, ratio in records:
            print(json.dumps(
                {"n": n, "length": length, "bits": text, "ratio": _ratio_str(ratio)},
                separators=(",", ":"),
            ))
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["n", "length", "bits", "ratio"])
        for n, length, text, ratio in records:
            writer.writerow([n, length, text, "" if ratio is None else str(ratio)])
    if len(records) < ns.steps:
        print(
            f"note: stopped after {len(records)} terms (bit cap {ns.max_bits})",
            file=sys.stderr,
        )
        return 2
    return 0


def _cmd_step(ns) -> int:
    print(knave_step(ns.input))
    return 0


def _obtain_certificates(
    cache: Optional[str], want_bits: int, max_iterations: int, max_bits: int
) -> tuple[dict[str, FixedPointCertificate], bool]:
    """Serve certificates from the cache, computing and re-writing on miss.

    Returns (certs by parity, whether anything had to be computed).
    """
    path = resolve_cache_path(cache)
    try:
        cached = read_certificate_cache(path)
    except FileNotFoundError:
        cached = {}
    except (ValueError, OSError):
        print(f"warning: unreadable cache {path}, regenerating", file=sys.stderr)
        cached = {}
    certs = {}
    computed = False
    for parity in ("even", "odd"):
        have = cached.get(parity)
        if have is not None and have.certified_bits >= want_bits:
            certs[parity] = have
        else:
            certs[parity] = fixed_point_prefix(
                parity, want_bits, max_iterations=max_iterations, max_bits=max_bits
            )
            computed = True
    if computed:
        merged = dict(cached)
        merged.update(certs)
        try:
            write_certificate_cache(path, merged)
        except OSError as exc:
            print(f"warning: could not write cache {path}: {exc}", file=sys.stderr)
    return certs, computed


def _cmd_fixedpoint(ns) -> int:
    path = resolve_cache_path(ns.cache)
    try:
        cached = read_certificate_cache(path)
    except FileNotFoundError:
        cached = {}
    except (ValueError, OSError):
        print(f"warning: unreadable cache {path}, regenerating", file=sys.stderr)
        cached = {}
    have = cached.get(ns.parity)
    if have is not None and have.certified_bits >= ns.bits:
        print(certificate_to_line(have))
        return 0
    try:
        cert = fixed_point_prefix(
            ns.parity, ns.bits,
            max_iterations=ns.max_iterations, max_bits=ns.max_bits,
        )
    except IterationCapExceededError as exc:
        if exc.certificate is not None:
            print(certificate_to_line(exc.certificate))
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 2
    cached[ns.parity] = cert
    try:
        write_certificate_cache(path, cached)
    except OSError as exc:
        print(f"warning: could not write cache {path}: {exc}", file=sys.stderr)
    print(certificate_to_line(cert))
    return 0


def _cmd_verify(ns) -> int:
    steps = ns.steps if ns.steps is not None else _SUITE_STEPS[ns.suite]
    if ns.suite == "table":
        report = check_element_table()
        matched = 0
        shrinkers = 0
        for i, row in enumerate(report.rows, start=1):
            flags = "match" if row.matches else f"MISMATCH(got {row.actual})"
            if not row.no_shorter:
                flags += f" shrinks({len(row.fragment)}->{len(row.actual)})"
                shrinkers += 1
            matched += row.matches
            print(f"{i:02d} {row.fragment} -> {row.expected} {flags}")
        print(f"{matched}/{len(report.rows)} rows match")
        if shrinkers:
            print(f"no-shorter holds on {len(report.rows) - shrinkers}/"
                  f"{len(report.rows)} rows")
        return 0 if report.all_match else 3
    if ns.suite == "ribbits":
        report = check_ribbit_bounds("1", steps, ns.max_bits)
        lo, hi = report.n_range
        print(f"terms scanned: n = {lo}..{hi}")
        print(f"max ribbit: {report.max_ribbit} (first at n = {report.witness_index})")
        print(f"max even ribbit: {report.max_even_ribbit}")
        ok = report.max_ribbit <= 5 and report.max_even_ribbit <= 3
        print("bounds 5/3: PASS" if ok else "bounds 5/3: FAIL")
        return 0 if ok else 3
    if ns.suite == "prefixlemma":
        return _verify_prefixlemma(steps, ns.max_bits)
    report = check_attraction_corpus(cases=ns.cases, max_steps=steps)
    print(f"cases: {report.cases}  step budget: {report.step_budget}")
    print(f"reach 10-prefix: worst {report.max_steps_to_10} steps, "
          f"missing {len(report.missing_10)}")
    print(f"reach canonical prefix: worst {report.max_steps_to_canonical} steps, "
          f"missing {len(report.missing_canonical)}")
    print(f"leading-ribbit descent violations: {len(report.descent_violations)}")
    print("attraction: PASS" if report.passed else "attraction: FAIL")
    return 0 if report.passed else 3


def _verify_prefixlemma(steps: int, max_bits: int) -> int:
    # each term must pin down its two-steps-later iterate through the end
    # of the ribbit containing bit m: lcp(s_m, s_{m+2}) >= |ribbit_extend(s_m, m)|
    records = [rec.term for rec in iter_orbit("1", steps + 2, max_bits)]
    failures = []
    checked = 0
    for m in range(1, steps + 1):
        if m + 1 >= len(records):
            break
        s_m = records[m - 1]
        ell = min(m, len(s_m))
        need = len(ribbit_extend(s_m, ell))
        have = lcp(s_m, records[m + 1])
        checked += 1
        if have < need:
            failures.append((m, have, need))
    for m, have, need in failures:
        print(f"m = {m}: lcp {have} < required {need}")
    print(f"checked m = 1..{checked}: "
          + ("all prefixes locked" if not failures else f"{len(failures)} failures"))
    return 0 if checked and not failures else 3


def _cmd_basin(ns) -> int:
    want = max(ns.threshold, 64)
    certs, _ = _obtain_certificates(
        ns.cache, want, DEFAULT_MAX_ITERATIONS, ns.max_bits
    )
    results = classify_basin(
        ns.max_len,
        steps=ns.steps,
        threshold_bits=ns.threshold,
        certificates=certs,
        max_bits=ns.max_bits,
        parallel=ns.parallel,
        workers=ns.workers,
    )
    counts = {"even": 0, "odd": 0, "undecided": 0}
    if ns.emit == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["seed", "attractor", "steps_used", "agreement_bits"])
    for res in results:
        counts[res.attractor] += 1
        seed = str(res.seed)
        if ns.emit == "text":
            print(f"{seed} {res.attractor} {res.steps_used} {res.agreement_bits}")
        elif ns.emit == "json":
            print(json.dumps(
                {"seed": seed, "attractor": res.attractor,
                 "steps_used": res.steps_used,
                 "agreement_bits": res.agreement_bits},
                separators=(",", ":"),
            ))
        else:
            writer.writerow([seed, res.attractor, res.steps_used, res.agreement_bits])
    summary = (f"even={counts['even']} odd={counts['odd']} "
               f"undecided={counts['undecided']}")
    # the summary would corrupt machine formats, so it moves to stderr there
    print(summary, file=sys.stdout if ns.emit == "text" else sys.stderr)
    return 0


def _cmd_growth(ns) -> int:
    points = growth_ratios(ns.variant, ns.seed, ns.steps, ns.max_bits)
    truncated = len(points) < ns.steps
    if ns.emit == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["n", "length", "ratio"])
        for n, length, ratio in points:
            writer.writerow([n, length, "" if ratio is None else str(ratio)])
    else:
        try:
            est = estimate_lambda(points)
        except InsufficientDataError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2 if truncated else 1
        if ns.emit == "text":
            print(f"lambda_hat={est.lambda_hat:.6f}")
            print(f"window={est.window[0]}..{est.window[1]}")
            print(f"residual={est.residual:.6f}")
        else:
            print(json.dumps(
                {"lambda_hat": est.lambda_hat,
                 "window": [est.window[0], est.window[1]],
                 "ratios": list(est.ratios),
                 "residual": est.residual},
                separators=(",", ":"),
            ))
    if truncated:
        print(
            f"note: stopped after {len(points)} terms (bit cap {ns.max_bits})",
            file=sys.stderr,
        )
        return 2
    return 0


def _cmd_metric(ns) -> int:
    result = metric(ns.a, ns.b)
    print("equal" if result.equal else f"2^-{result.exponent}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return ns.func(ns)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
