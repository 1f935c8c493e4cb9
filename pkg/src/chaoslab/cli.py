"""chaoslab command-line front end.

Exit codes: 0 success, 2 entropy-source failure, 3 decryption integrity
failure, 4 format/domain error (including bad usage), 5 period budget
exceeded, 6 attack missed the supplied ground truth.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .attack import brute_force_unscramble
from .cipher import CipherBlock, decrypt, decrypt_image, encrypt, encrypt_image
from .dynamics import POINT_SAMPLES, SWEEP_SAMPLES, lyapunov_logistic, lyapunov_sweep, screen_parameter
from .errors import ChaosLabError, DomainError, FormatError, IntegrityError, PeriodNotFound
from .keying import SecretKey, extract_params, generate_key
from .maps import TorusMap
from .periods import DEFAULT_CAP, check_dyson_bounds, period_fibonacci, period_matrix_power
from .pgm import atomic_write, format_pgm, parse_pgm, read_pgm
from .stats import analyze, format_histogram

EXIT_OK = 0
EXIT_ENTROPY = 2
EXIT_INTEGRITY = 3
EXIT_FORMAT = 4
EXIT_BUDGET = 5
EXIT_MISS = 6

KEY_ENV = "CHAOSLAB_KEY"


class _Parser(argparse.ArgumentParser):
    # argparse's default exit status 2 collides with the entropy-failure code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FORMAT, f"{self.prog}: error: {message}\n")


class _EntropyFailure(Exception):
    pass


def _key_from(args) -> SecretKey:
    raw = args.key if args.key is not None else os.environ.get(KEY_ENV)
    if raw is None:
        raise FormatError(f"no key given: pass --key or set {KEY_ENV}")
    return SecretKey.parse(raw)


def _gen_key() -> SecretKey:
    try:
        return generate_key()
    except (OSError, NotImplementedError) as exc:
        raise _EntropyFailure(str(exc)) from exc


def _print_params(key: SecretKey) -> None:
    p = extract_params(key)
    print(f"r={p.r!r}")
    print(f"x0={p.x0!r}")
    print(f"base={p.base!r}")
    print(f"iterations={p.iterations}")


def cmd_keygen(args) -> int:
    attempts = 1
    key = _gen_key()
    if args.screened:
        while True:
            p = extract_params(key)
            if screen_parameter(p.r, p.x0):
                break
            if attempts >= args.max_attempts:
                print(f"no screened key after {attempts} attempts", file=sys.stderr)
                return EXIT_ENTROPY
            key = _gen_key()
            attempts += 1
    print(key.chars)
    if args.screened:
        print(f"attempts={attempts}")
    if args.show_params:
        _print_params(key)
    return EXIT_OK


def _is_image(data: bytes, mode: str) -> bool:
    if mode == "auto":
        return data.startswith(b"P5")
    return mode == "image"


def cmd_encrypt(args) -> int:
    params = extract_params(_key_from(args))
    data = Path(args.infile).read_bytes()
    if _is_image(data, args.mode):
        out = format_pgm(encrypt_image(parse_pgm(data), params))
    else:
        out = encrypt(data, params).to_bytes()
    atomic_write(args.outfile, out)
    return EXIT_OK


def cmd_decrypt(args) -> int:
    params = extract_params(_key_from(args))
    data = Path(args.infile).read_bytes()
    if _is_image(data, args.mode):
        out = format_pgm(decrypt_image(parse_pgm(data), params))
    else:
        out = decrypt(CipherBlock.from_bytes(data), params)
    atomic_write(args.outfile, out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    img1 = read_pgm(args.file1)
    img2 = read_pgm(args.file2) if args.file2 else None
    rng = np.random.default_rng(args.seed)
    rep = analyze(img1, img2, sample_count=args.pairs, rng=rng)
    sys.stdout.write(rep.to_text())
    if args.histogram:
        atomic_write(args.histogram, format_histogram(img1).encode())
    return EXIT_OK


def cmd_period(args) -> int:
    if args.classical is not None:
        n = args.classical
        res = period_matrix_power(TorusMap.classical(n), args.cap)
        fib = period_fibonacci(n)
        if fib.period != res.period:
            raise AssertionError(f"period methods disagree at N={n}")
        print(res.period)
    elif args.general is not None:
        a, b, n = args.general
        print(period_matrix_power(TorusMap(a, b, n), args.cap).period)
    else:
        report = check_dyson_bounds(args.table)
        text = report.to_jsonl()
        if args.out:
            atomic_write(args.out, text.encode())
        else:
            sys.stdout.write(text)
        for finding in report.findings():
            print(f"finding: {finding}")
        print(f"violations: {len(report.violations)}")
    return EXIT_OK


def cmd_lyapunov(args) -> int:
    if args.point is not None:
        r, x0 = args.point
        est = lyapunov_logistic(r, x0, samples=args.samples or POINT_SAMPLES)
        print(f"lambda={est.lam!r}")
        if est.singular:
            print(f"singular_terms_skipped={est.skipped}")
    else:
        r_min, r_max, step = args.sweep
        rep = lyapunov_sweep(r_min, r_max, step, args.x0, samples=args.samples or SWEEP_SAMPLES)
        text = rep.to_csv()
        if args.out:
            atomic_write(args.out, text.encode())
        else:
            sys.stdout.write(text)
        print(f"negative_points={len(rep.negative)}", file=sys.stderr)
    return EXIT_OK


def cmd_attack(args) -> int:
    img = read_pgm(args.scrambled)
    truth = read_pgm(args.truth) if args.truth else None
    res = brute_force_unscramble(img, args.budget, truth)
    if args.out:
        atomic_write(args.out, format_pgm(res.candidate))
    if args.trace:
        atomic_write(args.trace, res.trace_csv().encode())
    best = dict(res.score_trace)[res.recovered_iteration]
    print(f"recovered_iteration={res.recovered_iteration}")
    print(f"score={best!r}")
    print(f"elapsed_s={res.elapsed:.3f}")
    if res.succeeded is None:
        return EXIT_OK
    print(f"match={'yes' if res.succeeded else 'no'}")
    return EXIT_OK if res.succeeded else EXIT_MISS


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chaoslab", description="Chaotic-map cryptography laboratory.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("keygen", help="generate a 40-hex-digit secret key")
    s.add_argument("--show-params", action="store_true", help="also print the extracted cipher parameters")
    s.add_argument("--screened", action="store_true", help="regenerate until the Lyapunov screen passes")
    s.add_argument("--max-attempts", type=int, default=1000)
    s.set_defaults(func=cmd_keygen)

    for name, func, helptext in (
        ("encrypt", cmd_encrypt, "encrypt printable-ASCII text or a P5 PGM image"),
        ("decrypt", cmd_decrypt, "decrypt a CHLB container or an encrypted PGM"),
    ):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("infile")
        s.add_argument("outfile")
        s.add_argument("--key", help=f"secret key (overrides ${KEY_ENV})")
        s.add_argument("--mode", choices=("auto", "text", "image"), default="auto")
        s.set_defaults(func=func)

    s = sub.add_parser("analyze", help="entropy/correlation of a PGM, plus NPCR/UACI/MSE/PSNR for a pair")
    s.add_argument("file1")
    s.add_argument("file2", nargs="?")
    s.add_argument("--pairs", type=int, default=None, help="sample this many adjacent pairs instead of all")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--histogram", help="write the 256-bin histogram of FILE1 here")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("period", help="minimal periods and the 3N/2N/(12/7)N bound table")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--classical", type=int, metavar="N")
    g.add_argument("--general", type=int, nargs=3, metavar=("A", "B", "N"))
    g.add_argument("--table", type=int, metavar="N_MAX")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP, help="iteration budget")
    s.add_argument("--out", help="write the table as JSON lines here")
    s.set_defaults(func=cmd_period)

    s = sub.add_parser("lyapunov", help="Lyapunov exponent of the logistic map")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--point", type=float, nargs=2, metavar=("R", "X0"))
    g.add_argument("--sweep", type=float, nargs=3, metavar=("R_MIN", "R_MAX", "STEP"))
    s.add_argument("--x0", type=float, default=0.2, help="initial state for sweeps")
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--out", help="write sweep CSV here")
    s.set_defaults(func=cmd_lyapunov)

    s = sub.add_parser("attack", help="brute-force the cat-map scramble of a PGM")
    s.add_argument("scrambled")
    s.add_argument("--truth", help="original image; exit 6 if the best candidate differs")
    s.add_argument("--budget", type=int, default=None, help="iterations to try (default 3N)")
    s.add_argument("--out", help="write the best candidate PGM here")
    s.add_argument("--trace", help="write the score trace CSV here")
    s.set_defaults(func=cmd_attack)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _EntropyFailure as exc:
        print(f"error: entropy source failed: {exc}", file=sys.stderr)
        return EXIT_ENTROPY
    except IntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except PeriodNotFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DomainError, FormatError, ChaosLabError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
