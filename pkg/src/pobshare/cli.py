"""Command-line interface: split, combine, inspect, policy-check, audit.

Exit codes: 0 success, 1 reconstruction failed (missing primitive shares),
2 input or format error, 3 policy error, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import hashlib
import random
import sys
import warnings
from pathlib import Path

from . import __version__
from .access import (
    AccessStructure,
    covers_all,
    cumulative_array,
    format_matrix,
    incidence_array,
    is_authorized,
    maximal_unauthorized,
)
from .analysis import leakage_audit
from .container import RedundantPolicyWarning, decode_bundle, encode_bundle, parse_policy
from .dealer import MIN_PRIMITIVES, combine, deal
from .errors import (
    AuthorizedCoalitionError,
    ConflictError,
    FormatError,
    PobShareError,
    PolicyError,
    SchemeMismatchError,
)
from .threshold import ReplayRandom, default_rng

EXIT_OK = 0
EXIT_INCOMPLETE = 1
EXIT_INPUT = 2
EXIT_POLICY = 3
EXIT_INTERNAL = 4

SEED_WARNING = "WARNING: --seed makes every share predictable. Use it for tests only, never for real secrets."


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_INPUT) from exc


def _load_policy(path: str) -> AccessStructure:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(f"cannot read policy {path}: {exc}", EXIT_INPUT) from exc
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RedundantPolicyWarning)
        try:
            policy = parse_policy(text)
        except PolicyError as exc:
            raise CliError(f"policy error: {exc}", EXIT_POLICY) from exc
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return policy


def _rng_from_seed(seed: str | None):
    """``None`` gives the system CSPRNG; ``HEX`` seeds a PRNG; ``replay:a,b,...`` replays draws."""
    if seed is None:
        return default_rng()
    print(SEED_WARNING, file=sys.stderr)
    if seed.startswith("replay:"):
        try:
            return ReplayRandom(int(x) for x in seed[len("replay:") :].split(","))
        except ValueError as exc:
            raise CliError(f"bad replay script {seed!r}", EXIT_INPUT) from exc
    try:
        return random.Random(int(seed, 16))
    except ValueError as exc:
        raise CliError(f"--seed must be hex, got {seed!r}", EXIT_INPUT) from exc


def _safe_filename(name: str) -> str:
    if not name or name in {".", ".."} or any(c in name for c in "/\\\0"):
        raise CliError(f"participant name {name!r} cannot be used as a file name", EXIT_POLICY)
    return name + ".pobs"


def cmd_split(args) -> int:
    policy = _load_policy(args.policy)
    secret = _read_bytes(args.infile)
    if not secret:
        raise CliError("secret file is empty", EXIT_INPUT)
    names = [_safe_filename(p) for p in policy.roster]
    rng = _rng_from_seed(args.seed)
    try:
        meta, bundles = deal(secret, policy, rng)
    except (IndexError, ValueError) as exc:
        if isinstance(exc, PobShareError):
            raise
        raise CliError(f"seed could not drive the dealer: {exc}", EXIT_INPUT) from exc
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for fname, bundle in zip(names, bundles):
            (out / fname).write_bytes(encode_bundle(bundle))
    except OSError as exc:
        raise CliError(f"cannot write bundles: {exc}", EXIT_INPUT) from exc

    print(f"scheme-id:     {meta.scheme_id.hex()}")
    print(f"secret bytes:  {meta.secret_length}")
    print(f"primitives m:  {meta.m} ({meta.padding} padding)")
    for j, col in enumerate(meta.columns, start=1):
        print(f"  s{j}: withheld from {{{', '.join(policy.names_of(col))}}}")
    for j in meta.padding_indices:
        print(f"  s{j}: padding, held by everyone")
    for fname, bundle in zip(names, bundles):
        print(f"{bundle.participant}: {', '.join(f's{j}' for j in bundle.indices)} -> {out / fname}")
    if args.digest:
        print(f"secret sha256: {hashlib.sha256(secret).hexdigest()}")
    return EXIT_OK


def cmd_combine(args) -> int:
    bundles = []
    for path in args.shares:
        try:
            bundles.append(decode_bundle(_read_bytes(path)))
        except FormatError as exc:
            raise CliError(f"{path}: {exc}", EXIT_INPUT) from exc
    try:
        report = combine(bundles)
    except (SchemeMismatchError, ConflictError) as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    if not report.ok:
        noun = "share" if len(report.missing) == 1 else "shares"
        print(
            f"cannot reconstruct: missing primitive {noun} {', '.join(map(str, report.missing))}",
            file=sys.stderr,
        )
        return EXIT_INCOMPLETE
    if report.parity_warning:
        print(
            f"warning: parity check failed on {len(report.bad_bytes)} byte(s); shares may be corrupt",
            file=sys.stderr,
        )
    if args.expect_digest and hashlib.sha256(report.secret).hexdigest() != args.expect_digest.lower():
        print("error: recovered secret does not match --expect-digest", file=sys.stderr)
        return EXIT_INPUT
    try:
        Path(args.out).write_bytes(report.secret)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc.strerror}", EXIT_INPUT) from exc
    print(f"recovered {len(report.secret)} byte(s) from primitives {report.present}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    try:
        b = decode_bundle(_read_bytes(args.share))
    except FormatError as exc:
        raise CliError(f"{args.share}: {exc}", EXIT_INPUT) from exc
    print(f"participant:   {b.participant}")
    print(f"scheme-id:     {b.scheme_id.hex()}")
    print(f"secret bytes:  {b.secret_length}")
    print(f"primitives m:  {b.m} ({b.padding} padding)")
    print(f"held indices:  {', '.join(map(str, b.indices))}")
    return EXIT_OK


def cmd_policy_check(args) -> int:
    policy = _load_policy(args.policy)
    forbidden = maximal_unauthorized(policy)
    array = cumulative_array(forbidden)
    m = max(array.m, MIN_PRIMITIVES)

    def fmt(family):
        return ", ".join("{" + ",".join(policy.names_of(s)) + "}" for s in family)

    print(f"participants: {', '.join(policy.roster)}")
    print(f"minimal authorized sets: {fmt(policy.minimal)}")
    print(f"maximal unauthorized sets: {fmt(forbidden.sets)}")
    print("incidence array:")
    print(format_matrix(incidence_array(policy)))
    print("cumulative array:")
    print(format_matrix(array.rows))
    print(f"m = {m}" + (f" ({m - array.m} padding)" if m > array.m else ""))
    if policy.n <= 5:
        bad = [s for s in range(1 << policy.n) if covers_all(array, s) != is_authorized(s, policy)]
        verdict = "holds" if not bad else f"FAILS on {len(bad)} subset(s)"
        print(f"row-cover equivalence over all {1 << policy.n} subsets: {verdict}")
        if bad:
            return EXIT_INTERNAL
    return EXIT_OK


def cmd_audit(args) -> int:
    policy = _load_policy(args.policy)
    names = [x.strip() for x in args.coalition.split(",") if x.strip()]
    try:
        coalition = policy.mask_of(names)
    except PolicyError as exc:
        raise CliError(str(exc), EXIT_POLICY) from exc
    rng = _rng_from_seed(args.seed)
    if args.secret:
        secret = _read_bytes(args.secret)
        if not secret:
            raise CliError("secret file is empty", EXIT_INPUT)
    else:
        secret = bytes(rng.randrange(256) for _ in range(16))
    try:
        report = leakage_audit(policy, coalition, secret, rng)
    except AuthorizedCoalitionError as exc:
        raise CliError(str(exc), EXIT_POLICY) from exc
    print(report.to_text())
    if args.csv:
        print(report.to_csv(), end="")
    return EXIT_OK if report.contains_secret else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pobshare", description="POB generalized secret sharing")
    parser.add_argument("-V", "--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="deal a secret file into per-participant bundles")
    p.add_argument("--policy", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument(
        "--seed",
        help="INSECURE, tests only: hex PRNG seed, or replay:v1,v2,... to replay exact draws",
    )
    p.add_argument("--digest", action="store_true", help="print a SHA-256 of the secret (enables offline guessing)")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("combine", help="reconstruct a secret from bundle files")
    p.add_argument("--shares", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--expect-digest", help="SHA-256 printed by split --digest")
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("inspect", help="show a bundle's header without secret material")
    p.add_argument("--share", required=True)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("policy-check", help="print forbidden family and cumulative array")
    p.add_argument("--policy", required=True)
    p.set_defaults(func=cmd_policy_check)

    p = sub.add_parser("audit", help="count candidate secrets left to a forbidden coalition")
    p.add_argument("--policy", required=True)
    p.add_argument("--coalition", required=True, help="comma-separated participant names")
    p.add_argument("--secret")
    p.add_argument("--seed")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except PolicyError as exc:
        print(f"policy error: {exc}", file=sys.stderr)
        return EXIT_POLICY
    except PobShareError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
