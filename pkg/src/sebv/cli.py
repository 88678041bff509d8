"""Command-line driver: seeded protocol runs, histograms, attacks, QASM export.

Exit codes: 0 success, 2 validation error, 3 retry exhaustion.  Output files
are written atomically (temp file + rename) so an error never leaves partial
output; with the same ``--seed`` every subcommand writes byte-identical
output.  ``SEBV_SEED`` in the environment acts as the seed fallback; without
either, a fresh random seed is drawn and recorded in the output.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
import tempfile

from .adversary import AttackKind, run_attack
from .analysis import collect_histogram
from .bits import BitString
from .circuits import build_bv_circuit, build_sebv_circuit, export_qasm, run_bv
from .protocol import (
    DEFAULT_MAX_RETRIES,
    ProtocolConfig,
    RetryLimitError,
    Variant,
    run_session,
)
from .rng import Rng

SEED_ENV = "SEBV_SEED"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RETRY_EXHAUSTED = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sebv",
        description="Simulate the fSEBV/sSEBV entanglement-based key exchanges.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, keys=True):
        if keys:
            p.add_argument("--n", type=int, help="key width (inferred from keys if omitted)")
            p.add_argument("--key-a", help="Alice's key, MSB-first bits (default all-zero)")
            p.add_argument("--key-b", help="Bob's key, MSB-first bits (default all-zero)")
        p.add_argument("--seed", type=int, help=f"64-bit seed (fallback: ${SEED_ENV})")
        p.add_argument("--output", help="write here atomically instead of stdout")

    p_run = sub.add_parser("run", help="run one protocol session")
    p_run.add_argument("--protocol", choices=["fsebv", "ssebv"], required=True)
    p_run.add_argument("--reverse-roles", action="store_true")
    p_run.add_argument("--max-retries", type=int, default=DEFAULT_MAX_RETRIES)
    add_common(p_run)

    p_hist = sub.add_parser("histogram", help="tally joint readouts over many shots")
    p_hist.add_argument("--protocol", choices=["fsebv", "ssebv"], default="fsebv")
    p_hist.add_argument("--shots", type=int, default=2048)
    p_hist.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    add_common(p_hist)

    p_attack = sub.add_parser("attack", help="simulate an eavesdropper over many sessions")
    p_attack.add_argument("--attack", choices=[k.value for k in AttackKind], required=True)
    p_attack.add_argument("--protocol", choices=["fsebv", "ssebv"], default="fsebv")
    p_attack.add_argument("--sessions", type=int, default=10000)
    add_common(p_attack)

    p_qasm = sub.add_parser("export-qasm", help="emit a circuit as OpenQASM 2.0")
    p_qasm.add_argument("--circuit", choices=["bv", "sebv"], default="sebv")
    add_common(p_qasm)

    p_bv = sub.add_parser("bv", help="recover a key with the single-query algorithm")
    add_common(p_bv)
    return parser


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        return int(env)
    return secrets.randbits(64)


def _parse_keys(args) -> tuple[int, BitString, BitString]:
    """Width and both keys from the flags; contradictions are rejected here."""
    texts = {"key-a": args.key_a, "key-b": args.key_b}
    widths = {len(t) for t in texts.values() if t is not None}
    if args.n is not None:
        widths.add(args.n)
    if len(widths) > 1:
        raise ValueError(
            f"contradictory widths: --n/keys give {sorted(widths)}"
        )
    if not widths:
        raise ValueError("need --n or a key to fix the key width")
    n = widths.pop()
    if n < 1:
        raise ValueError(f"key width must be >= 1, got {n}")
    keys = {}
    for name, text in texts.items():
        keys[name] = BitString.zeros(n) if text is None else BitString.from_text(text)
    return n, keys["key-a"], keys["key-b"]


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sebv-tmp-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _config_record(config: ProtocolConfig) -> dict:
    record = config.to_record()
    record["rng_algorithm"] = Rng.algorithm
    return record


def _cmd_run(args) -> int:
    n, key_a, key_b = _parse_keys(args)
    config = ProtocolConfig(
        variant=Variant(args.protocol),
        n=n,
        key_a=key_a,
        key_b=key_b,
        seed=_resolve_seed(args),
        max_retries=args.max_retries,
        roles_reversed=args.reverse_roles,
    )
    try:
        transcript = run_session(config)
    except RetryLimitError as error:
        _write_output(error.transcript.to_json_line() + "\n", args.output)
        print(f"sebv run: {error}", file=sys.stderr)
        return EXIT_RETRY_EXHAUSTED
    _write_output(transcript.to_json_line() + "\n", args.output)
    return EXIT_OK


def _cmd_histogram(args) -> int:
    n, key_a, key_b = _parse_keys(args)
    seed = _resolve_seed(args)
    config = ProtocolConfig(
        variant=Variant(args.protocol), n=n, key_a=key_a, key_b=key_b, seed=seed
    )
    histogram = collect_histogram(config, args.shots, Rng(seed))
    if args.format == "csv":
        text = histogram.to_csv()
    else:
        record = _config_record(config)
        record.update(histogram.to_record())
        text = json.dumps(record, separators=(",", ":")) + "\n"
    _write_output(text, args.output)
    return EXIT_OK


def _cmd_attack(args) -> int:
    n, key_a, key_b = _parse_keys(args)
    seed = _resolve_seed(args)
    config = ProtocolConfig(
        variant=Variant(args.protocol), n=n, key_a=key_a, key_b=key_b, seed=seed
    )
    report = run_attack(config, AttackKind(args.attack), args.sessions, Rng(seed))
    record = _config_record(config)
    record.update(report.to_record())
    _write_output(json.dumps(record, separators=(",", ":")) + "\n", args.output)
    return EXIT_OK


def _cmd_export_qasm(args) -> int:
    n, key_a, key_b = _parse_keys(args)
    if args.circuit == "bv":
        circuit = build_bv_circuit(key_a)
    else:
        circuit = build_sebv_circuit(n, key_a, key_b)
    _write_output(export_qasm(circuit), args.output)
    return EXIT_OK


def _cmd_bv(args) -> int:
    n, key, _ = _parse_keys(args)
    seed = _resolve_seed(args)
    recovered = run_bv(key, Rng(seed))
    record = {
        "n": n,
        "key": str(key),
        "recovered": str(recovered),
        "seed": seed,
        "rng_algorithm": Rng.algorithm,
    }
    _write_output(json.dumps(record, separators=(",", ":")) + "\n", args.output)
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "histogram": _cmd_histogram,
    "attack": _cmd_attack,
    "export-qasm": _cmd_export_qasm,
    "bv": _cmd_bv,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as error:
        print(f"sebv {args.command}: {error}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
