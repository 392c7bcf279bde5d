"""``stego`` command-line front end.

Exit codes: 0 success, 1 invalid arguments, 2 runtime failure, 3 an
experiment ran but at least one verdict failed.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import struct
import sys
from pathlib import Path

from .bits import bits_to_bytes, bits_to_symbols, bytes_to_bits, symbols_to_bits
from .channel import (
    MemorylessChannel,
    PseudorandomFlatChannel,
    TrueRandomFlatChannel,
    load_channel,
    min_entropy,
)
from .codes import SymbolBlock, rep_decode, rep_encode
from .harness.experiments import EXPERIMENTS, run_experiment
from .prf import KEY_ENV_VAR, StegoKey, as_symbol_function
from .stf import PrivateSampleLog, stf_decode_symbols, stf_encode_stateless_symbols, stf_encode_symbols
from .stl import stl_encode_symbols

MAGIC = b"BBSTEGO1"
_HEADER = struct.Struct(">8sQ")
KEY_FILE_ENV_VAR = "STEGO_KEY_FILE"
SYSTEMS = ("stf", "stl", "stf-stateless")
DEFAULT_TRIALS = {
    "reliability": 1000, "error-channel": 100_000, "security-collision": 0, "query-count": 200,
    "lemma-tail": 3, "hybrid": 0, "bias": 1000, "bounds": 0,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# ---------------------------------------------------------------- framing

def frame(payload: bytes) -> list:
    """Bits of ``MAGIC || bit length || payload``."""
    return bytes_to_bits(_HEADER.pack(MAGIC, 8 * len(payload)) + payload)


def unframe(bits: list) -> bytes:
    head = bits_to_bytes(bits[:8 * _HEADER.size])
    if len(head) < _HEADER.size:
        raise ValueError("stegotext too short for a framing header")
    magic, n_bits = _HEADER.unpack(head)
    if magic != MAGIC:
        raise ValueError("framing header not found (wrong key, counter or parameters?)")
    body = bits[8 * _HEADER.size:]
    if n_bits > len(body):
        raise ValueError(f"header announces {n_bits} bits but only {len(body)} were decoded")
    return bits_to_bytes(body[:n_bits])


# ---------------------------------------------------------------- helpers

def _load_key(args) -> StegoKey:
    if args.key_hex:
        return StegoKey.from_hex(args.key_hex)
    path = args.key_file or os.environ.get(KEY_FILE_ENV_VAR)
    if path:
        return StegoKey.from_hex(Path(path).read_text(encoding="utf-8"))
    if os.environ.get(KEY_ENV_VAR):
        return StegoKey.from_env()
    raise UsageError(f"no key: pass --key-hex or --key-file, or set {KEY_ENV_VAR} or {KEY_FILE_ENV_VAR}")


def _rng(seed):
    return random.Random(seed) if seed is not None else random.SystemRandom()


def _read_bytes(path) -> bytes:
    return sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()


def _write_bytes(path, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _say(args, text: str) -> None:
    # keep stdout clean when it carries the payload
    stream = sys.stderr if getattr(args, "out", None) == "-" else sys.stdout
    print(text, file=stream)


def _number(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


# ---------------------------------------------------------------- channel

def cmd_channel_gen(args) -> int:
    rng = _rng(args.seed)
    if args.kind == "flat-pseudorandom":
        ch = PseudorandomFlatChannel.generate(args.S, args.H, rng, args.seed_bits)
    elif args.kind == "flat-true-random":
        ch = TrueRandomFlatChannel.generate(args.S, args.H, args.max_i, rng)
    else:
        if not args.counts:
            raise UsageError("--counts is required for memoryless-empirical")
        text = Path(args.counts[1:]).read_text(encoding="utf-8") if args.counts.startswith("@") else args.counts
        counts = {int(s): int(c) for s, c in json.loads(text).items()}
        ch = MemorylessChannel(counts, args.S)
    _write_text(args.out, json.dumps(ch.to_spec(), indent=2, sort_keys=True) + "\n")
    return 0


def cmd_channel_inspect(args) -> int:
    ch = load_channel(args.spec)
    info = {"kind": ch.kind, "alphabet_size": ch.alphabet_size, "min_entropy": min_entropy(ch)}
    if hasattr(ch, "H"):
        info.update(S=ch.S, H=ch.H)
    if isinstance(ch, PseudorandomFlatChannel):
        info["seed_bits"] = ch.seed.n
    if isinstance(ch, TrueRandomFlatChannel):
        info["max_i"] = ch.max_i
    if isinstance(ch, MemorylessChannel):
        info["support_size"] = len(ch.distribution_at(1))
    print(json.dumps(info, indent=2, sort_keys=True))
    return 0


def cmd_channel_member(args) -> int:
    ch = load_channel(args.spec)
    if not 0 <= args.doc < ch.alphabet_size:
        raise UsageError(f"--doc must be in [0, {ch.alphabet_size})")
    print(1 if ch.in_support(args.i, args.doc) else 0)
    return 0


# ---------------------------------------------------------------- encode / decode

def _symbol_function(args, key):
    tag = "stl" if args.system == "stl" else "stf"
    return as_symbol_function(key, tag, args.w)


def cmd_encode(args) -> int:
    key = _load_key(args)
    channel = load_channel(args.spec)
    payload = _read_bytes(args.inp)
    bits = bytes_to_bits(payload) if args.raw else frame(payload)
    symbols = bits_to_symbols(bits, args.w)
    if args.rep > 1:
        symbols = list(rep_encode(SymbolBlock(symbols, args.w), args.rep).symbols)
    f = _symbol_function(args, key)
    rng = _rng(args.seed)
    if args.system == "stf":
        stego = stf_encode_symbols(f, symbols, channel, rng, ctr=args.ctr)
    elif args.system == "stl":
        stego = stl_encode_symbols(f, args.k, symbols, channel, rng)
    else:
        stego = stf_encode_stateless_symbols(f, symbols, channel, rng, PrivateSampleLog())
    _write_bytes(args.out, "".join(f"{s}\n" for s in stego).encode())
    msg = f"encoded {len(payload)} bytes into {len(stego)} documents (w={args.w}, rep={args.rep})"
    if args.system == "stf":
        msg += f"; next --ctr {args.ctr + len(stego)}"
    _say(args, msg)
    return 0


def cmd_decode(args) -> int:
    key = _load_key(args)
    text = _read_bytes(args.inp).decode("utf-8")
    stego = [int(tok) for tok in text.split()]
    if args.num_symbols is not None:
        stego = stego[:args.num_symbols * args.rep]
    f = _symbol_function(args, key)
    if args.system == "stf":
        symbols = stf_decode_symbols(f, stego, args.ctr)
    else:
        symbols = [f(0, s) for s in stego]
    if args.rep > 1:
        usable = len(symbols) - len(symbols) % args.rep
        symbols = list(rep_decode(SymbolBlock(symbols[:usable], args.w), args.rep).symbols)
    bits = symbols_to_bits(symbols, args.w)
    data = bits_to_bytes(bits[:len(bits) - len(bits) % 8]) if args.num_symbols is not None else unframe(bits)
    _write_bytes(args.out, data)
    _say(args, f"decoded {len(data)} bytes from {len(stego)} documents")
    return 0


# ---------------------------------------------------------------- experiment

def _parse_params(args, extra: list) -> dict:
    params = {}
    if args.params:
        text = args.params
        if text.startswith("@"):
            text = Path(text[1:]).read_text(encoding="utf-8")
        text = text.strip()
        if text.startswith("{"):
            params.update(json.loads(text))
        else:
            for item in text.split(","):
                if "=" not in item:
                    raise UsageError(f"--params item {item!r} is not key=value")
                k, v = item.split("=", 1)
                params[k.strip()] = _number(v.strip())
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--") or len(tok) < 3:
            raise UsageError(f"unexpected argument {tok!r}")
        name, eq, val = tok[2:].partition("=")
        if not eq:
            val = next(it, None)
            if val is None:
                raise UsageError(f"parameter --{name} needs a value")
        params[name.replace("-", "_") if name not in ("S", "H") else name] = _number(val)
    return params


def cmd_experiment(args, extra) -> int:
    params = _parse_params(args, extra)
    channel = load_channel(args.spec) if args.spec else None
    trials = args.trials if args.trials is not None else DEFAULT_TRIALS[args.name]
    rep = run_experiment(args.name, params, trials, args.seed, channel, args.threads)
    body = rep.to_json() if args.format == "json" else rep.to_csv()
    if args.out:
        _write_text(args.out, body)
        print(rep.summary())
    else:
        sys.stdout.write(body)
        print(rep.summary(), file=sys.stderr)
    return 0 if rep.passed else 3


# ---------------------------------------------------------------- parser

def _key_args(p):
    p.add_argument("--key-hex", help=f"secret key as hex (else --key-file, ${KEY_FILE_ENV_VAR} or ${KEY_ENV_VAR})")
    p.add_argument("--key-file", help="file holding the key as hex")


def _system_args(p):
    p.add_argument("--system", choices=SYSTEMS, required=True)
    p.add_argument("--spec", help="channel spec file (JSON)")
    p.add_argument("--w", type=int, default=1, help="hiddentext bits per document")
    p.add_argument("--k", type=int, default=64, help="draw limit per symbol (stl)")
    p.add_argument("--ctr", type=int, default=0, help="starting counter (stf)")
    p.add_argument("--rep", type=int, default=1, help="odd repetition factor per symbol")
    p.add_argument("--in", dest="inp", required=True, help="input file or - for stdin")
    p.add_argument("--out", required=True, help="output file or - for stdout")
    _key_args(p)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stego", description="Black-box steganography by rejection sampling.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ch = sub.add_parser("channel", help="generate or query channel spec files")
    chs = ch.add_subparsers(dest="action", required=True, parser_class=_Parser)
    gen = chs.add_parser("gen", help="write a channel spec")
    gen.add_argument("--kind", choices=("flat-pseudorandom", "flat-true-random", "memoryless-empirical"),
                     default="flat-pseudorandom")
    gen.add_argument("--S", type=int, help="alphabet size")
    gen.add_argument("--H", type=int, help="support size per history length (flat kinds)")
    gen.add_argument("--seed-bits", type=int, default=128)
    gen.add_argument("--max-i", type=int, default=64, help="history lengths to materialize (true-random)")
    gen.add_argument("--counts", help="JSON object doc->count, or @file (memoryless)")
    gen.add_argument("--seed", type=int, help="generation seed (default: system randomness)")
    gen.add_argument("--out", help="output file (default stdout)")
    ins = chs.add_parser("inspect", help="summarize a channel spec")
    ins.add_argument("--spec", required=True)
    mem = chs.add_parser("member", help="print 1 if a document is in the support at history length i")
    mem.add_argument("--spec", required=True)
    mem.add_argument("--i", type=int, required=True)
    mem.add_argument("--doc", type=int, required=True)

    enc = sub.add_parser("encode", help="hide a message")
    _system_args(enc)
    enc.add_argument("--raw", action="store_true", help="omit the framing header")
    enc.add_argument("--seed", type=int, help="encoder randomness seed (default: system randomness)")

    dec = sub.add_parser("decode", help="recover a message")
    _system_args(dec)
    dec.add_argument("--num-symbols", type=int, help="decode this many symbols without a framing header")

    ex = sub.add_parser("experiment", help="run a named experiment")
    ex.add_argument("name", choices=sorted(EXPERIMENTS))
    ex.add_argument("--spec", help="channel spec file (overrides the experiment default)")
    ex.add_argument("--params", help="JSON object, key=value list, or @file; extra --name value flags also set parameters")
    ex.add_argument("--trials", type=int)
    ex.add_argument("--seed", type=int, default=0)
    ex.add_argument("--threads", type=int, default=1)
    ex.add_argument("--format", choices=("json", "csv"), default="json")
    ex.add_argument("--out", help="report file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        if extra and args.command != "experiment":
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
        if args.command in ("encode", "decode"):
            if not args.spec and args.command == "encode":
                parser.error("encode needs --spec")
            if args.rep < 1 or args.rep % 2 == 0:
                parser.error("--rep must be an odd positive integer")
        if args.command == "channel":
            if args.action == "gen" and args.kind != "memoryless-empirical" and (args.S is None or args.H is None):
                parser.error("--S and --H are required for flat channels")
            return {"gen": cmd_channel_gen, "inspect": cmd_channel_inspect,
                    "member": cmd_channel_member}[args.action](args)
        if args.command == "encode":
            return cmd_encode(args)
        if args.command == "decode":
            return cmd_decode(args)
        return cmd_experiment(args, extra)
    except UsageError as e:
        print(e, file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)
    except (OSError, ValueError, KeyError, OverflowError, MemoryError, NotImplementedError) as e:
        print(f"stego: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
