"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error. Every subcommand writes
``config fingerprint: <hash>`` to stderr so stdout stays machine-readable.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from . import codec as codec_mod
from .config import RunConfig
from .errors import CapacityWarning, HTPError
from .evaluation import SEMEVAL_COLUMNS, SIMPLE_COLUMNS, dimension_sweep, format_table, load_sts_tsv, run_eval
from .lexicon import WeightingScheme, build_frequency_table
from .pooling import cosine_similarity, embed_tokens, sentence_tokens

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(parser: argparse.ArgumentParser, dataset: bool = False) -> None:
    g = parser.add_argument_group("configuration")
    g.add_argument("--config", help="JSON RunConfig file; explicit flags override it")
    g.add_argument("--dim", type=int, help="embedding dimension D (even, >= 4; default 512)")
    g.add_argument("--lmax", type=int, dest="l_max", help="maximum token length in UTF-16 units (default 24)")
    g.add_argument("--min-modulus", type=int, help="smallest prime in the basis (default 3)")
    g.add_argument("--no-nfc", action="store_const", const=False, dest="nfc", help="skip NFC normalisation")
    g.add_argument("--json", action="store_true", help="machine-readable output")
    if dataset:
        g.add_argument("--scheme", help="uniform | itf | tfidf | stopword (default tfidf)")
        g.add_argument("--stopwords", dest="stopwords_file", help="stopword file (default: bundled English list)")
        g.add_argument("--splitter", choices=["unicode_words", "whitespace", "pretokenized"])
        g.add_argument("--no-lowercase", action="store_const", const=False, dest="lowercase")
        g.add_argument("--chunk-long-tokens", action="store_const", const=True, dest="chunk_long_tokens",
                       help="split tokens longer than --lmax instead of failing (lossy)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="htp", description="Harmonic token projection embeddings")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("encode", help="token -> vector")
    p.add_argument("--token", required=True)
    p.add_argument("--output", "-o", default="-", help="binary vector file ('-' = stdout)")
    _common(p)

    p = sub.add_parser("decode", help="vector -> token")
    p.add_argument("--vector-file", required=True, help="binary or JSON vector file ('-' = stdin)")
    _common(p)

    p = sub.add_parser("sim", help="cosine similarity of sentence pairs")
    p.add_argument("sentences", nargs="*", help="two sentences")
    p.add_argument("--file", help="TSV of sentence pairs, one pair per line")
    _common(p, dataset=True)

    for name, help_text in (("eval", "score an STS dataset"), ("sweep", "dimensionality ablation")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", help="STS TSV file")
        p.add_argument("--simple", action="store_true", help="3-column s1/s2/score layout")
        p.add_argument("--columns", help="sentence1,sentence2,score column indices")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--output", "-o", help="also write the JSON report here")
        p.add_argument("--scores", action="store_true", help="include per-pair scores in JSON")
        if name == "sweep":
            p.add_argument("--dims", default="4,8,16,32,64,128,256,512,1024")
        _common(p, dataset=True)

    p = sub.add_parser("basis", help="show the moduli and capacity for a dimension")
    _common(p)
    return parser


def _run_config(args) -> RunConfig:
    names = ("dim", "l_max", "min_modulus", "nfc", "scheme", "stopwords_file", "splitter",
             "lowercase", "chunk_long_tokens", "input", "output")
    overrides = {n: getattr(args, n, None) for n in names}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    try:
        if args.config:
            return RunConfig.from_file(args.config, **overrides)
        return RunConfig(**overrides)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _scheme(cfg: RunConfig) -> WeightingScheme:
    if cfg.scheme == "stopword_removal":
        return WeightingScheme("stopword_removal", stopwords=cfg.stopwords())
    if cfg.scheme in ("itf", "tfidf"):
        # placeholder table; callers swap in one built from their corpus
        return WeightingScheme(cfg.scheme, build_frequency_table([]))
    return WeightingScheme(cfg.scheme)


def cmd_encode(args, cfg: RunConfig) -> int:
    codec = cfg.codec()
    vec = codec_mod.encode(args.token, codec)
    if args.json:
        _emit_json({"config_fingerprint": cfg.fingerprint(), "D": codec.dim, "token": args.token,
                    "vector": vec.tolist()})
        return EXIT_OK
    blob = codec_mod.dumps_binary(vec)
    if args.output == "-":
        sys.stdout.buffer.write(blob)
        sys.stdout.buffer.flush()
    else:
        Path(args.output).write_bytes(blob)
    return EXIT_OK


def cmd_decode(args, cfg: RunConfig) -> int:
    vectors = codec_mod.load_vectors(_read_input(args.vector_file))
    dim = vectors.shape[1]
    if args.dim is None and not args.config:
        cfg.dim = dim  # infer D from the file unless pinned
    codec = cfg.codec()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CapacityWarning)
        try:
            tokens = codec_mod.decode_many(vectors, codec)
        finally:
            for w in caught:
                print(f"warning: {w.message}", file=sys.stderr)
    if args.json:
        _emit_json({"config_fingerprint": cfg.fingerprint(), "D": codec.dim, "tokens": tokens,
                    "exact": codec.reversible})
    else:
        for t in tokens:
            sys.stdout.write(t + "\n")
    return EXIT_OK


def _read_pairs(path: str) -> list[tuple[str, str]]:
    pairs = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise HTPError(f"{path}:{lineno}: expected two tab-separated sentences")
        pairs.append((parts[0], parts[1]))
    return pairs


def cmd_sim(args, cfg: RunConfig) -> int:
    if args.file:
        if args.sentences:
            raise UsageError("give either two sentences or --file, not both")
        pairs = _read_pairs(args.file)
    elif len(args.sentences) == 2:
        pairs = [tuple(args.sentences)]
    else:
        raise UsageError("sim needs exactly two sentences or --file")
    if args.scheme is None:
        cfg.scheme = "uniform"
    codec, tok = cfg.codec(), cfg.tokenizer()
    scheme = _scheme(cfg)
    split = [(sentence_tokens(a, codec, tok, cfg.chunk_long_tokens),
              sentence_tokens(b, codec, tok, cfg.chunk_long_tokens)) for a, b in pairs]
    if scheme.kind in ("itf", "tfidf"):
        scheme = scheme.with_table(build_frequency_table([t for pair in split for t in pair]))
    scores = [cosine_similarity(embed_tokens(a, scheme, codec), embed_tokens(b, scheme, codec))
              for a, b in split]
    if args.json:
        _emit_json({"config_fingerprint": cfg.fingerprint(), "scheme": cfg.scheme, "D": codec.dim,
                    "scores": scores})
    else:
        for s in scores:
            sys.stdout.write(f"{s:.6f}\n")
    return EXIT_OK


def _load_dataset(args, cfg: RunConfig):
    if not cfg.input:
        raise UsageError("--input is required")
    if args.columns:
        try:
            a, b, s = (int(c) for c in args.columns.split(","))
        except ValueError:
            raise UsageError("--columns expects three comma-separated integers") from None
        cols = {"sentence_a": a, "sentence_b": b, "score": s}
    else:
        cols = SIMPLE_COLUMNS if args.simple else SEMEVAL_COLUMNS
    return load_sts_tsv(cfg.input, cols)


def _write_report(args, payload) -> None:
    if args.json:
        _emit_json(payload)
    if args.output:
        Path(args.output).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def cmd_eval(args, cfg: RunConfig) -> int:
    data = _load_dataset(args, cfg)
    report = run_eval(data.records, _scheme(cfg), cfg.codec(), cfg.tokenizer(),
                      threads=args.threads, chunk_long_tokens=cfg.chunk_long_tokens)
    payload = report.to_dict(include_scores=args.scores)
    payload["skipped_rows"] = len(data.skipped_rows)
    payload["out_of_range_rows"] = len(data.out_of_range_rows)
    payload["input"] = cfg.input
    if not args.json:
        print(format_table([report]))
        print(f"pairs scored: {report.n_pairs}  skipped rows: {len(data.skipped_rows)}  "
              f"out-of-range rows: {len(data.out_of_range_rows)}  flagged pairs: {len(report.flagged_pairs)}")
    _write_report(args, payload)
    return EXIT_OK


def cmd_sweep(args, cfg: RunConfig) -> int:
    try:
        dims = [int(d) for d in args.dims.split(",") if d.strip()]
    except ValueError:
        raise UsageError("--dims expects comma-separated integers") from None
    if not dims or any(d < 4 or d % 2 for d in dims):
        raise UsageError("every --dims entry must be an even integer >= 4")
    data = _load_dataset(args, cfg)
    reports = dimension_sweep(data.records, _scheme(cfg), dims, cfg.tokenizer(), l_max=cfg.l_max,
                              min_modulus=cfg.min_modulus, nfc=cfg.nfc, threads=args.threads,
                              chunk_long_tokens=cfg.chunk_long_tokens)
    if not args.json:
        print(format_table(reports))
    _write_report(args, {"input": cfg.input, "scheme": cfg.scheme,
                         "reports": [r.to_dict(include_scores=args.scores) for r in reports]})
    return EXIT_OK


def cmd_basis(args, cfg: RunConfig) -> int:
    codec = cfg.codec()
    basis = codec.basis
    if args.json:
        payload = basis.to_dict()
        payload.update(capacity=str(basis.capacity), capacity_bits=basis.capacity.bit_length(),
                       D=basis.dim, reversible_for_lmax=codec.reversible, config_fingerprint=cfg.fingerprint())
        _emit_json(payload)
    else:
        print("moduli", " ".join(str(m) for m in basis.moduli))
        print("capacity", basis.capacity)
        print(f"capacity_bits {basis.capacity.bit_length()}  D {basis.dim}  "
              f"reversible(l_max={codec.l_max}) {codec.reversible}")
    return EXIT_OK


COMMANDS = {"encode": cmd_encode, "decode": cmd_decode, "sim": cmd_sim, "eval": cmd_eval,
            "sweep": cmd_sweep, "basis": cmd_basis}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    cfg = None
    try:
        cfg = _run_config(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"htp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HTPError, OSError, ValueError) as exc:
        print(f"htp {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    finally:
        if cfg is not None:
            print(f"config fingerprint: {cfg.fingerprint()}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
