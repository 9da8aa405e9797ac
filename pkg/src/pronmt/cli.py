"""Command line entry point: ``pronmt <subcommand> ...``.

Exit status is 0 on success, 1 on bad input (missing flags, unreadable
files, malformed data) and 2 on internal errors.  Data goes to files or
stdout; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import multiprocessing
import os
import sys
import tempfile
import time
import traceback
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from .bleu import EvalSpace, corpus_bleu, to_eval_space
from .convert import ConversionOptions, convert_sentence, make_converter, make_g2p, rule_g2p_en
from .core import Lang, PronError, PronSentence, TextSentence
from .dataset import BuildReport, SplitSpec, corpus_stats, iter_dataset, read_tsv, split_dataset, write_jsonl, write_split, write_tsv
from .lexicon import char_table, load_lexicon, sniff_format
from .normalize import ZH_NUMERAL_TABLE, NormalizeError
from .subword import SubwordError, learn_bpe, learn_syllables, load_model, save_model

DEFAULT_MERGES = {"zh": 16000, "en": 10000}
NUMERAL_TABLE_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunManifest:
    subcommand: str
    flags: dict
    inputs: dict = field(default_factory=dict)
    counters: dict = field(default_factory=dict)
    tool_version: str = __version__
    status: str = "ok"
    error: str = ""
    timing: dict = field(default_factory=dict)

    def write(self, path) -> None:
        text = json.dumps(self.__dict__, indent=2, sort_keys=True, ensure_ascii=False, default=str) + "\n"
        d = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".manifest-")
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _open_in(path):
    if path in (None, "-"):
        return sys.stdin
    return open(path, encoding="utf-8")


@contextlib.contextmanager
def _reading(path):
    """Like ``open`` for reading, but leaves stdin open when it is used."""
    f = _open_in(path)
    try:
        yield f
    finally:
        if f is not sys.stdin:
            f.close()


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def _progress(n: int, every: int = 100000):
    if n % every == 0:
        print(f"... {n} lines", file=sys.stderr)


# ---------------------------------------------------------------- shared flags


def _add_lexicon_flags(p, prefix=""):
    dash = f"--{prefix}-" if prefix else "--"
    p.add_argument(f"{dash}lexicon", required=True, help="lexicon file")
    p.add_argument(f"{dash}lexicon-format", default="auto", choices=["auto", "tsv", "voxforge", "dacidian"])
    p.add_argument(f"{dash}pinyin-file", help="id -> pinyin file for the dacidian format")
    p.add_argument(f"{dash}char-table", help="per-character pinyin table (tsv) for the rule-based Chinese G2P")
    p.add_argument(f"{dash}g2p", default="rules", help="rules | none | external:<cmd>")
    p.add_argument(f"{dash}strict-lexicon", action="store_true", help="fail on malformed lexicon lines instead of skipping")


def _add_conversion_flags(p):
    p.add_argument("--number-mode", default="auto", choices=["auto", "magnitude", "digitwise"])
    p.add_argument("--on-missing", default="reject", choices=["reject", "skip-word"])
    p.add_argument("--pick", default="first", choices=["first", "random"], help="pronunciation choice for ambiguous words")
    p.add_argument("--seed", type=int, default=0, help="seed for --pick random")
    p.add_argument("--jobs", type=int, default=1)


def _options(args) -> ConversionOptions:
    return ConversionOptions(args.number_mode, args.on_missing, args.pick, args.seed)


def _load_side(args, lang: str, prefix: str, manifest: RunManifest):
    get = lambda name: getattr(args, f"{prefix}_{name}" if prefix else name)  # noqa: E731
    path = get("lexicon")
    fmt = get("lexicon_format")
    if fmt == "auto":
        fmt = sniff_format(path)
    strict = getattr(args, f"{prefix}_strict_lexicon" if prefix else "strict_lexicon", False)
    lex = load_lexicon(path, lang, fmt, strict=strict, pinyin_path=get("pinyin_file"))
    if lex.skipped:
        print(f"{path}: skipped {lex.skipped} malformed lines", file=sys.stderr)
    manifest.inputs[str(path)] = sha256_file(path)
    table = char_table(lex)
    if get("char_table"):
        table.update(char_table(load_lexicon(get("char_table"), Lang.ZH, "tsv")))
        manifest.inputs[get("char_table")] = sha256_file(get("char_table"))
    g2p = make_g2p(get("g2p"), lang, table)
    return lex, g2p


# ---------------------------------------------------------------- subcommands

_worker: dict = {}


def _init_convert_worker(lex, g2p, latin, opts):
    _worker.update(lex=lex, g2p=g2p, latin=latin, opts=opts)


def _convert_line(line):
    text = TextSentence.parse(line, _worker["lex"].lang)
    return convert_sentence(text, _worker["lex"], _worker["g2p"], _worker["opts"], latin_g2p=_worker["latin"])


def cmd_convert(args, manifest):
    lang = Lang(args.lang)
    lex, g2p = _load_side(args, lang, "", manifest)
    latin = rule_g2p_en if lang is Lang.ZH and args.g2p == "rules" else None
    opts = _options(args)
    kept = rejected = 0
    rejects = open(args.rejects, "w", encoding="utf-8") if args.rejects else None
    fin = _open_in(args.input)
    fout = _open_out(args.output)
    try:
        if args.jobs > 1:
            pool = multiprocessing.get_context("spawn").Pool(
                args.jobs, initializer=_init_convert_worker, initargs=(lex, g2p, latin, opts)
            )
            results = pool.imap(_convert_line, fin, chunksize=256)
        else:
            pool = None
            _init_convert_worker(lex, g2p, latin, opts)
            results = map(_convert_line, fin)
        for line_no, out in enumerate(results, 1):
            _progress(line_no)
            if out.ok:
                kept += 1
                fout.write(str(out.sentence) + "\n")
            else:
                rejected += 1
                r = out.rejection
                msg = f"{line_no}\t{r.word}\t{r.reason}" + (f"\t{r.detail}" if r.detail else "")
                if rejects:
                    rejects.write(msg + "\n")
                else:
                    print(f"line {line_no}: rejected, cannot pronounce {r.word!r}", file=sys.stderr)
        if pool is not None:
            pool.close()
    finally:
        if rejects:
            rejects.close()
        if fout is not sys.stdout:
            fout.close()
        if fin is not sys.stdin:
            fin.close()
    manifest.counters.update(kept=kept, rejected=rejected)


def cmd_build_dataset(args, manifest):
    zh_lex, zh_g2p = _load_side(args, Lang.ZH, "zh", manifest)
    en_lex, en_g2p = _load_side(args, Lang.EN, "en", manifest)
    for p in (args.zh, args.en):
        manifest.inputs[p] = sha256_file(p)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report = BuildReport()
    entries = list(
        iter_dataset(args.zh, args.en, zh_lex, en_lex, zh_g2p, en_g2p, _options(args), report=report, jobs=args.jobs)
    )
    write_tsv(entries, out / "dataset.tsv")
    if args.jsonl:
        write_jsonl(entries, out / "dataset.jsonl")
    with open(out / "rejects.tsv", "w", encoding="utf-8") as f:
        for r in report.rejections:
            f.write(f"{r.line_no}\t{r.side}\t{r.word}\t{r.detail}\n")
    manifest.counters.update(report.counters())
    print(
        f"{report.total} pairs, kept {report.kept}, rejected zh {report.rejected_zh} / en {report.rejected_en}",
        file=sys.stderr,
    )
    if args.manifest is None:
        args.manifest = str(out / "manifest.json")


def cmd_split(args, manifest):
    manifest.inputs[args.input] = sha256_file(args.input)
    entries = read_tsv(args.input)
    spec = SplitSpec(args.dev, args.test, args.seed)
    splits = split_dataset(entries, spec)
    write_split(splits, args.out, spec, extra={"input": os.path.basename(args.input)})
    manifest.counters.update({k: len(v) for k, v in splits.items()})


def cmd_stats(args, manifest):
    manifest.inputs[args.input] = sha256_file(args.input)
    report = corpus_stats(read_tsv(args.input), collapse_numbers=not args.keep_numbers)
    print(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    manifest.counters.update(report.as_dict())


def _read_pron_corpus(path, lang):
    with _reading(path) as f:
        return [PronSentence.parse(line, lang) for line in f if line.strip()]


def cmd_learn(args, manifest, syllables: bool):
    lang = Lang(args.lang)
    if args.input not in (None, "-"):
        manifest.inputs[args.input] = sha256_file(args.input)
    corpus = _read_pron_corpus(args.input, lang)
    m = args.merges if args.merges is not None else DEFAULT_MERGES[lang.value]
    model = learn_syllables(corpus, m) if syllables else learn_bpe(corpus, m)
    save_model(model, args.model)
    manifest.counters.update(merges=len(model.merges), alphabet=len(model.alphabet), stopped_early=model.stopped_early)
    if model.stopped_early:
        print(f"stopped after {len(model.merges)} of {m} merges: no eligible pair left", file=sys.stderr)


def cmd_apply(args, manifest):
    model = load_model(args.model)
    manifest.inputs[args.model] = sha256_file(args.model)
    lang = Lang(args.lang) if args.lang else None
    lang = lang or (Lang.EN if model.unit_kind.value == "phoneme" else Lang.ZH)
    n = 0
    with _reading(args.input) as fin:
        fout = _open_out(args.output)
        for n, line in enumerate(fin, 1):
            sent = PronSentence.parse(line, lang)
            fout.write(" ".join(model.encode(sent, strict=args.strict)) + "\n")
        if fout is not sys.stdout:
            fout.close()
    manifest.counters.update(lines=n)


def cmd_decode(args, manifest):
    model = load_model(args.model)
    manifest.inputs[args.model] = sha256_file(args.model)
    n = 0
    with _reading(args.input) as fin:
        fout = _open_out(args.output)
        for n, line in enumerate(fin, 1):
            try:
                fout.write(str(model.decode(line.split(), args.lang, strict=args.strict)) + "\n")
            except SubwordError as exc:
                raise SubwordError(f"line {n}: {exc}") from exc
        if fout is not sys.stdout:
            fout.close()
    manifest.counters.update(lines=n)


def cmd_bleu(args, manifest):
    lang = Lang(args.lang)
    space = EvalSpace(args.space)
    converter = None
    if space is EvalSpace.PRON and args.lexicon:
        lex, g2p = _load_side(args, lang, "", manifest)
        latin = rule_g2p_en if lang is Lang.ZH and args.g2p == "rules" else None
        converter = make_converter(lex, g2p, latin_g2p=latin)

    def tokens(path):
        manifest.inputs[path] = sha256_file(path)
        out = []
        with open(path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, 1):
                try:
                    if space is EvalSpace.TEXT or converter is not None:
                        sent = TextSentence.parse(line, lang)
                    else:
                        sent = PronSentence.parse(line, lang)
                    out.append(
                        to_eval_space(sent, space, converter, pron_token=args.pron_token, lowercase=not args.no_lowercase)
                    )
                except ValueError as exc:
                    raise UsageError(f"{path}:{line_no}: {exc}") from exc
        return out

    report = corpus_bleu(tokens(args.hyp), tokens(args.ref), smooth=None if args.smooth == "none" else args.smooth)
    print(str(report))
    print(report.to_json())
    manifest.counters.update(bleu=report.bleu)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pronmt", description=__doc__.splitlines()[0])
    ap.add_argument(
        "--version",
        action="version",
        version=f"pronmt {__version__} (numeral table v{NUMERAL_TABLE_VERSION}, {len(ZH_NUMERAL_TABLE)} rows)",
    )
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--manifest", help="write a JSON run manifest here")
        return p

    p = common(sub.add_parser("convert", help="text sentences -> pronunciation sentences"))
    p.add_argument("--lang", required=True, choices=["zh", "en"])
    _add_lexicon_flags(p)
    _add_conversion_flags(p)
    p.add_argument("--input", "-i", help="input text (default stdin)")
    p.add_argument("--output", "-o", help="output (default stdout)")
    p.add_argument("--rejects", help="write rejected lines (line, word, reason) here")

    p = common(sub.add_parser("build-dataset", help="parallel text -> quadruple dataset"))
    p.add_argument("--zh", required=True)
    p.add_argument("--en", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--jsonl", action="store_true", help="also write dataset.jsonl")
    _add_lexicon_flags(p, "zh")
    _add_lexicon_flags(p, "en")
    _add_conversion_flags(p)

    p = common(sub.add_parser("split", help="seeded train/dev/test split of a dataset tsv"))
    p.add_argument("input")
    p.add_argument("--dev", type=int, default=4096)
    p.add_argument("--test", type=int, default=4096)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = common(sub.add_parser("stats", help="vocabulary and token counts of a dataset tsv"))
    p.add_argument("input")
    p.add_argument("--keep-numbers", action="store_true", help="count each digit number as its own word type")

    for name, helptext in (("learn-bpe", "learn BPE merges"), ("learn-syllables", "learn vowel-constrained merges")):
        p = common(sub.add_parser(name, help=helptext + " over pronunciation sentences"))
        p.add_argument("--lang", required=True, choices=["zh", "en"])
        p.add_argument("--merges", "-m", type=int, help="merge budget (default 16000 zh / 10000 en)")
        p.add_argument("--input", "-i")
        p.add_argument("--model", required=True, help="output model file")

    for name in ("apply-bpe", "decode-bpe"):
        p = common(sub.add_parser(name))
        p.add_argument("--model", required=True)
        p.add_argument("--lang", choices=["zh", "en"])
        p.add_argument("--strict", action="store_true")
        p.add_argument("--input", "-i")
        p.add_argument("--output", "-o")

    p = common(sub.add_parser("bleu", help="single-reference 4-gram corpus BLEU"))
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--space", default="text", choices=["text", "pron"])
    p.add_argument("--lang", default="en", choices=["zh", "en"])
    p.add_argument("--pron-token", default="unit", choices=["unit", "word"])
    p.add_argument("--smooth", default="none", choices=["none", "add1"])
    p.add_argument("--no-lowercase", action="store_true")
    p.add_argument("--lexicon", help="convert text files into pronunciations first")
    p.add_argument("--lexicon-format", default="auto", choices=["auto", "tsv", "voxforge", "dacidian"])
    p.add_argument("--pinyin-file")
    p.add_argument("--char-table")
    p.add_argument("--g2p", default="rules")
    return ap


COMMANDS = {
    "convert": cmd_convert,
    "build-dataset": cmd_build_dataset,
    "split": cmd_split,
    "stats": cmd_stats,
    "learn-bpe": lambda a, m: cmd_learn(a, m, syllables=False),
    "learn-syllables": lambda a, m: cmd_learn(a, m, syllables=True),
    "apply-bpe": cmd_apply,
    "decode-bpe": cmd_decode,
    "bleu": cmd_bleu,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "manifest")}
    manifest = RunManifest(args.command, flags)
    start = time.monotonic()
    code = 0
    try:
        COMMANDS[args.command](args, manifest)
    except (OSError, ValueError, UsageError, PronError, NormalizeError) as exc:
        if isinstance(exc, OSError) and exc.filename:
            msg = f"{exc.filename}: {exc.strerror}"
        else:
            msg = str(exc)
        print(f"pronmt {args.command}: error: {msg}", file=sys.stderr)
        manifest.status, manifest.error, code = "error", msg, 1
    except Exception as exc:  # internal failure
        traceback.print_exc()
        manifest.status, manifest.error, code = "internal-error", repr(exc), 2
    manifest.timing = {"wall_seconds": round(time.monotonic() - start, 3)}
    if args.manifest:
        manifest.write(args.manifest)
    return code


if __name__ == "__main__":
    sys.exit(main())
