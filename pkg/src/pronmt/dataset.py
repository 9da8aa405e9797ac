"""Quadruple datasets: build from parallel text, persist, split, count.

Persistence is UTF-8 TSV with four columns (s, t, s_p, t_p), one entry
per line; a JSONL mirror with the same keys is available for tooling.
"""
from __future__ import annotations

import json
import multiprocessing
import os
import random
import re
import tempfile
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .convert import DEFAULT_OPTIONS, ConversionOptions, convert_sentence
from .core import DatasetEntry, Lang, PronSentence, TextSentence
from .lexicon import Lexicon
from .normalize import apply_punct_rules, is_number

COLUMNS = ("s", "t", "s_p", "t_p")
NUM_TYPE = "<num>"
_CJK_RE = re.compile(r"[㐀-䶿一-鿿豈-﫿]")


class DatasetError(ValueError):
    pass


class LineCountMismatch(DatasetError):
    def __init__(self, zh_path, zh_lines: int, en_path, en_lines: int):
        super().__init__(f"{zh_path} has {zh_lines} lines but {en_path} has {en_lines}")


class SpecTooLarge(DatasetError):
    pass


@dataclass
class Rejected:
    line_no: int
    side: str  # zh | en
    word: str
    detail: str = ""


@dataclass
class BuildReport:
    total: int = 0
    kept: int = 0
    rejected_zh: int = 0
    rejected_en: int = 0
    rejected_both: int = 0
    empty: int = 0
    rejections: list[Rejected] = field(default_factory=list)

    def counters(self) -> dict:
        d = asdict(self)
        d.pop("rejections")
        return d


def count_lines(path) -> int:
    with open(path, encoding="utf-8") as f:
        return sum(1 for _ in f)


# worker state for the process pool
_ctx: dict = {}


def _init_worker(zh_lex, en_lex, zh_g2p, en_g2p, opts):
    _ctx.update(zh_lex=zh_lex, en_lex=en_lex, zh_g2p=zh_g2p, en_g2p=en_g2p, opts=opts)


def _convert_line_pair(args):
    zh_line, en_line = args
    s = TextSentence.parse(zh_line, Lang.ZH)
    t = TextSentence.parse(en_line, Lang.EN)
    zh = convert_sentence(s, _ctx["zh_lex"], _ctx["zh_g2p"], _ctx["opts"], latin_g2p=_ctx["en_g2p"])
    en = convert_sentence(t, _ctx["en_lex"], _ctx["en_g2p"], _ctx["opts"])
    return s, t, zh, en


def iter_dataset(
    zh_path,
    en_path,
    zh_lex: Lexicon,
    en_lex: Lexicon,
    zh_g2p=None,
    en_g2p=None,
    opts: ConversionOptions = DEFAULT_OPTIONS,
    *,
    report: Optional[BuildReport] = None,
    jobs: int = 1,
) -> Iterator[DatasetEntry]:
    """Yield one entry per convertible line pair, in input order.

    Counters and rejections accumulate in `report`.  The two files are
    checked for equal length before anything is yielded.
    """
    n_zh, n_en = count_lines(zh_path), count_lines(en_path)
    if n_zh != n_en:
        raise LineCountMismatch(zh_path, n_zh, en_path, n_en)
    report = report if report is not None else BuildReport()

    with open(zh_path, encoding="utf-8") as fz, open(en_path, encoding="utf-8") as fe:
        pairs = zip(fz, fe)
        if jobs > 1:
            pool = multiprocessing.get_context("spawn").Pool(
                jobs, initializer=_init_worker, initargs=(zh_lex, en_lex, zh_g2p, en_g2p, opts)
            )
            results = pool.imap(_convert_line_pair, pairs, chunksize=256)
        else:
            pool = None
            _init_worker(zh_lex, en_lex, zh_g2p, en_g2p, opts)
            results = map(_convert_line_pair, pairs)
        try:
            for line_no, (s, t, zh, en) in enumerate(results, 1):
                report.total += 1
                if not zh.ok:
                    report.rejected_zh += 1
                    report.rejections.append(Rejected(line_no, "zh", zh.rejection.word, zh.rejection.detail))
                if not en.ok:
                    report.rejected_en += 1
                    report.rejections.append(Rejected(line_no, "en", en.rejection.word, en.rejection.detail))
                if zh.ok and en.ok:
                    if not (s.tokens and t.tokens and zh.sentence.words and en.sentence.words):
                        report.empty += 1
                        continue
                    report.kept += 1
                    yield DatasetEntry(s, t, zh.sentence, en.sentence)
                elif not zh.ok and not en.ok:
                    report.rejected_both += 1
        finally:
            if pool is not None:
                pool.terminate()


def build_dataset(zh_path, en_path, zh_lex, en_lex, zh_g2p=None, en_g2p=None, opts=DEFAULT_OPTIONS, jobs=1):
    """Eager form of iter_dataset: returns (entries, report)."""
    report = BuildReport()
    entries = list(iter_dataset(zh_path, en_path, zh_lex, en_lex, zh_g2p, en_g2p, opts, report=report, jobs=jobs))
    return entries, report


# ---------------------------------------------------------------- I/O


def entry_to_tsv(entry: DatasetEntry) -> str:
    return "\t".join(entry.fields())


def entry_from_fields(fields: Sequence[str]) -> DatasetEntry:
    if len(fields) != 4:
        raise DatasetError(f"expected 4 columns, got {len(fields)}")
    s, t, s_p, t_p = fields
    return DatasetEntry(
        TextSentence.parse(s, Lang.ZH),
        TextSentence.parse(t, Lang.EN),
        PronSentence.parse(s_p, Lang.ZH),
        PronSentence.parse(t_p, Lang.EN),
    )


def _atomic_write_lines(path, lines: Iterable[str]) -> None:
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            for line in lines:
                f.write(line + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_tsv(entries: Iterable[DatasetEntry], path) -> None:
    _atomic_write_lines(path, (entry_to_tsv(e) for e in entries))


def read_tsv(path) -> list[DatasetEntry]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                out.append(entry_from_fields(line.split("\t")))
            except ValueError as exc:
                raise DatasetError(f"{path}:{line_no}: {exc}") from exc
    return out


def write_jsonl(entries: Iterable[DatasetEntry], path) -> None:
    _atomic_write_lines(
        path, (json.dumps(dict(zip(COLUMNS, e.fields())), ensure_ascii=False) for e in entries)
    )


def read_jsonl(path) -> list[DatasetEntry]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                d = json.loads(line)
                out.append(entry_from_fields([d[k] for k in COLUMNS]))
    return out


# ---------------------------------------------------------------- split


@dataclass(frozen=True)
class SplitSpec:
    dev_size: int
    test_size: int
    seed: int = 0

    def __post_init__(self):
        if self.dev_size < 0 or self.test_size < 0:
            raise ValueError("split sizes must be >= 0")


def split_indices(n: int, spec: SplitSpec) -> dict[str, list[int]]:
    """Seeded Fisher-Yates shuffle of range(n); dev and test are drawn
    from the tail (test last).  Each index list is returned sorted so the
    splits keep input order."""
    if spec.dev_size + spec.test_size > n:
        raise SpecTooLarge(f"dev {spec.dev_size} + test {spec.test_size} > {n} entries")
    order = list(range(n))
    random.Random(spec.seed).shuffle(order)
    n_train = n - spec.dev_size - spec.test_size
    return {
        "train": sorted(order[:n_train]),
        "dev": sorted(order[n_train : n_train + spec.dev_size]),
        "test": sorted(order[n_train + spec.dev_size :]),
    }


def split_dataset(entries: Sequence, spec: SplitSpec) -> dict[str, list]:
    idx = split_indices(len(entries), spec)
    return {name: [entries[i] for i in ids] for name, ids in idx.items()}


def write_split(splits: dict[str, list[DatasetEntry]], out_dir, spec: SplitSpec, extra: Optional[dict] = None) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for name in ("train", "dev", "test"):
        write_tsv(splits[name], os.path.join(out_dir, f"{name}.tsv"))
    manifest = {
        "seed": spec.seed,
        "dev_size": spec.dev_size,
        "test_size": spec.test_size,
        "sizes": {name: len(splits[name]) for name in ("train", "dev", "test")},
        "shuffle": "fisher-yates (random.Random(seed).shuffle); dev then test from the tail",
    }
    if extra:
        manifest.update(extra)
    _atomic_write_lines(os.path.join(out_dir, "split_manifest.json"), [json.dumps(manifest, indent=2, sort_keys=True)])


# ---------------------------------------------------------------- stats


@dataclass(frozen=True)
class StatsReport:
    entries: int = 0
    zh_distinct_words: int = 0
    en_distinct_words: int = 0
    zh_tokens: int = 0
    en_tokens: int = 0
    distinct_pinyins: int = 0
    distinct_phonemes: int = 0
    distinct_chinese_chars: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


def corpus_stats(entries: Iterable[DatasetEntry], collapse_numbers: bool = True) -> StatsReport:
    """Vocabulary and token counts over a dataset.

    Text is counted after punctuation normalization.  English words are
    lowercased; with `collapse_numbers` every digit number counts as one
    word type.  Pinyins and phonemes come from the pronunciation columns.
    """
    n = 0
    words = {Lang.ZH: set(), Lang.EN: set()}
    tokens = {Lang.ZH: 0, Lang.EN: 0}
    pinyins, phonemes, chars = set(), set(), set()
    for e in entries:
        n += 1
        for sent in (e.s, e.t):
            for tok in apply_punct_rules(sent).tokens:
                tokens[sent.lang] += 1
                if collapse_numbers and is_number(tok):
                    tok = NUM_TYPE
                elif sent.lang is Lang.EN:
                    tok = tok.lower()
                words[sent.lang].add(tok)
        for tok in e.s.tokens:
            chars.update(_CJK_RE.findall(tok))
        for sent in (e.s_p, e.t_p):
            for w in sent.words:
                (pinyins if w.kind.value == "pinyin" else phonemes).update(w.values)
    return StatsReport(
        entries=n,
        zh_distinct_words=len(words[Lang.ZH]),
        en_distinct_words=len(words[Lang.EN]),
        zh_tokens=tokens[Lang.ZH],
        en_tokens=tokens[Lang.EN],
        distinct_pinyins=len(pinyins),
        distinct_phonemes=len(phonemes),
        distinct_chinese_chars=len(chars),
    )
