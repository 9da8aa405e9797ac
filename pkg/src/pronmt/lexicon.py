"""Pronunciation lexicons.

Three on-disk layouts are understood:

* ``tsv``: ``word<TAB>pron<TAB>pron...`` with units joined by ``-``.
* ``voxforge``: ``WORD [WORD] ph ph ph`` (CMU style, the bracketed
  column optional).  ``WORD(2)`` alternates fold into ``word``, phonemes
  are lowercased and stress digits dropped.
* ``dacidian``: a word file ``word id id ...`` plus a pinyin file
  ``id pinyin``, merged at load.  Pinyins may be written ``ZHONG4`` or
  ``zhong_4``.

Blank lines and ``#`` comments are skipped everywhere.
"""
from __future__ import annotations

import hashlib
import random
import re
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterator, Mapping, Optional

from .core import (
    DEFAULT_INVENTORY,
    InvalidUnit,
    Lang,
    PhonemeInventory,
    PronError,
    PronWord,
    UnitKind,
    parse_pron_word,
    parse_unit,
    unit_kind_of,
)

FORMATS = ("tsv", "voxforge", "dacidian")

_ALT_SUFFIX_RE = re.compile(r"\(\d+\)$")
_STRESS_RE = re.compile(r"[0-9]$")
_CAPS_PINYIN_RE = re.compile(r"^([A-Za-z]+)([1-5])$")


class LexiconParseError(PronError):
    def __init__(self, path, line_no: int, line: str, why: str = ""):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: malformed lexicon line {line!r}" + (f" ({why})" if why else ""))


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    pronunciations: tuple[PronWord, ...]


class Lexicon:
    """Immutable word -> pronunciations table."""

    def __init__(self, lang: Lang | str, entries: Mapping[str, tuple[PronWord, ...]], skipped: int = 0):
        self.lang = Lang(lang)
        self.unit_kind = unit_kind_of(self.lang)
        self._entries = MappingProxyType(dict(entries))
        self.skipped = skipped

    def __reduce__(self):
        return (Lexicon, (self.lang, dict(self._entries), self.skipped))

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, word: str) -> bool:
        return self._key(word) in self._entries

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def _key(self, word: str) -> str:
        return word.lower() if self.lang is Lang.EN else word

    def entry(self, word: str) -> Optional[LexiconEntry]:
        prons = self._entries.get(self._key(word))
        if prons is None:
            return None
        return LexiconEntry(self._key(word), prons)

    def pronunciations(self, word: str) -> tuple[PronWord, ...]:
        return self._entries.get(self._key(word), ())

    def lookup_first(self, word: str) -> Optional[PronWord]:
        prons = self._entries.get(self._key(word))
        return prons[0] if prons else None

    def lookup_random(self, word: str, rng: random.Random) -> Optional[PronWord]:
        prons = self._entries.get(self._key(word))
        return rng.choice(prons) if prons else None

    def dump(self) -> str:
        """Canonical text form (sorted TSV), used for checksums."""
        lines = []
        for word in sorted(self._entries):
            lines.append("\t".join([word, *(str(p) for p in self._entries[word])]))
        return "\n".join(lines)

    def checksum(self) -> str:
        return hashlib.sha256(self.dump().encode("utf-8")).hexdigest()

    def __repr__(self) -> str:
        return f"Lexicon(lang={self.lang.value}, entries={len(self)})"


def lookup_first(lex: Lexicon, word: str) -> Optional[PronWord]:
    return lex.lookup_first(word)


def _data_lines(path):
    with open(path, encoding="utf-8") as f:
        for line_no, raw in enumerate(f, 1):
            line = raw.rstrip("\n").rstrip("\r")
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            yield line_no, line


def _parse_tsv_line(line: str, kind: UnitKind, inventory: PhonemeInventory):
    fields = line.split("\t")
    word = fields[0].strip()
    prons = [f.strip() for f in fields[1:] if f.strip()]
    if not word or not prons:
        raise ValueError("need a word and at least one pronunciation")
    return word, [parse_pron_word(p, kind, inventory) for p in prons]


def _parse_voxforge_line(line: str, inventory: PhonemeInventory):
    fields = line.split()
    if len(fields) < 2:
        raise ValueError("need a word and phonemes")
    word = _ALT_SUFFIX_RE.sub("", fields[0]).lower()
    phones = fields[1:]
    if phones[0].startswith("["):
        phones = phones[1:]
    if not word or not phones:
        raise ValueError("need a word and phonemes")
    units = tuple(parse_unit(_STRESS_RE.sub("", p.lower()), UnitKind.PHONEME, inventory) for p in phones)
    return word, [PronWord(units)]


def normalize_pinyin(token: str) -> str:
    """``ZHONG4`` -> ``zhong_4``; already-normalized tokens pass through."""
    m = _CAPS_PINYIN_RE.match(token)
    if m:
        return f"{m.group(1).lower()}_{m.group(2)}"
    return token.lower()


def load_lexicon(
    path,
    lang: Lang | str,
    fmt: str = "tsv",
    *,
    strict: bool = False,
    pinyin_path=None,
    inventory: PhonemeInventory = DEFAULT_INVENTORY,
) -> Lexicon:
    """Load a lexicon file.

    Duplicate headwords append pronunciations in file order, so the first
    pronunciation of a word is always the first one in the file.  In the
    default lenient mode malformed lines are skipped and counted in
    ``Lexicon.skipped``; with ``strict=True`` they raise LexiconParseError.
    """
    lang = Lang(lang)
    kind = unit_kind_of(lang)
    if fmt not in FORMATS:
        raise ValueError(f"unknown lexicon format {fmt!r}; expected one of {FORMATS}")

    entries: dict[str, list[PronWord]] = {}
    skipped = 0

    def add(word, prons):
        entries.setdefault(word, []).extend(prons)

    if fmt == "dacidian":
        if pinyin_path is None:
            raise ValueError("dacidian format needs pinyin_path")
        id_to_pinyin = {}
        for line_no, line in _data_lines(pinyin_path):
            fields = line.split()
            if len(fields) != 2:
                if strict:
                    raise LexiconParseError(pinyin_path, line_no, line)
                skipped += 1
                continue
            id_to_pinyin[fields[0]] = normalize_pinyin(fields[1])

    for line_no, line in _data_lines(path):
        try:
            if fmt == "tsv":
                word, prons = _parse_tsv_line(line, kind, inventory)
            elif fmt == "voxforge":
                word, prons = _parse_voxforge_line(line, inventory)
            else:
                fields = line.split()
                if len(fields) < 2:
                    raise ValueError("need a word and pinyin ids")
                word = fields[0]
                prons = [parse_pron_word("-".join(id_to_pinyin[i] for i in fields[1:]), kind)]
        except (ValueError, KeyError, InvalidUnit) as exc:
            if strict:
                raise LexiconParseError(path, line_no, line, str(exc)) from exc
            skipped += 1
            continue
        if lang is Lang.EN:
            word = word.lower()
        add(word, prons)

    return Lexicon(lang, {w: tuple(p) for w, p in entries.items()}, skipped=skipped)


def sniff_format(path) -> str:
    """Guess ``tsv`` vs ``voxforge`` from the first data line."""
    path = Path(path)
    if path.suffix == ".tsv":
        return "tsv"
    for _, line in _data_lines(path):
        return "tsv" if "\t" in line.strip() else "voxforge"
    return "tsv"


def char_table(lex: Lexicon) -> dict[str, PronWord]:
    """Per-character table from a lexicon's single-character entries."""
    return {w: prons[0] for w in lex for prons in [lex.pronunciations(w)] if len(w) == 1 and len(prons[0]) == 1}
