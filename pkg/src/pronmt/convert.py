"""Text sentence -> pronunciation sentence.

Each token is resolved in order: lexicon (first pronunciation), number
reading, G2P fallback.  A token nothing can pronounce rejects the whole
sentence, and a rejected side drops the sentence pair.
"""
from __future__ import annotations

import random
import re
import shlex
import subprocess
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Protocol

from .core import (
    DatasetEntry,
    InvalidUnit,
    Lang,
    PronError,
    PronSentence,
    PronUnit,
    PronWord,
    TextSentence,
    UnitKind,
    parse_pron_word,
)
from .lexicon import Lexicon
from .normalize import (
    EN_LIMIT,
    ZH_LIMIT,
    ZH_NEGATIVE,
    ZH_NUMERAL_TABLE,
    NumberMode,
    apply_punct_rules,
    chinese_numeral_to_pinyin,
    en_decimal_to_words,
    is_number,
    zh_decimal_to_chinese,
)

NO_PRONUNCIATION = "no-pronunciation"
_LATIN_RE = re.compile(r"^[A-Za-z]+$")
_YEAR_MARK = "年"


class G2PProvider(Protocol):
    def __call__(self, word: str) -> Optional[PronWord]: ...


@dataclass(frozen=True)
class ConversionOptions:
    number_mode: str = "auto"  # auto | magnitude | digitwise
    on_missing: str = "reject"  # reject | skip-word
    pick: str = "first"  # first | random
    seed: int = 0

    def __post_init__(self):
        if self.number_mode not in ("auto", "magnitude", "digitwise"):
            raise ValueError(f"bad number_mode {self.number_mode!r}")
        if self.on_missing not in ("reject", "skip-word"):
            raise ValueError(f"bad on_missing {self.on_missing!r}")
        if self.pick not in ("first", "random"):
            raise ValueError(f"bad pick {self.pick!r}")


DEFAULT_OPTIONS = ConversionOptions()


@dataclass(frozen=True)
class Rejection:
    word: str
    reason: str = NO_PRONUNCIATION
    detail: str = ""


@dataclass(frozen=True)
class ConversionOutcome:
    sentence: Optional[PronSentence] = None
    rejection: Optional[Rejection] = None

    def __post_init__(self):
        if (self.sentence is None) == (self.rejection is None):
            raise ValueError("exactly one of sentence / rejection must be set")

    @property
    def ok(self) -> bool:
        return self.sentence is not None


# ---------------------------------------------------------------- G2P

# longest match first; values are phoneme lists
_EN_RULES: dict[str, tuple[str, ...]] = {
    "tion": ("sh", "ah", "n"),
    "sion": ("zh", "ah", "n"),
    "ough": ("ao",),
    "augh": ("ao",),
    "eigh": ("ey",),
    "igh": ("ay",),
    "tch": ("ch",),
    "dge": ("jh",),
    "sch": ("s", "k"),
    "ch": ("ch",),
    "sh": ("sh",),
    "th": ("th",),
    "ph": ("f",),
    "wh": ("w",),
    "ck": ("k",),
    "ng": ("ng",),
    "qu": ("k", "w"),
    "kn": ("n",),
    "wr": ("r",),
    "gh": ("g",),
    "ee": ("iy",),
    "ea": ("iy",),
    "ie": ("iy",),
    "oo": ("uw",),
    "ou": ("aw",),
    "ow": ("ow",),
    "oa": ("ow",),
    "oi": ("oy",),
    "oy": ("oy",),
    "ai": ("ey",),
    "ay": ("ey",),
    "au": ("ao",),
    "aw": ("ao",),
    "ew": ("uw",),
    "er": ("er",),
    "ir": ("er",),
    "ur": ("er",),
    "ar": ("aa", "r"),
    "or": ("ao", "r"),
    "bb": ("b",),
    "cc": ("k",),
    "dd": ("d",),
    "ff": ("f",),
    "gg": ("g",),
    "ll": ("l",),
    "mm": ("m",),
    "nn": ("n",),
    "pp": ("p",),
    "rr": ("r",),
    "ss": ("s",),
    "tt": ("t",),
    "zz": ("z",),
    "a": ("ae",),
    "b": ("b",),
    "c": ("k",),
    "d": ("d",),
    "e": ("eh",),
    "f": ("f",),
    "g": ("g",),
    "h": ("hh",),
    "i": ("ih",),
    "j": ("jh",),
    "k": ("k",),
    "l": ("l",),
    "m": ("m",),
    "n": ("n",),
    "o": ("aa",),
    "p": ("p",),
    "q": ("k",),
    "r": ("r",),
    "s": ("s",),
    "t": ("t",),
    "u": ("ah",),
    "v": ("v",),
    "w": ("w",),
    "x": ("k", "s"),
    "y": ("y",),
    "z": ("z",),
}
_EN_MAX_CLUSTER = max(len(k) for k in _EN_RULES)
EN_G2P_RULES: Mapping[str, tuple[str, ...]] = _EN_RULES


def rule_g2p_en(word: str) -> Optional[PronWord]:
    """Letter-cluster G2P: greedy longest match against a fixed table.

    Crude by design; it stands in for a trained G2P model.  Only
    ``y`` is context dependent (``y`` word-initially, ``iy`` elsewhere).
    """
    if not word or not _LATIN_RE.match(word):
        return None
    w = word.lower()
    phones: list[str] = []
    i = 0
    while i < len(w):
        for size in range(min(_EN_MAX_CLUSTER, len(w) - i), 0, -1):
            chunk = w[i : i + size]
            if chunk in _EN_RULES:
                if chunk == "y" and i > 0:
                    phones.append("iy")
                else:
                    phones.extend(_EN_RULES[chunk])
                i += size
                break
    return PronWord.of(phones, UnitKind.PHONEME)


def rule_g2p_zh(word: str, char_table: Mapping[str, PronWord | str]) -> Optional[PronWord]:
    """Per-character Pinyin lookup; absent if any character is unmapped."""
    if not word:
        return None
    units: list[PronUnit] = []
    for c in word:
        p = char_table.get(c)
        if p is None:
            return None
        if isinstance(p, str):
            p = parse_pron_word(p, UnitKind.PINYIN)
        units.extend(p.units)
    return PronWord(tuple(units))


class PinyinTableG2P:
    def __init__(self, char_table: Mapping[str, PronWord | str]):
        self.char_table = dict(char_table)

    def __call__(self, word: str) -> Optional[PronWord]:
        return rule_g2p_zh(word, self.char_table)


def no_g2p(word: str) -> Optional[PronWord]:
    return None


class G2PFailed(PronError):
    pass


class ExternalG2P:
    """Runs a command that reads words (one per line) on stdin and writes
    one ``-``-joined pronunciation per line; empty output line = absent."""

    def __init__(self, command: str, kind: UnitKind = UnitKind.PHONEME, timeout: float = 60.0):
        self.command = command
        self.kind = kind
        self.timeout = timeout
        self._cache: dict[str, Optional[PronWord]] = {}

    def batch(self, words: list[str]) -> list[Optional[PronWord]]:
        todo = [w for w in dict.fromkeys(words) if w not in self._cache]
        if todo:
            try:
                proc = subprocess.run(
                    shlex.split(self.command),
                    input="".join(w + "\n" for w in todo),
                    capture_output=True,
                    text=True,
                    encoding="utf-8",
                    timeout=self.timeout,
                    check=True,
                )
            except (OSError, subprocess.SubprocessError) as exc:
                raise G2PFailed(f"external G2P {self.command!r} failed: {exc}") from exc
            lines = proc.stdout.splitlines()
            if len(lines) != len(todo):
                raise G2PFailed(f"external G2P returned {len(lines)} lines for {len(todo)} words")
            for w, line in zip(todo, lines):
                line = line.strip()
                try:
                    self._cache[w] = parse_pron_word(line, self.kind) if line else None
                except InvalidUnit:
                    self._cache[w] = None
        return [self._cache[w] for w in words]

    def __call__(self, word: str) -> Optional[PronWord]:
        return self.batch([word])[0]


def make_g2p(spec: str, lang: Lang | str, char_table: Optional[Mapping[str, PronWord]] = None) -> Callable:
    """Build a provider from ``rules``, ``none`` or ``external:<cmd>``."""
    lang = Lang(lang)
    if spec == "none":
        return no_g2p
    if spec == "rules":
        if lang is Lang.EN:
            return rule_g2p_en
        return PinyinTableG2P(char_table or {})
    if spec.startswith("external:"):
        kind = UnitKind.PHONEME if lang is Lang.EN else UnitKind.PINYIN
        return ExternalG2P(spec[len("external:") :], kind)
    raise ValueError(f"unknown G2P spec {spec!r}")


# ---------------------------------------------------------------- pipeline


class _Resolver:
    def __init__(self, lex: Lexicon, g2p, latin_g2p, rng):
        self.lex = lex
        self.g2p = g2p
        self.latin_g2p = latin_g2p
        self.rng = rng

    def word(self, token: str) -> Optional[PronWord]:
        # lexicon, then G2P; numbers are handled by the caller
        if self.rng is not None:
            pron = self.lex.lookup_random(token, self.rng)
        else:
            pron = self.lex.lookup_first(token)
        if pron is not None:
            return pron
        if self.g2p is not None:
            pron = self.g2p(token)
            if pron is not None:
                return pron
        if self.latin_g2p is not None and _LATIN_RE.match(token):
            return self.latin_g2p(token)
        return None


def _number_mode(opts: ConversionOptions, tokens, i: int) -> NumberMode:
    if opts.number_mode != "auto":
        return NumberMode(opts.number_mode)
    nxt = tokens[i + 1] if i + 1 < len(tokens) else None
    if nxt == _YEAR_MARK and "." not in tokens[i] and not tokens[i].startswith("-"):
        return NumberMode.DIGITWISE
    return NumberMode.MAGNITUDE


def _zh_number(token: str, mode: NumberMode, res: _Resolver) -> tuple[Optional[PronWord], str]:
    int_part = token.lstrip("-").partition(".")[0]
    if int(int_part) >= ZH_LIMIT:
        return None, token
    chars = zh_decimal_to_chinese(token, mode)
    prefix = None
    if chars.startswith(ZH_NEGATIVE):
        prefix = res.word(ZH_NEGATIVE)
        if prefix is None:
            return None, ZH_NEGATIVE
        chars = chars[len(ZH_NEGATIVE) :]
    pron = chinese_numeral_to_pinyin(chars, ZH_NUMERAL_TABLE)
    return (prefix + pron if prefix else pron), ""


def _en_number(token: str, res: _Resolver) -> tuple[Optional[PronWord], str]:
    int_part = token.lstrip("-").partition(".")[0]
    if int(int_part) >= EN_LIMIT:
        return None, token
    units: list[PronUnit] = []
    for w in en_decimal_to_words(token).split():
        pron = res.word(w)
        if pron is None:
            return None, w
        units.extend(pron.units)
    return PronWord(tuple(units)), ""


def convert_sentence(
    text: TextSentence,
    lex: Lexicon,
    g2p: Optional[G2PProvider] = None,
    opts: ConversionOptions = DEFAULT_OPTIONS,
    *,
    latin_g2p: Optional[G2PProvider] = None,
) -> ConversionOutcome:
    """Convert one pre-tokenized sentence.

    `latin_g2p` is consulted for all-Latin tokens the main lexicon and
    G2P cannot handle (English words embedded in Chinese text).
    """
    if text.lang is not lex.lang:
        raise ValueError(f"sentence is {text.lang.value} but lexicon is {lex.lang.value}")
    rng = random.Random(f"{opts.seed}\x00{text}") if opts.pick == "random" else None
    res = _Resolver(lex, g2p, latin_g2p, rng)
    tokens = apply_punct_rules(text).tokens

    words: list[PronWord] = []
    for i, tok in enumerate(tokens):
        pron = res.lex.lookup_first(tok) if rng is None else res.lex.lookup_random(tok, rng)
        culprit = tok
        if pron is None and is_number(tok):
            if text.lang is Lang.ZH:
                pron, missing = _zh_number(tok, _number_mode(opts, tokens, i), res)
            else:
                pron, missing = _en_number(tok, res)
            culprit = missing or tok
        if pron is None:
            pron = res.word(tok)
        if pron is None:
            if opts.on_missing == "skip-word":
                continue
            detail = "" if culprit == tok else f"cannot pronounce {culprit!r}"
            return ConversionOutcome(rejection=Rejection(tok, NO_PRONUNCIATION, detail))
        words.append(pron)
    return ConversionOutcome(sentence=PronSentence(tuple(words), text.lang))


def convert_pair(
    s: TextSentence,
    t: TextSentence,
    zh_lex: Lexicon,
    en_lex: Lexicon,
    zh_g2p: Optional[G2PProvider] = None,
    en_g2p: Optional[G2PProvider] = None,
    opts: ConversionOptions = DEFAULT_OPTIONS,
) -> Optional[DatasetEntry]:
    """Both sides converted -> a quadruple; either side rejected -> None."""
    zh = convert_sentence(s, zh_lex, zh_g2p, opts, latin_g2p=en_g2p)
    if not zh.ok:
        return None
    en = convert_sentence(t, en_lex, en_g2p, opts)
    if not en.ok:
        return None
    return DatasetEntry(s, t, zh.sentence, en.sentence)


class ConversionRejected(ValueError):
    def __init__(self, rejection: Rejection):
        self.rejection = rejection
        msg = f"cannot pronounce {rejection.word!r}"
        if rejection.detail:
            msg += f" ({rejection.detail})"
        super().__init__(msg)


def make_converter(
    lex: Lexicon,
    g2p: Optional[G2PProvider] = None,
    opts: ConversionOptions = DEFAULT_OPTIONS,
    latin_g2p: Optional[G2PProvider] = None,
) -> Callable[[TextSentence], PronSentence]:
    """A text -> pronunciation callable that raises ConversionRejected."""

    def convert(text: TextSentence) -> PronSentence:
        out = convert_sentence(text, lex, g2p, opts, latin_g2p=latin_g2p)
        if out.rejection is not None:
            raise ConversionRejected(out.rejection)
        return out.sentence

    return convert
