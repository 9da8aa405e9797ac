"""Subword and syllable units over pronunciation sentences.

Pronunciation units are mapped one-to-one onto private-use code points so
that a multi-unit symbol is simply a string and merging two symbols is
string concatenation.  Two learners share one merge loop:

* plain BPE: merge the most frequent adjacent pair;
* syllable BPE: merge the most frequent pair in which one symbol holds
  exactly one vowel and the other holds none, so every learned symbol
  holds exactly one vowel.

Ties go to the lexicographically smallest (left, right) rendering.  Pairs
never cross word boundaries and word types are weighted by their corpus
frequency.

Encoded sentences are lists of symbol tokens rendered with ``-`` between
units; the first symbol of every word carries a ``▁`` prefix, e.g.
``▁w-uh-d ▁y-uw`` or ``▁ch-ih k-ah-n``.
"""
from __future__ import annotations

import heapq
import os
import tempfile
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    ARPABET_VOWELS,
    PINYIN_RE,
    UNIT_SEP,
    Lang,
    PronSentence,
    PronWord,
    UnitKind,
    PhonemeInventory,
    DEFAULT_INVENTORY,
    WrongKind,
)

PLAIN = "plain"
SYLLABLE = "syllable"
KINDS = (PLAIN, SYLLABLE)

WORD_MARK = "▁"  # ▁
BLOCK_START = 0xE000
BLOCK_SIZE = 0xF900 - 0xE000  # BMP private use area, 6400 code points
FORMAT_NAME = "pronmt-subword"
FORMAT_VERSION = 1

_UNKNOWN = "\x00"  # prefix for pass-through symbols of units outside the alphabet


class SubwordError(ValueError):
    pass


class AlphabetOverflow(SubwordError):
    pass


class UnknownUnit(SubwordError):
    pass


class MalformedToken(SubwordError):
    pass


class CorruptModel(SubwordError):
    pass


class VersionMismatch(SubwordError):
    pass


class PseudoCharMap:
    """Bijection between pronunciation units and single code points.

    Units are sorted and assigned consecutive code points from U+E000, so
    the mapping is a pure function of the unit set.
    """

    def __init__(self, units: Iterable[str] = ()):
        units = sorted(set(units))
        if len(units) > BLOCK_SIZE:
            raise AlphabetOverflow(f"{len(units)} units do not fit in {BLOCK_SIZE} code points")
        self.unit_to_char = {u: chr(BLOCK_START + i) for i, u in enumerate(units)}
        self.char_to_unit = {c: u for u, c in self.unit_to_char.items()}

    def __len__(self) -> int:
        return len(self.unit_to_char)

    def __contains__(self, unit: str) -> bool:
        return unit in self.unit_to_char

    def __eq__(self, other) -> bool:
        return isinstance(other, PseudoCharMap) and self.unit_to_char == other.unit_to_char

    @property
    def units(self) -> list[str]:
        return list(self.unit_to_char)

    def to_pseudo(self, sentence: PronSentence) -> str:
        """Pseudo text: one character per unit, words separated by spaces."""
        try:
            return " ".join("".join(self.unit_to_char[u.value] for u in w.units) for w in sentence.words)
        except KeyError as exc:
            raise UnknownUnit(exc.args[0]) from None

    def from_pseudo(self, text: str, lang: Lang | str) -> PronSentence:
        words = []
        for chunk in text.split():
            try:
                words.append(_word_from_values([self.char_to_unit[c] for c in chunk]))
            except KeyError as exc:
                raise MalformedToken(f"unmapped pseudo character {exc.args[0]!r}") from None
        return PronSentence(tuple(words), Lang(lang))


def _kind_of_unit(value: str) -> UnitKind:
    return UnitKind.PINYIN if PINYIN_RE.match(value) else UnitKind.PHONEME


def _word_from_values(values: Sequence[str]) -> PronWord:
    return PronWord.of(values, _kind_of_unit(values[0]))


def build_pseudo_map(corpus: Iterable[PronSentence]) -> PseudoCharMap:
    units = set()
    kinds = set()
    for sent in corpus:
        for w in sent.words:
            kinds.add(w.kind)
            units.update(w.values)
    if len(kinds) > 1:
        raise WrongKind("corpus mixes Pinyins and phonemes")
    return PseudoCharMap(units)


@dataclass(frozen=True)
class MergeRule:
    left: str
    right: str
    result: str
    rank: int


@dataclass
class SubwordModel:
    kind: str
    m: int
    unit_kind: UnitKind
    alphabet: PseudoCharMap
    merges: list[MergeRule] = field(default_factory=list)
    stopped_early: bool = False
    vowels: frozenset[str] = ARPABET_VOWELS

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CorruptModel(f"unknown model kind {self.kind!r}")
        if len(self.merges) > self.m:
            raise CorruptModel(f"{len(self.merges)} merges exceed the budget m={self.m}")
        self._index()
        self._cache: dict[str, list[str]] = {}

    def _index(self):
        # pseudo-string symbol <-> rendering, and rank per pseudo pair
        known = {c: u for c, u in self.alphabet.char_to_unit.items()}
        by_render = {u: c for c, u in known.items()}
        ranks = {}
        for i, rule in enumerate(self.merges):
            if rule.rank != i:
                raise CorruptModel(f"merge ranks not dense at {i}")
            if rule.result != rule.left + UNIT_SEP + rule.right:
                raise CorruptModel(f"merge {i}: result {rule.result!r} is not left-right")
            if rule.left not in by_render or rule.right not in by_render:
                raise CorruptModel(f"merge {i} uses a symbol that does not exist yet")
            left, right = by_render[rule.left], by_render[rule.right]
            if self.kind == SYLLABLE and self._vowels_in(left + right) != 1:
                raise CorruptModel(f"syllable merge {i} ({rule.result}) does not hold exactly one vowel")
            ranks.setdefault((left, right), i)
            known[left + right] = rule.result
            by_render[rule.result] = left + right
        self._ranks = ranks
        self._render = known
        self._by_render = by_render

    def _vowels_in(self, pseudo: str) -> int:
        cu = self.alphabet.char_to_unit
        return sum(1 for c in pseudo if cu[c] in self.vowels)

    @property
    def vocab(self) -> list[str]:
        """Alphabet units followed by merge results in rank order."""
        return list(self.alphabet.units) + [r.result for r in self.merges]

    def render(self, symbol: str) -> str:
        if symbol.startswith(_UNKNOWN):
            return symbol[1:]
        return self._render.get(symbol) or UNIT_SEP.join(self.alphabet.char_to_unit[c] for c in symbol)

    def segment(self, pseudo_word: Sequence[str]) -> list[str]:
        """Apply merges in rank order to one word given as pseudo symbols."""
        syms = list(pseudo_word)
        ranks = self._ranks
        while len(syms) > 1:
            best = None
            for pair in zip(syms, syms[1:]):
                r = ranks.get(pair)
                if r is not None and (best is None or r < best):
                    best = r
            if best is None:
                break
            left, right = self.merges[best].left, self.merges[best].right
            left, right = self._by_render[left], self._by_render[right]
            syms = _merge_pair(syms, left, right)
        return syms

    def encode_word(self, word: PronWord, strict: bool = False) -> list[str]:
        """Rendered symbols for one word, no boundary mark."""
        if strict:
            for v in word.values:
                if v not in self.alphabet.unit_to_char:
                    raise UnknownUnit(v)
        key = "\x01".join(word.values)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        syms = []
        for v in word.values:
            c = self.alphabet.unit_to_char.get(v)
            if c is None:
                syms.append(_UNKNOWN + v)
            else:
                syms.append(c)
        out = [self.render(s) for s in self.segment(syms)]
        if len(self._cache) < 1_000_000:
            self._cache[key] = out
        return out

    def encode(self, sentence: PronSentence, strict: bool = False) -> list[str]:
        tokens = []
        for w in sentence.words:
            syms = self.encode_word(w, strict)
            tokens.append(WORD_MARK + syms[0])
            tokens.extend(syms[1:])
        return tokens

    def decode(self, tokens: Sequence[str], lang: Lang | str | None = None, strict: bool = False) -> PronSentence:
        if lang is None:
            lang = Lang.ZH if self.unit_kind is UnitKind.PINYIN else Lang.EN
        words: list[list[str]] = []
        for tok in tokens:
            starts = tok.startswith(WORD_MARK)
            sym = tok[len(WORD_MARK) :] if starts else tok
            if not sym or (not starts and not words):
                raise MalformedToken(f"token {tok!r} outside a word")
            if strict and sym not in self._by_render:
                raise MalformedToken(f"symbol {sym!r} not in the model vocabulary")
            units = sym.split(UNIT_SEP)
            if any(not u for u in units):
                raise MalformedToken(f"empty unit in {tok!r}")
            if starts:
                words.append(units)
            else:
                words[-1].extend(units)
        try:
            return PronSentence(tuple(_word_from_values(w) for w in words), Lang(lang))
        except ValueError as exc:
            raise MalformedToken(str(exc)) from None


def encode(model: SubwordModel, sentence: PronSentence, strict: bool = False) -> list[str]:
    return model.encode(sentence, strict)


def decode(model: SubwordModel, tokens: Sequence[str], strict: bool = False) -> PronSentence:
    return model.decode(tokens, strict=strict)


def _merge_pair(syms: list[str], left: str, right: str) -> list[str]:
    out = []
    i = 0
    n = len(syms)
    while i < n:
        if i + 1 < n and syms[i] == left and syms[i + 1] == right:
            out.append(left + right)
            i += 2
        else:
            out.append(syms[i])
            i += 1
    return out


def _learn(corpus: Iterable[PronSentence], m: int, kind: str, vowels: frozenset[str]) -> SubwordModel:
    if m < 0:
        raise ValueError("merge count must be >= 0")
    sentences = list(corpus)
    alphabet = build_pseudo_map(sentences)
    unit_kind = UnitKind.PINYIN
    for s in sentences:
        if s.words:
            unit_kind = s.words[0].kind
            break
    if kind == SYLLABLE and unit_kind is not UnitKind.PHONEME and len(alphabet):
        raise WrongKind("syllable learning needs phoneme sentences")

    word_freq: Counter[str] = Counter()
    u2c = alphabet.unit_to_char
    for s in sentences:
        for w in s.words:
            word_freq["".join(u2c[v] for v in w.values)] += 1

    words = [list(w) for w in word_freq]
    freqs = list(word_freq.values())
    render = {c: u for u, c in u2c.items()}
    vowel_n = {c: int(u in vowels) for u, c in u2c.items()}

    def eligible(a: str, b: str) -> bool:
        if kind == PLAIN:
            return True
        return vowel_n[a] + vowel_n[b] == 1

    counts: defaultdict[tuple[str, str], int] = defaultdict(int)
    where: defaultdict[tuple[str, str], set[int]] = defaultdict(set)
    for idx, syms in enumerate(words):
        f = freqs[idx]
        for pair in zip(syms, syms[1:]):
            counts[pair] += f
            where[pair].add(idx)

    heap = []

    def push(pair):
        c = counts[pair]
        if c > 0 and eligible(*pair):
            heapq.heappush(heap, (-c, render[pair[0]], render[pair[1]], pair))

    for pair in counts:
        push(pair)

    merges: list[MergeRule] = []
    while len(merges) < m:
        best = None
        while heap:
            negc, _, _, pair = heapq.heappop(heap)
            if counts.get(pair, 0) == -negc:
                best = pair
                break
        if best is None:
            break
        left, right = best
        new = left + right
        render[new] = render[left] + UNIT_SEP + render[right]
        vowel_n[new] = vowel_n[left] + vowel_n[right]
        merges.append(MergeRule(render[left], render[right], render[new], len(merges)))

        touched = set()
        for idx in list(where[best]):
            syms = words[idx]
            f = freqs[idx]
            for pair in zip(syms, syms[1:]):
                counts[pair] -= f
                touched.add(pair)
            syms = _merge_pair(syms, left, right)
            words[idx] = syms
            for pair in zip(syms, syms[1:]):
                counts[pair] += f
                where[pair].add(idx)
                touched.add(pair)
        for pair in touched:
            if counts[pair] <= 0:
                counts.pop(pair, None)
                where.pop(pair, None)
            else:
                push(pair)

    return SubwordModel(
        kind=kind,
        m=m,
        unit_kind=unit_kind,
        alphabet=alphabet,
        merges=merges,
        stopped_early=len(merges) < m,
        vowels=frozenset(vowels),
    )


def learn_bpe(corpus: Iterable[PronSentence], m: int) -> SubwordModel:
    """Classic pair-merge BPE with at most `m` merges."""
    return _learn(corpus, m, PLAIN, ARPABET_VOWELS)


def learn_syllables(
    corpus: Iterable[PronSentence], m: int, inventory: PhonemeInventory = DEFAULT_INVENTORY
) -> SubwordModel:
    """Vowel-constrained BPE.

    Each iteration picks the most frequent pair whose two symbols hold one
    and zero vowels respectively.  Stops early (``stopped_early``) once no
    such pair is left.
    """
    return _learn(corpus, m, SYLLABLE, inventory.vowels)


# ---------------------------------------------------------------- persistence


def dumps_model(model: SubwordModel) -> str:
    lines = [
        f"{FORMAT_NAME} {FORMAT_VERSION}",
        f"kind={model.kind} m={model.m} unit_kind={model.unit_kind.value} "
        f"alphabet={len(model.alphabet)} merges={len(model.merges)} stopped_early={int(model.stopped_early)}",
        "vowels=" + ",".join(sorted(model.vowels)),
        "[alphabet]",
    ]
    for u, c in model.alphabet.unit_to_char.items():
        lines.append(f"{u}\tU+{ord(c):04X}")
    lines.append("[merges]")
    for r in model.merges:
        lines.append(f"{r.left}\t{r.right}")
    lines.append("[end]")
    return "\n".join(lines) + "\n"


def loads_model(text: str) -> SubwordModel:
    lines = text.split("\n")
    if not lines or not lines[0].startswith(FORMAT_NAME + " "):
        raise CorruptModel("missing model header")
    try:
        version = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise CorruptModel("unreadable model version") from None
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"model format version {version}, this build reads {FORMAT_VERSION}")
    try:
        header = dict(kv.split("=", 1) for kv in lines[1].split())
        n_alpha = int(header["alphabet"])
        n_merges = int(header["merges"])
        if not lines[2].startswith("vowels=") or lines[3] != "[alphabet]":
            raise CorruptModel("bad section layout")
        vowels = frozenset(v for v in lines[2][len("vowels=") :].split(",") if v)
        alpha_lines = lines[4 : 4 + n_alpha]
        if lines[4 + n_alpha] != "[merges]":
            raise CorruptModel("alphabet section length mismatch")
        merge_lines = lines[5 + n_alpha : 5 + n_alpha + n_merges]
        if lines[5 + n_alpha + n_merges] != "[end]":
            raise CorruptModel("merge section length mismatch or truncated file")
        units = []
        for line in alpha_lines:
            unit, cp = line.split("\t")
            units.append((unit, int(cp[2:], 16)))
        alphabet = PseudoCharMap(u for u, _ in units)
        if any(alphabet.unit_to_char[u] != chr(cp) for u, cp in units):
            raise CorruptModel("alphabet code points are not the canonical assignment")
        merges = []
        for rank, line in enumerate(merge_lines):
            left, right = line.split("\t")
            merges.append(MergeRule(left, right, left + UNIT_SEP + right, rank))
        return SubwordModel(
            kind=header["kind"],
            m=int(header["m"]),
            unit_kind=UnitKind(header["unit_kind"]),
            alphabet=alphabet,
            merges=merges,
            stopped_early=header.get("stopped_early", "0") == "1",
            vowels=vowels,
        )
    except CorruptModel:
        raise
    except (IndexError, KeyError, ValueError) as exc:
        raise CorruptModel(f"unreadable model: {exc}") from None


def save_model(model: SubwordModel, path) -> None:
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".model-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(dumps_model(model))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_model(path) -> SubwordModel:
    with open(path, encoding="utf-8") as f:
        return loads_model(f.read())


def token_count(model: SubwordModel, corpus: Iterable[PronSentence]) -> int:
    return sum(len(model.encode(s)) for s in corpus)


def vowel_count_symbol(symbol: str, vowels: frozenset[str] = ARPABET_VOWELS) -> int:
    """Vowels in a rendered symbol such as ``k-ae-t`` (boundary mark allowed)."""
    return sum(1 for u in symbol.lstrip(WORD_MARK).split(UNIT_SEP) if u in vowels)
