"""Pronunciation units, words and sentences.

Every file the toolkit reads or writes uses the renderings defined here:
units inside a word are joined with ``-`` and words are separated by a
single space.  A Pinyin unit carries its tone after an underscore
(``ni_3``); a phoneme is a lowercase ARPAbet symbol without stress
(``ah``).
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable


class Lang(str, enum.Enum):
    ZH = "zh"
    EN = "en"


class UnitKind(str, enum.Enum):
    PINYIN = "pinyin"
    PHONEME = "phoneme"


UNIT_KIND_FOR_LANG = {Lang.ZH: UnitKind.PINYIN, Lang.EN: UnitKind.PHONEME}

UNIT_SEP = "-"

PINYIN_RE = re.compile(r"^[a-z]+_[1-5]$")
_PHONEME_SHAPE_RE = re.compile(r"^[a-z]+$")


class PronError(ValueError):
    """Base class for malformed pronunciation data."""


class InvalidUnit(PronError):
    def __init__(self, token: str, kind: UnitKind | None = None):
        self.token = token
        self.kind = kind
        what = f" {kind.value}" if kind else ""
        super().__init__(f"invalid{what} unit: {token!r}")


class WrongKind(PronError):
    pass


# 39 ARPAbet phonemes, lowercased, no stress digits
ARPABET = (
    "aa", "ae", "ah", "ao", "aw", "ay", "b", "ch", "d", "dh",
    "eh", "er", "ey", "f", "g", "hh", "ih", "iy", "jh", "k",
    "l", "m", "n", "ng", "ow", "oy", "p", "r", "s", "sh",
    "t", "th", "uh", "uw", "v", "w", "y", "z", "zh",
)
ARPABET_VOWELS = frozenset(
    ("aa", "ae", "ah", "ao", "aw", "ay", "eh", "er", "ey", "ih", "iy", "ow", "oy", "uh", "uw")
)


@dataclass(frozen=True)
class PhonemeInventory:
    """An ordered phoneme set together with its vowel subset."""

    phonemes: tuple[str, ...]
    vowels: frozenset[str]

    def __post_init__(self):
        if len(set(self.phonemes)) != len(self.phonemes):
            raise ValueError("duplicate phonemes in inventory")
        stray = self.vowels - set(self.phonemes)
        if stray:
            raise ValueError(f"vowels not in inventory: {sorted(stray)}")

    def __contains__(self, phoneme: str) -> bool:
        return phoneme in self._members

    def __len__(self) -> int:
        return len(self.phonemes)

    @property
    def _members(self) -> frozenset[str]:
        # cached on first access; the dataclass is frozen so bypass __setattr__
        try:
            return self.__dict__["_member_set"]
        except KeyError:
            members = frozenset(self.phonemes)
            object.__setattr__(self, "_member_set", members)
            return members

    @classmethod
    def from_units(cls, units: Iterable[str], vowels: Iterable[str] = ARPABET_VOWELS) -> "PhonemeInventory":
        """Build an inventory from the phonemes actually seen in a lexicon.

        The vowel subset is intersected with the observed phonemes.
        """
        phonemes = tuple(sorted(set(units)))
        return cls(phonemes, frozenset(vowels) & frozenset(phonemes))


DEFAULT_INVENTORY = PhonemeInventory(ARPABET, ARPABET_VOWELS)


@dataclass(frozen=True)
class PronUnit:
    value: str
    kind: UnitKind

    def __post_init__(self):
        if self.kind is UnitKind.PINYIN:
            ok = PINYIN_RE.match(self.value) is not None
        else:
            ok = _PHONEME_SHAPE_RE.match(self.value) is not None
        if not ok:
            raise InvalidUnit(self.value, self.kind)

    def __str__(self) -> str:
        return self.value


def parse_unit(token: str, kind: UnitKind, inventory: PhonemeInventory = DEFAULT_INVENTORY) -> PronUnit:
    if kind is UnitKind.PHONEME and token not in inventory:
        raise InvalidUnit(token, kind)
    return PronUnit(token, kind)


@dataclass(frozen=True)
class PronWord:
    units: tuple[PronUnit, ...]

    def __post_init__(self):
        if not self.units:
            raise PronError("a pronunciation word needs at least one unit")
        kinds = {u.kind for u in self.units}
        if len(kinds) > 1:
            raise WrongKind("mixed unit kinds in one word")

    @property
    def kind(self) -> UnitKind:
        return self.units[0].kind

    @property
    def values(self) -> tuple[str, ...]:
        return tuple(u.value for u in self.units)

    def __str__(self) -> str:
        return UNIT_SEP.join(u.value for u in self.units)

    def __len__(self) -> int:
        return len(self.units)

    def __add__(self, other: "PronWord") -> "PronWord":
        return PronWord(self.units + other.units)

    @classmethod
    def of(cls, values: Iterable[str], kind: UnitKind) -> "PronWord":
        return cls(tuple(PronUnit(v, kind) for v in values))


def parse_pron_word(
    text: str, kind: UnitKind, inventory: PhonemeInventory = DEFAULT_INVENTORY
) -> PronWord:
    """Parse a ``-``-joined unit string such as ``ni_3-hao_3``.

    Raises InvalidUnit on the first token that is not a valid unit of
    `kind` (an empty token from a doubled separator included).
    """
    if not text:
        raise InvalidUnit("", kind)
    return PronWord(tuple(parse_unit(tok, kind, inventory) for tok in text.split(UNIT_SEP)))


@dataclass(frozen=True)
class PronSentence:
    words: tuple[PronWord, ...]
    lang: Lang

    def __str__(self) -> str:
        return " ".join(str(w) for w in self.words)

    def __len__(self) -> int:
        return len(self.words)

    def units(self) -> list[str]:
        return [u.value for w in self.words for u in w.units]

    @classmethod
    def parse(
        cls, text: str, lang: Lang, inventory: PhonemeInventory = DEFAULT_INVENTORY
    ) -> "PronSentence":
        """Parse a rendered sentence.  Words may mix Pinyins and phonemes
        (Latin words inside Chinese text are pronounced with phonemes)."""
        words = []
        for tok in text.split():
            words.append(_parse_any_word(tok, UNIT_KIND_FOR_LANG[lang], inventory))
        return cls(tuple(words), lang)


def _parse_any_word(tok: str, preferred: UnitKind, inventory: PhonemeInventory) -> PronWord:
    try:
        return parse_pron_word(tok, preferred, inventory)
    except InvalidUnit:
        other = UnitKind.PHONEME if preferred is UnitKind.PINYIN else UnitKind.PINYIN
        if preferred is UnitKind.PINYIN:
            # only phoneme words may appear in a Chinese sentence, never the reverse
            return parse_pron_word(tok, other, inventory)
        raise


@dataclass(frozen=True)
class TextSentence:
    tokens: tuple[str, ...]
    lang: Lang

    def __post_init__(self):
        if any(not t or any(c.isspace() for c in t) for t in self.tokens):
            raise ValueError("text tokens must be nonempty and whitespace-free")

    def __str__(self) -> str:
        return " ".join(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    @classmethod
    def parse(cls, text: str, lang: Lang) -> "TextSentence":
        return cls(tuple(text.split()), lang)


@dataclass(frozen=True)
class DatasetEntry:
    """One (s, t, s_p, t_p) quadruple: Chinese text, English text and
    their pronunciation sentences."""

    s: TextSentence
    t: TextSentence
    s_p: PronSentence
    t_p: PronSentence

    def fields(self) -> tuple[str, str, str, str]:
        return str(self.s), str(self.t), str(self.s_p), str(self.t_p)


def is_vowel(unit: PronUnit | str, inventory: PhonemeInventory = DEFAULT_INVENTORY) -> bool:
    if isinstance(unit, PronUnit):
        if unit.kind is not UnitKind.PHONEME:
            raise WrongKind(f"vowel test needs a phoneme, got pinyin {unit.value!r}")
        unit = unit.value
    elif PINYIN_RE.match(unit):
        raise WrongKind(f"vowel test needs a phoneme, got pinyin {unit!r}")
    return unit in inventory.vowels


def vowel_count(word: PronWord | Iterable[PronUnit | str], inventory: PhonemeInventory = DEFAULT_INVENTORY) -> int:
    units = word.units if isinstance(word, PronWord) else word
    return sum(1 for u in units if is_vowel(u, inventory))


def unit_kind_of(lang: Lang | str) -> UnitKind:
    return UNIT_KIND_FOR_LANG[Lang(lang)]
