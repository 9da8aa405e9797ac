"""Number reading and pronunciation-affecting punctuation.

Digit numbers become Chinese numerals (then Pinyins, character by
character) or English cardinal words.  The numeral table lives in
``data/numerals.tsv`` so it can be overridden without touching code.
"""
from __future__ import annotations

import enum
import re
import unicodedata
from importlib import resources
from typing import Mapping, Optional

from .core import Lang, PronUnit, PronWord, TextSentence, UnitKind


class NumberMode(str, enum.Enum):
    MAGNITUDE = "magnitude"
    DIGITWISE = "digitwise"


class NormalizeError(ValueError):
    pass


class Overflow(NormalizeError):
    pass


class NotANumber(NormalizeError):
    pass


class UnknownNumeral(NormalizeError):
    def __init__(self, char: str):
        self.char = char
        super().__init__(f"no Pinyin for numeral character {char!r}")


ZH_DIGITS = "零一二三四五六七八九"
ZH_NEGATIVE = "负"
ZH_POINT = "点"
ZH_PERCENT = "百分之"
EN_PERCENT = "percentage"
# 10^4 grouping: units for groups 0..4
_ZH_GROUP_UNITS = ("", "万", "亿", "兆", "京")
_ZH_SMALL_UNITS = ("", "十", "百", "千")
ZH_LIMIT = 10**20
EN_LIMIT = 10**15

NUMBER_RE = re.compile(r"^-?\d+(?:\.\d+)?$")
_GROUPED_RE = re.compile(r"^-?\d{1,3}(?:,\d{3})+(?:\.\d+)?$")
_PERCENT_SIGNS = ("%", "％")


def load_numeral_table(path=None) -> dict[str, str]:
    """Read a ``char<TAB>pinyin`` table; the shipped one by default."""
    if path is None:
        text = resources.files("pronmt").joinpath("data/numerals.tsv").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    table = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        char, pinyin = line.split("\t")
        table[char] = pinyin
    return table


ZH_NUMERAL_TABLE: Mapping[str, str] = load_numeral_table()


def _zh_group(n: int) -> str:
    # 1 <= n <= 9999; interior zeros collapse to one 零, trailing zeros vanish
    digits = f"{n:04d}"
    out = []
    pending_zero = False
    started = False
    for i, d in enumerate(digits):
        d = int(d)
        power = 3 - i
        if d == 0:
            if started:
                pending_zero = True
            continue
        if pending_zero:
            out.append("零")
            pending_zero = False
        out.append(ZH_DIGITS[d] + _ZH_SMALL_UNITS[power])
        started = True
    return "".join(out)


def zh_int_to_chinese(n: int, mode: NumberMode | str = NumberMode.MAGNITUDE) -> str:
    """Chinese numeral string for an integer.

    >>> zh_int_to_chinese(10500)
    '一万零五百'
    >>> zh_int_to_chinese(2005, "digitwise")
    '二零零五'
    """
    mode = NumberMode(mode)
    if abs(n) >= ZH_LIMIT:
        raise Overflow(f"{n} is beyond the 京 range")
    if n < 0:
        return ZH_NEGATIVE + zh_int_to_chinese(-n, mode)
    if mode is NumberMode.DIGITWISE:
        return "".join(ZH_DIGITS[int(d)] for d in str(n))
    if n == 0:
        return ZH_DIGITS[0]

    groups = []
    rest = n
    while rest:
        groups.append(rest % 10000)
        rest //= 10000

    out = []
    need_zero = False
    for idx in range(len(groups) - 1, -1, -1):
        g = groups[idx]
        if g == 0:
            need_zero = bool(out)
            continue
        if out and (need_zero or g < 1000):
            out.append("零")
        out.append(_zh_group(g) + _ZH_GROUP_UNITS[idx])
        need_zero = False
    text = "".join(out)
    # 一十二 -> 十二 at the head only
    if text.startswith("一十"):
        text = text[1:]
    return text


def zh_decimal_to_chinese(s: str, mode: NumberMode | str = NumberMode.MAGNITUDE) -> str:
    if not NUMBER_RE.match(s):
        raise NotANumber(s)
    negative = s.startswith("-")
    body = s[1:] if negative else s
    int_part, _, frac = body.partition(".")
    text = zh_int_to_chinese(int(int_part), mode)
    if frac:
        text += ZH_POINT + "".join(ZH_DIGITS[int(d)] for d in frac)
    return ZH_NEGATIVE + text if negative else text


def chinese_numeral_to_pinyin(chars: str, table: Mapping[str, str] = ZH_NUMERAL_TABLE) -> PronWord:
    if not chars:
        raise NotANumber(chars)
    units = []
    for c in chars:
        if c not in table:
            raise UnknownNumeral(c)
        units.append(PronUnit(table[c], UnitKind.PINYIN))
    return PronWord(tuple(units))


_EN_ONES = (
    "zero one two three four five six seven eight nine ten eleven twelve thirteen "
    "fourteen fifteen sixteen seventeen eighteen nineteen"
).split()
_EN_TENS = "_ _ twenty thirty forty fifty sixty seventy eighty ninety".split()
_EN_SCALES = ("", "thousand", "million", "billion", "trillion")
EN_NUMBER_VOCAB = frozenset(_EN_ONES + _EN_TENS[2:] + ["hundred", *_EN_SCALES[1:], "and", "minus", "point"])


def _en_below_100(n: int) -> list[str]:
    if n < 20:
        return [_EN_ONES[n]]
    tens, ones = divmod(n, 10)
    return [_EN_TENS[tens]] + ([_EN_ONES[ones]] if ones else [])


def _en_below_1000(n: int) -> list[str]:
    hundreds, rest = divmod(n, 100)
    words = []
    if hundreds:
        words += [_EN_ONES[hundreds], "hundred"]
        if rest:
            words.append("and")
    if rest:
        words += _en_below_100(rest)
    return words


def en_int_to_words(n: int) -> str:
    """Cardinal reading in British style, without hyphens.

    >>> en_int_to_words(2005)
    'two thousand and five'
    """
    if abs(n) >= EN_LIMIT:
        raise Overflow(f"{n} is beyond the trillions")
    if n < 0:
        return "minus " + en_int_to_words(-n)
    if n == 0:
        return "zero"
    groups = []
    rest = n
    while rest:
        groups.append(rest % 1000)
        rest //= 1000
    words = []
    for idx in range(len(groups) - 1, -1, -1):
        g = groups[idx]
        if not g:
            continue
        if idx == 0 and words and g < 100:
            words.append("and")
        words += _en_below_1000(g)
        if _EN_SCALES[idx]:
            words.append(_EN_SCALES[idx])
    return " ".join(words)


def en_decimal_to_words(s: str) -> str:
    if not NUMBER_RE.match(s):
        raise NotANumber(s)
    int_part, _, frac = s.partition(".")
    text = en_int_to_words(int(int_part))
    if int_part == "-0":
        text = "minus zero"
    if frac:
        text += " point " + " ".join(_EN_ONES[int(d)] for d in frac)
    return text


def is_number(token: str) -> bool:
    return NUMBER_RE.match(token) is not None


def is_punctuation(token: str) -> bool:
    """True for tokens made only of punctuation or symbol characters."""
    return bool(token) and all(unicodedata.category(c)[0] in "PS" for c in token)


def _split_percent(token: str) -> Optional[str]:
    for sign in _PERCENT_SIGNS:
        if token.endswith(sign):
            num = token[: -len(sign)].replace(",", "") if _GROUPED_RE.match(token[: -len(sign)]) else token[: -len(sign)]
            if is_number(num):
                return num
    return None


def apply_punct_rules(sentence: TextSentence) -> TextSentence:
    """Apply the punctuation rules that change pronunciation, drop the rest.

    Grouping commas inside numbers vanish (``1,000`` -> ``1000``).  A
    percent sign after a number, attached or as the next token, becomes
    ``百分之`` before the number (Chinese) or ``percentage`` after it
    (English).  Every other punctuation-only token is deleted.
    """
    tokens = sentence.tokens
    out: list[str] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if _GROUPED_RE.match(tok):
            tok = tok.replace(",", "")
        num = _split_percent(tok)
        if num is None and is_number(tok) and i + 1 < len(tokens) and tokens[i + 1] in _PERCENT_SIGNS:
            num = tok
            i += 1
        if num is not None:
            if sentence.lang is Lang.ZH:
                out += [ZH_PERCENT, num]
            else:
                out += [num, EN_PERCENT]
        elif not is_punctuation(tok):
            out.append(tok)
        i += 1
    return TextSentence(tuple(out), sentence.lang)
