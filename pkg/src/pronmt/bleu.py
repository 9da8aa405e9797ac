"""Single-reference 4-gram corpus BLEU, multi-bleu.perl semantics.

Clipped n-gram matches are summed over the corpus for each order, the
brevity penalty is ``exp(1 - ref_len / hyp_len)`` when the hypothesis is
shorter, and any zero precision makes the score 0 (no smoothing unless
asked for).
"""
from __future__ import annotations

import enum
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence

from .core import Lang, PronSentence, TextSentence

MAX_ORDER = 4


class BleuError(ValueError):
    pass


class EmptyCorpus(BleuError):
    pass


class LengthMismatch(BleuError):
    pass


class EvalSpace(str, enum.Enum):
    TEXT = "text"
    PRON = "pron"


@dataclass(frozen=True)
class BleuReport:
    bleu: float
    precisions: tuple[float, ...]
    brevity_penalty: float
    hyp_length: int
    ref_length: int
    matches: tuple[int, ...] = ()
    totals: tuple[int, ...] = ()

    def __str__(self) -> str:
        p = "/".join(f"{100 * x:.1f}" for x in self.precisions)
        ratio = self.hyp_length / self.ref_length if self.ref_length else 0.0
        return (
            f"BLEU = {self.bleu:.2f}, {p} (BP={self.brevity_penalty:.3f}, "
            f"ratio={ratio:.3f}, hyp_len={self.hyp_length}, ref_len={self.ref_length})"
        )

    def to_json(self) -> str:
        d = asdict(self)
        d["precisions"] = list(self.precisions)
        d["matches"] = list(self.matches)
        d["totals"] = list(self.totals)
        return json.dumps(d, sort_keys=True)


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(
    hyps: Sequence[Sequence[str]],
    refs: Sequence[Sequence[str]],
    smooth: Optional[str] = None,
    max_order: int = MAX_ORDER,
) -> BleuReport:
    """Corpus BLEU of tokenized hypotheses against one reference each.

    ``smooth="add1"`` adds one to numerator and denominator of every
    order above unigrams.  A corpus with an empty hypothesis side scores 0
    with a brevity penalty of 0.
    """
    if len(hyps) != len(refs):
        raise LengthMismatch(f"{len(hyps)} hypotheses vs {len(refs)} references")
    if not hyps:
        raise EmptyCorpus("nothing to score")
    if smooth not in (None, "none", "add1"):
        raise ValueError(f"unknown smoothing {smooth!r}")

    matches = [0] * max_order
    totals = [0] * max_order
    hyp_len = ref_len = 0
    for hyp, ref in zip(hyps, refs):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_order + 1):
            h = _ngrams(hyp, n)
            r = _ngrams(ref, n)
            matches[n - 1] += sum(min(c, r[g]) for g, c in h.items())
            totals[n - 1] += max(len(hyp) - n + 1, 0)

    precisions = []
    for n in range(max_order):
        if smooth == "add1" and n > 0:
            precisions.append((matches[n] + 1) / (totals[n] + 1))
        else:
            precisions.append(matches[n] / totals[n] if totals[n] else 0.0)

    if hyp_len == 0:
        bp = 0.0
    elif hyp_len < ref_len:
        bp = math.exp(1 - ref_len / hyp_len)
    else:
        bp = 1.0

    if min(precisions) <= 0 or bp == 0.0:
        score = 0.0
    else:
        score = 100 * bp * math.exp(sum(math.log(p) for p in precisions) / max_order)
    return BleuReport(score, tuple(precisions), bp, hyp_len, ref_len, tuple(matches), tuple(totals))


def to_eval_space(
    sentence: TextSentence | PronSentence,
    space: EvalSpace | str,
    converter: Optional[Callable[[TextSentence], PronSentence]] = None,
    *,
    pron_token: str = "unit",
    lowercase: bool = True,
) -> list[str]:
    """Tokens of a sentence in the requested scoring space.

    Pronunciation space flattens words into units by default
    (``pron_token="word"`` keeps ``-``-joined words).  Crossing from text
    to pronunciations needs `converter`, whose errors propagate.
    """
    space = EvalSpace(space)
    if space is EvalSpace.TEXT:
        if isinstance(sentence, PronSentence):
            raise BleuError("a pronunciation sentence cannot be scored in text space")
        tokens = list(sentence.tokens)
        if lowercase and sentence.lang is Lang.EN:
            tokens = [t.lower() for t in tokens]
        return tokens
    if isinstance(sentence, TextSentence):
        if converter is None:
            raise BleuError("text -> pronunciation scoring needs a converter")
        sentence = converter(sentence)
    if pron_token == "unit":
        return sentence.units()
    if pron_token == "word":
        return [str(w) for w in sentence.words]
    raise ValueError(f"pron_token must be 'unit' or 'word', not {pron_token!r}")
