"""Slow, obviously-correct reference implementations used by the tests.

Nothing here imports the code under test except plain data.
"""
import math

VOWELS = {"aa", "ae", "ah", "ao", "aw", "ay", "eh", "er", "ey", "ih", "iy", "ow", "oy", "uh", "uw"}


def naive_bpe(words, m, syllable=False):
    """Reference BPE.

    `words` is a list of word occurrences, each a list of unit strings
    (repeats allowed, so frequency weighting is implicit).  Every iteration
    recounts all pairs from scratch.  Returns [(left, right), ...] with
    symbols rendered as '-'-joined units.
    """
    corpus = [[(u,) for u in w] for w in words]
    merges = []
    for _ in range(m):
        counts = {}
        for w in corpus:
            for i in range(len(w) - 1):
                key = (w[i], w[i + 1])
                counts[key] = counts.get(key, 0) + 1
        candidates = []
        for (a, b), c in counts.items():
            if syllable:
                va = sum(1 for u in a if u in VOWELS)
                vb = sum(1 for u in b if u in VOWELS)
                if sorted((va, vb)) != [0, 1]:
                    continue
            candidates.append((c, "-".join(a), "-".join(b), a, b))
        if not candidates:
            break
        best_count = max(c[0] for c in candidates)
        tied = sorted(c for c in candidates if c[0] == best_count)
        _, ra, rb, a, b = tied[0]
        merges.append((ra, rb))
        new_corpus = []
        for w in corpus:
            out = []
            i = 0
            while i < len(w):
                if i < len(w) - 1 and w[i] == a and w[i + 1] == b:
                    out.append(a + b)
                    i += 2
                else:
                    out.append(w[i])
                    i += 1
            new_corpus.append(out)
        corpus = new_corpus
    return merges


def brute_bleu(hyps, refs, max_n=4):
    """BLEU by explicit n-gram lists and list.count clipping."""
    correct = [0] * max_n
    total = [0] * max_n
    hl = rl = 0
    for h, r in zip(hyps, refs):
        hl += len(h)
        rl += len(r)
        for n in range(1, max_n + 1):
            hg = [tuple(h[i : i + n]) for i in range(len(h) - n + 1)]
            rg = [tuple(r[i : i + n]) for i in range(len(r) - n + 1)]
            seen = []
            for g in hg:
                if g in seen:
                    continue
                seen.append(g)
                correct[n - 1] += min(hg.count(g), rg.count(g))
            total[n - 1] += len(hg)
    p = [correct[i] / total[i] if total[i] else 0.0 for i in range(max_n)]
    if hl == 0 or min(p) == 0:
        return 0.0
    bp = 1.0 if hl >= rl else math.exp(1 - rl / hl)
    return 100 * bp * math.exp(sum(math.log(x) for x in p) / max_n)


_ZH_DIGIT = {c: i for i, c in enumerate("零一二三四五六七八九")}
_ZH_SMALL = {"十": 10, "百": 100, "千": 1000}
_ZH_BIG = {"万": 10**4, "亿": 10**8, "兆": 10**12, "京": 10**16}


def read_chinese_number(text):
    """Parse a Chinese magnitude numeral back to an int."""
    sign = 1
    if text.startswith("负"):
        sign, text = -1, text[1:]
    total = 0
    section = 0
    digit = None
    # big units processed from the largest down so 一万亿-style stacking is not needed
    for c in text:
        if c in _ZH_DIGIT:
            digit = _ZH_DIGIT[c]
        elif c in _ZH_SMALL:
            section += (1 if digit is None else digit) * _ZH_SMALL[c]
            digit = None
        elif c in _ZH_BIG:
            section += digit or 0
            total += section * _ZH_BIG[c]
            section, digit = 0, None
        else:
            raise ValueError(c)
    return sign * (total + section + (digit or 0))


# hand-written readings, independent of the converter
ZH_KNOWN = {
    0: "零",
    7: "七",
    10: "十",
    11: "十一",
    20: "二十",
    22: "二十二",
    101: "一百零一",
    110: "一百一十",
    1001: "一千零一",
    1010: "一千零一十",
    10000: "一万",
    10500: "一万零五百",
    10050: "一万零五十",
    100000: "十万",
    110000: "十一万",
    1000000: "一百万",
    20050001: "二千零五万零一",
    100000000: "一亿",
    100010000: "一亿零一万",
    100000010: "一亿零一十",
    123456789: "一亿二千三百四十五万六千七百八十九",
}

EN_KNOWN = {
    0: "zero",
    5: "five",
    13: "thirteen",
    22: "twenty two",
    31: "thirty one",
    100: "one hundred",
    105: "one hundred and five",
    120: "one hundred and twenty",
    999: "nine hundred and ninety nine",
    1000: "one thousand",
    1005: "one thousand and five",
    1100: "one thousand one hundred",
    2005: "two thousand and five",
    21000: "twenty one thousand",
    1000005: "one million and five",
    1000100: "one million one hundred",
    -7: "minus seven",
}
