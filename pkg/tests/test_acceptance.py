"""Acceptance criteria, one test per criterion.

Each test appends a PASS/FAIL line to ``RESULTS``; conftest prints them in
the terminal summary so they show up in captured runs too.
"""
import math
import random
import time

import pytest

from oracles import brute_bleu, naive_bpe
from pronmt import data_path
from pronmt.bleu import corpus_bleu
from pronmt.cli import main
from pronmt.convert import convert_sentence
from pronmt.core import ARPABET, DatasetEntry, Lang, PronSentence, TextSentence
from pronmt.dataset import SplitSpec, split_dataset, write_split
from pronmt.normalize import chinese_numeral_to_pinyin, en_int_to_words, zh_int_to_chinese
from pronmt.subword import WORD_MARK, decode, encode, learn_bpe, learn_syllables, vowel_count_symbol

RESULTS = []


def record(n, title, ok, detail=""):
    line = f"criterion {n} [{'PASS' if ok else 'FAIL'}] {title}" + (f": {detail}" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


def random_en_corpus(rng, n_words, alphabet=ARPABET, max_len=6):
    sents, remaining = [], n_words
    while remaining > 0:
        k = min(remaining, rng.randint(1, 5))
        remaining -= k
        words = ["-".join(rng.choice(alphabet) for _ in range(rng.randint(1, max_len))) for _ in range(k)]
        sents.append(PronSentence.parse(" ".join(words), Lang.EN))
    return sents


def test_criterion_1_sample_golden(capsys):
    start = time.perf_counter()
    outputs = {}
    for lang, lex in (("zh", "zh_fixture.tsv"), ("en", "en_fixture.dict")):
        code = main(["convert", "--lang", lang, "--lexicon", str(data_path(lex)), "-i", str(data_path(f"sample_{lang}.txt"))])
        outputs[lang] = (code, capsys.readouterr().out)
    elapsed = time.perf_counter() - start
    want_zh = (
        "er_4-ling_2-ling_2-wu_3 nian_2 yi_1 yue_4 san_1-shi_2-yi_1 ri_4\n"
        "wan_3-can_1 xiang_3 chi_1 niu_2-rou_4 ji_1-rou_4 huo_4-shi_4 yu_2\n"
    )
    want_en = (
        "th-er-d-iy-w-ah-n jh-ae-n-y-uw-eh-r-iy t-uw-th-aw-z-ah-n-d-ah-n-d-f-ay-v\n"
        "w-ih-ch w-uh-d y-uw l-ay-k f-ao-r d-ih-n-er b-iy-f ch-ih-k-ah-n ao-r f-ih-sh\n"
    )
    ok = outputs["zh"] == (0, want_zh) and outputs["en"] == (0, want_en) and elapsed < 1.0
    record(1, "sample pairs golden conversion", ok, f"{elapsed:.3f}s")


def test_criterion_2_number_rules(sample_lex):
    zh_lex, en_lex = sample_lex
    checks = {
        "22 -> 二十二": zh_int_to_chinese(22) == "二十二",
        "二十二 -> er_4-shi_2-er_4": str(chinese_numeral_to_pinyin("二十二")) == "er_4-shi_2-er_4",
        "22 -> twenty two": en_int_to_words(22) == "twenty two",
        "2005 年 -> er_4-ling_2-ling_2-wu_3": str(
            convert_sentence(TextSentence.parse("2005 年", Lang.ZH), zh_lex).sentence
        ) == "er_4-ling_2-ling_2-wu_3 nian_2",
        "31 -> th-er-d-iy-w-ah-n": str(
            convert_sentence(TextSentence.parse("31", Lang.EN), en_lex).sentence
        ) == "th-er-d-iy-w-ah-n",
    }
    failed = [k for k, v in checks.items() if not v]
    record(2, "number rules", not failed, "all exact" if not failed else "failed " + "; ".join(failed))


def test_criterion_3_syllable_invariant():
    rng = random.Random(2024)
    violations = 0
    symbols = 0

    def check(model, corpus):
        nonlocal violations, symbols
        for r in model.merges:
            symbols += 1
            violations += vowel_count_symbol(r.result) != 1
        for s in corpus:
            for tok in model.encode(s):
                sym = tok.lstrip(WORD_MARK)
                if "-" in sym:
                    symbols += 1
                    violations += vowel_count_symbol(sym) != 1

    for _ in range(120):
        corpus = random_en_corpus(rng, rng.randint(1, 200))
        check(learn_syllables(corpus, rng.randint(0, 100)), corpus)
    big = [
        PronSentence.parse(
            " ".join("-".join(rng.choice(ARPABET) for _ in range(rng.randint(1, 7))) for _ in range(rng.randint(3, 12))),
            Lang.EN,
        )
        for _ in range(10_000)
    ]
    model = learn_syllables(big, 2000)
    check(model, big)
    record(3, "syllable symbols hold exactly one vowel", violations == 0,
           f"{violations} violations over {symbols} symbols, 120 random corpora + 10k sentences ({len(model.merges)} merges)")


def test_criterion_4_bpe_oracle():
    rng = random.Random(4)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(200):
        corpus = random_en_corpus(rng, rng.randint(1, 50), ARPABET[:8])
        m = rng.randint(0, 20)
        got = [(r.left, r.right) for r in learn_bpe(corpus, m).merges]
        mismatches += got != naive_bpe([list(w.values) for s in corpus for w in s.words], m)
    elapsed = time.perf_counter() - start
    record(4, "learn-bpe equals naive reference", mismatches == 0 and elapsed < 30,
           f"{mismatches} mismatches over 200 corpora, {elapsed:.2f}s")


def test_criterion_5_encode_decode_inverse():
    rng = random.Random(5)
    failures = total = 0
    for i in range(20):
        train = random_en_corpus(rng, 400)
        m = rng.randint(0, 300)
        model = learn_bpe(train, m) if i % 2 else learn_syllables(train, m)
        for _ in range(500):
            s = random_en_corpus(rng, rng.randint(1, 8))[0]
            total += 1
            failures += decode(model, encode(model, s)) != s
    record(5, "decode(encode(s)) == s", failures == 0 and total == 10_000, f"{failures} failures over {total} sentences, 20 models")


def test_criterion_6_bleu_oracle():
    rng = random.Random(6)
    worst = 0.0
    for _ in range(200):
        vocab = "abcdef"[: rng.randint(2, 6)]
        n = rng.randint(1, 8)
        refs = [[rng.choice(vocab) for _ in range(rng.randint(0, 15))] for _ in range(n)]
        hyps = [[rng.choice(vocab) for _ in range(rng.randint(0, 15))] for _ in range(n)]
        got, want = corpus_bleu(hyps, refs).bleu, brute_bleu(hyps, refs)
        if want == 0.0:
            worst = max(worst, 0.0 if got == 0.0 else math.inf)
        else:
            worst = max(worst, abs(got - want) / want)
    hand = corpus_bleu([["a", "b", "c", "d"]], [["a", "b", "c", "d", "e"]])
    hand_ok = (
        hand.precisions == (1.0, 1.0, 1.0, 1.0)
        and abs(hand.brevity_penalty - math.exp(-0.25)) < 1e-12
        and abs(hand.bleu - 77.88) <= 0.01
    )
    record(6, "BLEU oracle and hand case", worst <= 1e-9 and hand_ok,
           f"max relative error {worst:.2e}, hand case bleu={hand.bleu:.4f}")


def test_criterion_7_split(tmp_path):
    entries = [
        DatasetEntry(
            TextSentence((f"句{i}",), Lang.ZH),
            TextSentence((f"s{i}",), Lang.EN),
            PronSentence.parse("ju_4", Lang.ZH),
            PronSentence.parse("s-eh-n", Lang.EN),
        )
        for i in range(10_000)
    ]
    spec = SplitSpec(4096, 4096, seed=1)
    parts = split_dataset(entries, spec)
    sizes = tuple(len(parts[k]) for k in ("train", "dev", "test"))
    keys = [{e.s.tokens for e in parts[k]} for k in ("train", "dev", "test")]
    disjoint = not (keys[0] & keys[1] or keys[0] & keys[2] or keys[1] & keys[2])
    complete = set().union(*keys) == {e.s.tokens for e in entries}
    for run in ("a", "b"):
        write_split(split_dataset(entries, spec), tmp_path / run, spec)
    identical = all(
        (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
        for f in ("train.tsv", "dev.tsv", "test.tsv", "split_manifest.json")
    )
    ok = sizes == (1808, 4096, 4096) and disjoint and complete and identical
    record(7, "split sizes, partition and determinism", ok,
           f"sizes={sizes} disjoint={disjoint} complete={complete} byte-identical={identical}")


def test_criterion_8_translation_bleu_not_reproduced():
    RESULTS.append(
        "criterion 8 [SKIP] neural translation BLEU: needs large-scale transformer training, out of scope"
    )
    pytest.skip("translation BLEU requires training full NMT systems; not reproducible here")
