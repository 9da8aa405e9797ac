import hashlib
import random

import pytest

from pronmt.core import Lang, UnitKind
from pronmt.lexicon import LexiconParseError, char_table, load_lexicon, normalize_pinyin, sniff_format


def test_tsv_multiple_pronunciations_keep_file_order(zh_small):
    entry = zh_small.entry("重")
    assert [str(p) for p in entry.pronunciations] == ["zhong_4", "chong_2"]
    assert str(zh_small.lookup_first("重")) == "zhong_4"


def test_first_pronunciation_of_context_word(zh_small):
    assert str(zh_small.lookup_first("重庆")) == "chong_2-qing_4"
    assert str(zh_small.lookup_first("重量")) == "zhong_4-liang_4"


def test_absent_word(zh_small):
    assert zh_small.lookup_first("zzzz") is None
    assert "zzzz" not in zh_small


def test_voxforge_alternates_fold_and_lowercase(en_small):
    assert [str(p) for p in en_small.pronunciations("read")] == ["r-iy-d", "r-eh-d"]
    assert str(en_small.lookup_first("READ")) == "r-iy-d"
    assert str(en_small.lookup_first("like")) == "l-ay-k"
    assert en_small.unit_kind is UnitKind.PHONEME


def test_voxforge_bracket_column(tmp_path):
    p = tmp_path / "vox.dict"
    p.write_text("LIKE            [LIKE]          l ay k\n", encoding="utf-8")
    lex = load_lexicon(p, Lang.EN, "voxforge", strict=True)
    assert str(lex.lookup_first("like")) == "l-ay-k"


def test_empty_file(tmp_path):
    p = tmp_path / "empty.tsv"
    p.write_text("", encoding="utf-8")
    assert len(load_lexicon(p, Lang.ZH)) == 0


def test_lenient_skips_and_counts(fixtures_dir):
    lex = load_lexicon(fixtures_dir / "malformed.tsv", Lang.ZH)
    assert len(lex) == 2
    assert lex.skipped == 2


def test_strict_reports_line_number(fixtures_dir):
    with pytest.raises(LexiconParseError) as err:
        load_lexicon(fixtures_dir / "malformed.tsv", Lang.ZH, strict=True)
    assert err.value.line_no == 2
    assert "malformed.tsv:2" in str(err.value)


def test_dacidian_two_file_merge(fixtures_dir):
    lex = load_lexicon(
        fixtures_dir / "dacidian_words.txt", Lang.ZH, "dacidian", pinyin_path=fixtures_dir / "dacidian_pinyin.txt"
    )
    assert str(lex.lookup_first("重庆")) == "chong_2-qing_4"
    assert str(lex.lookup_first("你好")) == "ni_3-hao_3"


def test_normalize_pinyin():
    assert normalize_pinyin("ZHONG4") == "zhong_4"
    assert normalize_pinyin("zhong_4") == "zhong_4"


def test_sniff(fixtures_dir):
    assert sniff_format(fixtures_dir / "zh_small.tsv") == "tsv"
    assert sniff_format(fixtures_dir / "en_small.dict") == "voxforge"


def test_char_table(zh_small):
    table = char_table(zh_small)
    assert str(table["重"]) == "zhong_4"
    assert "重庆" not in table


def test_determinism_and_first_rule(fixtures_dir):
    a = load_lexicon(fixtures_dir / "zh_small.tsv", Lang.ZH)
    b = load_lexicon(fixtures_dir / "zh_small.tsv", Lang.ZH)
    assert a.dump() == b.dump()
    for word in a:
        prons = a.pronunciations(word)
        assert a.lookup_first(word) == prons[0]
        assert b.lookup_first(word) == prons[0]


def test_lookups_do_not_mutate(zh_small):
    before = hashlib.sha256(zh_small.dump().encode()).hexdigest()
    words = list(zh_small) + ["missing", "重重"]
    rng = random.Random(3)
    for _ in range(10_000):
        w = rng.choice(words)
        zh_small.lookup_first(w)
        zh_small.lookup_random(w, rng)
    assert zh_small.checksum() == before


def test_random_pick_is_seeded(zh_small):
    picks_a = [str(zh_small.lookup_random("重", random.Random(s))) for s in range(20)]
    picks_b = [str(zh_small.lookup_random("重", random.Random(s))) for s in range(20)]
    assert picks_a == picks_b
    assert set(picks_a) == {"zhong_4", "chong_2"}


def test_lexicon_is_read_only(zh_small):
    with pytest.raises(TypeError):
        zh_small._entries["x"] = ()
