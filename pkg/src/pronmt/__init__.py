"""Parallel Chinese/English text in pronunciation space.

Convert text to Pinyin / phoneme sentences, learn subword and syllable
units over them, build (s, t, s_p, t_p) datasets and score with BLEU.
"""
from importlib import resources

from .core import (
    DEFAULT_INVENTORY,
    DatasetEntry,
    Lang,
    PhonemeInventory,
    PronSentence,
    PronUnit,
    PronWord,
    TextSentence,
    UnitKind,
    is_vowel,
    parse_pron_word,
    vowel_count,
)
from .lexicon import Lexicon, load_lexicon
from .convert import ConversionOptions, convert_pair, convert_sentence, rule_g2p_en, rule_g2p_zh
from .subword import SubwordModel, learn_bpe, learn_syllables, load_model, save_model
from .bleu import corpus_bleu, to_eval_space
from .dataset import build_dataset, corpus_stats, split_dataset, SplitSpec

__version__ = "0.1.0"


def data_path(name: str):
    """Path of a file shipped in ``pronmt/data``."""
    return resources.files("pronmt").joinpath("data", name)


def sample_lexicons() -> tuple[Lexicon, Lexicon]:
    """The small Chinese and English lexicons covering the sample pairs."""
    zh = load_lexicon(data_path("zh_fixture.tsv"), Lang.ZH, "tsv", strict=True)
    en = load_lexicon(data_path("en_fixture.dict"), Lang.EN, "voxforge", strict=True)
    return zh, en
