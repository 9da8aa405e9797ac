"""
Scoring in text space and pronunciation space
=============================================

Corpus BLEU over word tokens, then over phoneme units of the same
sentences.
"""

from pronmt import Lang, TextSentence, corpus_bleu, sample_lexicons, to_eval_space
from pronmt.convert import make_converter, rule_g2p_en

hyps = ["which would you like for dinner", "beef or fish"]
refs = ["which would you like for dinner ?", "chicken or fish"]

_, en_lex = sample_lexicons()
conv = make_converter(en_lex, rule_g2p_en)

for space in ("text", "pron"):
    h = [to_eval_space(TextSentence.parse(x, Lang.EN), space, conv) for x in hyps]
    r = [to_eval_space(TextSentence.parse(x, Lang.EN), space, conv) for x in refs]
    print(space, corpus_bleu(h, r))

# a short but exact hypothesis only pays the brevity penalty
print(corpus_bleu([["a", "b", "c", "d"]], [["a", "b", "c", "d", "e"]]).to_json())
