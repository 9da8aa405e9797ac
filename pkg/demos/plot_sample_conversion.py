"""
Text to pronunciation on two sample pairs
==========================================

Convert a Chinese and an English sentence into Pinyin and phoneme
sentences with the small lexicons shipped inside the package.
"""

from pronmt import Lang, TextSentence, convert_pair, convert_sentence, data_path, rule_g2p_en, sample_lexicons

zh_lex, en_lex = sample_lexicons()
print(zh_lex, en_lex)

# the two sample pairs, one sentence per line
zh_lines = data_path("sample_zh.txt").read_text(encoding="utf-8").splitlines()
en_lines = data_path("sample_en.txt").read_text(encoding="utf-8").splitlines()

for s, t in zip(zh_lines, en_lines):
    entry = convert_pair(TextSentence.parse(s, Lang.ZH), TextSentence.parse(t, Lang.EN), zh_lex, en_lex, en_g2p=rule_g2p_en)
    print("s   :", entry.s)
    print("t   :", entry.t)
    print("s_p :", entry.s_p)
    print("t_p :", entry.t_p)
    print()

# words outside the lexicon fall back to the rule G2P on the English side
out = TextSentence.parse("would you like bot fish", Lang.EN)
print(convert_sentence(out, en_lex, rule_g2p_en).sentence)
