"""
Reading numbers aloud
=====================

Digit strings have no lexicon entry, so they are spelled out first:
Chinese numerals become Pinyin, English cardinals become phonemes.
"""

from pronmt.normalize import chinese_numeral_to_pinyin, en_int_to_words, zh_decimal_to_chinese, zh_int_to_chinese

for n in (22, 2005, 10500, 100000001):
    chars = zh_int_to_chinese(n)
    print(n, chars, chinese_numeral_to_pinyin(chars), "|", en_int_to_words(n))

# digit by digit, as used for years
print(zh_int_to_chinese(2005, "digitwise"), chinese_numeral_to_pinyin(zh_int_to_chinese(2005, "digitwise")))
print(zh_decimal_to_chinese("3.14"))

# in a sentence the token after the number decides the reading
from pronmt import Lang, TextSentence, sample_lexicons
from pronmt.convert import convert_sentence

zh_lex, en_lex = sample_lexicons()
for text in ("2005 年", "22"):
    print(text, "->", convert_sentence(TextSentence.parse(text, Lang.ZH), zh_lex).sentence)
print("31 ->", convert_sentence(TextSentence.parse("31", Lang.EN), en_lex).sentence)
