"""
Subwords and syllables over phonemes
====================================

Learn plain BPE and vowel-constrained merges on a toy phoneme corpus,
then encode and decode a sentence with each model.
"""

from pronmt import Lang, PronSentence, learn_bpe, learn_syllables
from pronmt.subword import dumps_model, vowel_count_symbol

corpus = [PronSentence.parse(line, Lang.EN) for line in [
    "s-t-r-iy-t s-t-r-ae-p s-t-r-ay-k",
    "k-r-iy-ey-t k-r-iy-ey-t-ih-v",
    "s-t-r-iy-t k-r-iy-ey-t",
    "p-oy-ah-t s-t-r-oy",
]]

bpe = learn_bpe(corpus, 8)
syl = learn_syllables(corpus, 8)

# plain BPE happily glues vowels together or builds vowel-less chunks;
# the syllable learner only keeps symbols with a single vowel
for name, model in (("bpe", bpe), ("syllables", syl)):
    print(name, [r.result for r in model.merges])
    print("  vowels per symbol:", [vowel_count_symbol(r.result) for r in model.merges])

sent = PronSentence.parse("s-t-r-iy-t-s k-r-iy-ey-t", Lang.EN)
toks = syl.encode(sent)
print(toks)
print(syl.decode(toks, Lang.EN))

# the saved model is a small text file
print(dumps_model(syl))
