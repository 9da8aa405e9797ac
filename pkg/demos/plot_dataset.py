"""
Building, splitting and counting a dataset
==========================================

Turn parallel text files into four-column entries, split them with a
fixed seed and look at vocabulary counts.
"""

import tempfile
from pathlib import Path

from pronmt import SplitSpec, build_dataset, corpus_stats, data_path, sample_lexicons, split_dataset
from pronmt.convert import rule_g2p_en
from pronmt.dataset import write_split

zh_lex, en_lex = sample_lexicons()
entries, report = build_dataset(data_path("sample_zh.txt"), data_path("sample_en.txt"), zh_lex, en_lex, None, rule_g2p_en)
print(report.counters())
print(corpus_stats(entries))

# repeat the pairs to get something worth splitting
many = entries * 10
parts = split_dataset(many, SplitSpec(dev_size=3, test_size=3, seed=7))
print({k: len(v) for k, v in parts.items()})

out = Path(tempfile.mkdtemp())
write_split(parts, out, SplitSpec(3, 3, 7))
print(sorted(p.name for p in out.iterdir()))
print((out / "split_manifest.json").read_text(encoding="utf-8"))
