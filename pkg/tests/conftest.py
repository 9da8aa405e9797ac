import sys
from pathlib import Path

import pytest

from pronmt import Lang, load_lexicon, sample_lexicons

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def sample_lex():
    return sample_lexicons()


@pytest.fixture(scope="session")
def zh_small():
    return load_lexicon(FIXTURES / "zh_small.tsv", Lang.ZH, "tsv", strict=True)


@pytest.fixture(scope="session")
def en_small():
    return load_lexicon(FIXTURES / "en_small.dict", Lang.EN, "voxforge", strict=True)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
