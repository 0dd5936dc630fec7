from pathlib import Path

import pytest

from loopgames import parse

GAMES = Path(__file__).resolve().parent.parent / "games"


def load_blocks(filename):
    return {name: graph for name, graph, _of in parse((GAMES / filename).read_text())}


@pytest.fixture(scope="session")
def gg_blocks():
    return load_blocks("gg.gg")


@pytest.fixture(scope="session")
def zo_blocks():
    return load_blocks("zero_one.gg")


@pytest.fixture(scope="session")
def esc_blocks():
    return load_blocks("escalation.gg")
