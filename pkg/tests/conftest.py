import os
import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parent.parent / "src" / "py_scripts"
sys.path.insert(0, str(SRC))
# joblib workers import the modules by name
os.environ["PYTHONPATH"] = os.pathsep.join(p for p in (str(SRC), os.environ.get("PYTHONPATH")) if p)

from enumerator import CollectVisitor, enumerate_complete  # noqa: E402
from simple_game import CompleteGame  # noqa: E402


GAME_295 = ["110100100", "101011000", "101001011", "100101101", "100011110", "011110000",
            "011001101", "010110011", "001111001", "001101110", "000111111"]
WEIGHTS_295 = (92, 84, 78, 74, 67, 58, 45, 40, 30)

GAME_W1_110 = ["111000100", "111000011", "110101000", "110010101", "101110000", "101100101",
               "101001110", "100110110", "011111011"]
WEIGHTS_W1_110 = (110, 52, 48, 40, 36, 28, 25, 19, 7)

GAME_Q56 = ["111000101", "110101000", "110100111", "110011001", "101110000", "101101001",
            "101011100", "101011011", "100111101", "011111000"]
GAME_Q46 = ["110000000", "101000001", "100100011", "100001100", "011101011", "011011100",
            "001111101"]


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long enumeration and oracle runs")


@pytest.fixture
def dictator():
    return CompleteGame.from_strings(["100"])


@pytest.fixture
def unanimity():
    return CompleteGame.from_strings(["111"])


@pytest.fixture
def game_295():
    return CompleteGame.from_strings(GAME_295)


@pytest.fixture
def game_q56():
    return CompleteGame.from_strings(GAME_Q56)


@pytest.fixture
def game_q46():
    return CompleteGame.from_strings(GAME_Q46)


@pytest.fixture(scope="session")
def complete_games():
    """All complete games for n = 1..5, keyed by n."""
    out = {}
    for n in range(1, 6):
        visitor = CollectVisitor()
        enumerate_complete(n, visitor)
        out[n] = [CompleteGame.from_masks(n, masks, validate=False) for masks in visitor.records]
    return out
