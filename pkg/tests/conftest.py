import random
import sys
from pathlib import Path

import pytest

from lchkit.parsing import parse
from lchkit.selftest import FIXTURE_DIR

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tools"))

FIXTURES = sorted(p.name for p in FIXTURE_DIR.glob("*.lch"))


def load(name):
    return parse(FIXTURE_DIR / name)


@pytest.fixture
def fixture_dir():
    return FIXTURE_DIR


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, (ok, detail) in sorted(mod.RESULTS.items()):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
