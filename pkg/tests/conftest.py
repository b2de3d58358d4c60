import json
from pathlib import Path

import pytest

from toricfam.cox import RaySet
from toricfam.fans import Fan

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "toricfam" / "fixtures"

COMPLETE = ["p1", "p2", "p3", "p1xp1", "f1", "f2", "p121", "dp6", "twisted_prism"]
ACCEPTANCE_LINES = []


def load_json(name):
    return json.loads((FIXTURES / f"{name}.json").read_text())


def load_fan(name):
    return Fan.from_json(load_json(name))


def load_rays(name):
    return RaySet.from_json(load_json(name))


def projective_space(n):
    rays = [tuple(int(i == k) for i in range(n)) for k in range(n)] + [(-1,) * n]
    return Fan(n, tuple(rays), tuple(frozenset(set(range(n + 1)) - {i}) for i in range(n + 1)))


@pytest.fixture(params=COMPLETE)
def complete_fan(request):
    return request.param, load_fan(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
