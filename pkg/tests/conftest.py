import os
import sys

import pytest

from sgcat import (FieldSpec, linear_quiver, one_loop, semisimple, truncated_polynomial, two_cycle,
                   two_loop)

sys.path.insert(0, os.path.dirname(__file__))

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)
PRESENTATIONS = os.path.join(ROOT, "presentations")
GOLDEN = os.path.join(HERE, "golden")

QQ = FieldSpec(0)
F5 = FieldSpec(5)


def acceptance_algebras(field=None):
    """The algebras that the acceptance criteria quantify over."""
    return [truncated_polynomial(2, field), one_loop(field), linear_quiver(2, field),
            linear_quiver(3, field), two_cycle(field), two_loop(field)]



def small_algebras(field=None):
    return [truncated_polynomial(2, field), truncated_polynomial(3, field), one_loop(field),
            linear_quiver(2, field), linear_quiver(3, field), two_cycle(field), semisimple(2, field)]


@pytest.fixture(params=["x2", "x3", "loop", "A2", "A3", "cyc", "K2"])
def small_algebra(request):
    return {"x2": lambda: truncated_polynomial(2), "x3": lambda: truncated_polynomial(3),
            "loop": one_loop, "A2": lambda: linear_quiver(2), "A3": lambda: linear_quiver(3),
            "cyc": two_cycle, "K2": lambda: semisimple(2)}[request.param]()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
