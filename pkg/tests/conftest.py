from fractions import Fraction

import pytest

from spin_uncertainty.spin_core import make_spin_context


@pytest.fixture(params=[Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3)],
                ids=lambda s: f"s={s}")
def ctx(request):
    return make_spin_context(request.param)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
