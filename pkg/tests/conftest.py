import pytest

from narrative_tension.agent import EpistemicState
from narrative_tension.formula import conj, parse
from narrative_tension.story import bundled


def P(text):
    return parse(text)


@pytest.fixture(scope="session")
def box():
    return bundled("box")


@pytest.fixture(scope="session")
def cwa(box):
    return box.strict


@pytest.fixture(scope="session")
def delta(box):
    return box.defaults


@pytest.fixture(scope="session")
def base(box):
    return box.state().base


@pytest.fixture(scope="session")
def cwa_formula(cwa):
    return conj(cwa)


@pytest.fixture(scope="session")
def make_state(box):
    """Box-story state with the given facts (formula strings)."""

    def make(*facts):
        return EpistemicState(tuple(P(f) for f in facts), box.strict, box.defaults, box.horizon)

    return make


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.lines():
            terminalreporter.write_line(line)
