from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from lextrop import LexValue, parse_lexvalue

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def lv(text: str) -> LexValue:
    return parse_lexvalue(text)


def pt(*texts: str) -> tuple[LexValue, ...]:
    return tuple(parse_lexvalue(t) for t in texts)


small_fractions = st.builds(Fraction, st.integers(-6, 6), st.sampled_from([1, 2, 3, 4]))


def lexvalues(k: int):
    return st.lists(small_fractions, min_size=k, max_size=k).map(LexValue)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
