import time
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from toric_endo.laurent import LaurentPoly

settings.register_profile(
    "seed0",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("seed0")

NAMES = ("x1", "y")

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def laurent_polys(draw, names=NAMES, max_terms=4, exp=2):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(-exp, exp)) for _ in names)
        terms[e] = terms.get(e, Fraction(0)) + draw(rationals)
    return LaurentPoly(names, terms)


def pytest_sessionstart(session):
    session.config._started = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in test_acceptance.RESULTS:
        terminalreporter.write_line(line)
    elapsed = time.perf_counter() - config._started
    status = "PASS" if elapsed < 180 else "FAIL"
    terminalreporter.write_line(f"{status} full session runtime {elapsed:.1f}s (budget 180s)")
