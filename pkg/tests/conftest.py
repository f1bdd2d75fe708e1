import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ri_sobolev.rearrangement import PiecewiseConstantFunction

settings.register_profile(
    "default", deadline=None, max_examples=60, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def step_functions(draw, max_pieces: int = 10, max_value: float = 50.0, allow_zero: bool = True):
    """Nonnegative step functions on (0, 1) with well-separated breakpoints."""
    k = draw(st.integers(1, max_pieces))
    ticks = draw(st.lists(st.integers(1, 999), min_size=k - 1, max_size=k - 1, unique=True))
    bp = [0.0] + sorted(t / 1000.0 for t in ticks) + [1.0]
    lo = 0.0 if allow_zero else 1e-3
    vals = draw(st.lists(st.floats(lo, max_value, allow_nan=False, allow_subnormal=False), min_size=k, max_size=k))
    return PiecewiseConstantFunction(bp, vals)


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


# acceptance verdicts, one line per criterion in the terminal summary
ACCEPTANCE: dict[int, list] = {}


def record(criterion: int, ok: bool, detail: str):
    prev = ACCEPTANCE.get(criterion)
    if prev is None:
        ACCEPTANCE[criterion] = [bool(ok), [detail]]
    else:
        prev[0] = prev[0] and bool(ok)
        prev[1].append(detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        ok, details = ACCEPTANCE[c]
        terminalreporter.write_line(f"criterion {c:2d}: {'PASS' if ok else 'FAIL'}  " + "; ".join(details))
