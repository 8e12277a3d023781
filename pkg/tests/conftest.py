import numpy as np
import pytest
from hypothesis import strategies as st

from sheafstatics import fixtures

wheels = st.builds(fixtures.wheel, n=st.integers(3, 8), seed=st.integers(0, 10_000),
                   jitter=st.floats(0.0, 0.2))


@pytest.fixture(params=sorted(fixtures.CLOSED))
def closed_diagram(request):
    return fixtures.CLOSED[request.param]()


@pytest.fixture(params=sorted(fixtures.ALL))
def any_diagram(request):
    return fixtures.ALL[request.param]()


def cosine(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return abs(a @ b) / (np.linalg.norm(a) * np.linalg.norm(b))


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
