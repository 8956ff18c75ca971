from pathlib import Path

import mpmath
import pytest
from hypothesis import HealthCheck, settings

from zetaexplicit.zeros import ZeroTable, ingest_zero_table, locate_zeros

DATA = Path(__file__).parent / "data"
PREC = 30
COMPUTED_HEIGHT = 1600.0

settings.register_profile(
    "numeric", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("numeric")


@pytest.fixture(scope="session")
def prec():
    return PREC


@pytest.fixture(scope="session")
def ref_table():
    """Reference ordinates to height 10^4 (independent algorithm, see scripts/make_reference_zeros.py)."""
    return ingest_zero_table(DATA / "zeros_ref.txt")


@pytest.fixture(scope="session")
def computed_table(request):
    """locate_zeros(1, 1600) at prec 30, kept in the pytest cache between sessions."""
    key = f"zetaexplicit/computed_zeros_{PREC}_{COMPUTED_HEIGHT}"
    cached = request.config.cache.get(key, None)
    if cached is not None:
        return ZeroTable(tuple(cached["ordinates"]), "computed", cached["height"], cached["complete"])
    zt = locate_zeros(1.0, COMPUTED_HEIGHT, PREC)
    request.config.cache.set(
        key,
        {
            "ordinates": [mpmath.nstr(g, 45) for g in zt.ordinates],
            "height": zt.height,
            "complete": zt.claimed_complete,
        },
    )
    return zt


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, {})


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
