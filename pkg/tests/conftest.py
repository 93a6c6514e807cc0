import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# curve with a dihedral mod-7 image (non-split Cartan); partner is its twist below
DIHEDRAL_7 = (0, -1, 1, -74988699621831, 238006866237979285299)
DIHEDRAL_7_D = -7 * 134177

# j = 27(t+1)^3(t-3)^3/t^3 at t = 2: projective mod-3 image of order 4
D2_CURVE = (1, -1, 1, -36686, 12093029)


@pytest.fixture(scope="session")
def dihedral_curve():
    from symcong.curve import RationalEC

    return RationalEC(*DIHEDRAL_7)


# acceptance bookkeeping: one PASS/FAIL line per criterion in the terminal summary

_ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    prev = _ACCEPTANCE.get(n, (title, "PASS", ""))
    if rep.failed:
        _ACCEPTANCE[n] = (title, "FAIL", str(rep.longrepr).splitlines()[-1][:160] if rep.longrepr else "")
    elif rep.when == "call" and prev[1] != "FAIL":
        note = getattr(item, "_acceptance_note", "")
        _ACCEPTANCE[n] = (title, "PASS", note or prev[2])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, status, note = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}" + (f"  [{note}]" if note else ""))


@pytest.fixture
def note(request):
    """Attach a short measurement to the criterion's summary line."""

    def _set(text: str):
        request.node._acceptance_note = text

    return _set
