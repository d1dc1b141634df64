import numpy as np
import pytest

from fiducial import _kernels

SQ = 1 / np.sqrt(2)
# qubit fiducial kets written out by hand: z+, z-, x+, y+
QUBIT_KETS = [
    np.array([1, 0], dtype=complex),
    np.array([0, 1], dtype=complex),
    np.array([SQ, SQ], dtype=complex),
    np.array([SQ, 1j * SQ], dtype=complex),
]
PAULI = {
    "z+": np.array([1, 0], dtype=complex),
    "z-": np.array([0, 1], dtype=complex),
    "x+": np.array([SQ, SQ], dtype=complex),
    "x-": np.array([SQ, -SQ], dtype=complex),
    "y+": np.array([SQ, 1j * SQ], dtype=complex),
    "y-": np.array([SQ, -1j * SQ], dtype=complex),
}


def proj(ket):
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj())


def born(kets, rho):
    """Oracle: <k|rho|k> for each ket, computed without any frame machinery."""
    return np.array([np.vdot(k, rho @ k).real for k in kets])


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture(params=sorted(_kernels.available_backends()))
def kernels(request):
    return _kernels.available_backends()[request.param]


# --- acceptance reporting ---------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    entry = _CRITERIA.setdefault(mark.args[0], {"title": mark.args[1], "ok": True, "measured": []})
    entry["ok"] &= rep.passed
    entry["measured"] += [f"{k}={v}" for k, v in item.user_properties]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        e = _CRITERIA[num]
        line = f"{'PASS' if e['ok'] else 'FAIL'}  criterion {num:>2}: {e['title']}"
        if e["measured"]:
            line += "  [" + ", ".join(e["measured"]) + "]"
        terminalreporter.write_line(line)
