import time

import pytest

_RESULTS = pytest.StashKey[list]()


class _Criterion:
    def __init__(self, config, number, limit, title):
        self.config, self.number, self.limit, self.title = config, number, limit, title

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.limit
        note = f"{elapsed:.2f}s of {self.limit:g}s"
        if exc_type is not None:
            note += f"; {exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        self.config.stash.setdefault(_RESULTS, []).append((self.number, ok, self.title, note))
        if exc_type is None and not ok:
            raise AssertionError(f"criterion {self.number} took {elapsed:.2f}s, limit {self.limit:g}s")
        return False


@pytest.fixture
def criterion(request):
    """Time a block against a limit and record a PASS/FAIL line for the summary."""
    def make(number, limit, title):
        return _Criterion(request.config, number, limit, title)
    return make


def pytest_terminal_summary(terminalreporter, config):
    rows = config.stash.get(_RESULTS, [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, title, note in sorted(rows):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({note})")
