import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion; FAIL unless the block completes."""

    class Recorder:
        def __init__(self):
            self.entries = []

        def __call__(self, label, detail=""):
            entry = {"label": label, "detail": detail, "ok": False}
            self.entries.append(entry)
            return _Scope(entry)

    rec = Recorder()
    yield rec
    for e in rec.entries:
        line = f"{'PASS' if e['ok'] else 'FAIL'}  {e['label']}"
        if e["detail"]:
            line += f"  ({e['detail']})"
        ACCEPTANCE_LINES.append(line)
        print(line)


class _Scope:
    def __init__(self, entry):
        self.entry = entry

    def note(self, detail):
        self.entry["detail"] = detail

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.entry["ok"] = exc_type is None
        return False


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
