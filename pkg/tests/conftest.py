import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    # calibration results must not leak between test runs or into ~/.cache
    monkeypatch.setenv("HOMOPOLY_CACHE_DIR", str(tmp_path_factory.getbasetemp() / "cache"))


@pytest.fixture
def acceptance_line():
    def record(number: int, title: str, ok: bool, detail: str = ""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f"  ({detail})" if detail else ""))
        print(ACCEPTANCE_LINES[-1])
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
