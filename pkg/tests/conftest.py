import pytest

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion outcome; the summary prints one line each."""

    def record(label: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE.append((label, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())


_GRIDS: dict = {}


@pytest.fixture(scope="session")
def preset_grid():
    """Full-resolution preset sweeps, computed once per session."""
    from hubbard_dimer.sweep import figure_preset, run_sweep

    def get(name: str, **overrides):
        key = (name, tuple(sorted(overrides.items())))
        if key not in _GRIDS:
            from dataclasses import replace
            _GRIDS[key] = run_sweep(replace(figure_preset(name), **overrides))
        return _GRIDS[key]

    return get
