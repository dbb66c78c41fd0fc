import pytest

from wittlang.gf import FieldSpec

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    def record(number: int, passed: bool, detail: str) -> None:
        _ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def F2():
    return FieldSpec.of(2)


@pytest.fixture
def F3():
    return FieldSpec.of(3)


@pytest.fixture
def F4():
    return FieldSpec.of(2, 2)


@pytest.fixture
def F16():
    return FieldSpec.of(2, 4)
