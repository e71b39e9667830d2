import pytest

from heet import EetMatrix, MachineCatalog, MachineType

_ACCEPTANCE = []


@pytest.fixture
def worked():
    """The 2x2 matrix used throughout: tasks T1, T2 on machines M1, M2."""
    return EetMatrix.from_rows([[4, 2], [8, 4]])


@pytest.fixture
def small_catalog():
    return MachineCatalog(
        ("T1", "T2"),
        (
            MachineType("M1", 1.0, (4, 8), 2),
            MachineType("M2", 3.0, (2, 4), 2),
        ),
    )


@pytest.fixture
def acceptance():
    """Record one acceptance criterion outcome for the end-of-run summary."""

    def record(number, title, passed, detail=""):
        _ACCEPTANCE.append((number, title, passed, detail))
        print(f"[criterion {number}] {'PASS' if passed else 'FAIL'} {title} {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{number:>2}. {status}  {title}  {detail}")


from hypothesis import settings  # noqa: E402

settings.register_profile("default", deadline=None)
settings.load_profile("default")
