"""Shared fixtures: kernel warm-up, in-process CLI runner, and the
acceptance-verdict summary."""

import pytest

from lookknave import knave_step

# acceptance tests append "criterion N: PASS/FAIL - detail" lines here; the
# terminal summary replays them so every verdict is visible in one block
# even when an intentionally red check stops its own test early
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def record_criterion():
    def record(number: int, passed: bool, detail: str) -> None:
        verdict = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"criterion {number}: {verdict} - {detail}")

    return record


@pytest.fixture(scope="session")
def warm_kernels():
    # the first call pays the jit compile/load cost; anything that measures
    # wall time must depend on this fixture
    knave_step("1011100011101110")


@pytest.fixture
def run_cli(capsys):
    from lookknave.cli import main

    def run(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
