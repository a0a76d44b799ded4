import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from enose_fis.data import generate_session  # noqa: E402
from enose_fis.pipeline import TrainConfig, run_experiment  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def session_dataset():
    return generate_session()


@pytest.fixture(scope="session")
def proposed_run(session_dataset):
    return run_experiment(session_dataset, TrainConfig(m=10, eta=0.1, epochs=10, seed=1))


@pytest.fixture(scope="session")
def baseline_run(session_dataset):
    return run_experiment(
        session_dataset, TrainConfig(m=20, eta=0.1, epochs=10, seed=1, combinator="product")
    )


ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def acceptance_record():
    def record(key, ok, detail):
        ACCEPTANCE_LINES[key] = f"{key} {'PASS' if ok else 'FAIL'}: {detail}"
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k.split()[1])):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
