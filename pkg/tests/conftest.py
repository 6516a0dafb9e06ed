import numpy as np
import pytest

from hjbsos.oracle import discrete_benchmark_problem, scalar_lq_problem


def random_instance_shape(seed: int) -> tuple[tuple[int, ...], int]:
    """Block sizes in 2..20 and 1..30 constraints, capped by the free entry count."""
    rng = np.random.default_rng(10_000 + seed)
    nblocks = int(rng.integers(1, 4))
    sizes = tuple(int(s) for s in rng.integers(2, 21, nblocks))
    tri = sum(n * (n + 1) // 2 for n in sizes)
    m = int(rng.integers(1, min(30, tri - 1) + 1))
    return sizes, m


@pytest.fixture(scope="session")
def lq_problem():
    return scalar_lq_problem(1.0)


@pytest.fixture(scope="session")
def discrete_problem():
    return discrete_benchmark_problem(0.9)


#: (criterion number, passed, detail) lines collected by the acceptance suite
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


def record_criterion(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append((number, passed, line))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
