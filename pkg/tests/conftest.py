import numpy as np
import pytest

from qbloewner.core import LinearSystem, QBSystem, symmetrize_Q


def random_stable_qb(n, rng, symmetric=True, scale=0.3):
    """Random real QB system with a Hurwitz A and E = I."""
    A = rng.standard_normal((n, n))
    A = A - (np.abs(np.linalg.eigvals(A)).max() + 1.0) * np.eye(n)
    Q = scale * rng.standard_normal((n, n * n))
    if symmetric:
        Q = symmetrize_Q(Q)
    return QBSystem(np.eye(n), A, Q, scale * rng.standard_normal((n, n)),
                    rng.standard_normal(n), rng.standard_normal(n),
                    symmetric=symmetric)


def random_stable_linear(n, rng):
    return random_stable_qb(n, rng).linear_part()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(label, ok, detail)``."""
    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
