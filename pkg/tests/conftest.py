import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

# Filled by tests/test_acceptance.py, printed once at the end of the session.
ACCEPTANCE_LINES: list[str] = []


def factorize(n):
    """Trial-division factorisation, independent of every sieve in the package."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def kernel_by_division(n):
    k = 1
    for p, e in factorize(n).items():
        if e % 2:
            k *= p
    return k


def legendre_euler(a, p):
    e = pow(a % p, (p - 1) // 2, p)
    return -1 if e == p - 1 else e


def jacobi_by_factoring(a, m):
    out = 1
    for p, e in factorize(m).items():
        out *= legendre_euler(a, p) ** e
    return out


def is_prime_trial(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


@pytest.fixture(scope="session")
def calibration():
    return json.loads((FIXTURES / "calibration.json").read_text())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
