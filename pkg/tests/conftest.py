"""Shared brute-force oracles and the acceptance-line reporter."""

import math

import pytest

_acceptance_lines: list[str] = []


def record_acceptance(line: str) -> None:
    """Queue a per-criterion pass/fail line for the terminal summary."""
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.line(line)


def brute_divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def brute_tau_m(m: int, n: int) -> int:
    """Ordered m-tuples with product n, by direct recursion."""
    if m == 1:
        return 1
    return sum(brute_tau_m(m - 1, n // d) for d in brute_divisors(n))


def brute_factor(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def brute_mobius(n: int) -> int:
    fac = brute_factor(n)
    if any(e > 1 for _, e in fac):
        return 0
    return (-1) ** len(fac)


def brute_kfree(k: int, n: int) -> int:
    return 1 if all(e < k for _, e in brute_factor(n)) else 0


def brute_lambda_k(k: int, n: int) -> float:
    return math.fsum(
        brute_mobius(d) * math.log(n // d) ** k for d in brute_divisors(n)
    )


def psi_oracle(t: float) -> float:
    return t - math.floor(t) - 0.5


@pytest.fixture(scope="session")
def base_spec_map():
    from hyplab.registry import base_specs

    return base_specs()
