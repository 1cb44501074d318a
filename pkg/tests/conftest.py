import numpy as np
import pytest

from itercompare.iterations import OperatorSpec, Scenario, SchemeSpec, generate
from itercompare.metric import ErrorTrace, error_trace

ACCEPTANCE_HORIZON = 10_000


def example1_errors(length):
    """The interleaved pair, written straight from its odd/even definition."""
    n = np.arange(1, length + 1)
    x = np.where(n % 2 == 1, 1.0 / n, 1.0 / (2.0 * n))
    y = np.where(n % 2 == 1, 1.0 / (2.0 * n), 1.0 / n)
    return ErrorTrace(x), ErrorTrace(y)


def _iteration_errors(rng, length):
    c = float(rng.uniform(0.1, 0.95))
    kind = rng.choice(["picard", "krasnoselskij", "mann", "ishikawa"])
    if kind == "mann":
        # with alpha_n = 1/(n+1) the error decays like n^-(1-c); keep that
        # exponent visible inside the horizon
        c = float(rng.uniform(0.1, 0.7))
    op = OperatorSpec.parse(f"{c!r}*x1")
    if kind == "picard":
        scheme = SchemeSpec.picard()
    elif kind == "krasnoselskij":
        scheme = SchemeSpec.krasnoselskij(float(rng.uniform(0.1, 0.9)))
    elif kind == "mann":
        scheme = SchemeSpec.mann("1/(n+1)")
    else:
        scheme = SchemeSpec.ishikawa("1/sqrt(n+1)", "1/(n+1)")
    s = Scenario(op, scheme, (float(rng.uniform(-3, 3)),), (0.0,), length - 1, "absolute")
    return error_trace(generate(s), (0.0,), "absolute")


def _family(rng, length, kind):
    n = np.arange(1, length + 1, dtype=float)
    if kind == "geometric":
        c = rng.uniform(0.05, 0.999)
        return ErrorTrace(rng.uniform(0.1, 10) * c ** n)
    if kind == "harmonic":
        p = rng.uniform(0.5, 3.0)
        return ErrorTrace(rng.uniform(0.1, 10) / n ** p)
    if kind == "iteration":
        return _iteration_errors(rng, length)
    raise ValueError(kind)


def convergent_pairs(count=120, length=ACCEPTANCE_HORIZON, seed=20240101):
    """Randomised pairs of error traces of sequences converging to a common limit."""
    rng = np.random.default_rng(seed)
    pairs = [("example1", *example1_errors(length))]
    kinds = ["geometric", "harmonic", "iteration"]
    while len(pairs) < count:
        choice = len(pairs) % 4
        if choice == 3:
            p = rng.uniform(0.5, 3.0)
            c1, c2 = rng.uniform(0.1, 5, size=2)
            n = np.arange(1, length + 1, dtype=float)
            odd = n % 2 == 1
            x = np.where(odd, c1, c2) / n ** p
            y = np.where(odd, c2, c1) / n ** p
            pairs.append((f"interleaved(p={p:.2f})", ErrorTrace(x), ErrorTrace(y)))
        else:
            k1, k2 = rng.choice(kinds, size=2)
            pairs.append((f"{k1}-vs-{k2}", _family(rng, length, k1), _family(rng, length, k2)))
    return pairs


@pytest.fixture(scope="session")
def acceptance_pairs():
    return convergent_pairs()


# -- one pass/fail line per acceptance criterion -----------------------------------

_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or "::test_criterion" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        verdict = "PASS" if _criteria[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
