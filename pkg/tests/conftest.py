import random

import pytest

from gkpi.growth import AlgebraPresentation, is_irreducible
from gkpi.linalg import GF, QQ, Matrix

_acceptance = {}


def E(i, j, n=2, field=QQ):
    return Matrix.unit(n, i, j, field)


@pytest.fixture
def e12_e21():
    return AlgebraPresentation.from_matrices([E(1, 2), E(2, 1)])


@pytest.fixture
def upper_triangular():
    return AlgebraPresentation.from_matrices([E(1, 1), E(1, 2)])


@pytest.fixture
def unipotent():
    return AlgebraPresentation.from_matrices([[[1, 1], [0, 1]]])


def random_irreducible_corpus(count, seed=2024, p=5):
    """Irreducible presentations over F_p with n <= 3 and t <= 3."""
    rng = random.Random(seed)
    f = GF(p)
    out = []
    while len(out) < count:
        n = rng.randint(1, 3)
        t = rng.randint(1, 3)
        gens = [Matrix(n, n, [rng.randrange(p) for _ in range(n * n)], f) for _ in range(t)]
        pres = AlgebraPresentation(f, n, tuple(gens))
        if is_irreducible(pres)[0]:
            out.append(pres)
    return out


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for marker in getattr(report, "acceptance_labels", []):
        _acceptance[marker] = report.outcome


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.acceptance_labels = [m.args[0] for m in item.iter_markers("acceptance")]


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_acceptance, key=lambda s: int(s.split()[0][2:].rstrip(":"))):
        status = "PASS" if _acceptance[label] == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}")
