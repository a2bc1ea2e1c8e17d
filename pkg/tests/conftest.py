from __future__ import annotations

import itertools

import numpy as np
import pytest

from cssbp.channel import PauliPrior
from cssbp.css_code import CssCode, paper_code_24


@pytest.fixture(scope="session")
def paper24() -> CssCode:
    return paper_code_24()


@pytest.fixture(scope="session")
def tree_code() -> CssCode:
    # HX = {{3,4}}, HZ = {{1,2}} in 1-based terms
    return CssCode(4, ((2, 3),), ((0, 1),), "tree4")


def random_prior(rng: np.random.Generator, n: int, zeros: bool = False) -> PauliPrior:
    t = rng.random((n, 2, 2)) + 0.05
    if zeros:
        kill = rng.random((n, 2, 2)) < 0.3
        kill[:, 0, 0] = False  # keep every qubit able to be error-free
        t[kill] = 0.0
    return PauliPrior(t / t.sum(axis=(1, 2), keepdims=True))


def product_prior(rng: np.random.Generator, n: int) -> PauliPrior:
    a = rng.random((n, 2)) + 0.05
    b = rng.random((n, 2)) + 0.05
    return PauliPrior.product(a / a.sum(1, keepdims=True), b / b.sum(1, keepdims=True))


def random_css_code(rng: np.random.Generator, n: int, mx: int, mz: int) -> CssCode:
    """Random orthogonal pair: HZ rows drawn from the dual of the HX rows."""
    vecs = [np.array(v, dtype=np.uint8) for v in itertools.product((0, 1), repeat=n) if any(v)]
    hx = [vecs[i] for i in rng.choice(len(vecs), size=mx, replace=False)]
    dual = [v for v in vecs if all(int(v @ h) % 2 == 0 for h in hx)]
    hz = [dual[i] for i in rng.choice(len(dual), size=min(mz, len(dual)), replace=False)]
    rows = lambda hs: tuple(tuple(int(j) for j in np.flatnonzero(h)) for h in hs)  # noqa: E731
    return CssCode(n, rows(hx), rows(hz), f"random{n}")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
