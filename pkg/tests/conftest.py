import numpy as np
import pytest
from hypothesis import strategies as st

from eghz.states import ExtSymParams

# vertices of the (y1, y2, y3) tetrahedron: twirls of |000>, |001>, |010>, |100>
Y_CORNERS = np.array([
    [0.25, 0.25, 0.25],
    [-0.25, -0.25, 0.25],
    [-0.25, 0.25, -0.25],
    [0.25, -0.25, -0.25],
])


def params_from_unit(w, s) -> ExtSymParams:
    """Map four nonnegative weights and s in [-1, 1] to a point of the polytope."""
    w = np.asarray(w, dtype=float)
    w = w / w.sum()
    ys = w @ Y_CORNERS
    half = 1 / 8 + ys.sum() / 2
    return ExtSymParams(float(s * half), *map(float, ys))


@st.composite
def valid_params(draw):
    w = [draw(st.floats(0.0, 1.0)) for _ in range(4)]
    if sum(w) == 0:
        w = [1.0, 1.0, 1.0, 1.0]
    s = draw(st.floats(-1.0, 1.0))
    return params_from_unit(w, s)


def random_valid(rng: np.random.Generator, n: int) -> list[ExtSymParams]:
    return [params_from_unit(rng.exponential(size=4), rng.uniform(-1, 1)) for _ in range(n)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
