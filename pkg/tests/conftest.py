import importlib.resources

import numpy as np
import pytest

from softhomology import (
    Path,
    build_grid_complex,
    harmonic_basis,
    hodge_laplacian_1,
    reference_from_keypoints,
)
from softhomology.experiments import load_config, prepare

CONFIG_DIR = importlib.resources.files("softhomology") / "configs"

# filled by test_acceptance, printed after the run
ACCEPTANCE_LINES: list[str] = []


def config_path(name):
    return CONFIG_DIR / f"{name}.json"


class Fixture:
    def __init__(self, surface, source, dest, reference):
        self.surface = surface
        self.basis = harmonic_basis(hodge_laplacian_1(surface))
        self.source = source
        self.dest = dest
        self.reference = reference


@pytest.fixture(scope="session")
def annulus():
    """4x4 grid on [0,3]^2 with the centre cell removed; source (0,0), dest (3,0).

    The reference runs over the top of the hole (the longer class).
    """
    s = build_grid_complex(4, 4, (0, 0, 3, 3), [(1, 1, 2, 2)])
    src, dst = s.vertex_at(0, 0), s.vertex_at(3, 0)
    ref = reference_from_keypoints(s, [src, s.vertex_at(0, 3), s.vertex_at(3, 3), dst])
    return Fixture(s, src, dst, ref)


@pytest.fixture(scope="session")
def two_holes():
    """4x5 grid on [0,4]x[0,3] with two single-triangle holes; corner to corner."""
    cfg = load_config(config_path("tiny_two_holes"))
    st = prepare(cfg)
    return Fixture(st.surface, st.source, st.dest, st.reference)


@pytest.fixture(scope="session")
def disk():
    s = build_grid_complex(4, 4, (0, 0, 3, 3))
    src, dst = s.vertex_at(0, 0), s.vertex_at(3, 3)
    return Fixture(s, src, dst, Path([src, s.vertex_at(0, 1), s.vertex_at(0, 2), s.vertex_at(0, 3),
                                     s.vertex_at(1, 3), s.vertex_at(2, 3), dst]))


@pytest.fixture(scope="session")
def fig2():
    st = prepare(load_config(config_path("fig2_approx")))
    fx = Fixture.__new__(Fixture)
    fx.surface, fx.basis, fx.source, fx.dest, fx.reference = (
        st.surface, st.basis, st.source, st.dest, st.reference)
    return fx


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
