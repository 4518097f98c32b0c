import numpy as np
import pytest

import scatres as sr

N_DEFAULT = 2**14
L_DEFAULT = 400.0


@pytest.fixture(scope="session")
def grid():
    return sr.make_grid(N_DEFAULT, L_DEFAULT)


@pytest.fixture(scope="session")
def big_grid():
    # for tests whose tolerances the spec does not tie to the default grid
    return sr.make_grid(2**15, 1600.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def ex1_bases(grid):
    model = sr.example1()
    nb = sr.build_N_basis(model, 16, "upper_poles", grid)
    mb, tb = sr.build_M_and_T(model, nb)
    return model, nb, mb, tb


@pytest.fixture(scope="session")
def rankone_bases(grid):
    model = sr.RankOneModel(1.0)
    nb = sr.build_N_basis(model, 24, "rim_poles", grid)
    mb, tb = sr.build_M_and_T(model, nb)
    return model, nb, mb, tb


def rational_sum(grid, poles, weights=None):
    lam = grid.points()
    weights = weights or [1.0] * len(poles)
    return sr.grid_function(grid, sum(w / (lam - p) for w, p in zip(weights, poles)))
