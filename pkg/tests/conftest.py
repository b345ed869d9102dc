import time
from types import SimpleNamespace

import pytest

from qhv.field import Field
from qhv.graph import CollinearityGraph
from qhv.lines import contained_lines, line_census
from qhv.projgeom import Space
from qhv.variety import build_point_set, omega_partition, validate_params


@pytest.fixture(scope="session")
def gf9():
    return Field(3, 1)


@pytest.fixture(scope="session")
def gf25():
    # t^2 - t + 2, the modulus with t itself primitive
    return Field(5, 1, [2, 4, 1])


@pytest.fixture(scope="session")
def gf49():
    return Field(7, 1)


@pytest.fixture(scope="session")
def gf81():
    return Field(3, 2)


@pytest.fixture(scope="session")
def space3(gf9):
    return Space(gf9)


@pytest.fixture(scope="session")
def space5(gf25):
    return Space(gf25)


@pytest.fixture(scope="session")
def params3(gf9):
    return validate_params(gf9, gf9.eps, gf9.eps)


@pytest.fixture(scope="session")
def params5(gf25):
    return validate_params(gf25, gf25.eps, gf25.eps)


@pytest.fixture(scope="session")
def M3(space3, params3):
    return build_point_set(space3, "M", params3)


@pytest.fixture(scope="session")
def B3(space3, params3):
    return build_point_set(space3, "B", params3)


@pytest.fixture(scope="session")
def M5(space5, params5):
    return build_point_set(space5, "M", params5)


@pytest.fixture(scope="session")
def B5(space5, params5):
    return build_point_set(space5, "B", params5)


@pytest.fixture(scope="session")
def H5(space5):
    return build_point_set(space5, "H")


@pytest.fixture(scope="session")
def lines5(space5, M5):
    return contained_lines(space5, M5)


@pytest.fixture(scope="session")
def omegas5(space5, params5, M5, B5):
    return omega_partition(space5, params5, M5, B5)


@pytest.fixture(scope="session")
def census5(space5, M5, params5, omegas5, lines5):
    return line_census(space5, M5, params5, omegas=omegas5, lines=lines5)


@pytest.fixture(scope="session")
def graph5(space5, M5, lines5):
    return CollinearityGraph(space5, M5, lines5)


@pytest.fixture(scope="session")
def q9():
    """The full q=9 pipeline, built once, with per-phase wall times."""
    t = {}
    field = Field(3, 2)
    space = Space(field)
    params = validate_params(field, field.eps, field.eps)
    t0 = time.perf_counter()
    M = build_point_set(space, "M", params)
    B = build_point_set(space, "B", params)
    t["build"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    lines = contained_lines(space, M)
    om = omega_partition(space, params, M, B)
    census = line_census(space, M, params, omegas=om, lines=lines)
    t["census"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    graph = CollinearityGraph(space, M, lines)
    t["graph_build"] = time.perf_counter() - t0
    return SimpleNamespace(field=field, space=space, params=params, M=M, B=B,
                           lines=lines, omegas=om, census=census, graph=graph,
                           timings=t)
