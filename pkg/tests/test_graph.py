import math

import numpy as np
import pytest

from qhv.errors import InvariantViolation
from qhv.graph import (CollinearityGraph, connectivity_and_diameter,
                       distance_witness, omega3_structure)
from qhv.lines import contained_lines, line_census
from qhv.variety import build_point_set, omega_partition, validate_params


def test_graph_shape_q5(graph5):
    assert graph5.nv == 3276
    assert graph5.n_edges == 256 * (26 * 25 // 2) == 83200


def test_graph_shape_q3(space3, M3):
    lm = contained_lines(space3, M3)
    G = CollinearityGraph(space3, M3, lm)
    assert G.nv == 280
    assert G.n_edges == 4 * 45 == 180
    stats = connectivity_and_diameter(G)
    assert stats.components == 244  # 243 isolated affine vertices plus the cone
    assert math.isinf(stats.diameter)
    assert stats.to_json(G)["diameter"] is None


def test_empty_line_list_gives_edgeless_graph(space3, M3):
    G = CollinearityGraph(space3, M3, [])
    assert G.n_edges == 0
    assert connectivity_and_diameter(G).components == 280


def test_lines_outside_vertex_set_rejected(space5, M5, B5, lines5):
    lb = contained_lines(space5, B5)
    with pytest.raises(ValueError):
        CollinearityGraph(space5, B5, lines5)  # generators leave B
    CollinearityGraph(space5, B5, lb)  # sanity: the right lines work


def test_connectivity_and_diameter_q5(graph5, omegas5):
    full = connectivity_and_diameter(graph5, omegas5, full=True)
    assert (full.components, full.diameter) == (1, 3)
    reduced = connectivity_and_diameter(graph5, omegas5, full=False)
    assert (reduced.components, reduced.diameter) == (1, 3)
    assert reduced.method == "reduced"


def test_adjacency_is_joint_line_containment(graph5, space5, M5, rng_pairs=10_000):
    rng = np.random.default_rng(2)
    verts = graph5.verts
    rows = rng.integers(0, graph5.nv, size=rng_pairs)
    cols = rng.integers(0, graph5.nv, size=rng_pairs)
    adj = graph5.adj
    for u, v in zip(rows, cols):
        if u == v:
            continue
        ln = space5.line_through(space5.point_at(int(verts[u])),
                                 space5.point_at(int(verts[v])))
        contained = bool(M5.mask[space5.line_points(ln)].all())
        assert bool(adj[int(u), int(v)]) == contained


def test_degrees_follow_the_census(graph5, census5):
    deg = graph5.degrees()
    assert np.array_equal(deg, census5.per_point[graph5.verts] * 25)


def test_p_inf_eccentricity_and_affine_distance(graph5, omegas5):
    p0 = int(graph5.pos[0])
    dist = graph5.bfs_from(p0)
    assert dist.max() == 2  # eccentricity of P_inf
    aff = graph5.pos[omegas5.omega2.indices]
    assert (dist[aff] == 2).all()


def test_distance_witness_q5(graph5, omegas5):
    P, Q, path = distance_witness(graph5, omegas5)
    assert len(path) == 4
    assert path[0] == P and path[-1] == Q
    lab = omegas5.label_of()
    assert [int(lab[i]) for i in path] == [2, 1, 0, 3]
    assert path[2] == 0  # P_inf


def test_omega3_structure_q5(graph5, omegas5):
    rep = omega3_structure(graph5, omegas5)
    assert rep["ok"]
    assert rep["components"] == 4
    assert rep["component_sizes"] == [25, 25, 25, 25]
    assert rep["edges_to_other_classes"] == 0
    assert rep["all_adjacent_to_p_inf"]


def test_diameter_independent_of_parameters_q5(space5, gf25):
    """Three distinct valid pairs give the same connected diameter-3 graph."""
    eps = gf25.eps
    pairs = []
    for alpha in range(1, gf25.order):
        for beta in (eps, gf25.add(eps, 1), gf25.mul(eps, eps)):
            try:
                pairs.append(validate_params(gf25, alpha, beta))
            except Exception:
                continue
            break
        if len(pairs) == 3:
            break
    assert len(pairs) == 3
    seen = set()
    for params in pairs:
        M = build_point_set(space5, "M", params)
        lines = contained_lines(space5, M)
        om = omega_partition(space5, params, M)
        G = CollinearityGraph(space5, M, lines)
        st = connectivity_and_diameter(G, om, full=True)
        seen.add((st.components, st.diameter))
    assert seen == {(1, 3)}


# ---------------------------------------------------------------- q=9

def test_graph_q9(q9):
    G = q9.graph
    assert G.nv == 59860
    assert G.n_edges == 1468 * (82 * 81 // 2)
    stats = connectivity_and_diameter(G, q9.omegas, full=False)
    assert (stats.components, stats.diameter) == (1, 3)


def test_witness_and_omega3_q9(q9):
    P, Q, path = distance_witness(q9.graph, q9.omegas)
    lab = q9.omegas.label_of()
    assert [int(lab[i]) for i in path] == [2, 1, 0, 3]
    rep = omega3_structure(q9.graph, q9.omegas)
    assert rep["ok"]
    assert rep["components"] == 8
    assert rep["component_sizes"] == [81] * 8
