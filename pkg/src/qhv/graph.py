"""Collinearity graph of a point set, built as a union of line cliques.

Two vertices are adjacent iff their joining line lies entirely in the set,
so the edge set is exactly the disjoint union of one clique per contained
line (two points span one line, hence cliques share no edge).  BFS work is
delegated to scipy.sparse.csgraph on a CSR adjacency.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import InvariantViolation

_BATCH = 128


class CollinearityGraph:
    """Graph on the points of S with one clique per contained line."""

    def __init__(self, space, S, lines):
        self.space = space
        self.S = S
        self.lines = list(lines)
        self.verts = S.indices
        self.nv = len(self.verts)
        pos = np.full(space.n_points, -1, dtype=np.int64)
        pos[self.verts] = np.arange(self.nv)
        self.pos = pos
        m = space.s + 1
        if self.lines:
            lp = np.vstack([space.line_points(l) for l in self.lines])
            if (pos[lp] < 0).any():
                raise ValueError("a line has points outside the vertex set")
        else:
            lp = np.empty((0, m), dtype=np.int64)
        self.line_pts = lp
        rows, cols = [], []
        sel = ~np.eye(m, dtype=bool)
        for lo in range(0, lp.shape[0], 256):
            blk = pos[lp[lo:lo + 256]]
            u = np.broadcast_to(blk[:, :, None], (blk.shape[0], m, m))
            v = np.broadcast_to(blk[:, None, :], (blk.shape[0], m, m))
            rows.append(u[:, sel].ravel())
            cols.append(v[:, sel].ravel())
        if rows:
            u = np.concatenate(rows)
            v = np.concatenate(cols)
        else:
            u = v = np.empty(0, dtype=np.int64)
        A = sparse.coo_matrix(
            (np.ones(len(u), dtype=np.int8), (u, v)),
            shape=(self.nv, self.nv)).tocsr()
        if A.nnz and A.data.max() > 1:
            raise InvariantViolation(
                "duplicate edge: two contained lines share two points")
        if A.nnz != len(self.lines) * m * (m - 1):
            raise InvariantViolation("clique union lost edges")
        self.adj = A
        self.n_edges = A.nnz // 2

    def degrees(self):
        return np.diff(self.adj.indptr)

    def neighbors(self, v):
        return self.adj.indices[self.adj.indptr[v]:self.adj.indptr[v + 1]]

    def adjacent(self, v, w):
        return w in self.neighbors(v)

    def components(self):
        n, labels = csgraph.connected_components(self.adj, directed=False)
        return n, labels

    def bfs_ecc(self, sources):
        """Eccentricity (max BFS distance, inf if unreachable) per source."""
        out = np.empty(len(sources), dtype=np.float64)
        for lo in range(0, len(sources), _BATCH):
            d = csgraph.dijkstra(self.adj, directed=True, unweighted=True,
                                 indices=sources[lo:lo + _BATCH])
            out[lo:lo + _BATCH] = d.max(axis=1)
        return out

    def bfs_from(self, source, predecessors=False):
        return csgraph.dijkstra(self.adj, directed=True, unweighted=True,
                                indices=source,
                                return_predecessors=predecessors)


@dataclass
class GraphStats:
    components: int
    diameter: float  # int value, or math.inf when disconnected
    method: str
    sources: int

    def to_json(self, graph=None):
        d = None if math.isinf(self.diameter) else int(self.diameter)
        out = {"components": self.components, "diameter": d,
               "method": self.method}
        if graph is not None:
            out = {"vertices": graph.nv, "edges": graph.n_edges, **out}
        return out


def connectivity_and_diameter(G, omegas=None, full=None, sample=32, seed=0):
    """Exact component count and diameter.

    full=True sweeps BFS from every vertex.  Otherwise, when the omega
    partition is supplied and the graph is large, BFS runs from all of
    omega0, omega1, omega3 plus a seeded sample of the affine class, whose
    eccentricity is constant by affine homogeneity; the sweep checks that
    constancy on the sample rather than assuming it.
    """
    ncomp, _ = G.components()
    if full is None:
        full = omegas is None or G.nv <= 20000
    if full or omegas is None:
        ecc = G.bfs_ecc(np.arange(G.nv))
        diam = float(ecc.max()) if G.nv else 0.0
        return GraphStats(ncomp, math.inf if math.isinf(diam) else int(diam),
                          "full", G.nv)
    fixed = np.concatenate([G.pos[om.indices] for om in
                            (omegas.omega0, omegas.omega1, omegas.omega3)])
    aff = G.pos[omegas.omega2.indices]
    rng = np.random.default_rng(seed)
    k = min(sample, len(aff))
    pick = rng.choice(aff, size=k, replace=False) if k else aff[:0]
    ecc_f = G.bfs_ecc(fixed)
    ecc_a = G.bfs_ecc(pick)
    if len(ecc_a) and not (ecc_a == ecc_a[0]).all():
        raise InvariantViolation(
            "sampled affine vertices have differing eccentricities")
    allecc = np.concatenate([ecc_f, ecc_a])
    diam = float(allecc.max()) if len(allecc) else 0.0
    return GraphStats(ncomp, math.inf if math.isinf(diam) else int(diam),
                      "reduced", len(allecc))


def distance_witness(G, omegas):
    """An affine point P and a cone point Q off B with d(P,Q)=3, plus the
    realizing path (which must pass omega1 then P_inf)."""
    if not omegas.complete:
        raise InvariantViolation("witness shape needs q = 1 mod 4")
    src = int(G.pos[omegas.omega2.indices[0]])
    tgt = int(G.pos[omegas.omega3.indices[0]])
    dist, pred = G.bfs_from(src, predecessors=True)
    if not math.isfinite(dist[tgt]) or int(dist[tgt]) != 3:
        raise InvariantViolation(
            f"d(P,Q) = {dist[tgt]}, expected 3")
    path = [tgt]
    while path[-1] != src:
        path.append(int(pred[path[-1]]))
    path.reverse()
    pts = [int(G.verts[v]) for v in path]
    lab = omegas.label_of()
    if [lab[i] for i in pts] != [2, 1, 0, 3]:
        raise InvariantViolation(
            f"witness path classes {[int(lab[i]) for i in pts]} != [2,1,0,3]")
    return pts[0], pts[-1], pts


def omega3_structure(G, omegas):
    """Induced structure on the cone points off B: q-1 disjoint cliques of
    size q^2, all hanging off P_inf, with no edges into the other classes."""
    q = G.space.field.q
    pos3 = G.pos[omegas.omega3.indices]
    sub = G.adj[pos3][:, pos3]
    ncomp, labels = csgraph.connected_components(sub, directed=False)
    sizes = np.bincount(labels)
    deg_sum = np.bincount(labels, weights=np.diff(sub.indptr))
    cliques = bool((deg_sum == sizes * (sizes - 1)).all())
    p_inf_nb = set(G.neighbors(int(G.pos[0])))
    hang = all(int(v) in p_inf_nb for v in pos3)
    pos12 = np.concatenate([G.pos[omegas.omega1.indices],
                            G.pos[omegas.omega2.indices]])
    cross = G.adj[pos3][:, pos12].nnz if len(pos12) else 0
    return {
        "components": int(ncomp),
        "component_sizes": sorted(int(s) for s in sizes),
        "all_cliques": cliques,
        "expected_components": q - 1,
        "expected_size": q * q,
        "all_adjacent_to_p_inf": hang,
        "edges_to_other_classes": int(cross),
        "ok": (int(ncomp) == q - 1 and cliques and hang and cross == 0
               and all(int(s) == q * q for s in sizes)),
    }
