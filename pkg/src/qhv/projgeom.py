"""Points, lines and hyperplanes of PG(3, s) over s = q^2 field elements.

Points are normalized homogeneous 4-tuples (J, X, Y, Z) of field codes with
the first nonzero coordinate scaled to 1.  The dense point index enumerates
normalized tuples lexicographically by coordinate codes, which gives the
closed form used throughout:

    (0,0,0,1)          -> 0
    (0,0,1,z)          -> 1 + z
    (0,1,y,z)          -> 1 + s + y*s + z
    (1,x,y,z)          -> 1 + s + s^2 + x*s^2 + y*s + z

so the hyperplane at infinity J=0 occupies exactly the index prefix
[0, s^2+s+1).  Hyperplanes are normalized dual 4-tuples indexed by the same
rule.  Lines are 2x4 reduced-row-echelon bases, stored as a pair of 4-tuples.
"""

import numpy as np

from .errors import FieldError


class Space:
    """PG(3, q^2) over a Field, with dense indexing and vector kernels."""

    def __init__(self, field):
        self.field = field
        s = field.order
        self.s = s
        self.n_points = s ** 3 + s ** 2 + s + 1
        self.n_lines = (s * s + 1) * (s * s + s + 1)
        self.n_hyperplanes = self.n_points
        self.inf_count = s * s + s + 1  # points with J=0 sit at indices < this
        self.line_size = s + 1
        self.hyperplane_size = s * s + s + 1
        self.p_inf = (0, 0, 0, 1)  # index 0
        self._coords = None
        self._pg2 = None
        self._coord_planes = {}

    # -- scalar point handling --

    def normalize(self, pt):
        F = self.field
        pt = tuple(pt)
        for k, c in enumerate(pt):
            if c != 0:
                if c == 1:
                    return pt
                s = F.inv(c)
                return tuple(F.mul(v, s) for v in pt)
        raise ValueError("cannot normalize the zero tuple")

    def index_of(self, pt):
        """Dense index of a (not necessarily normalized) point."""
        s = self.s
        j, x, y, z = self.normalize(pt)
        if j == 1:
            return 1 + s + s * s + (x * s + y) * s + z
        if x == 1:
            return 1 + s + y * s + z
        if y == 1:
            return 1 + z
        return 0

    def point_at(self, idx):
        s = self.s
        if not 0 <= idx < self.n_points:
            raise IndexError(f"point index {idx} out of range")
        if idx == 0:
            return (0, 0, 0, 1)
        idx -= 1
        if idx < s:
            return (0, 0, 1, idx)
        idx -= s
        if idx < s * s:
            return (0, 1, idx // s, idx % s)
        idx -= s * s
        return (1, idx // (s * s), (idx // s) % s, idx % s)

    def points(self):
        """All points in index order."""
        return (self.point_at(i) for i in range(self.n_points))

    # -- vector kernels --

    def coords_table(self):
        """Columns (J, X, Y, Z) of every point, by index (cached)."""
        if self._coords is None:
            s = self.s
            N = self.n_points
            J = np.zeros(N, dtype=np.int64)
            X = np.zeros(N, dtype=np.int64)
            Y = np.zeros(N, dtype=np.int64)
            Z = np.zeros(N, dtype=np.int64)
            Z[0] = 1
            r = np.arange(s)
            Y[1:1 + s] = 1
            Z[1:1 + s] = r
            a2 = 1 + s
            r = np.arange(s * s)
            X[a2:a2 + s * s] = 1
            Y[a2:a2 + s * s] = r // s
            Z[a2:a2 + s * s] = r % s
            a3 = a2 + s * s
            r = np.arange(s ** 3)
            J[a3:] = 1
            X[a3:] = r // (s * s)
            Y[a3:] = (r // s) % s
            Z[a3:] = r % s
            self._coords = (J, X, Y, Z)
        return self._coords

    def vnormalize(self, J, X, Y, Z):
        F = self.field
        pv = np.where(J != 0, J, np.where(X != 0, X, np.where(Y != 0, Y, Z)))
        sc = F.vinv(pv)
        return (F.vmul(J, sc), F.vmul(X, sc), F.vmul(Y, sc), F.vmul(Z, sc))

    def vindex(self, J, X, Y, Z):
        """Indices of normalized coordinate columns."""
        s = self.s
        return np.where(
            J == 1, 1 + s + s * s + (X * s + Y) * s + Z,
            np.where(X == 1, 1 + s + Y * s + Z,
                     np.where(Y == 1, 1 + Z, 0)))

    def vindex_raw(self, J, X, Y, Z):
        return self.vindex(*self.vnormalize(J, X, Y, Z))

    def _pg2_triples(self):
        """Normalized points of PG(2, s) as three columns (cached)."""
        if self._pg2 is None:
            s = self.s
            m = s * s + s + 1
            A = np.zeros(m, dtype=np.int64)
            B = np.zeros(m, dtype=np.int64)
            C = np.zeros(m, dtype=np.int64)
            C[0] = 1
            B[1:1 + s] = 1
            C[1:1 + s] = np.arange(s)
            r = np.arange(s * s)
            A[1 + s:] = 1
            B[1 + s:] = r // s
            C[1 + s:] = r % s
            self._pg2 = (A, B, C)
        return self._pg2

    def incident_duals(self, c4):
        """Sorted indices of all normalized solutions of sum c4[i]*x_i = 0.

        With c4 a point this lists the hyperplanes through it; with c4 a
        hyperplane it lists the points on it (the incidence form is
        symmetric).
        """
        F = self.field
        c4 = self.normalize(c4)
        k = next(i for i, c in enumerate(c4) if c != 0)
        free = [i for i in range(4) if i != k]
        trip = self._pg2_triples()
        cols = [None] * 4
        acc = None
        for j, pos in enumerate(free):
            cols[pos] = trip[j]
            if c4[pos] != 0:
                term = F.vmul(c4[pos], trip[j])
                acc = term if acc is None else F.vadd(acc, term)
        cols[k] = np.zeros_like(trip[0]) if acc is None else F.vneg(acc)
        idx = self.vindex_raw(*cols)
        idx.sort()
        return idx

    def hyperplane_points(self, H):
        return self.incident_duals(H)

    def hyperplanes_through(self, pt):
        return self.incident_duals(pt)

    def coord_plane(self, k):
        """Point data of the coordinate plane x_k = 0 (cached).

        Returns (J, X, Y, Z, idx) column arrays of its s^2+s+1 points.
        """
        if k not in self._coord_planes:
            dual = tuple(1 if i == k else 0 for i in range(4))
            idx = self.incident_duals(dual)
            J, X, Y, Z = self.coords_table()
            self._coord_planes[k] = (J[idx].copy(), X[idx].copy(),
                                     Y[idx].copy(), Z[idx].copy(), idx)
        return self._coord_planes[k]

    # -- lines --

    def line_through(self, P, Q):
        """Canonical RREF basis of the line spanned by distinct points P, Q."""
        F = self.field
        rows = [list(P), list(Q)]
        r = 0
        for col in range(4):
            piv = next((i for i in range(r, 2) if rows[i][col] != 0), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            sc = F.inv(rows[r][col])
            rows[r] = [F.mul(sc, v) for v in rows[r]]
            for i in range(2):
                if i != r and rows[i][col] != 0:
                    c = rows[i][col]
                    rows[i] = [F.sub(v, F.mul(c, w))
                               for v, w in zip(rows[i], rows[r])]
            r += 1
            if r == 2:
                break
        if r < 2:
            raise ValueError("degenerate input: points are equal")
        return (tuple(rows[0]), tuple(rows[1]))

    def line_points(self, line):
        """Indices of the s+1 points on a canonical line."""
        F = self.field
        r0, r1 = line
        t = np.arange(self.s, dtype=np.int64)
        cols = [F.vadd(r0[i], F.vmul(t, r1[i])) for i in range(4)]
        idx = np.empty(self.s + 1, dtype=np.int64)
        idx[0] = self.index_of(r1)
        idx[1:] = self.vindex(*cols)  # r0 + t*r1 is already normalized
        return idx

    def lines(self):
        """All canonical lines, in deterministic order (pivot pair, entries)."""
        s = self.s
        rng = range(s)
        for i, j in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
            f0 = [k for k in range(i + 1, 4) if k != j]
            f1 = [k for k in range(j + 1, 4)]
            shape = [s] * (len(f0) + len(f1))
            for flat in np.ndindex(*shape) if shape else [()]:
                r0 = [0, 0, 0, 0]
                r1 = [0, 0, 0, 0]
                r0[i] = 1
                r1[j] = 1
                for k, v in zip(f0, flat[:len(f0)]):
                    r0[k] = int(v)
                for k, v in zip(f1, flat[len(f0):]):
                    r1[k] = int(v)
                yield (tuple(r0), tuple(r1))

    def hyperplanes(self):
        """All hyperplanes as normalized dual tuples, in index order."""
        return (self.point_at(i) for i in range(self.n_hyperplanes))

    def hyperplane_index(self, H):
        return self.index_of(H)

    def hyperplane_at(self, idx):
        return self.point_at(idx)

    def incidence(self, H, pt):
        F = self.field
        acc = 0
        for h, x in zip(H, pt):
            acc = F.add(acc, F.mul(h, x))
        return acc == 0

    def plane_through(self, rows):
        """Dual tuple of the hyperplane spanned by three independent rows.

        Raises FieldError if the rows do not span a 3-space.
        """
        F = self.field
        M = [list(r) for r in rows]
        piv_cols = []
        r = 0
        for col in range(4):
            piv = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
            if piv is None:
                continue
            M[r], M[piv] = M[piv], M[r]
            sc = F.inv(M[r][col])
            M[r] = [F.mul(sc, v) for v in M[r]]
            for i in range(len(M)):
                if i != r and M[i][col] != 0:
                    c = M[i][col]
                    M[i] = [F.sub(v, F.mul(c, w)) for v, w in zip(M[i], M[r])]
            piv_cols.append(col)
            r += 1
        if r != 3:
            raise FieldError(f"rows span a {r}-dimensional space, not 3")
        free = next(c for c in range(4) if c not in piv_cols)
        dual = [0, 0, 0, 0]
        dual[free] = 1
        for row, col in zip(M[:3], piv_cols):
            dual[col] = F.neg(row[free])
        return self.normalize(tuple(dual))

    def rank(self, rows):
        F = self.field
        M = [list(r) for r in rows]
        r = 0
        for col in range(4):
            piv = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
            if piv is None:
                continue
            M[r], M[piv] = M[piv], M[r]
            sc = F.inv(M[r][col])
            M[r] = [F.mul(sc, v) for v in M[r]]
            for i in range(len(M)):
                if i != r and M[i][col] != 0:
                    c = M[i][col]
                    M[i] = [F.sub(v, F.mul(c, w)) for v, w in zip(M[i], M[r])]
            r += 1
        return r
