"""Lines fully contained in a point set: enumeration and the per-point census.

The default scan exploits that every contained line meets the hyperplane at
infinity in a point of the set: for each such point P, lines through P are
parametrized by the points Q of a coordinate plane missing P, and candidates
are killed in bulk by testing the points Q + mu*P for increasing mu.  A full
scan over all canonical lines remains available as the oracle for small q.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvariantViolation
from .variety import build_point_set, omega_partition

OMEGA_LABELS = ("omega0", "omega1", "omega2", "omega3")
B_LABELS = ("p_inf", "b_inf", "affine")


def lines_through_point_in(space, mask, idx):
    """Canonical lines through point idx with all points inside mask."""
    F = space.field
    s = space.s
    if not mask[idx]:
        return []
    P = space.point_at(idx)
    k = next(i for i, c in enumerate(P) if c != 0)
    Jp, Xp, Yp, Zp, pidx = space.coord_plane(k)
    alive = mask[pidx]
    if not alive.any():
        return []
    cols = (Jp[alive], Xp[alive], Yp[alive], Zp[alive])
    for mu in range(1, s):
        sh = tuple(F.mul(mu, c) for c in P)
        moved = tuple(F.vadd(cols[i], sh[i]) for i in range(4))
        keep = mask[space.vindex_raw(*moved)]
        if not keep.all():
            cols = tuple(c[keep] for c in cols)
            if cols[0].size == 0:
                return []
    return [space.line_through(P, (int(a), int(b), int(c), int(d)))
            for a, b, c, d in zip(*cols)]


def _full_scan(space, mask):
    F = space.field
    s = space.s
    out = []
    for r0, r1 in space.lines():
        if not mask[space.index_of(r1)] or not mask[space.index_of(r0)]:
            continue
        ok = True
        for t in range(1, s):
            pt = (F.add(r0[0], F.mul(t, r1[0])), F.add(r0[1], F.mul(t, r1[1])),
                  F.add(r0[2], F.mul(t, r1[2])), F.add(r0[3], F.mul(t, r1[3])))
            if not mask[space.index_of(pt)]:
                ok = False
                break
        if ok:
            out.append((r0, r1))
    return out


def contained_lines(space, S, strategy="infinity", threads=1):
    """All canonical lines of PG(3,q^2) contained in S, sorted.

    strategy "infinity" scans only lines through S's points at infinity;
    "full" scans every line (oracle mode).
    """
    if strategy == "full":
        return sorted(_full_scan(space, S.mask))
    if strategy != "infinity":
        raise ValueError(f"unknown strategy {strategy!r}")
    inf_points = [int(i) for i in S.indices if i < space.inf_count]
    found = set()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            for res in ex.map(
                    lambda i: lines_through_point_in(space, S.mask, i),
                    inf_points):
                found.update(res)
    else:
        for i in inf_points:
            found.update(lines_through_point_in(space, S.mask, i))
    return sorted(found)


@dataclass
class LineCensus:
    """Contained lines of a set plus the per-point incidence counts."""

    lines: list
    line_pts: np.ndarray       # (n_lines, q^2+1) point indices
    per_point: np.ndarray      # counts over all of PG(3,q^2)
    profile: dict              # class label -> {line count: #points}
    double_count_ok: bool
    _at: dict = field(default=None, repr=False)

    def count_at(self, idx):
        return int(self.per_point[idx])

    def lines_at(self, idx):
        """Row numbers of the contained lines through a point."""
        if self._at is None:
            at = {}
            for row, pts in enumerate(self.line_pts):
                for i in pts:
                    at.setdefault(int(i), []).append(row)
            self._at = at
        return self._at.get(int(idx), [])

    def to_json(self):
        return {"lines": len(self.lines),
                "profile": {lab: {str(c): m for c, m in sorted(cnt.items())}
                            for lab, cnt in self.profile.items()},
                "double_count_ok": self.double_count_ok}


def _membership_labels(space, S, params, omegas=None):
    """Point index -> class label array for the census profile."""
    lab = np.full(space.n_points, -1, dtype=np.int8)
    if S.meta == "M" and params is not None:
        om = omegas or omega_partition(space, params, M=S)
        for k, part in enumerate((om.omega0, om.omega1, om.omega2, om.omega3)):
            lab[part.mask] = k
        return lab, OMEGA_LABELS
    if S.meta == "B" and params is not None:
        linf = np.zeros(space.n_points, dtype=bool)
        for span in (params.l1_span(), params.l2_span()):
            linf[space.line_points(space.line_through(*span))] = True
        lab[S.mask] = 2
        lab[linf & S.mask] = 1
        lab[0] = 0 if S.mask[0] else -1
        return lab, B_LABELS
    lab[S.mask] = 1
    lab[np.arange(space.n_points) < space.inf_count] = np.where(
        S.mask[:space.inf_count], 0, -1)
    return lab, ("infinity", "affine")


def line_census(space, S, params=None, omegas=None, lines=None, threads=1):
    """Per-point counts of contained lines, profiled by point class."""
    if lines is None:
        lines = contained_lines(space, S, threads=threads)
    m = space.s + 1
    if lines:
        lp = np.vstack([space.line_points(l) for l in lines])
    else:
        lp = np.empty((0, m), dtype=np.int64)
    per_point = np.zeros(space.n_points, dtype=np.int64)
    np.add.at(per_point, lp.ravel(), 1)
    labels, names = _membership_labels(space, S, params, omegas)
    profile = {}
    for k, name in enumerate(names):
        sel = labels == k
        if not sel.any():
            profile[name] = {}
            continue
        vals, freq = np.unique(per_point[sel], return_counts=True)
        profile[name] = {int(v): int(c) for v, c in zip(vals, freq)}
    ok = int(per_point.sum()) == len(lines) * m
    return LineCensus(list(lines), lp, per_point, profile, ok)


def pencil_check(space, params, L, S=None):
    """For an infinity point of B off P_inf (q = 1 mod 4): find its q+1
    contained lines and the single plane carrying them.

    Returns (plane dual tuple, verdict).
    """
    if params.q % 4 != 1:
        raise DomainError("pencil structure requires q = 1 mod 4")
    idx = L if isinstance(L, (int, np.integer)) else space.index_of(L)
    idx = int(idx)
    if idx == 0:
        raise DomainError("P_inf is not a pencil vertex")
    on_l = False
    for span in (params.l1_span(), params.l2_span()):
        pts = space.line_points(space.line_through(*span))
        on_l = on_l or idx in set(int(i) for i in pts)
    if not on_l:
        raise DomainError("point is not on l1 or l2")
    if S is None:
        S = build_point_set(space, "M", params)
    lines = lines_through_point_in(space, S.mask, idx)
    if len(lines) != params.q + 1:
        return None, False
    rows = [r for ln in lines for r in ln]
    try:
        plane = space.plane_through(rows)
    except Exception:
        return None, False
    return plane, True


def ri_incidence_check(space, params, P, S=None, census=None):
    """For an affine point of M (q = 1 mod 4): its two contained lines meet
    l1 and l2 away from P_inf; returns the two infinity points (l1 hit
    first)."""
    if params.q % 4 != 1:
        raise DomainError("requires q = 1 mod 4")
    idx = P if isinstance(P, (int, np.integer)) else space.index_of(P)
    idx = int(idx)
    if idx < space.inf_count:
        raise DomainError("point is at infinity")
    if S is None and census is None:
        S = build_point_set(space, "M", params)
    if census is not None:
        rows = census.lines_at(idx)
        pts_per_line = [census.line_pts[r] for r in rows]
    else:
        if not S.mask[idx]:
            raise DomainError("point is not in M")
        lines = lines_through_point_in(space, S.mask, idx)
        pts_per_line = [space.line_points(l) for l in lines]
    if len(pts_per_line) != 2:
        raise InvariantViolation(
            f"affine point {idx} lies on {len(pts_per_line)} contained lines, "
            "expected 2")
    l1_pts = set(int(i) for i in
                 space.line_points(space.line_through(*params.l1_span())))
    l2_pts = set(int(i) for i in
                 space.line_points(space.line_through(*params.l2_span())))
    hits = []
    for pts in pts_per_line:
        at_inf = [int(i) for i in pts if i < space.inf_count]
        if len(at_inf) != 1 or at_inf[0] == 0:
            raise InvariantViolation(
                f"contained line through {idx} has bad infinity section")
        hits.append(at_inf[0])
    if hits[0] in l1_pts and hits[1] in l2_pts:
        p1, p2 = hits
    elif hits[1] in l1_pts and hits[0] in l2_pts:
        p1, p2 = hits[1], hits[0]
    else:
        raise InvariantViolation(
            f"lines through {idx} do not hit l1 and l2 as claimed")
    return p1, p2
