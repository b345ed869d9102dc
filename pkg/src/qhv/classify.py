"""Equivalence classification of the varieties.

Two parameter pairs give equivalent varieties iff one maps to the other
under (alpha, beta) -> (a*alpha^s / (b^2+c^2), a*beta^s / (b^(q+1)+c^(q+1)) + u)
with s a field automorphism, a in GF(q)*, u in GF(q) and (b, c) admissible
(b^2+c^2 nonzero; if both nonzero then c = lambda*b for lambda in GF(q)*
with lambda^2 != -1).  After normalizing beta to a fixed primitive eps, the
invariant delta = (eps^q - eps)^2 / (4 alpha^(q+1)) lies in GF(q) minus
{0, -1} and classifies varieties up to the Frobenius action delta -> delta^p.
The class count has the closed form  N = (1/n) * sum_{k|n} Phi(n/k) p^k - 2.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FieldError
from .field import _is_prime
from .variety import BMParams, PointSet, validate_params


@dataclass(frozen=True)
class Collineation:
    """Semilinear map P -> (P coordinatewise ^ p^sigma_exp) * matrix."""

    sigma_exp: int
    matrix: tuple  # 4x4, row-major tuples of field codes

    def to_json(self, field):
        return {"sigma_exp": self.sigma_exp,
                "matrix": [[list(field.coeffs(c)) for c in row]
                           for row in self.matrix]}


@dataclass(frozen=True)
class ClassKey:
    """delta and the least element of its Frobenius orbit."""

    delta: int
    canonical: int


def normalize_to_epsilon(params):
    """Equivalent parameters with beta equal to the distinguished eps.

    Writes beta = b0 + eps*b1 and rescales by the least b with norm b1.
    """
    F = params.field
    _, b1 = F.decompose(params.beta, params.eps)
    b = min(F.solve_norm(b1))
    alpha1 = F.div(params.alpha, F.mul(b, b))
    return validate_params(F, alpha1, params.eps, eps=params.eps)


def delta_invariant(params):
    """(eps^q - eps)^2 / (4 alpha'^(q+1)) of the normalized pair."""
    norm = normalize_to_epsilon(params)
    F = params.field
    t = F.sub(F.conj(norm.eps), norm.eps)
    return F.div(F.mul(t, t), F.mul(4 % F.p, F.norm(norm.alpha)))


def frobenius_orbit(field, x):
    """Orbit of x under y -> y^p, sorted ascending."""
    orbit = set()
    y = x
    while y not in orbit:
        orbit.add(y)
        y = field.frob(y, 1)
    return sorted(orbit)


def class_key(params):
    d = delta_invariant(params)
    return ClassKey(d, frobenius_orbit(params.field, d)[0])


def are_equivalent(p1, p2):
    if p1.field != p2.field:
        raise ValueError("parameters live in different fields")
    return class_key(p1).canonical == class_key(p2).canonical


def admissible_bc(field):
    """The (b, c) pairs of the collineation normal form, in canonical order:
    all (b, 0), then (0, c), then (b, lambda*b)."""
    out = [(b, 0) for b in range(1, field.order)]
    out += [(0, c) for c in range(1, field.order)]
    lams = [l for l in field.subfield
            if l != 0 and field.add(field.mul(l, l), 1) != 0]
    out += [(b, field.mul(l, b))
            for b in range(1, field.order) for l in lams]
    return out


def _bc_pool(field):
    if not hasattr(field, "_qhv_bc"):
        field._qhv_bc = admissible_bc(field)
    return field._qhv_bc


def _shape_matrices(a, b, c, field):
    """The two normal-form matrices for (a, b, c): Y-row (-c, b) then (c, -b)."""
    nb, nc = field.neg(b), field.neg(c)
    m_plus = ((a, 0, 0, 0), (0, b, c, 0), (0, nc, b, 0), (0, 0, 0, 1))
    m_minus = ((a, 0, 0, 0), (0, b, c, 0), (0, c, nb, 0), (0, 0, 0, 1))
    return m_plus, m_minus


def find_collineation(p1, p2):
    """Search the normal form for a map sending the first variety onto the
    second; None means the varieties are inequivalent.

    Enumeration order: automorphism exponent, then (b, c) in canonical
    order, then a; u is forced by the beta condition, so each tuple is
    tested once.  The first satisfying tuple wins.
    """
    if p1.field != p2.field:
        raise ValueError("parameters live in different fields")
    F = p1.field
    qsub = [a for a in F.subfield if a != 0]
    for k in range(F.deg):
        a1 = F.frob(p1.alpha, k)
        b1 = F.frob(p1.beta, k)
        for b, c in _bc_pool(F):
            bb_cc = F.add(F.mul(b, b), F.mul(c, c))
            nrm = F.add(F.norm(b), F.norm(c))
            for a in qsub:
                if F.div(F.mul(a, a1), bb_cc) != p2.alpha:
                    continue
                u = F.sub(p2.beta, F.div(F.mul(a, b1), nrm))
                if F.in_subfield(u):
                    return Collineation(k, _shape_matrices(a, b, c, F)[0])
    return None


def apply_collineation(space, coll, S):
    """Image point set under P -> (P^sigma) * matrix."""
    F = space.field
    M = coll.matrix
    if space.rank(M) != 4:
        raise FieldError("collineation matrix is singular")
    J, X, Y, Z = space.coords_table()
    cols = [F._frob[coll.sigma_exp % F.deg][c[S.indices]]
            for c in (J, X, Y, Z)]
    out = []
    for j in range(4):
        acc = None
        for i in range(4):
            if M[i][j] == 0:
                continue
            term = F.vmul(cols[i], M[i][j])
            acc = term if acc is None else F.vadd(acc, term)
        out.append(acc if acc is not None else np.zeros_like(cols[0]))
    idx = space.vindex_raw(*out)
    mask = np.zeros(space.n_points, dtype=bool)
    mask[idx] = True
    if int(mask.sum()) != len(S.indices):
        raise FieldError("collineation image collapsed points")
    return PointSet(space, mask, S.meta, S.unchecked)


def _totient(m):
    out, d, mm = m, 2, m
    while d * d <= mm:
        if mm % d == 0:
            out -= out // d
            while mm % d == 0:
                mm //= d
        d += 1
    if mm > 1:
        out -= out // mm
    return out


def count_classes_formula(p, n):
    """N = (1/n) * sum over k | n of Phi(n/k) p^k, minus 2."""
    if not _is_prime(p) or p == 2:
        raise DomainError(f"p must be an odd prime, got {p}")
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    total = sum(_totient(n // k) * p ** k for k in range(1, n + 1) if n % k == 0)
    assert total % n == 0
    return total // n - 2


def mobius_partials(p, n):
    """The per-degree counts N_e of delta values proper to GF(p^e), from
    Mobius inversion of sum_{e'|e} N_e' = p^e - 2 (debug cross-check)."""
    def mobius(m):
        out, d, cnt = 1, 2, m
        while d * d <= cnt:
            if cnt % d == 0:
                cnt //= d
                if cnt % d == 0:
                    return 0
                out = -out
            d += 1
        return -out if cnt > 1 else out
    parts = {}
    for e in range(1, n + 1):
        if n % e:
            continue
        parts[e] = sum(mobius(ep) * (p ** (e // ep) - 2)
                       for ep in range(1, e + 1) if e % ep == 0)
    return parts


def delta_orbits(field):
    """Frobenius orbits on GF(q) minus {0, -1}, as sorted tuples."""
    excluded = {0, field.neg(1)}
    seen = set()
    orbits = []
    for x in field.subfield:
        if x in excluded or x in seen:
            continue
        orb = frobenius_orbit(field, x)
        seen.update(orb)
        orbits.append(tuple(orb))
    return orbits


def count_classes_bruteforce(field):
    """Orbit count on GF(q) minus {0, -1}; must match the closed formula."""
    return len(delta_orbits(field))


def class_grouping(field, eps=None):
    """Group every raw (alpha, beta) pair by class key.

    Returns (groups, invalid_count) with groups mapping the canonical delta
    to {"size", "representative"}; the independent cross-check of the class
    count.
    """
    from .errors import ParamError
    groups = {}
    invalid = 0
    betas = [b for b in range(field.order) if not field.in_subfield(b)]
    for alpha in range(1, field.order):
        for beta in betas:
            try:
                params = validate_params(field, alpha, beta, eps=eps)
            except ParamError:
                invalid += 1
                continue
            key = class_key(params).canonical
            g = groups.setdefault(key, {"size": 0, "representative": None})
            if g["representative"] is None:
                g["representative"] = (alpha, beta)
            g["size"] += 1
    return groups, invalid


def class_representative(field, delta, eps=None):
    """Least alpha with M_(alpha, eps) having the given delta value."""
    if eps is None:
        eps = field.primitive_element()
    t = field.sub(field.conj(eps), eps)
    target = field.div(field.mul(t, t), field.mul(4 % field.p, delta))
    return min(field.solve_norm(target))


def stabilizer_order(params):
    """Order of the normal-form collineation group stabilizing the variety:
    distinct (sigma, matrix) pairs fixing (alpha, beta mod GF(q)), times q^5
    for the transitive affine action.

    Experimental: assumes affine transitivity and that origin-fixing
    stabilizer elements all take the normal form.
    """
    if params.q % 4 != 1:
        raise DomainError("stabilizer census implemented for q = 1 mod 4")
    F = params.field
    qsub = [a for a in F.subfield if a != 0]
    seen = set()
    for k in range(F.deg):
        a1 = F.frob(params.alpha, k)
        b1 = F.frob(params.beta, k)
        for b, c in _bc_pool(F):
            bb_cc = F.add(F.mul(b, b), F.mul(c, c))
            nrm = F.add(F.norm(b), F.norm(c))
            for a in qsub:
                if F.div(F.mul(a, a1), bb_cc) != params.alpha:
                    continue
                u = F.sub(params.beta, F.div(F.mul(a, b1), nrm))
                if not F.in_subfield(u):
                    continue
                for mat in _shape_matrices(a, b, c, F):
                    seen.add((k, mat))
    return len(seen) * params.q ** 5
