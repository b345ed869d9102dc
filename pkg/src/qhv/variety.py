"""The varieties B, F, M and the Hermitian reference H, as bitsets over points.

B is the affine-quadric-like variety

    Z^q J^q - Z J^(2q-1) + a^q (X^2q + Y^2q) - a (X^2+Y^2) J^(2q-2)
        = (b^q - b)(X^(q+1) + Y^(q+1)) J^(q-1)

for parameters (a, b) = (alpha, beta); its section with J=0 is the line pair
l1: X = nu*Y, l2: X = -nu*Y through P_inf = (0,0,0,1).  F is the Hermitian
cone X^(q+1) + Y^(q+1) = 0 inside J=0.  M glues the affine part of B to F and
is the two-character set this package studies.  H is the reference Hermitian
surface sum x_i^(q+1) = 0.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParamError

ALPHA_ZERO = "alpha_zero"
BETA_IN_SUBFIELD = "beta_in_subfield"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class BMParams:
    """A validated (alpha, beta) pair with its derived constants.

    eps is the primitive element used for normalization and delta values
    (least by default, overridable); nu is the least square root of -1.
    """

    field: object
    alpha: int
    beta: int
    eps: int
    nu: int
    unchecked: bool = False

    @property
    def q(self):
        return self.field.q

    def l1_span(self):
        return ((0, self.nu, 1, 0), (0, 0, 0, 1))

    def l2_span(self):
        return ((0, self.field.neg(self.nu), 1, 0), (0, 0, 0, 1))

    def to_json(self):
        F = self.field
        return {"p": F.p, "n": F.n, "modulus": list(F.modulus),
                "alpha": list(F.coeffs(self.alpha)),
                "beta": list(F.coeffs(self.beta)),
                "unchecked": self.unchecked}


def _check_eps(field, eps):
    m = field.mult_order
    from .field import _prime_factors
    if eps == 0 or any(field.pow(eps, m // r) == 1 for r in _prime_factors(m)):
        raise ParamError("epsilon_not_primitive",
                         f"configured epsilon {eps} does not generate GF(q^2)*")
    return eps


def validate_params(field, alpha, beta, eps=None):
    """Build BMParams, or raise ParamError naming the violated condition."""
    eps = field.primitive_element() if eps is None else _check_eps(field, eps)
    if alpha == 0:
        raise ParamError(ALPHA_ZERO, "alpha must be nonzero")
    if field.in_subfield(beta):
        raise ParamError(BETA_IN_SUBFIELD, "beta must lie outside GF(q)")
    t = field.sub(field.conj(beta), beta)
    val = field.add(field.mul(4 % field.p, field.norm(alpha)),
                    field.mul(t, t))
    if val == 0:
        raise ParamError(DEGENERATE,
                         "4*alpha^(q+1) + (beta^q-beta)^2 = 0")
    return BMParams(field, alpha, beta, eps, field.sqrt_minus_one())


def unchecked_params(field, alpha, beta, eps=None):
    """BMParams without the validity test, for negative experiments."""
    eps = field.primitive_element() if eps is None else _check_eps(field, eps)
    return BMParams(field, alpha, beta, eps, field.sqrt_minus_one(),
                    unchecked=True)


class PointSet:
    """Immutable bitset over point indices with provenance metadata."""

    __slots__ = ("space", "mask", "meta", "unchecked", "_card", "_indices")

    def __init__(self, space, mask, meta="other", unchecked=False):
        if mask.shape != (space.n_points,):
            raise ValueError("mask length must equal the point count")
        self.space = space
        self.mask = mask
        self.meta = meta
        self.unchecked = unchecked
        self._card = None
        self._indices = None

    @property
    def card(self):
        if self._card is None:
            self._card = int(np.count_nonzero(self.mask))
        return self._card

    @property
    def indices(self):
        if self._indices is None:
            self._indices = np.nonzero(self.mask)[0]
        return self._indices

    def __len__(self):
        return self.card

    def __contains__(self, idx):
        return bool(self.mask[idx])

    def __eq__(self, other):
        return (isinstance(other, PointSet)
                and self.space.field == other.space.field
                and np.array_equal(self.mask, other.mask))

    def __repr__(self):
        return f"PointSet({self.meta}, card={self.card})"


# -- vectorized membership kernels over coordinate columns --

def _eval_B(params, J, X, Y, Z):
    F = params.field
    q = F.q
    aq = F.conj(params.alpha)
    bd = F.sub(F.conj(params.beta), params.beta)
    t1 = F.vmul(F.vpow(Z, q), F.vpow(J, q))
    t2 = F.vmul(Z, F.vpow(J, 2 * q - 1))
    t3 = F.vmul(aq, F.vadd(F.vpow(X, 2 * q), F.vpow(Y, 2 * q)))
    x2y2 = F.vadd(F.vmul(X, X), F.vmul(Y, Y))
    t4 = F.vmul(params.alpha, F.vmul(x2y2, F.vpow(J, 2 * q - 2)))
    lhs = F.vadd(F.vsub(t1, t2), F.vsub(t3, t4))
    rhs = F.vmul(bd, F.vmul(F.vadd(F.vpow(X, q + 1), F.vpow(Y, q + 1)),
                            F.vpow(J, q - 1)))
    return F.vsub(lhs, rhs) == 0


def _eval_F(field, J, X, Y, Z):
    q = field.q
    return (J == 0) & (field.vadd(field.vpow(X, q + 1),
                                  field.vpow(Y, q + 1)) == 0)


def _eval_H(field, J, X, Y, Z):
    q = field.q
    s = field.vadd(field.vadd(field.vpow(J, q + 1), field.vpow(X, q + 1)),
                   field.vadd(field.vpow(Y, q + 1), field.vpow(Z, q + 1)))
    return s == 0


def _cols(pt):
    return tuple(np.array([c], dtype=np.int64) for c in pt)


def member_B(params, pt):
    return bool(_eval_B(params, *_cols(pt))[0])


def member_F(params, pt):
    return bool(_eval_F(params.field, *_cols(pt))[0])


def member_M(params, pt):
    if pt[0] != 0:
        return member_B(params, pt)
    return member_F(params, pt)


def member_M_affine_alt(params, pt):
    """Affine-only test: -a(x^2+y^2) + b(x^(q+1)+y^(q+1)) - z in GF(q)."""
    F = params.field
    q = F.q
    j, x, y, z = pt
    if j == 0:
        raise DomainError("point at infinity")
    ji = F.inv(j)
    x, y, z = F.mul(x, ji), F.mul(y, ji), F.mul(z, ji)
    w = F.add(F.mul(F.neg(params.alpha), F.add(F.mul(x, x), F.mul(y, y))),
              F.mul(params.beta, F.add(F.pow(x, q + 1), F.pow(y, q + 1))))
    return F.in_subfield(F.sub(w, z))


def build_point_set(space, which, params=None):
    """Materialize B, F, M (needs params) or the Hermitian reference H."""
    J, X, Y, Z = space.coords_table()
    if which == "H":
        return PointSet(space, _eval_H(space.field, J, X, Y, Z), "H")
    if params is None:
        raise ValueError(f"building {which} requires parameters")
    if params.field != space.field:
        raise ValueError("parameter field does not match the space")
    if which == "B":
        mask = _eval_B(params, J, X, Y, Z)
    elif which == "F":
        mask = _eval_F(params.field, J, X, Y, Z)
    elif which == "M":
        inf = J == 0
        mask = np.where(inf, _eval_F(params.field, J, X, Y, Z),
                        _eval_B(params, J, X, Y, Z))
    else:
        raise ValueError(f"unknown set tag {which!r}")
    return PointSet(space, mask, which, params.unchecked)


@dataclass
class OmegaPartition:
    """The stabilized decomposition of M: P_inf / B-infinity rest / affine /
    cone rest.  complete is False for q = 3 mod 4, where omega1 is empty and
    omega3 degenerates to F minus P_inf."""

    omega0: PointSet
    omega1: PointSet
    omega2: PointSet
    omega3: PointSet
    complete: bool

    def label_of(self):
        """Point index -> 0..3 label array (-1 outside M)."""
        lab = np.full(self.omega0.space.n_points, -1, dtype=np.int8)
        for k, part in enumerate(
                (self.omega0, self.omega1, self.omega2, self.omega3)):
            lab[part.mask] = k
        return lab


def omega_partition(space, params, M=None, B=None):
    if M is None:
        M = build_point_set(space, "M", params)
    if B is None:
        B = build_point_set(space, "B", params)
    n = space.n_points
    m0 = np.zeros(n, dtype=bool)
    m0[0] = True  # P_inf has index 0
    complete = params.q % 4 == 1
    m1 = np.zeros(n, dtype=bool)
    if complete:
        for span in (params.l1_span(), params.l2_span()):
            line = space.line_through(*span)
            m1[space.line_points(line)] = True
        m1[0] = False
    m2 = M.mask.copy()
    m2[:space.inf_count] = False
    m3 = M.mask & ~B.mask
    return OmegaPartition(
        PointSet(space, m0, "omega0"), PointSet(space, m1, "omega1"),
        PointSet(space, m2, "omega2"), PointSet(space, m3, "omega3"),
        complete)


@dataclass
class SpectrumReport:
    """Exact histogram of hyperplane section sizes of a point set."""

    histogram: dict
    two_character: bool
    expected_sizes: tuple
    total: int

    def to_json(self):
        return {"histogram": {str(k): v for k, v in
                              sorted(self.histogram.items())},
                "two_character": self.two_character,
                "expected_sizes": list(self.expected_sizes)}


def hyperplane_spectrum(space, S):
    """Count |S ∩ H| over every hyperplane H.

    Scans the points of S, incrementing a counter for each of the
    q^4+q^2+1 hyperplanes through the point; this costs |S| small scans
    instead of one pass per hyperplane.
    """
    counts = np.zeros(space.n_hyperplanes, dtype=np.int64)
    for i in S.indices:
        counts[space.hyperplanes_through(space.point_at(int(i)))] += 1
    sizes, freq = np.unique(counts, return_counts=True)
    hist = {int(a): int(b) for a, b in zip(sizes, freq)}
    q = space.field.q
    expected = (q ** 3 + 1, q ** 3 + q * q + 1)
    return SpectrumReport(hist, set(hist) == set(expected), expected,
                          space.n_hyperplanes)
