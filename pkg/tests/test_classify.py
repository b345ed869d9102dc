import numpy as np
import pytest

from qhv.classify import (Collineation, admissible_bc, apply_collineation,
                          are_equivalent, class_grouping, class_key,
                          class_representative, count_classes_bruteforce,
                          count_classes_formula, delta_invariant, delta_orbits,
                          find_collineation, frobenius_orbit, mobius_partials,
                          normalize_to_epsilon, stabilizer_order,
                          _shape_matrices)
from qhv.errors import DomainError, ParamError
from qhv.field import Field
from qhv.variety import build_point_set, validate_params


def all_valid_params(field, eps=None):
    out = []
    for alpha in range(1, field.order):
        for beta in range(field.order):
            if field.in_subfield(beta):
                continue
            try:
                out.append(validate_params(field, alpha, beta, eps=eps))
            except ParamError:
                pass
    return out


# ---------------------------------------------------------------- normalize

def test_normalize_beta_eps_is_stable(params5, gf25):
    nm = normalize_to_epsilon(params5)
    # beta1 = 1, the least norm-1 scalar is 1, so alpha is untouched
    assert (nm.alpha, nm.beta) == (params5.alpha, params5.beta)


def test_normalize_example(gf25):
    # beta = 2*eps + 1: beta1 = 2, least element of norm 2 is eps itself
    eps = gf25.eps
    p = validate_params(gf25, 1, gf25.add(gf25.mul(2, eps), 1))
    nm = normalize_to_epsilon(p)
    assert nm.beta == eps
    assert nm.alpha == gf25.div(1, gf25.mul(eps, eps))


def test_normalize_output_always_valid(gf25):
    for p in all_valid_params(gf25):
        nm = normalize_to_epsilon(p)  # would raise if invalid
        assert nm.beta == gf25.eps


# ---------------------------------------------------------------- delta

def test_delta_of_the_standard_pair(params5):
    # (eps^5 - eps)^2 = 3, norm(eps) = 2, delta = 3 / (4*2) = 1 in GF(5)
    assert delta_invariant(params5) == 1


def test_delta_range_q5(gf25):
    deltas = {delta_invariant(p) for p in all_valid_params(gf25)}
    assert deltas == {1, 2, 3}  # GF(5) minus {0, -1}, -1 = 4 excluded


def test_delta_q3_always_one(gf9):
    for p in all_valid_params(gf9):
        assert delta_invariant(p) == 1


def test_delta_closed_form_agrees_exhaustively(gf25):
    """delta computed directly on the raw pair, (beta^q-beta)^2/(4 norm a),
    equals the normalize-then-delta value."""
    F = gf25
    for p in all_valid_params(F):
        t = F.sub(F.conj(p.beta), p.beta)
        direct = F.div(F.mul(t, t), F.mul(4 % F.p, F.norm(p.alpha)))
        assert direct == delta_invariant(p)


def test_class_key_canonical_under_frobenius(gf81):
    f = gf81
    orb = frobenius_orbit(f, f.subfield[5])
    assert min(orb) == orb[0]
    for p, d in [(3, 2), (5, 2)]:
        field = Field(p, d)
        for x in field.subfield:
            if x in (0, field.neg(1)):
                continue
            o = frobenius_orbit(field, x)
            assert all(min(frobenius_orbit(field, y)) == o[0] for y in o)


# ---------------------------------------------------------------- equivalence

def test_are_equivalent_reflexive_and_by_key(gf25):
    eps = gf25.eps
    reps = [validate_params(gf25, class_representative(gf25, d), eps)
            for d in (1, 2, 3)]
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            assert are_equivalent(a, b) == (i == j)


def test_are_equivalent_frobenius_orbit_q9(gf81):
    # delta and delta^3 representatives are equivalent
    eps = gf81.eps
    d = next(x for x in gf81.subfield
             if x not in (0, 1, gf81.neg(1)))
    d3 = gf81.frob(d, 1)
    assert d3 != d
    p1 = validate_params(gf81, class_representative(gf81, d), eps)
    p2 = validate_params(gf81, class_representative(gf81, d3), eps)
    assert are_equivalent(p1, p2)


def test_are_equivalent_rejects_mixed_fields(gf25, gf9):
    p1 = validate_params(gf25, gf25.eps, gf25.eps)
    p2 = validate_params(gf9, gf9.eps, gf9.eps)
    with pytest.raises(ValueError):
        are_equivalent(p1, p2)


def test_key_invariant_under_generating_moves(gf25):
    """Applying (alpha, beta) -> (a a^s/(b^2+c^2), a b^s/(b^q+1+c^q+1) + u)
    for sampled admissible tuples never changes the class key."""
    F = gf25
    rng = np.random.default_rng(41)
    pool = admissible_bc(F)
    qs = [a for a in F.subfield if a != 0]
    base = validate_params(F, F.eps, F.eps)
    key = class_key(base).canonical
    for _ in range(60):
        b, c = pool[rng.integers(0, len(pool))]
        a = qs[rng.integers(0, len(qs))]
        u = F.subfield[rng.integers(0, len(F.subfield))]
        k = int(rng.integers(0, F.deg))
        bb_cc = F.add(F.mul(b, b), F.mul(c, c))
        nrm = F.add(F.norm(b), F.norm(c))
        alpha2 = F.div(F.mul(a, F.frob(base.alpha, k)), bb_cc)
        beta2 = F.add(F.div(F.mul(a, F.frob(base.beta, k)), nrm), u)
        moved = validate_params(F, alpha2, beta2)
        assert class_key(moved).canonical == key


def test_norm_square_identity_on_admissible_pairs(gf25):
    # (b^2+c^2)^(q+1) = (b^(q+1)+c^(q+1))^2 for every admissible (b, c)
    F = gf25
    for b, c in admissible_bc(F):
        lhs = F.norm(F.add(F.mul(b, b), F.mul(c, c)))
        rhs_root = F.add(F.norm(b), F.norm(c))
        assert lhs == F.mul(rhs_root, rhs_root)


# ---------------------------------------------------------------- search

def test_identity_witness(params5):
    c = find_collineation(params5, params5)
    assert c.sigma_exp == 0
    assert c.matrix == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


def test_witness_for_conjugate_scaling(gf25, space5, params5, M5):
    # (eps, eps) is equivalent to (eps*eps^(q-1), eps) = (eps^q, eps)
    p2 = validate_params(gf25, gf25.conj(gf25.eps), gf25.eps)
    c = find_collineation(params5, p2)
    assert c is not None
    M2 = build_point_set(space5, "M", p2)
    assert apply_collineation(space5, c, M5) == M2


def test_search_fails_between_classes(gf25):
    eps = gf25.eps
    p1 = validate_params(gf25, class_representative(gf25, 1), eps)
    p3 = validate_params(gf25, class_representative(gf25, 3), eps)
    assert find_collineation(p1, p3) is None


def test_apply_identity_and_flag_preservation(space5, M5, params5):
    ident = Collineation(0, ((1, 0, 0, 0), (0, 1, 0, 0),
                             (0, 0, 1, 0), (0, 0, 0, 1)))
    assert apply_collineation(space5, ident, M5) == M5
    theta = Collineation(0, ((1, 0, 0, 0), (0, 1, 0, 0),
                             (0, 0, space5.field.neg(1), 0), (0, 0, 0, 1)))
    img = apply_collineation(space5, theta, M5)
    assert img.mask[0]
    assert int(img.mask[:space5.inf_count].sum()) == \
        int(M5.mask[:space5.inf_count].sum())
    assert img == M5  # theta: (J,X,Y,Z) -> (J,X,-Y,Z) stabilizes M


# ---------------------------------------------------------------- counting

@pytest.mark.parametrize("p,n,want", [
    (3, 1, 1), (5, 1, 3), (7, 1, 5), (3, 2, 4), (5, 2, 13), (3, 3, 9)])
def test_count_formula_and_bruteforce(p, n, want):
    assert count_classes_formula(p, n) == want
    assert count_classes_bruteforce(Field(p, n)) == want


def test_count_formula_domain_errors():
    with pytest.raises(DomainError):
        count_classes_formula(2, 1)
    with pytest.raises(DomainError):
        count_classes_formula(9, 1)
    with pytest.raises(DomainError):
        count_classes_formula(5, 0)


def test_mobius_partials_consistency():
    # sum over divisors recovers p^e - 2, and N = sum N_e / e
    for p, n in ((3, 2), (5, 2), (3, 3)):
        parts = mobius_partials(p, n)
        for e in parts:
            assert sum(parts[d] for d in parts if e % d == 0) == p ** e - 2
        assert sum(parts[e] // e for e in parts) == count_classes_formula(p, n)


def test_class_grouping_q5(gf25):
    groups, invalid = class_grouping(gf25)
    assert len(groups) == 3
    assert invalid == 120
    assert sorted(g["size"] for g in groups.values()) == [120, 120, 120]
    assert sum(g["size"] for g in groups.values()) + invalid == 480


def test_modulus_independence_3_2():
    from qhv.field import default_modulus, is_irreducible
    p, n = 3, 2
    first = Field(p, n)
    # the next irreducible quartic after the default one
    start = sum(c * p ** i for i, c in enumerate(first.modulus[:-1])) + 1
    second = None
    for k in range(start, p ** (2 * n)):
        coeffs = []
        t = k
        for _ in range(2 * n):
            coeffs.append(t % p)
            t //= p
        coeffs.append(1)
        if is_irreducible(coeffs, p):
            second = Field(p, n, coeffs)
            break
    assert second is not None and second.modulus != first.modulus
    assert count_classes_bruteforce(first) == count_classes_bruteforce(second)
    sizes1 = sorted(len(o) for o in delta_orbits(first))
    sizes2 = sorted(len(o) for o in delta_orbits(second))
    assert sizes1 == sizes2 == [1, 2, 2, 2]


# ---------------------------------------------------------------- stabilizer

def test_stabilizer_order_counts_theta_and_identity(gf25, params5):
    F = gf25
    qsub = [a for a in F.subfield if a != 0]
    hits = set()
    for k in range(F.deg):
        a1 = F.frob(params5.alpha, k)
        b1 = F.frob(params5.beta, k)
        for b, c in admissible_bc(F):
            bb_cc = F.add(F.mul(b, b), F.mul(c, c))
            nrm = F.add(F.norm(b), F.norm(c))
            for a in qsub:
                if F.div(F.mul(a, a1), bb_cc) != params5.alpha:
                    continue
                if F.in_subfield(F.sub(params5.beta,
                                       F.div(F.mul(a, b1), nrm))):
                    for mat in _shape_matrices(a, b, c, F):
                        hits.add((k, mat))
    ident = (0, ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))
    theta = (0, ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, F.neg(1), 0),
                 (0, 0, 0, 1)))
    assert ident in hits
    assert theta in hits
    assert stabilizer_order(params5) == len(hits) * 5 ** 5


def test_stabilizer_requires_q1_mod4(params3):
    with pytest.raises(DomainError):
        stabilizer_order(params3)
