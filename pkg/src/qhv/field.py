"""Exact arithmetic in GF(q^2), q = p^n odd.

An element with coefficient vector (c0, ..., c_{2n-1}) over the power basis
of the modulus root is encoded as the integer code sum(c_i * p^i).  The code
order is the canonical total order used whenever a "least" element is chosen.
Scalar operations take and return plain ints; the v-prefixed variants operate
elementwise on numpy integer arrays (all multiplicative structure is table
backed, so bulk operations are pure indexing).

GF(q) is the fixed field of x -> x^q inside GF(q^2); there is no separate
subfield type.
"""

from itertools import zip_longest

import numpy as np

from .errors import FieldError


def _is_prime(m):
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def _prime_factors(m):
    """Distinct prime factors of m."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# -- polynomials over GF(p): coefficient lists, constant term first, trimmed --

def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _ptrim(out)


def _pmod(f, m, p):
    """Remainder of f modulo a monic m."""
    f = list(f)
    dm = len(m) - 1
    while len(f) > dm:
        c = f[-1]
        if c:
            off = len(f) - 1 - dm
            for i in range(dm):
                f[off + i] = (f[off + i] - c * m[i]) % p
        f.pop()
    return _ptrim(f)


def _psub(f, g, p):
    return _ptrim([(a - b) % p for a, b in zip_longest(f, g, fillvalue=0)])


def _ppowmod(f, e, m, p):
    r = [1]
    b = _pmod(f, m, p)
    while e:
        if e & 1:
            r = _pmod(_pmul(r, b, p), m, p)
        b = _pmod(_pmul(b, b, p), m, p)
        e >>= 1
    return r


def _pgcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        inv = pow(g[-1], p - 2, p)
        gm = [(c * inv) % p for c in g]
        f, g = gm, _pmod(f, gm, p)
    return f


def is_irreducible(coeffs, p):
    """Rabin test for a monic polynomial over GF(p) (constant term first)."""
    f = _ptrim(list(coeffs))
    d = len(f) - 1
    if d < 1 or f[-1] != 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p ** d, f, p), x, p):
        return False
    for r in _prime_factors(d):
        g = _pgcd(f, _psub(_ppowmod(x, p ** (d // r), f, p), x, p), p)
        if len(g) != 1:
            return False
    return True


def default_modulus(p, deg):
    """Least monic irreducible polynomial of the given degree over GF(p).

    Candidates are ordered by the canonical code of their non-leading
    coefficient list, so the choice is deterministic.
    """
    for k in range(p ** deg):
        coeffs, t = [], k
        for _ in range(deg):
            coeffs.append(t % p)
            t //= p
        coeffs.append(1)
        if is_irreducible(coeffs, p):
            return coeffs
    raise FieldError(f"no irreducible polynomial of degree {deg} over GF({p})")


class Field:
    """GF(q^2) with q = p^n odd, table-backed exact arithmetic on int codes."""

    def __init__(self, p, n, modulus=None):
        if not _is_prime(p) or p == 2:
            raise FieldError(f"p must be an odd prime, got {p}")
        if n < 1:
            raise FieldError(f"n must be a positive integer, got {n}")
        self.p = int(p)
        self.n = int(n)
        self.q = p ** n
        self.order = self.q * self.q
        self.deg = 2 * n
        if modulus is None:
            modulus = default_modulus(p, self.deg)
        else:
            modulus = [int(c) for c in modulus]
            if len(modulus) != self.deg + 1 or modulus[-1] != 1 \
                    or any(not 0 <= c < p for c in modulus):
                raise FieldError(
                    "modulus must be monic of degree 2n with coefficients in "
                    "[0, p), constant term first")
            if not is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.modulus = tuple(modulus)
        self.mult_order = self.order - 1
        self._build_tables()

    # -- bootstrap arithmetic (polynomial based, used only to build tables) --

    def _boot_mul(self, a, b):
        prod = _pmod(_pmul(self.coeffs_list(a), self.coeffs_list(b), self.p),
                     list(self.modulus), self.p)
        return self.from_coeffs(prod)

    def _boot_pow(self, a, e):
        r, b = 1, a
        while e:
            if e & 1:
                r = self._boot_mul(r, b)
            b = self._boot_mul(b, b)
            e >>= 1
        return r

    def _build_tables(self):
        p, n, q, m = self.p, self.n, self.q, self.mult_order
        # least primitive element, found by order testing
        primes = _prime_factors(m)
        eps = None
        for c in range(2, self.order):
            if all(self._boot_pow(c, m // r) != 1 for r in primes):
                eps = c
                break
        if eps is None:
            raise FieldError("no primitive element found (corrupt modulus?)")
        self.eps = eps

        exp = np.empty(m, dtype=np.int64)
        exp[0] = 1
        for k in range(1, m):
            exp[k] = self._boot_mul(int(exp[k - 1]), eps)
        log = np.zeros(self.order, dtype=np.int64)
        log[exp] = np.arange(m)
        self._exp, self._log = exp, log

        # digitwise addition of the two n-digit halves of a code
        aa = np.arange(q, dtype=np.int64)
        addq = np.zeros((q, q), dtype=np.int64)
        pw = 1
        for _ in range(n):
            da = (aa // pw) % p
            addq += ((da[:, None] + da[None, :]) % p) * pw
            pw *= p
        self._addq = addq
        codes = np.arange(self.order, dtype=np.int64)
        negq = addq[0] * 0
        pw = 1
        for _ in range(n):
            negq += ((p - (aa // pw) % p) % p) * pw
            pw *= p
        self._neg = negq[codes // q] * q + negq[codes % q]

        inv = np.zeros(self.order, dtype=np.int64)
        inv[exp] = exp[(m - np.arange(m)) % m]
        self._inv = inv

        frob = [codes]
        for k in range(1, self.deg):
            frob.append(self.vpow(codes, p ** k))
        self._frob = frob
        self._conj = frob[n]
        self._norm = self.vmul(codes, self._conj)
        self._trace = self.vadd(codes, self._conj)
        self._sub = self._conj == codes
        self.subfield = [int(x) for x in np.nonzero(self._sub)[0]]

        # plain-list copies for the scalar fast path
        self._exp_l = exp.tolist()
        self._log_l = log.tolist()
        self._inv_l = inv.tolist()
        self._neg_l = self._neg.tolist()
        self._addq_l = addq.tolist()
        self._conj_l = self._conj.tolist()
        self._norm_l = self._norm.tolist()
        self._trace_l = self._trace.tolist()
        self._sub_l = self._sub.tolist()
        self._nu = None

    # -- vectorized operations (numpy arrays of codes; scalars broadcast) --

    def vadd(self, x, y):
        q = self.q
        return self._addq[x // q, y // q] * q + self._addq[x % q, y % q]

    def vneg(self, x):
        return self._neg[x]

    def vsub(self, x, y):
        return self.vadd(x, self._neg[y])

    def vmul(self, x, y):
        r = self._exp[(self._log[x] + self._log[y]) % self.mult_order]
        return np.where((x == 0) | (y == 0), 0, r)

    def vinv(self, x):
        return self._inv[x]

    def vpow(self, x, e):
        if e == 0:
            return np.ones_like(x)
        r = self._exp[(self._log[x] * e) % self.mult_order]
        return np.where(x == 0, 0, r)

    def vconj(self, x):
        return self._conj[x]

    def vnorm(self, x):
        return self._norm[x]

    def vtrace(self, x):
        return self._trace[x]

    # -- scalar operations --

    def add(self, x, y):
        q = self.q
        return self._addq_l[x // q][y // q] * q + self._addq_l[x % q][y % q]

    def neg(self, x):
        return self._neg_l[x]

    def sub(self, x, y):
        return self.add(x, self._neg_l[y])

    def mul(self, x, y):
        if x == 0 or y == 0:
            return 0
        return self._exp_l[(self._log_l[x] + self._log_l[y]) % self.mult_order]

    def inv(self, x):
        if x == 0:
            raise FieldError("division by zero")
        return self._inv_l[x]

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, e):
        if e < 0:
            raise FieldError("negative exponent")
        if e == 0:
            return 1
        if x == 0:
            return 0
        return self._exp_l[(self._log_l[x] * e) % self.mult_order]

    def conj(self, x):
        return self._conj_l[x]

    def frob(self, x, k):
        """x ** (p**k); k is taken mod 2n."""
        return int(self._frob[k % self.deg][x])

    def norm(self, x):
        return self._norm_l[x]

    def trace(self, x):
        return self._trace_l[x]

    def in_subfield(self, x):
        return self._sub_l[x]

    # -- distinguished elements and special solvers --

    def primitive_element(self):
        """Least generator of the multiplicative group (deterministic)."""
        return self.eps

    def sqrt_minus_one(self):
        """Least nu with nu^2 = -1 (exists for every odd q)."""
        if self._nu is None:
            codes = np.arange(self.order, dtype=np.int64)
            sq = self.vmul(codes, codes)
            hits = np.nonzero(sq == self.neg(1))[0]
            self._nu = int(hits[0])
        return self._nu

    def solve_q_linear(self, a, b):
        """All roots of X^q + a X + b = 0 in GF(q^2), by exhaustive scan."""
        x = np.arange(self.order, dtype=np.int64)
        lhs = self.vadd(self.vadd(self._conj, self.vmul(a, x)), b)
        return [int(r) for r in np.nonzero(lhs == 0)[0]]

    def solve_norm(self, c):
        """All x with x^(q+1) = c, for c in GF(q)."""
        if not self.in_subfield(c):
            raise FieldError("norm equation target must lie in GF(q)")
        return [int(r) for r in np.nonzero(self._norm == c)[0]]

    def decompose(self, x, eps):
        """Write x = x0 + eps*x1 with x0, x1 in GF(q); needs eps outside GF(q)."""
        if self.in_subfield(eps):
            raise FieldError("decomposition basis element lies in GF(q)")
        x1 = self.div(self.sub(x, self.conj(x)), self.sub(eps, self.conj(eps)))
        x0 = self.sub(x, self.mul(eps, x1))
        return x0, x1

    # -- encoding helpers --

    def coeffs_list(self, x):
        out, t = [], x
        for _ in range(self.deg):
            out.append(t % self.p)
            t //= self.p
        return _ptrim(out)

    def coeffs(self, x):
        """Coefficient vector of length 2n, constant term first."""
        out, t = [], x
        for _ in range(self.deg):
            out.append(t % self.p)
            t //= self.p
        return tuple(out)

    def from_coeffs(self, cs):
        cs = list(cs)
        if len(cs) > self.deg:
            raise FieldError(f"too many coefficients (max {self.deg})")
        code, pw = 0, 1
        for c in cs:
            if not 0 <= c < self.p:
                raise FieldError(f"coefficient {c} outside [0, {self.p})")
            code += c * pw
            pw *= self.p
        return code

    def elements(self):
        return range(self.order)

    @property
    def spec_key(self):
        return (self.p, self.n, self.modulus)

    def spec_json(self):
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec_key == other.spec_key

    def __hash__(self):
        return hash(self.spec_key)

    def __repr__(self):
        return f"Field(p={self.p}, n={self.n}, modulus={list(self.modulus)})"
