"""Class groups, unit groups and 2-Selmer groups of quadratic fields.

Ideal classes are handled through reduced ideals (equivalently reduced
binary quadratic forms).  A primitive ideal Z*a + Z*(B + sqrt d)/2 is
written as the pair (a, B).  The reduction step

    I = Z*a + Z*(B + sqrt d)/2  ->  I' = Z*|C| + Z*(-B + sqrt d)/2,
    C = (B^2 - d) / (4a),

satisfies I = (phi / C) * I' with phi = (B + sqrt d)/2, which lets every
reduction carry an explicit element relating the input to its reduced
representative.  Imaginary classes have a unique reduced ideal; real classes
have a cycle of them, and the smallest (a, B) on the cycle is used as key.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import mpmath

from .errors import CapacityError, DomainError
from .quadfield import QuadElement, QuadField, QuadIdeal, element
from .values import AnalyticValue

DEFAULT_BOUND = 10**4


class _Reducer:
    def __init__(self, K):
        self.K = K
        self.d = K.d
        self.T = K.T
        self.real = K.d > 0
        self.s = isqrt(K.d) if self.real else 0

    # ---- (a, B) <-> ideals

    def ideal(self, a, B):
        return QuadIdeal(self.K, a, ((B - self.T) // 2) % a, 1)

    def from_ideal(self, I):
        """(content, a, B) for an ideal given in HNF."""
        c = I.c
        return c, I.a // c, 2 * (I.b // c) + self.T

    # ---- reduction

    def normalize(self, a, B):
        if self.real and a <= self.s:
            return self.s - ((self.s - B) % (2 * a))
        r = (a - B) // (2 * a)
        return B + 2 * r * a

    def is_reduced(self, a, B):
        if self.real:
            s = self.s
            return 0 < B <= s and 2 * a + B > s and 2 * a - B <= s
        C = (B * B - self.d) // (4 * a)
        if not (-a < B <= a <= C):
            return False
        return B >= 0 or a != C

    def rho(self, a, B):
        """One reduction step; returns (a', B', multiplier) with I = mult * I'."""
        C = (B * B - self.d) // (4 * a)
        a2 = abs(C)
        B2 = self.normalize(a2, -B)
        phi = element(self.K, ((B - self.T) // 2, 1))
        return a2, B2, phi / C

    def reduce(self, I):
        """(a, B, gamma) with I = gamma * ideal(a, B), ideal(a, B) reduced."""
        c, a, B = self.from_ideal(I)
        gamma = self.K(c)
        B = self.normalize(a, B)
        while not self.is_reduced(a, B):
            a, B, m = self.rho(a, B)
            gamma = gamma * m
        return a, B, gamma

    def cycle(self, a, B):
        """Reduced ideals of the cycle starting at (a, B) with cumulative multipliers."""
        out = [(a, B, self.K(1))]
        gamma = self.K(1)
        a0, B0 = a, B
        while True:
            a, B, m = self.rho(a, B)
            gamma = gamma * m
            if (a, B) == (a0, B0):
                return out, gamma
            out.append((a, B, gamma))

    def key(self, I):
        """(key, gamma) with I = gamma * ideal(*key)."""
        a, B, gamma = self.reduce(I)
        if not self.real:
            return (a, B), gamma
        states, _ = self.cycle(a, B)
        ka, kB, g = min(states, key=lambda t: (t[0], t[1]))
        return (ka, kB), gamma * g

    def identity_key(self):
        return self.key(QuadIdeal.unit(self.K))[0]

    def all_keys(self):
        d = self.d
        if not self.real:
            out = []
            a = 1
            while 3 * a * a <= -d:
                for B in range(-a + 1, a + 1):
                    if (B - d) % 2:
                        continue
                    num = B * B - d
                    if num % (4 * a):
                        continue
                    C = num // (4 * a)
                    if C < a or (C == a and B < 0):
                        continue
                    out.append((a, B))
                a += 1
            return sorted(out)
        s = self.s
        reduced = []
        for B in range(1, s + 1):
            if (B - d) % 2:
                continue
            num = d - B * B
            for a in range(max(1, (s - B) // 2 + 1), (s + B) // 2 + 1):
                if num % (4 * a) == 0:
                    reduced.append((a, B))
        seen = set()
        keys = []
        for a, B in sorted(reduced):
            if (a, B) in seen:
                continue
            states, _ = self.cycle(a, B)
            cyc = [(x, y) for x, y, _ in states]
            seen.update(cyc)
            keys.append(min(cyc))
        return sorted(keys)


def _check_capacity(K, bound):
    if abs(K.d) > bound:
        raise CapacityError(f"|d| = {abs(K.d)} exceeds class group bound {bound}")


def class_number(d, bound=DEFAULT_BOUND):
    """Class number from reduced forms (imaginary) or reduced-ideal cycles (real)."""
    K = d if isinstance(d, QuadField) else QuadField(d)
    _check_capacity(K, bound)
    return len(_Reducer(K).all_keys())


# ---------------------------------------------------------------- units


def fundamental_unit(K):
    """Fundamental unit eps > 1 of a real quadratic field.

    The complete quotients of the continued fraction of the reduced number
    w + floor(-conj(w)) are multiplied over one period.
    """
    if K.d < 0:
        raise DomainError("imaginary quadratic fields have no fundamental unit")
    return _fundamental_unit(K)


@lru_cache(maxsize=None)
def _fundamental_unit(K):
    d, T = K.d, K.T
    s = isqrt(d)
    P0, Q0 = T + 2 * ((s - T) // 2), 2
    P, Q = P0, Q0
    eps = K(1)
    while True:
        eps = eps * QuadElement(K, Fraction(P - T, Q), Fraction(2, Q))
        a = (P + s) // Q
        P = a * Q - P
        Q = (d - P * P) // Q
        if (P, Q) == (P0, Q0):
            break
    if not eps.is_integral() or abs(eps.norm()) != 1:
        raise AssertionError(f"continued fraction produced a non-unit for d={d}")
    return eps


def unit_from_cycle(K):
    """Fundamental unit from one period of the principal reduced-ideal cycle."""
    if K.d < 0:
        raise DomainError("imaginary field")
    red = _Reducer(K)
    a, B, _ = red.reduce(QuadIdeal.unit(K))
    _, u = red.cycle(a, B)
    u = _positive_big(K, u)
    return u


def _embeddings(K, alpha, dps=40):
    """Both real embeddings of alpha, the larger one evaluated directly."""
    with mpmath.workdps(dps):
        r = mpmath.sqrt(K.d)
        w1 = (K.T + r) / 2
        w2 = (K.T - r) / 2
        x, y = mpmath.mpf(alpha.x.numerator) / alpha.x.denominator, mpmath.mpf(
            alpha.y.numerator
        ) / alpha.y.denominator
        v1 = x + y * w1
        v2 = x + y * w2
        n = mpmath.mpf(alpha.norm().numerator) / alpha.norm().denominator
        if abs(v1) >= abs(v2):
            v2 = n / v1
        else:
            v1 = n / v2
        return v1, v2


def _positive_big(K, u):
    """The associate of a unit u among {u, -u, 1/u, -1/u} that is > 1."""
    cands = [u, -u, u.conj() * u.norm(), -(u.conj() * u.norm())]
    for c in cands:
        v1, _ = _embeddings(K, c)
        if v1 > 1:
            return c
    raise AssertionError("no associate exceeds 1")


def balance(K, gamma):
    """Multiply gamma by a power of eps so that its two embeddings are comparable."""
    if K.d < 0:
        return gamma
    eps = fundamental_unit(K)
    v1, v2 = _embeddings(K, gamma)
    v1e, _ = _embeddings(K, eps)
    k = int(mpmath.nint((mpmath.log(abs(v2)) - mpmath.log(abs(v1))) / (2 * mpmath.log(v1e))))
    if k > 0:
        return gamma * eps**k
    if k < 0:
        inv = eps.conj() * eps.norm()
        return gamma * inv ** (-k)
    return gamma


@dataclass(frozen=True)
class UnitGroup:
    field: QuadField
    torsion: int
    fundamental: QuadElement = None
    regulator: AnalyticValue = None


def regulator(K, dps=30):
    eps = fundamental_unit(K)
    t = eps.trace()
    n = eps.norm()
    with mpmath.workdps(dps + 10):
        tt = mpmath.mpf(t.numerator) / t.denominator
        big = (tt + mpmath.sqrt(tt * tt - 4 * int(n))) / 2
        val = mpmath.log(big)
    with mpmath.workdps(dps):
        return AnalyticValue(+val, abs(val) * mpmath.mpf(10) ** (-dps + 2))


def torsion_order(K):
    return {-4: 4, -3: 6}.get(K.d, 2)


def unit_group(K):
    if K.d < 0:
        return UnitGroup(K, torsion_order(K))
    return UnitGroup(K, 2, fundamental_unit(K), regulator(K))


# ---------------------------------------------------------------- class groups


class ClassGroup:
    """Ideal class group with generators, discrete logs and principal generators."""

    def __init__(self, K):
        self.field = K
        self._red = _Reducer(K)
        self.keys = self._red.all_keys()
        self.order = len(self.keys)
        self.identity = self._red.identity_key()
        self._mul_memo = {}
        self._build_structure()
        self._build_generators()

    # -- group law on keys

    def key_ideal(self, key):
        return self._red.ideal(*key)

    def mul(self, k1, k2):
        if k1 > k2:
            k1, k2 = k2, k1
        memo = self._mul_memo
        if (k1, k2) not in memo:
            memo[(k1, k2)] = self._red.key(self.key_ideal(k1) * self.key_ideal(k2))[0]
        return memo[(k1, k2)]

    def power(self, k, n):
        out = self.identity
        for _ in range(n):
            out = self.mul(out, k)
        return out

    def _build_structure(self):
        e = self.identity
        sub = {e: ()}
        gens, orders = [], []
        while len(sub) < self.order:
            best = None
            for x in self.keys:
                if x in sub:
                    continue
                m, y = 1, x
                while y not in sub:
                    y = self.mul(y, x)
                    m += 1
                if best is None or m > best[0]:
                    best = (m, x)
            m, x = best
            g = None
            for hk in sorted(sub):
                cand = self.mul(x, hk)
                if self.power(cand, m) == e:
                    g = cand
                    break
            if g is None:
                raise AssertionError("no complement generator found")
            new = {}
            for k, vec in sub.items():
                y = k
                for j in range(m):
                    new[y] = vec + (j,)
                    y = self.mul(y, g)
            sub = new
            gens.append(g)
            orders.append(m)
        self.structure = tuple(orders)
        self.generator_keys = tuple(gens)
        self.generators = tuple(self.key_ideal(g) for g in gens)
        self._dlog = sub

    def _generator_of_product(self, factors):
        """Element delta with (delta) = prod key_ideal(k)^e, which must be principal."""
        K = self.field
        gamma = K(1)
        J = QuadIdeal.unit(K)
        for k, e in factors:
            Ik = self.key_ideal(k)
            for _ in range(e):
                a, B, g = self._red.reduce(J * Ik)
                gamma = gamma * g
                J = self._red.ideal(a, B)
        key, g = self._red.key(J)
        if key != self.identity:
            raise AssertionError("product is not principal")
        gamma = gamma * g
        return balance(K, gamma)

    def _build_generators(self):
        # eta_i generates g_i^{n_i}
        self.relations = tuple(
            self._generator_of_product([(g, n)])
            for g, n in zip(self.generator_keys, self.structure)
        )
        # delta_k generates I_k * prod g_i^{n_i - e_i(k)}
        self._delta = {}
        for k in self.keys:
            vec = self._dlog[k]
            factors = [(k, 1)] + [
                (g, (n - e) % n) for g, n, e in zip(self.generator_keys, self.structure, vec)
            ]
            self._delta[k] = self._generator_of_product(factors)

    # -- public queries

    def dlog(self, ideal):
        return self._dlog[self._red.key(ideal)[0]]

    def dlog_key(self, key):
        return self._dlog[key]

    def reduced_key(self, ideal):
        return self._red.key(ideal)

    def is_principal(self, ideal):
        return self._red.key(ideal)[0] == self.identity

    def principal_generator(self, ideal):
        """A generator of ideal if it is principal, else None."""
        key, gamma = self._red.key(ideal)
        if key != self.identity:
            return None
        return balance(self.field, gamma)

    def prime_relation(self, ideal):
        """(dlog vector, gamma) with (gamma) = ideal * prod g_i^{n_i - e_i}."""
        key, gamma = self._red.key(ideal)
        return self._dlog[key], balance(self.field, gamma * self._delta[key])

    @property
    def two_rank(self):
        return sum(1 for n in self.structure if n % 2 == 0)

    def __repr__(self):
        return f"ClassGroup(d={self.field.d}, h={self.order}, structure={self.structure})"


@lru_cache(maxsize=4096)
def _class_group(K):
    return ClassGroup(K)


def class_group(K, bound=DEFAULT_BOUND):
    _check_capacity(K, bound)
    return _class_group(K)


# ---------------------------------------------------------------- Selmer


@dataclass(frozen=True)
class Selmer2:
    field: QuadField
    basis: tuple
    sources: tuple = dc_field(default=())

    @property
    def rank(self):
        return len(self.basis)

    @property
    def order(self):
        return 2 ** len(self.basis)

    def elements(self):
        """All 2^rank products, indexed by bit pattern (bit j <-> basis[j])."""
        K = self.field
        out = [K(1)]
        for b in self.basis:
            out = out + [x * b for x in out]
        return out


def selmer2_basis(K, bound=DEFAULT_BOUND):
    """Basis of {beta : (beta) is a square ideal} modulo squares."""
    cg = class_group(K, bound)
    basis, sources = [], []
    if K.d == -4 or K.d == -3:
        basis.append(K.w)
        sources.append("torsion")
    else:
        basis.append(K(-1))
        sources.append("-1")
    if K.d > 0:
        basis.append(fundamental_unit(K))
        sources.append("eps")
    for g, n, eta in zip(cg.generator_keys, cg.structure, cg.relations):
        if n % 2 == 0:
            basis.append(eta)
            sources.append(f"class{g}")
    return Selmer2(K, tuple(basis), tuple(sources))
