"""Exact arithmetic in quadratic fields Q(sqrt d).

Elements are written x + y*w in the integral basis (1, w) with
w = (1 + sqrt d)/2 when d = 1 mod 4 and w = sqrt(d/4) otherwise, so that
w**2 = T*w - N with T = Tr(w), N = Nm(w).  Ideals are stored in Hermite
normal form [a, b + c*w] (c | a, c | b, 0 <= b < a).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import numpy as np
from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from .errors import DomainError


def is_squarefree(n):
    n = abs(n)
    if n == 0:
        return False
    return all(e == 1 for e in factorint(n).values())


def is_fundamental(d):
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def fundamental_discriminants(bound):
    """All fundamental discriminants with |d| <= bound, ordered by (|d|, d)."""
    if bound < 2:
        return []
    sf = np.ones(bound + 1, dtype=bool)
    sf[0] = False
    for p in range(2, isqrt(bound) + 1):
        sf[p * p :: p * p] = False
    n = np.arange(bound + 1)
    out = []
    # d = +-n with d = 1 mod 4 and n squarefree
    pos = n[(n % 4 == 1) & sf & (n > 1)]
    neg = n[(n % 4 == 3) & sf]
    # d = +-4m with m = 2,3 mod 4 squarefree, 4m <= bound
    m = n[: bound // 4 + 1]
    sfm = sf[: bound // 4 + 1]
    pos4 = 4 * m[((m % 4 == 2) | (m % 4 == 3)) & sfm]
    # -m = 2,3 mod 4  <=>  m = 2,1 mod 4
    neg4 = 4 * m[((m % 4 == 2) | (m % 4 == 1)) & sfm]
    out = np.concatenate([pos, -neg, pos4, -neg4]).astype(np.int64)
    order = np.lexsort((out, np.abs(out)))
    return [int(v) for v in out[order]]


def kronecker(a, n):
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = (n & -n).bit_length() - 1
    n >>= v
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def squarefree_part(q):
    """Signed squarefree kernel of a nonzero rational (as an int)."""
    q = Fraction(q)
    if q == 0:
        raise DomainError("zero has no squarefree part")
    num = abs(q.numerator) * q.denominator
    out = 1
    for p, e in ((int(q), k) for q, k in factorint(num).items()):
        if e % 2:
            out *= p
    return out if q > 0 else -out


def rational_sqrt(q):
    """Nonnegative rational square root of q, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def is_rational_square(q):
    return rational_sqrt(q) is not None


@dataclass(frozen=True)
class QuadField:
    d: int

    def __post_init__(self):
        if not is_fundamental(self.d):
            raise DomainError(f"{self.d} is not a fundamental discriminant")

    @property
    def T(self):
        return 1 if self.d % 4 == 1 else 0

    @property
    def N(self):
        return (1 - self.d) // 4 if self.d % 4 == 1 else -(self.d // 4)

    @property
    def r1(self):
        return 2 if self.d > 0 else 0

    @property
    def r2(self):
        return 0 if self.d > 0 else 1

    @property
    def is_real(self):
        return self.d > 0

    def __call__(self, x, y=0):
        return QuadElement(self, Fraction(x), Fraction(y))

    @property
    def w(self):
        return QuadElement(self, Fraction(0), Fraction(1))

    def sqrt_d(self):
        """sqrt(d) as an element: 2w - T."""
        return QuadElement(self, Fraction(-self.T), Fraction(2))

    def embed(self, elt):
        """Numerical value of an element under sqrt(d) -> +sqrt|d| (or +i sqrt|d|)."""
        s = complex(0, abs(self.d) ** 0.5) if self.d < 0 else abs(self.d) ** 0.5
        w = (self.T + s) / 2
        return float(elt.x) + float(elt.y) * w

    def __repr__(self):
        return f"QuadField({self.d})"


# Integer-coordinate helpers used on hot paths; (x, y) means x + y*w.


def imul(T, N, u, v):
    x1, y1 = u
    x2, y2 = v
    yy = y1 * y2
    return (x1 * x2 - N * yy, x1 * y2 + x2 * y1 + T * yy)


def inorm(T, N, u):
    x, y = u
    return x * x + T * x * y + N * y * y


def iconj(T, u):
    x, y = u
    return (x + T * y, -y)


@dataclass(frozen=True)
class QuadElement:
    field: QuadField
    x: Fraction
    y: Fraction

    def _coerce(self, other):
        if isinstance(other, QuadElement):
            return other
        return QuadElement(self.field, Fraction(other), Fraction(0))

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElement(self.field, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(self.field, -self.x, -self.y)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        K = self.field
        yy = self.y * o.y
        return QuadElement(
            K, self.x * o.x - K.N * yy, self.x * o.y + o.x * self.y + K.T * yy
        )

    __rmul__ = __mul__

    def conj(self):
        return QuadElement(self.field, self.x + self.field.T * self.y, -self.y)

    def norm(self):
        K = self.field
        return self.x * self.x + K.T * self.x * self.y + K.N * self.y * self.y

    def trace(self):
        return 2 * self.x + self.field.T * self.y

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        return QuadElement(self.field, c.x / n, c.y / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadElement(self.field, Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self):
        return self.x == 0 and self.y == 0

    def is_rational(self):
        return self.y == 0

    def is_integral(self):
        return self.x.denominator == 1 and self.y.denominator == 1

    def coords(self):
        """Integer coordinates (x, y); the element must be integral."""
        if not self.is_integral():
            raise DomainError("element is not integral")
        return (int(self.x), int(self.y))

    def __repr__(self):
        return f"({self.x} + {self.y}*w)[d={self.field.d}]"


def element(K, coords):
    return QuadElement(K, Fraction(coords[0]), Fraction(coords[1]))


def sqrt_in_field(alpha):
    """A square root of alpha in its field, or None.

    Among the two roots the one with x > 0 (or x == 0 and y >= 0) is returned.
    """
    if alpha.is_zero():
        raise DomainError("sqrt of zero requested")
    K = alpha.field
    beta = None
    n = alpha.norm()
    s = rational_sqrt(n)
    if s is not None:
        for m in (s, -s):
            t = rational_sqrt(alpha.trace() + 2 * m)
            if t:
                cand = (alpha + m) / t
                if cand * cand == alpha:
                    beta = cand
                    break
    if beta is None and alpha.is_rational():
        # roots of rational numbers with zero trace: r*sqrt(d)
        r = rational_sqrt(alpha.x / K.d)
        if r is not None:
            beta = K.sqrt_d() * r
    if beta is None:
        return None
    if beta.x < 0 or (beta.x == 0 and beta.y < 0):
        beta = -beta
    return beta


# ---------------------------------------------------------------- ideals


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hnf2(vectors):
    """HNF (a, b, c) of the full-rank lattice spanned by integer vectors."""
    a = b = c = 0
    for x, y in vectors:
        if y == 0 and c == 0:
            a = gcd(a, x)
            continue
        g, s, t = _xgcd(c, y)
        nb = s * b + t * x
        r = (y // g) * b - (c // g) * x
        a = gcd(a, r)
        b, c = nb, g
    if a == 0 or c == 0:
        raise DomainError("vectors do not span a full-rank lattice")
    return a, b % a, c


@dataclass(frozen=True)
class QuadIdeal:
    field: QuadField
    a: int
    b: int
    c: int

    @classmethod
    def from_generators(cls, K, gens):
        vecs = []
        for g in gens:
            if not isinstance(g, QuadElement):
                g = K(g)
            u = g.coords()
            vecs.append(u)
            vecs.append(imul(K.T, K.N, u, (0, 1)))
        return cls(K, *hnf2(vecs))

    @classmethod
    def principal(cls, alpha):
        if alpha.is_zero():
            raise DomainError("zero ideal")
        return cls.from_generators(alpha.field, [alpha])

    @classmethod
    def unit(cls, K):
        return cls(K, 1, 0, 1)

    def basis(self):
        return [(self.a, 0), (self.b, self.c)]

    def norm(self):
        return self.a * self.c

    def __mul__(self, other):
        K = self.field
        T, N = K.T, K.N
        u1, v1 = self.basis()
        u2, v2 = other.basis()
        vecs = [imul(T, N, p, q) for p in (u1, v1) for q in (u2, v2)]
        return QuadIdeal(K, *hnf2(vecs))

    def __pow__(self, k):
        out = QuadIdeal.unit(self.field)
        for _ in range(k):
            out = out * self
        return out

    def conj(self):
        K = self.field
        return QuadIdeal(K, *hnf2([iconj(K.T, u) for u in self.basis()]))

    def contains(self, alpha):
        if isinstance(alpha, QuadElement):
            if not alpha.is_integral():
                return False
            alpha = alpha.coords()
        x, y = alpha
        if y % self.c:
            return False
        return (x - self.b * (y // self.c)) % self.a == 0

    def __le__(self, other):
        """Containment self ⊆ other."""
        return all(other.contains(u) for u in self.basis())

    def is_unit(self):
        return self.a == 1 and self.c == 1

    def content(self):
        return self.c

    def label(self):
        return f"{self.a}.{self.b}.{self.c}"

    def __repr__(self):
        return f"QuadIdeal(d={self.field.d}, [{self.a}, {self.b} + {self.c}w])"


@lru_cache(maxsize=None)
def _roots_mod_p(T, N, p):
    """Roots of x^2 - T x + N mod p."""
    if p == 2:
        return sorted(r for r in (0, 1) if (r * r - T * r + N) % 2 == 0)
    disc = (T * T - 4 * N) % p
    inv2 = pow(2, -1, p)
    if disc == 0:
        return [T * inv2 % p]
    roots = sqrt_mod(disc, p, all_roots=True) or []
    return sorted({(T + s) * inv2 % p for s in roots})


def primes_above(K, p):
    """List of (prime ideal, e, f) above the rational prime p."""
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    return _primes_above(K, p)


@lru_cache(maxsize=65536)
def _primes_above(K, p):
    roots = _roots_mod_p(K.T, K.N, p)
    if not roots:
        return ((QuadIdeal(K, p, 0, p), 1, 2),)
    ideals = [QuadIdeal(K, p, (-r) % p, 1) for r in roots]
    if K.d % p == 0:
        return ((ideals[0], 2, 1),)
    return tuple((P, 1, 1) for P in ideals)


def splitting_type(K, p):
    """('split' | 'inert' | 'ramified', [prime ideals above p])."""
    primes = primes_above(K, p)
    if len(primes) == 2:
        kind = "split"
    elif primes[0][1] == 2:
        kind = "ramified"
    else:
        kind = "inert"
    return kind, [P for P, _, _ in primes]


def ideal_norm(ideal):
    return ideal.norm()


def ideal_valuation(ideal, prime):
    v = 0
    power = prime
    while ideal <= power:
        v += 1
        power = power * prime
    return v


def factor_ideal(ideal):
    """Prime factorisation as a sorted list of (prime ideal, exponent)."""
    n = ideal.norm()
    if n == 0:
        raise DomainError("zero ideal")
    out = []
    for p in sorted(map(int, factorint(n))):
        for P, _, _ in primes_above(ideal.field, p):
            v = ideal_valuation(ideal, P)
            if v:
                out.append((P, v))
    return out


def element_valuation(alpha, prime):
    """v_P(alpha) for a nonzero element (may be negative)."""
    if alpha.is_zero():
        raise DomainError("valuation of zero")
    den = alpha.x.denominator * alpha.y.denominator // gcd(
        alpha.x.denominator, alpha.y.denominator
    )
    num = alpha * den
    v_num = ideal_valuation(QuadIdeal.principal(num), prime)
    v_den = ideal_valuation(QuadIdeal.principal(alpha.field(den)), prime)
    return v_num - v_den
