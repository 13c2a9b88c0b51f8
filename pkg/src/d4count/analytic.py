"""Residues and values of Dedekind zeta functions of quadratic fields, and the
D4 main-term constant.

Every number returned is an AnalyticValue; radii cover truncation and a
conservative floating-point rounding allowance.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import mpmath
import numpy as np
from sympy import factorint

from .classgroup import DEFAULT_BOUND, class_number, regulator, torsion_order
from .errors import CapacityError, DomainError
from .quadfield import QuadField, fundamental_discriminants, is_fundamental, primes_above
from .relquad import QQ
from .values import AnalyticValue

L_BOUND = 10**6

# Bernoulli numbers B_2, B_4, ..., B_16
_BERN = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
         Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510)]
_EM_SHIFT = 10  # terms summed directly before Euler-Maclaurin
_EM_TERMS = 7   # Bernoulli corrections used; the 8th bounds the remainder
_U = 2.0**-52


# ---------------------------------------------------------------- characters


def prime_discriminants(d):
    """The factorisation of a fundamental discriminant into prime discriminants."""
    if not is_fundamental(d):
        raise DomainError(f"{d} is not a fundamental discriminant")
    out = []
    m = abs(d)
    if m % 8 == 0:
        m //= 8
    elif m % 4 == 0:
        m //= 4
    for p in sorted(map(int, factorint(m))):
        out.append(p if p % 4 == 1 else -p)
    rest = d
    for q in out:
        rest //= q
    if rest != 1:
        out.insert(0, rest)  # -4, 8 or -8
    return out


def character_table(d):
    """numpy int8 array chi_d(a) for a = 0 .. |d|-1."""
    q = abs(d)
    a = np.arange(q, dtype=np.int64)
    chi = np.ones(q, dtype=np.int8)
    for pd in prime_discriminants(d):
        if pd == -4:
            tab = np.array([0, 1, 0, -1], dtype=np.int8)
            chi *= tab[a % 4]
        elif pd in (8, -8):
            tab = np.array([0, 1, 0, -1, 0, -1, 0, 1] if pd == 8 else [0, 1, 0, 1, 0, -1, 0, -1], dtype=np.int8)
            chi *= tab[a % 8]
        else:
            p = abs(pd)
            tab = -np.ones(p, dtype=np.int8)
            k = np.arange(1, p, dtype=np.int64)
            tab[(k * k) % p] = 1
            tab[0] = 0
            chi *= tab[a % p]
    return chi


# ---------------------------------------------------------------- L(2, chi)


def _hurwitz2_numpy(x):
    """zeta(2, x) for an array x in (0, 1], with a per-entry truncation bound."""
    M = _EM_SHIFT
    total = np.zeros_like(x)
    for k in range(M):
        total += 1.0 / (x + k) ** 2
    y = x + M
    total += 1.0 / y + 0.5 / y**2
    yp = y**3
    inv2 = 1.0 / (y * y)
    for j in range(_EM_TERMS):
        total += float(_BERN[j]) / yp
        yp = yp / inv2
    trunc = abs(float(_BERN[_EM_TERMS])) / y ** (2 * _EM_TERMS + 3)
    return total, trunc


def _hurwitz2_mp(x):
    M = _EM_SHIFT
    total = mpmath.fsum(1 / (x + k) ** 2 for k in range(M))
    y = x + M
    total += 1 / y + 1 / (2 * y**2)
    for j in range(_EM_TERMS):
        total += mpmath.mpf(_BERN[j].numerator) / _BERN[j].denominator / y ** (2 * j + 3)
    b = _BERN[_EM_TERMS]
    trunc = abs(mpmath.mpf(b.numerator) / b.denominator) / y ** (2 * _EM_TERMS + 3)
    return total, trunc


def dirichlet_L_at_2(d, dps=None, bound=L_BOUND):
    """L(2, chi_d) = |d|^-2 sum_a chi_d(a) zeta(2, a/|d|).

    dps=None uses float64 (radius about 1e-12 at |d| = 10^4); otherwise the
    sum is carried out in mpmath at dps decimal digits. d = 1 gives zeta(2).
    """
    if d == 1:
        with mpmath.workdps(dps or 30):
            return AnalyticValue.exact(mpmath.pi**2 / 6)
    q = abs(d)
    if q > bound:
        raise CapacityError(f"|d| = {q} exceeds L-value bound {bound}")
    chi = character_table(d)
    idx = np.nonzero(chi)[0]
    if dps is None:
        x = idx.astype(np.float64) / q
        z, trunc = _hurwitz2_numpy(x)
        terms = chi[idx] * z
        mid = float(np.sum(terms)) / (q * q)
        # every term is summed once; the absolute sum of |terms|/q^2 is <= zeta(2)
        abs_sum = float(np.sum(np.abs(terms))) / (q * q)
        round_err = (len(idx) + 4 * (_EM_SHIFT + _EM_TERMS) + 10) * _U * abs_sum
        rad = float(np.sum(trunc)) / (q * q) + round_err
        return AnalyticValue(mid, rad * 2)
    with mpmath.workdps(dps + 5):
        mid = mpmath.mpf(0)
        tr = mpmath.mpf(0)
        for a in idx.tolist():
            z, t = _hurwitz2_mp(mpmath.mpf(a) / q)
            mid += int(chi[a]) * z
            tr += t
        mid /= q * q
        tr /= q * q
        rad = tr + (len(idx) + 50) * mpmath.mpf(10) ** (-(dps + 4)) * 2
    with mpmath.workdps(dps):
        return AnalyticValue(mid, rad)


def dirichlet_L_at_1(d, dps=30):
    """L(1, chi_d) from the finite closed forms (independent of class groups)."""
    q = abs(d)
    chi = character_table(d)
    with mpmath.workdps(dps + 10):
        if d < 0:
            s = int(np.dot(chi.astype(np.int64), np.arange(q, dtype=np.int64)))
            val = -mpmath.pi * s / mpmath.mpf(q) ** 1.5
            rad = abs(val) * mpmath.mpf(10) ** (-dps)
        else:
            val = mpmath.mpf(0)
            for a in range(1, q // 2 + 1):
                c = int(chi[a])
                if c:
                    val += c * mpmath.log(mpmath.sin(mpmath.pi * a / q))
            val = -2 * val / mpmath.sqrt(q)  # chi even: a and q-a agree
            rad = q * mpmath.mpf(10) ** (-dps)
    with mpmath.workdps(dps):
        return AnalyticValue(+val, rad)


def analytic_class_number(K, dps=30):
    """h recovered from L(1, chi_d) and the unit data (an interval)."""
    L1 = dirichlet_L_at_1(K.d, dps)
    with mpmath.workdps(dps):
        if K.d < 0:
            f = AnalyticValue.exact(torsion_order(K) * mpmath.sqrt(-K.d) / (2 * mpmath.pi))
            return L1 * f
        return L1 * AnalyticValue.exact(mpmath.sqrt(K.d)) / (regulator(K, dps) * 2)


# ---------------------------------------------------------------- residues


def dedekind_zeta_residue(K, dps=30, bound=DEFAULT_BOUND):
    """Residue of zeta_K at s = 1 by the class number formula."""
    if K is QQ:
        return AnalyticValue.exact(1)
    h = class_number(K, bound)
    with mpmath.workdps(dps):
        if K.d < 0:
            return AnalyticValue.exact(2 * mpmath.pi * h / (torsion_order(K) * mpmath.sqrt(-K.d)))
        R = regulator(K, dps)
        return R * AnalyticValue.exact(2 * h / mpmath.sqrt(K.d))


def zeta2(dps=30):
    with mpmath.workdps(dps):
        return AnalyticValue.exact(mpmath.pi**2 / 6)


def dedekind_zeta_at_2(K, dps=None):
    if K is QQ:
        return zeta2()
    return zeta2() * dirichlet_L_at_2(K.d, dps)


def rel_quadratic_density(K, dps=None):
    """Density 2^-r2 zeta_K(1) / zeta_K(2) of quadratic extensions of K."""
    if K is QQ:
        return zeta2().inverse()
    res = dedekind_zeta_residue(K)
    return res / dedekind_zeta_at_2(K, dps) * Fraction(1, 2**K.r2)


# ---------------------------------------------------------------- the 2-adic lemma


@dataclass(frozen=True)
class SplittingShape:
    """Factorisation pattern of 2 O_E as a tuple of (f, e) pairs."""

    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise DomainError("empty shape")
        for f, e in self.parts:
            if int(f) != f or int(e) != e or f < 1 or e < 1:
                raise DomainError(f"bad (f, e) = {(f, e)}")
        object.__setattr__(self, "parts", tuple(sorted((int(f), int(e)) for f, e in self.parts)))

    @property
    def degree(self):
        return sum(f * e for f, e in self.parts)

    @classmethod
    def of_field(cls, K):
        if K is QQ:
            return cls(((1, 1),))
        return cls(tuple((f, e) for _, e, f in primes_above(K, 2)))


def all_shapes(n):
    """Every splitting shape of total degree n."""
    pairs = [(f, e) for f in range(1, n + 1) for e in range(1, n + 1) if f * e <= n]
    out = set()

    def rec(start, left, acc):
        if left == 0:
            out.add(SplittingShape(tuple(acc)))
            return
        for i in range(start, len(pairs)):
            f, e = pairs[i]
            if f * e <= left:
                rec(i, left - f * e, acc + [(f, e)])

    rec(0, n, [])
    return sorted(out, key=lambda s: s.parts)


def residue_lemma_terms(shape):
    """Nm(2/c)^-1 prod_{p | c} (1 - Nm p^-1) for each c | 2 O_E, exactly."""
    if not isinstance(shape, SplittingShape):
        shape = SplittingShape(tuple(shape))
    n = shape.degree
    terms = []
    for ks in product(*[range(e + 1) for _, e in shape.parts]):
        nm_c = 1
        local = Fraction(1)
        for (f, _), k in zip(shape.parts, ks):
            nm_c *= 2 ** (f * k)
            if k:
                local *= 1 - Fraction(1, 2**f)
        terms.append(Fraction(nm_c, 2**n) * local)
    return terms


def residue_lemma_sum(shape):
    return sum(residue_lemma_terms(shape), Fraction(0))


# ---------------------------------------------------------------- the constant


def d4_term(d, dps=None):
    """2^(-r2-1) d^-2 zeta_K(1) / zeta_K(2) for the field of discriminant d."""
    K = QuadField(d)
    dens = rel_quadratic_density(K, dps)
    return dens * Fraction(1, 2 * d * d)


def d4_term_residue_form(d, dps=None):
    """The same term with the explicit sum over c | 2 O_K kept in place."""
    K = QuadField(d)
    res = dedekind_zeta_residue(K)
    z2 = dedekind_zeta_at_2(K, dps)
    lemma = residue_lemma_sum(SplittingShape.of_field(K))
    return res / z2 * Fraction(1, 2**K.r2 * d * d) * (Fraction(1, 2) * lemma)


@lru_cache(maxsize=8)
def _partial_sums(D0, dps):
    ds = fundamental_discriminants(D0)
    terms = [d4_term(int(d), dps) for d in ds]
    return tuple(int(d) for d in ds), tuple(terms)


def d4_constant(D0, dps=None, check_residue_form=False, bound=DEFAULT_BOUND):
    """Partial sum of the D4 constant over |d| <= D0, plus a heuristic tail.

    The tail is C * D0^-1/2 with C fitted to the partial sums at D0/10 and D0
    (reported only, never added to the radius).
    """
    if D0 > bound:
        raise CapacityError(f"truncation {D0} exceeds class group bound {bound}")
    if D0 < 3:
        return AnalyticValue(0, 0), 0.0
    ds, terms = _partial_sums(D0, dps)
    total = AnalyticValue(0, 0)
    cut = max(3, D0 // 10)
    low = None
    for d, t in zip(ds, terms):
        if low is None and abs(d) > cut:
            low = total
        total = total + t
        if check_residue_form:
            alt = d4_term_residue_form(d, dps)
            if not alt.overlaps(t):
                raise AssertionError(f"residue form disagrees at d={d}")
    tail = 0.0
    if low is not None and D0 >= 30:
        # S(D0) - S(D0/10) ~ C (cut^-1/2 - D0^-1/2)
        diff = float(total.mid - low.mid)
        C = diff / (cut**-0.5 - D0**-0.5)
        tail = C * D0**-0.5
    return total, tail


def d4_constant_terms(D0, dps=None):
    """(d, term) pairs in summation order."""
    ds, terms = _partial_sums(D0, dps)
    return list(zip(ds, terms))
