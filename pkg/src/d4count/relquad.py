"""Quadratic extensions L = K(sqrt alpha) of a quadratic field K.

Square classes alpha are labelled by the squarefree ideal a with
(alpha) = a * c^2 together with coordinates in the 2-Selmer group.  The
finite relative discriminant is the odd part of a times a 2-adic factor
read off from the class of alpha in K_P^* / K_P^*2 for each P | 2.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt

from sympy import primerange

from .classgroup import DEFAULT_BOUND, class_group, selmer2_basis
from .errors import DomainError
from .quadfield import (
    QuadElement,
    QuadField,
    QuadIdeal,
    element,
    factor_ideal,
    imul,
    inorm,
    iconj,
    kronecker,
    primes_above,
    sqrt_in_field,
    squarefree_part,
)


class _Rationals:
    d = 1
    r1, r2 = 1, 0

    def __repr__(self):
        return "QQ"


QQ = _Rationals()


def _v2(n):
    n = abs(n)
    return (n & -n).bit_length() - 1


class LocalSquareClasses:
    """K_P^* / K_P^*2 for a prime P above 2, as bit vectors.

    Bit 0 is the parity of v_P; the remaining bits encode the unit part
    modulo squares, read from its residue modulo 8.
    """

    def __init__(self, K, P, e, f):
        self.K, self.P, self.e, self.f = K, P, e, f
        self.split = e == 1 and f == 1
        T, N = K.T, K.N
        if self.split:
            # O_P = Z_2 via w -> r, r the root of x^2 - T x + N with r = -b mod 2
            self._r0 = (-P.b) % 2
            self._roots = {1: self._r0}
            units = [(u, 0) for u in (1, 3, 5, 7)]
            self.reps = [(0, 0), (1, 0)]
        else:
            self.pi = None
            if e == 2:
                for cand in ((0, 1), (1, 1)):
                    if _v2(inorm(T, N, cand)) == 1:
                        self.pi = cand
                        break
            units = [
                (x, y) for x in range(8) for y in range(8) if inorm(T, N, (x, y)) % 2
            ]
            self.reps = [(0, 0), (1, 0), (0, 1), (1, 1)]
        self.units = units
        self._build_classes()

    # -- residues and valuations

    def _root(self, M):
        r = self._roots.get(M)
        if r is None:
            T, N = self.K.T, self.K.N
            k = max(m for m in self._roots if m <= M)
            r = self._roots[k]
            while k < M:
                k = min(2 * k, M)
                mod = 1 << k
                fr = (r * r - T * r + N) % mod
                dfr = (2 * r - T) % mod
                r = (r - fr * pow(dfr, -1, mod)) % mod
            self._roots[M] = r
        return r

    def _mul8(self, u, v):
        if self.split:
            return (u[0] * v[0] % 8, 0)
        x, y = imul(self.K.T, self.K.N, u, v)
        return (x % 8, y % 8)

    def _val(self, beta):
        """v_P of an integral element given by residues mod 8 (capped)."""
        if self.split:
            x = beta[0] % 8
            return 3 if x == 0 else _v2(x)
        x, y = beta[0] % 8, beta[1] % 8
        if x == 0 and y == 0:
            return 3 * self.e
        if self.e == 1:
            return min(_v2(x) if x else 3, _v2(y) if y else 3)
        return _v2(inorm(self.K.T, self.K.N, (x, y)))

    def _sq(self, z):
        return self._mul8(z, z)

    def _build_classes(self):
        lim = 2 * self.e + 1
        squares = {self._sq(z) for z in self.units}
        H = {
            u
            for u in self.units
            if any(self._val((u[0] - s[0], u[1] - s[1])) >= lim for s in squares)
        }
        coset = {}
        reps = []
        for u in sorted(self.units):
            if u in coset:
                continue
            idx = len(reps)
            reps.append(u)
            for h in H:
                coset[self._mul8(u, h)] = idx
        self._coset = coset
        self._coset_reps = reps
        # F_2 coordinates on the coset group
        one = coset[(1, 0)]
        span = {one: 0}
        nb = 0
        for u in reps:
            c = coset[u]
            if c in span:
                continue
            bit = 1 << nb
            nb += 1
            span.update(
                {coset[self._mul8(reps[k], u)]: v | bit for k, v in list(span.items())}
            )
        if len(span) != len(reps):
            raise AssertionError("unit square classes are not an F_2-space")
        self._unit_bits = {u: span[c] for u, c in coset.items()}
        self.unit_nbits = nb
        self.nbits = nb + 1
        # discriminant exponent for every class
        self.exponent = {}
        for u in reps:
            bits = self._unit_bits[u] << 1
            self.exponent[bits] = 2 * self.e - 2 * self._defect_t(u)
            self.exponent[bits | 1] = 2 * self.e + 1

    def _defect_t(self, u):
        """Largest t <= e with u = x^2 mod P^(2t) for some x in O/P^e."""
        best = 0
        for t in range(1, self.e + 1):
            if any(self._val((u[0] - s[0], u[1] - s[1])) >= 2 * t for s in map(self._sq, self.reps)):
                best = t
        return best

    def valuation_and_unit(self, u):
        """(v_P(alpha), residue mod 8 of alpha / pi^v) for integral alpha != 0."""
        x, y = u
        T, N = self.K.T, self.K.N
        if self.split:
            M = _v2(inorm(T, N, u)) + 4
            val = (x + y * self._root(M)) % (1 << M)
            v = _v2(val)
            return v, ((val >> v) % 8, 0)
        if self.e == 1:
            v = min(_v2(x) if x else 10**9, _v2(y) if y else 10**9)
            return v, ((x >> v) % 8, (y >> v) % 8)
        v = _v2(inorm(T, N, u))
        if v == 0:
            return 0, (x % 8, y % 8)
        pc = iconj(T, self.pi)
        num = u
        for _ in range(v):
            num = imul(T, N, num, pc)
        npi = inorm(T, N, self.pi)
        odd = npi >> 1
        den_inv = pow(odd**v, -1, 8)
        qx, qy = num[0] >> v, num[1] >> v
        return v, (qx * den_inv % 8, qy * den_inv % 8)

    def classify(self, u):
        v, unit = self.valuation_and_unit(u)
        return (self._unit_bits[unit] << 1) | (v & 1)


class TwoAdicData:
    """Combined square-class map at all primes above 2 and the disc table."""

    def __init__(self, K):
        self.K = K
        self.locals = [LocalSquareClasses(K, P, e, f) for P, e, f in primes_above(K, 2)]
        self.shifts = []
        sh = 0
        for loc in self.locals:
            self.shifts.append(sh)
            sh += loc.nbits
        self.nbits = sh
        self.disc_norm = []
        self.disc_exps = []
        for mask in range(1 << sh):
            nm = 1
            exps = []
            for loc, s in zip(self.locals, self.shifts):
                ex = loc.exponent[(mask >> s) & ((1 << loc.nbits) - 1)]
                exps.append(ex)
                nm *= (2**loc.f) ** ex
            self.disc_norm.append(nm)
            self.disc_exps.append(tuple(exps))

    def classify(self, u):
        mask = 0
        for loc, s in zip(self.locals, self.shifts):
            mask |= loc.classify(u) << s
        return mask


@lru_cache(maxsize=2048)
def two_adic_data(K):
    return TwoAdicData(K)


def _integral_coords(alpha):
    """Integer coordinates of alpha times a rational square."""
    den = alpha.x.denominator * alpha.y.denominator
    return (int(alpha.x * den * den), int(alpha.y * den * den))


def _rel_disc_over_q(a):
    a = Fraction(a)
    if a == 0:
        raise DomainError("alpha = 0")
    m = squarefree_part(a)
    if m == 1:
        raise DomainError("alpha is a square")
    return abs(m) if m % 4 == 1 else 4 * abs(m)


def relative_discriminant(K, alpha):
    """Disc(K(sqrt alpha)/K) as an ideal of O_K (a positive integer when K = QQ)."""
    if K is QQ:
        return _rel_disc_over_q(alpha)
    if not isinstance(alpha, QuadElement):
        alpha = K(alpha)
    if alpha.is_zero():
        raise DomainError("alpha = 0")
    if sqrt_in_field(alpha) is not None:
        raise DomainError("alpha is a square in K")
    u = _integral_coords(alpha)
    ideal = QuadIdeal.unit(K)
    for P, v in factor_ideal(QuadIdeal.from_generators(K, [element(K, u)])):
        if P.a % 2 and v % 2:
            ideal = ideal * P
    tad = two_adic_data(K)
    mask = tad.classify(u)
    for loc, ex in zip(tad.locals, tad.disc_exps[mask]):
        ideal = ideal * loc.P**ex
    return ideal


def tower_absolute_disc(d, rel_disc_norm):
    """|Disc(L/Q)| = Disc(K/Q)^2 * Nm(Disc(L/K))."""
    if isinstance(d, QuadField):
        d = d.d
    if rel_disc_norm < 1:
        raise DomainError("relative discriminant norm must be >= 1")
    return d * d * rel_disc_norm


@dataclass(frozen=True)
class RelExtension:
    base: QuadField
    coords: tuple
    factors: tuple  # ((prime ideal, exponent), ...) of the relative discriminant
    rel_disc_norm: int
    ideal_label: str
    selmer_bits: str

    @property
    def alpha(self):
        return element(self.base, self.coords)

    @cached_property
    def rel_disc(self):
        out = QuadIdeal.unit(self.base)
        for P, e in self.factors:
            out = out * P**e
        return out

    @property
    def norm_alpha(self):
        return inorm(self.base.T, self.base.N, self.coords)

    @property
    def abs_disc(self):
        """Signed discriminant of L/Q; the sign is that of Nm(alpha)."""
        n = tower_absolute_disc(self.base.d, self.rel_disc_norm)
        return n if self.norm_alpha > 0 else -n

    def sort_key(self):
        return (self.rel_disc_norm, self.ideal_label, self.selmer_bits)


class _FieldTables:
    """Per-field data for the enumeration: primes, relations, Selmer masks."""

    def __init__(self, K, bound):
        self.K = K
        self.cg = class_group(K, bound)
        self.sel = selmer2_basis(K, bound)
        self.tad = two_adic_data(K)
        T, N = K.T, K.N
        self.sel_coords = []
        self.sel_masks = []
        for s in self.sel.elements():
            c = _integral_coords(s)
            self.sel_coords.append(c)
            self.sel_masks.append(self.tad.classify(c))
        self.eta_coords = [_integral_coords(e) for e in self.cg.relations]
        self.eta_masks = [self.tad.classify(c) for c in self.eta_coords]
        self.structure = self.cg.structure
        self.two_primes = [self._prime_entry(P, e, f) for P, e, f in primes_above(K, 2)]
        self._odd = []
        self._odd_limit = 2

    def _prime_entry(self, P, e, f):
        vec, gamma = self.cg.prime_relation(P)
        c = gamma.coords()
        exps = tuple((n - x) % n for x, n in zip(vec, self.structure))
        weight = P.norm() ** (2 * e + 1) if P.a % 2 == 0 else P.norm()
        return (P.norm(), P.label(), P, exps, c, self.tad.classify(c), weight, e)

    def odd_primes(self, Y):
        # split/ramified primes are kept up to norm Y, inert ones up to p^2 <= Y
        if Y > self._odd_limit:
            K = self.K
            lo = self._odd_limit
            for p in primerange(max(3, lo + 1), Y + 1):
                if kronecker(K.d, p) == -1:
                    continue
                for P, e, f in primes_above(K, p):
                    self._odd.append(self._prime_entry(P, e, f))
            r = isqrt(Y)
            for p in primerange(max(3, isqrt(lo) + 1), r + 1):
                if kronecker(K.d, p) == -1:
                    for P, e, f in primes_above(K, p):
                        self._odd.append(self._prime_entry(P, e, f))
            self._odd.sort(key=lambda t: (t[0], t[1]))
            self._odd_limit = Y
        return [t for t in self._odd if t[0] <= Y]


@lru_cache(maxsize=64)
def _tables(K, bound):
    return _FieldTables(K, bound)


def enumerate_quadratic_extensions(K, Y, bound=DEFAULT_BOUND):
    """All quadratic extensions L/K (up to K-isomorphism) with Nm Disc(L/K) <= Y."""
    if Y < 1:
        return []
    tb = _tables(K, bound)
    T, N = K.T, K.N
    structure = tb.structure
    odd = tb.odd_primes(Y)
    sel_masks = tb.sel_masks
    disc_norm = tb.tad.disc_norm
    nsel = len(sel_masks)
    rank = tb.sel.rank
    out = []

    def emit(path, S, mask, odd_norm):
        kbits = []
        m0 = mask
        for i, n in enumerate(structure):
            s = S[i]
            if n % 2 == 0:
                if s % 2:
                    return
                k = s // n
            else:
                F = s * (n + 1) // 2 % n
                k = (s - 2 * F) // n
            if k % 2:
                m0 ^= tb.eta_masks[i]
                kbits.append(i)
        hits = []
        for j in range(nsel):
            if not path and j == 0:
                continue
            nm = odd_norm * disc_norm[m0 ^ sel_masks[j]]
            if nm <= Y:
                hits.append((j, nm, m0 ^ sel_masks[j]))
        if not hits:
            return
        base = (1, 0)
        for ent in path:
            base = imul(T, N, base, ent[4])
        for i in kbits:
            base = imul(T, N, base, tb.eta_coords[i])
        g = gcd(*base) if base != (0, 0) else 1
        # strip rational square factors to keep coordinates small
        sq = 1
        for p_ in (2, 3, 5, 7):
            while g % (p_ * p_) == 0:
                g //= p_ * p_
                sq *= p_
        if sq > 1:
            base = (base[0] // (sq * sq), base[1] // (sq * sq))
        label = "*".join(ent[1] for ent in sorted(path, key=lambda t: (t[0], t[1]))) or "1"
        odd_factors = [(ent[2], 1) for ent in path if ent[2].a % 2]
        for j, nm, fmask in hits:
            coords = imul(T, N, base, tb.sel_coords[j])
            exps = tb.tad.disc_exps[fmask]
            factors = tuple(
                sorted(
                    odd_factors
                    + [(loc.P, ex) for loc, ex in zip(tb.tad.locals, exps) if ex],
                    key=lambda t: (t[0].norm(), t[0].label()),
                )
            )
            bits = "".join("1" if (j >> b) & 1 else "0" for b in range(rank))
            out.append(RelExtension(K, coords, factors, nm, label, bits))

    def walk(start, path, S, mask, odd_norm, limit):
        emit(path, S, mask, odd_norm)
        for i in range(start, len(odd)):
            ent = odd[i]
            nn = odd_norm * ent[0]
            if nn > limit:
                break
            walk(
                i + 1,
                path + [ent],
                tuple(a + b for a, b in zip(S, ent[3])),
                mask ^ ent[5],
                nn,
                limit,
            )

    zero = tuple(0 for _ in structure)
    twos = tb.two_primes
    for sub in range(1 << len(twos)):
        chosen = [twos[i] for i in range(len(twos)) if (sub >> i) & 1]
        w = 1
        S = zero
        mask = 0
        for ent in chosen:
            w *= ent[6]
            S = tuple(a + b for a, b in zip(S, ent[3]))
            mask ^= ent[5]
        if w > Y:
            continue
        walk(0, chosen, S, mask, 1, Y // w)
    # the odd-norm walk used odd_norm only; the 2-part is in the table
    out.sort(key=RelExtension.sort_key)
    return out


def count_quadratic_extensions(K, Y, bound=DEFAULT_BOUND):
    return len(enumerate_quadratic_extensions(K, Y, bound))


def square_class_key(ext):
    return (ext.ideal_label, ext.selmer_bits)
