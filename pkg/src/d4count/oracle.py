"""Brute-force verifiers independent of the tower machinery.

* maximal_order_disc: Round 2 (p-radical / multiplier ring) for quartic orders.
* resolvent_cubic_galois: Galois group of a quartic from its resolvent cubic.
* naive_selmer_enum: square classes of small elements, deduplicated by hand.
"""

from dataclasses import dataclass
from fractions import Fraction

from sympy import Poly, factorint, symbols
from sympy.polys.galoistools import gf_gcd, gf_quo, gf_sqf_list, gf_sub, gf_mul
from sympy.polys.domains import ZZ

from .errors import CapacityError, DomainError
from .quadfield import QuadField, element, is_rational_square, sqrt_in_field, squarefree_part

_x = symbols("x")


def _poly(coeffs):
    return Poly(list(coeffs), _x, domain="ZZ")


def _check_quartic(coeffs):
    coeffs = [int(c) for c in coeffs]
    if len(coeffs) != 5 or coeffs[0] != 1:
        raise DomainError("expected a monic quartic (5 coefficients, leading 1)")
    if not _poly(coeffs).is_irreducible:
        raise DomainError("polynomial is reducible over Q")
    return coeffs


def poly_discriminant(coeffs):
    return int(_poly(coeffs).discriminant())


# ---------------------------------------------------------------- linear algebra


def _hnf_rows(rows):
    """Row-style HNF basis of the Z-lattice spanned by integer rows (full rank)."""
    rows = [list(r) for r in rows if any(r)]
    n = len(rows[0])
    basis = []
    for col in range(n):
        piv = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(piv) > 1:
            piv.sort(key=lambda r: abs(r[col]))
            p = piv[0]
            new = [p]
            for r in piv[1:]:
                q = r[col] // p[col]
                r2 = [a - q * b for a, b in zip(r, p)]
                if r2[col] != 0:
                    new.append(r2)
                elif any(r2):
                    rest.append(r2)
            piv = new
        if not piv:
            raise DomainError("lattice is not of full rank")
        p = piv[0]
        if p[col] < 0:
            p = [-a for a in p]
        basis.append(p)
        rows = rest
    # reduce above-diagonal entries
    for i in range(n):
        for j in range(i):
            q = basis[j][i] // basis[i][i]
            basis[j] = [a - q * b for a, b in zip(basis[j], basis[i])]
    return basis


def _det(m):
    m = [[Fraction(v) for v in row] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def _inverse(m):
    n = len(m)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        pv = a[c][c]
        a[c] = [v / pv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def _left_kernel_mod_p(m, p):
    """Basis of {v : v * m = 0 (mod p)} for an r x c matrix m."""
    r, c = len(m), len(m[0])
    # transpose to solve m^T v = 0
    a = [[m[i][j] % p for i in range(r)] for j in range(c)]
    pivots = []
    row = 0
    for col in range(r):
        piv = next((i for i in range(row, c) if a[i][col]), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = pow(a[row][col], -1, p)
        a[row] = [v * inv % p for v in a[row]]
        for i in range(c):
            if i != row and a[i][col]:
                f = a[i][col]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
        if row == c:
            break
    free = [j for j in range(r) if j not in pivots]
    out = []
    for fcol in free:
        v = [0] * r
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-a[i][fcol]) % p
        out.append(v)
    return out


# ---------------------------------------------------------------- orders


def _mulmod(u, v, f):
    """Product of power-basis coordinate vectors modulo the monic quartic f."""
    prod = [0] * 7
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                prod[i + j] += a * b
    # f = x^4 + c3 x^3 + c2 x^2 + c1 x + c0
    c = [f[4], f[3], f[2], f[1]]
    for k in range(6, 3, -1):
        t = prod[k]
        if t:
            prod[k] = 0
            for i in range(4):
                prod[k - 4 + i] -= t * c[i]
    return prod[:4]


@dataclass
class QuarticOrderState:
    poly: list
    basis: list  # rows: basis elements in power-basis coordinates (Fractions)
    disc: int

    @property
    def index(self):
        return int(1 / abs(_det(self.basis)))

    def structure_constants(self):
        binv = _inverse(self.basis)
        consts = []
        for bi in self.basis:
            row = []
            for bj in self.basis:
                prod = _mulmod(bi, bj, self.poly)
                coords = [sum(prod[k] * binv[k][l] for k in range(4)) for l in range(4)]
                if any(c.denominator != 1 for c in coords):
                    raise AssertionError("basis does not span a ring")
                row.append([int(c) for c in coords])
            consts.append(row)
        return consts


def _mul_sc(u, v, sc, p=None):
    out = [0] * 4
    for i, a in enumerate(u):
        if not a:
            continue
        for j, b in enumerate(v):
            if not b:
                continue
            ab = a * b
            for k, c in enumerate(sc[i][j]):
                out[k] += ab * c
    if p is not None:
        out = [x % p for x in out]
    return out


def _pow_sc(u, e, sc, one, p):
    out = list(one)
    base = [x % p for x in u]
    while e:
        if e & 1:
            out = _mul_sc(out, base, sc, p)
        base = _mul_sc(base, base, sc, p)
        e >>= 1
    return out


def _enlarge_at(order, p):
    """One Round-2 step at p: the multiplier ring of the p-radical."""
    sc = order.structure_constants()
    binv = _inverse(order.basis)
    one_power = [1, 0, 0, 0]
    one = [int(sum(one_power[k] * binv[k][l] for k in range(4))) for l in range(4)]
    q = p
    while q < 4:
        q *= p
    frob = [_pow_sc([int(i == j) for j in range(4)], q, sc, one, p) for i in range(4)]
    ker = _left_kernel_mod_p(frob, p)
    rad_rows = [[p * int(i == j) for j in range(4)] for i in range(4)] + ker
    rad = _hnf_rows(rad_rows)  # p-radical, coordinates in the order basis
    rad_inv = _inverse(rad)
    # alpha * rad_j in p * rad  <=>  coordinates in rad basis vanish mod p
    cols = []
    for j in range(4):
        for i in range(4):
            # image of basis element i times rad_j, in rad-coordinates
            prod = _mul_sc([int(i == k) for k in range(4)], rad[j], sc)
            cols.append(prod)
    mat = []
    for i in range(4):
        row = []
        for j in range(4):
            prod = cols[j * 4 + i]
            coords = [sum(prod[k] * rad_inv[k][l] for k in range(4)) for l in range(4)]
            row.extend(int(c) % p for c in coords)
        mat.append(row)
    ker2 = _left_kernel_mod_p(mat, p)
    new_rows = [[p * int(i == j) for j in range(4)] for i in range(4)] + ker2
    new = _hnf_rows(new_rows)
    # new basis = (new / p) * old basis, in power-basis coordinates
    basis = [
        [sum(Fraction(new[i][k], p) * order.basis[k][l] for k in range(4)) for l in range(4)]
        for i in range(4)
    ]
    return basis


def is_p_maximal(order, p):
    """Round-2 certificate: the multiplier ring of the p-radical equals the order."""
    new = _enlarge_at(order, p)
    return abs(_det(new)) == abs(_det(order.basis))


def dedekind_criterion(coeffs, p):
    """True iff Z[x]/(f) is p-maximal (Dedekind's criterion)."""
    f = [c % p for c in coeffs]
    _, factors = gf_sqf_list(f, p, ZZ)
    g = [1]
    for fac, _e in factors:
        g = gf_mul(g, fac, p, ZZ)
    h = gf_quo(f, g, p, ZZ)
    # F = (f - g*h) / p with g, h lifted to Z with coefficients in [0, p)
    gh = _intmul(g, h)
    diff = [a - b for a, b in zip(_pad(coeffs, len(gh)), _pad(gh, len(coeffs)))]
    if any(c % p for c in diff):
        raise AssertionError("lift mismatch in Dedekind test")
    F = [(c // p) % p for c in diff]
    while F and F[0] == 0:
        F = F[1:]
    if not F:
        return gf_gcd(g, h, p, ZZ) == [1]
    t = gf_gcd(gf_gcd(F, g, p, ZZ), h, p, ZZ)
    return t == [1]


def _pad(u, n):
    return [0] * (n - len(u)) + list(u)


def _intmul(u, v):
    out = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            out[i + j] += a * b
    return out


def _factor(n):
    # factorint may hand back gmpy2 integers, which do not mix with Fraction
    return sorted((int(p), e) for p, e in factorint(abs(n)).items())


def maximal_order_disc(coeffs, max_disc_digits=80):
    """Discriminant of the maximal order of Q[x]/(f), f monic irreducible quartic."""
    coeffs = _check_quartic(coeffs)
    D = poly_discriminant(coeffs)
    if len(str(abs(D))) > max_disc_digits:
        raise CapacityError("polynomial discriminant too large to factor")
    order = QuarticOrderState(
        coeffs, [[Fraction(int(i == j)) for j in range(4)] for i in range(4)], D
    )
    for p, e in _factor(D):
        if e < 2 or dedekind_criterion(coeffs, p):
            continue
        while True:
            new = _enlarge_at(order, p)
            if abs(_det(new)) == abs(_det(order.basis)):
                break
            order.basis = new
    idx = Fraction(1) / abs(_det(order.basis))
    if idx.denominator != 1:
        raise AssertionError("order index is not an integer")
    order.disc = D // int(idx) ** 2
    return order.disc


def maximal_order(coeffs):
    """The maximal order as a QuarticOrderState (basis over the power basis)."""
    coeffs = _check_quartic(coeffs)
    D = poly_discriminant(coeffs)
    order = QuarticOrderState(
        coeffs, [[Fraction(int(i == j)) for j in range(4)] for i in range(4)], D
    )
    for p, e in _factor(D):
        if e < 2:
            continue
        while True:
            new = _enlarge_at(order, p)
            if abs(_det(new)) == abs(_det(order.basis)):
                break
            order.basis = new
    order.disc = D // order.index**2
    return order


# ---------------------------------------------------------------- Galois groups


def _integer_roots(coeffs):
    """Integer roots of a monic integer polynomial (with multiplicity ignored)."""
    p = _poly(coeffs)
    roots = set()
    for fac, _ in p.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            if b % a == 0:
                roots.add(int(-b // a))
    return sorted(roots)


def _quadratic_splits_over(disc_q, field_disc):
    """Does x^2 with discriminant disc_q split over Q(sqrt field_disc)?"""
    if disc_q == 0 or is_rational_square(disc_q):
        return True
    m = squarefree_part(field_disc)
    d = m if m % 4 == 1 else 4 * m
    K = QuadField(d)
    return sqrt_in_field(K(disc_q)) is not None


def resolvent_cubic_galois(coeffs):
    """One of 'S4', 'A4', 'D4', 'C4', 'V4' for an irreducible monic quartic."""
    coeffs = _check_quartic(coeffs)
    _, a, b, c, e = coeffs
    R = [1, -b, a * c - 4 * e, -(a * a * e - 4 * b * e + c * c)]
    roots = _integer_roots(R)
    D = poly_discriminant(coeffs)
    if len(roots) == 3:
        return "V4"
    if not roots:
        return "A4" if is_rational_square(D) else "S4"
    theta = roots[0]
    d1 = theta * theta - 4 * e
    d2 = a * a - 4 * (b - theta)
    if _quadratic_splits_over(d1, D) and _quadratic_splits_over(d2, D):
        return "C4"
    return "D4"


# ---------------------------------------------------------------- square classes


def naive_selmer_enum(K, H, Y, max_height=200):
    """Representatives of square classes of K with Nm Disc(K(sqrt a)/K) <= Y,
    found among a + b*w with |a|, |b| <= H."""
    from .relquad import relative_discriminant

    if H > max_height:
        raise CapacityError(f"height {H} exceeds {max_height}")
    buckets = {}
    for a in range(-H, H + 1):
        for b in range(-H, H + 1):
            if a == 0 and b == 0:
                continue
            alpha = element(K, (a, b))
            if sqrt_in_field(alpha) is not None:
                continue
            rd = relative_discriminant(K, alpha)
            if rd.norm() > Y:
                continue
            reps = buckets.setdefault((rd.a, rd.b, rd.c), [])
            if any(sqrt_in_field(alpha / r) is not None for r in reps):
                continue
            reps.append(alpha)
    return [r for key in sorted(buckets) for r in buckets[key]]
