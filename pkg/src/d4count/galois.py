"""Galois type over Q of a tower K(sqrt alpha) / K / Q."""

from enum import Enum

from .errors import DomainError
from .quadfield import QuadElement, is_rational_square, sqrt_in_field


class GaloisType(str, Enum):
    D4 = "D4"
    C4 = "C4"
    V4 = "V4"


def classify_norm(d, n):
    """Type from Nm(alpha) = n and the base discriminant d (exact)."""
    if is_rational_square(n):
        return GaloisType.V4
    if is_rational_square(d * n):
        return GaloisType.C4
    return GaloisType.D4


def classify_extension(K, alpha):
    if not isinstance(alpha, QuadElement):
        alpha = K(alpha)
    if alpha.is_zero() or sqrt_in_field(alpha) is not None:
        raise DomainError("alpha must be a nonzero non-square of K")
    return classify_norm(K.d, alpha.norm())


def _integral_representative(alpha):
    den = alpha.x.denominator * alpha.y.denominator
    alpha = alpha * (den * den)
    if alpha.is_rational():
        K = alpha.field
        alpha = alpha * (1 + K.w) ** 2
    return alpha


def minimal_polynomial(K, alpha):
    """Coefficients (highest degree first) of x^4 - Tr(a) x^2 + Nm(a) for a
    representative a of the square class of alpha with sqrt(a) of degree 4."""
    if not isinstance(alpha, QuadElement):
        alpha = K(alpha)
    alpha = _integral_representative(alpha)
    if not alpha.is_integral():
        raise DomainError("alpha is not integral after normalisation")
    if sqrt_in_field(alpha) is not None:
        raise DomainError("alpha is a square")
    return [1, 0, -int(alpha.trace()), 0, int(alpha.norm())]


def minimal_polynomial_coords(T, N, coords):
    """Same as minimal_polynomial for integral coordinates (x, y), y != 0 or not."""
    x, y = coords
    if y == 0:
        # multiply by (1 + w)^2 = (1 - N) + (2 + T) w
        a, b = 1 - N, 2 + T
        yy = y * b
        x, y = x * a - N * yy, x * b + a * y + T * yy
    tr = 2 * x + T * y
    nm = x * x + T * x * y + N * y * y
    return [1, 0, -tr, 0, nm]


def check_c4_sign(K, gtype):
    """C4 towers only occur over real quadratic fields."""
    if gtype is GaloisType.C4 and K.d < 0:
        raise AssertionError(f"C4 label over imaginary field d={K.d}")
    return True
