"""Midpoint-radius real numbers."""

from fractions import Fraction

import mpmath
from mpmath import mpf


def _slack(x):
    # one unit in the last place at the current working precision, rounded up
    return abs(x) * mpf(2) ** (1 - mpmath.mp.prec) + mpf(2) ** (-mpmath.mp.prec - 60)


class AnalyticValue:
    """A real number known to lie in [mid - rad, mid + rad]."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        self.mid = mpf(mid)
        self.rad = mpf(rad)
        if self.rad < 0:
            raise ValueError("negative radius")

    @classmethod
    def exact(cls, x):
        if isinstance(x, Fraction):
            m = mpf(x.numerator) / x.denominator
        else:
            m = mpf(x)
        return cls(m, _slack(m))

    def _lift(self, other):
        if isinstance(other, AnalyticValue):
            return other
        return AnalyticValue.exact(other)

    def __add__(self, other):
        o = self._lift(other)
        m = self.mid + o.mid
        return AnalyticValue(m, self.rad + o.rad + _slack(m))

    __radd__ = __add__

    def __neg__(self):
        return AnalyticValue(-self.mid, self.rad)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        m = self.mid * o.mid
        r = abs(self.mid) * o.rad + abs(o.mid) * self.rad + self.rad * o.rad
        return AnalyticValue(m, r + _slack(m))

    __rmul__ = __mul__

    def inverse(self):
        lo = abs(self.mid) - self.rad
        if lo <= 0:
            raise ZeroDivisionError("interval contains zero")
        m = 1 / self.mid
        return AnalyticValue(m, self.rad / (lo * abs(self.mid)) + _slack(m))

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def contains(self, x):
        return abs(mpf(x) - self.mid) <= self.rad

    def overlaps(self, other):
        return abs(self.mid - other.mid) <= self.rad + other.rad

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"AnalyticValue({mpmath.nstr(self.mid, 15)} ± {mpmath.nstr(self.rad, 3)})"
