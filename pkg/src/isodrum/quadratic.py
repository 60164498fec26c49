"""Exact arithmetic in Q(sqrt(d)).

Coordinates of unfolded tiles stay in a fixed real quadratic extension once
the base tile's vertices do; reflections only add, multiply and divide.
Values are a + b*sqrt(d) with rational a, b and a squarefree positive d
shared across operands.  Rationals embed with b = 0 and are comparable with
plain Fractions and ints.
"""

from __future__ import annotations

from fractions import Fraction


class QuadExt:
    """a + b*sqrt(d), exact."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=0):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = int(d)
        if self.b != 0 and self.d <= 0:
            raise ValueError("need a positive discriminant for an irrational part")
        if self.b == 0:
            self.d = 0

    @staticmethod
    def _coerce(x, d):
        if isinstance(x, QuadExt):
            return x
        return QuadExt(Fraction(x), 0, d)

    def _match(self, other):
        other = QuadExt._coerce(other, self.d)
        if self.d and other.d and self.d != other.d:
            raise ValueError("mixed discriminants")
        return other, (self.d or other.d)

    def __add__(self, other):
        o, d = self._match(other)
        return QuadExt(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-QuadExt._coerce(other, self.d))

    def __rsub__(self, other):
        return QuadExt._coerce(other, self.d) - self

    def __mul__(self, other):
        o, d = self._match(other)
        return QuadExt(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o, d = self._match(other)
        norm = o.a * o.a - o.b * o.b * d
        if norm == 0:
            raise ZeroDivisionError("division by zero element")
        inv = QuadExt(o.a / norm, -o.b / norm, d)
        return self * inv

    def __rtruediv__(self, other):
        return QuadExt._coerce(other, self.d) / self

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return (self.b > 0) - (self.b < 0)
        sa = 1 if self.a > 0 else -1
        sb = 1 if self.b > 0 else -1
        if sa == sb:
            return sa
        # compare a^2 with b^2 d; signs differ, so the bigger magnitude wins
        lhs = self.a * self.a
        rhs = self.b * self.b * self.d
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        try:
            o, _ = self._match(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other):
        o, _ = self._match(other)
        return (self - o).sign() < 0

    def __le__(self, other):
        o, _ = self._match(other)
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o, _ = self._match(other)
        return (self - o).sign() > 0

    def __ge__(self, other):
        o, _ = self._match(other)
        return (self - o).sign() >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * self.d**0.5

    def __repr__(self):
        if self.b == 0:
            return f"QuadExt({self.a})"
        return f"QuadExt({self.a} + {self.b}*sqrt({self.d}))"
