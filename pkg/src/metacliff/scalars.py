"""Exact scalars in the quadratic tower Q < Q(i) < Q(i, sqrt3).

Every coefficient in this package is a :class:`Scalar`: four exact rationals
(a, b, c, d) encoding ``a + b*i + c*sqrt3 + d*i*sqrt3`` together with the
tower level the value was declared in.  Arithmetic joins levels upward and
never narrows them, so a value computed from Q(i) inputs keeps reporting
Q(i) even when it happens to be rational.  Equality compares values only.
"""

from __future__ import annotations

from fractions import Fraction

TOWER_Q = 0
TOWER_QI = 1
TOWER_QI_SQRT3 = 2

TOWER_NAMES = {TOWER_Q: "q", TOWER_QI: "qi", TOWER_QI_SQRT3: "qi-sqrt3"}
TOWER_BY_NAME = {v: k for k, v in TOWER_NAMES.items()}

_ZERO = Fraction(0)
_ONE = Fraction(1)


class TowerError(ValueError):
    """An operation needs a wider scalar tower than the one allowed."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {x!r}")


class Scalar:
    """Element of Q(i, sqrt3), stored as four exact rational components."""

    __slots__ = ("a", "b", "c", "d", "level")

    def __init__(self, a=0, b=0, c=0, d=0, level: int = TOWER_Q):
        self.a = _frac(a)
        self.b = _frac(b)
        self.c = _frac(c)
        self.d = _frac(d)
        implied = TOWER_QI_SQRT3 if (self.c or self.d) else (TOWER_QI if self.b else TOWER_Q)
        self.level = max(level, implied)

    @classmethod
    def of(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return cls(_frac(x))

    @classmethod
    def i(cls) -> "Scalar":
        return cls(0, 1)

    @classmethod
    def sqrt3(cls) -> "Scalar":
        return cls(0, 0, 1)

    # -- predicates ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    @property
    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise TowerError(f"{self} is not rational")
        return self.a

    # -- ring operations -------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other)
        return None

    def __add__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d,
                      max(self.level, o.level))

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.a, -self.b, -self.c, -self.d, self.level)

    def __sub__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        # basis products: i*i = -1, sqrt3*sqrt3 = 3, (i*sqrt3)^2 = -3
        return Scalar(
            a1 * a2 - b1 * b2 + 3 * (c1 * c2 - d1 * d2),
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 - b1 * d2 - d1 * b2,
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
            max(self.level, o.level),
        )

    __rmul__ = __mul__

    def conj_i(self) -> "Scalar":
        return Scalar(self.a, -self.b, self.c, -self.d, self.level)

    def conj_sqrt3(self) -> "Scalar":
        return Scalar(self.a, self.b, -self.c, -self.d, self.level)

    def inverse(self) -> "Scalar":
        if self.is_zero:
            raise ZeroDivisionError("scalar is zero")
        ci = self.conj_i()
        r = self * ci            # lands in Q(sqrt3)
        rs = r.conj_sqrt3()
        n = r * rs               # lands in Q
        num = ci * rs
        inv_n = 1 / n.a
        return Scalar(num.a * inv_n, num.b * inv_n, num.c * inv_n, num.d * inv_n,
                      self.level)

    def __truediv__(self, other) -> "Scalar":
        return self * Scalar.of(other).inverse()

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar.of(other) * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.of(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.c, self.d))

    def __bool__(self) -> bool:
        return not self.is_zero

    # -- rendering -------------------------------------------------------

    def __str__(self) -> str:
        parts = []
        for coef, unit in ((self.a, ""), (self.b, "i"), (self.c, "r3"), (self.d, "i*r3")):
            if not coef:
                continue
            if not unit:
                text = str(coef)
            elif coef == 1:
                text = unit
            elif coef == -1:
                text = "-" + unit
            else:
                text = f"{coef}*{unit}"
            if parts and not text.startswith("-"):
                parts.append("+" + text)
            else:
                parts.append(text)
        return "".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"Scalar({self})"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar.i()
SQRT3 = Scalar.sqrt3()
HALF = Scalar(Fraction(1, 2))


def require_tower(level: int, allowed: int, what: str) -> None:
    """Reject a construction whose scalars exceed the configured tower."""
    if level > allowed:
        raise TowerError(
            f"{what} needs scalar tower {TOWER_NAMES[level]}, "
            f"but only {TOWER_NAMES[allowed]} is allowed"
        )
