"""Exact scalar arithmetic: rationals, real quadratic numbers, 2-vectors.

Rationals are plain ``fractions.Fraction``.  A :class:`QuadraticNumber`
is an element a + b*sqrt(d) of a real quadratic field Q(sqrt(d)) with d
a square-free integer > 1; rationals are the degenerate case b = 0 with
the sentinel d = 1.  All values are immutable and hashable, and no
operation ever silently degrades to floating point: ``float(x)`` is the
only inexact view.
"""

from __future__ import annotations

import math
from fractions import Fraction

Rational = Fraction


class MixedFieldsError(ValueError):
    """Raised when values from distinct real quadratic fields are mixed."""


class EmptyListError(ValueError):
    """Raised when an operation needs at least one value."""


def square_free_decomposition(n):
    """Return (s, f) with n = s * f**2 and s square-free (n > 0)."""
    if n <= 0:
        raise ValueError("need a positive integer")
    s, f = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e % 2:
                s *= p
            f *= p ** (e // 2)
        p += 1 if p == 2 else 2
    return s * n, f


class QuadraticNumber:
    """a + b*sqrt(d) with a, b rational and d > 1 square-free (d = 1 iff b = 0)."""

    __slots__ = ("d", "a", "b")

    def __init__(self, a, b=0, d=1):
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if d <= 0:
            raise ValueError("d must be positive")
        if d > 1:
            s, f = square_free_decomposition(d)
            b *= f
            d = s
        if d == 1:
            a, b = a + b, Fraction(0)
        elif b == 0:
            d = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *args):
        raise AttributeError("QuadraticNumber is immutable")

    # -- field plumbing ------------------------------------------------

    @property
    def is_rational(self):
        return self.b == 0

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(other)
        return NotImplemented

    def _join(self, other):
        """Common d for self and other, or raise MixedFieldsError."""
        if self.b == 0:
            return other.d
        if other.b == 0:
            return self.d
        if self.d != other.d:
            raise MixedFieldsError(f"sqrt({self.d}) vs sqrt({other.d})")
        return self.d

    # -- ring operations -----------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self._join(o)
        return QuadraticNumber(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self._join(o)
        return QuadraticNumber(
            self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero quadratic number")
        return QuadraticNumber(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        self._join(o)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = QuadraticNumber(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    # -- conjugation, norms, signs ---------------------------------------

    def conjugate(self):
        """Galois conjugate a - b*sqrt(d); identity on rationals."""
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self):
        """Field norm a^2 - b^2 d (a rational number)."""
        return self.a * self.a - self.b * self.b * self.d

    def trace(self):
        return 2 * self.a

    def sign(self):
        """Exact sign of the real value a + b*sqrt(d)."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # a and b have opposite signs; the larger of a^2, b^2*d wins
        lhs, rhs = a * a, b * b * self.d
        if lhs == rhs:
            return 0
        if lhs > rhs:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def __bool__(self):
        return not (self.a == 0 and self.b == 0)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        try:
            self._join(o)
        except MixedFieldsError:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def _cmp(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    # -- conversions -----------------------------------------------------

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __floor__(self):
        """Exact floor via integer bracketing of b*sqrt(d)."""
        if self.b == 0:
            return math.floor(self.a)
        # floor(a + b sqrt d): bracket b*sqrt(d) between consecutive rationals
        guess = math.floor(float(self))
        # verify exactly, adjusting if the float estimate was off
        while not (QuadraticNumber(guess) <= self):
            guess -= 1
        while QuadraticNumber(guess + 1) <= self:
            guess += 1
        return guess

    def __repr__(self):
        return f"QuadraticNumber({self})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.d})"

    @staticmethod
    def parse(text):
        """Parse "p/q" or "p/q + r/s*sqrt(d)" (also with '-' between terms)."""
        text = text.strip().replace(" ", "")
        if "sqrt" not in text:
            return QuadraticNumber(Fraction(text))
        head, tail = text.split("sqrt")
        d = int(tail.lstrip("(").rstrip(")"))
        head = head.rstrip("*")
        # split off the rational part at the last top-level '+'/'-'
        for k in range(len(head) - 1, 0, -1):
            if head[k] in "+-" and head[k - 1].isdigit():
                a = Fraction(head[:k])
                b_part = head[k + 1:]
                b = Fraction(b_part) if b_part else Fraction(1)
                if head[k] == "-":
                    b = -b
                return QuadraticNumber(a, b, d)
        if head in ("", "+"):
            return QuadraticNumber(0, 1, d)
        if head == "-":
            return QuadraticNumber(0, -1, d)
        return QuadraticNumber(0, Fraction(head), d)

    def to_json(self):
        return {
            "d": self.d,
            "a": [self.a.numerator, self.a.denominator],
            "b": [self.b.numerator, self.b.denominator],
        }

    @staticmethod
    def from_json(obj):
        return QuadraticNumber(
            Fraction(obj["a"][0], obj["a"][1]),
            Fraction(obj["b"][0], obj["b"][1]),
            obj["d"],
        )


def quadratic(a, b=0, d=1):
    return QuadraticNumber(a, b, d)


def sqrt_of(n):
    """sqrt(n) for a positive integer or Fraction, as an exact value."""
    n = Fraction(n)
    sp, fp = square_free_decomposition(n.numerator * n.denominator)
    return QuadraticNumber(0, Fraction(fp, n.denominator), sp)


def conjugate(x):
    """Galois conjugation; fixes rationals and floats-as-given."""
    if isinstance(x, QuadraticNumber):
        return x.conjugate()
    return x


def field_join(values):
    """Common square-free d embedding all values; 1 if all rational.

    Raises MixedFieldsError for values from distinct quadratic fields
    and EmptyListError on an empty input.
    """
    vals = list(values)
    if not vals:
        raise EmptyListError("field_join of empty list")
    d = 1
    for v in vals:
        if isinstance(v, QuadraticNumber) and not v.is_rational:
            if d == 1:
                d = v.d
            elif v.d != d:
                raise MixedFieldsError(f"sqrt({d}) vs sqrt({v.d})")
    return d


def as_quadratic(x, d=1):
    if isinstance(x, QuadraticNumber):
        return x
    return QuadraticNumber(Fraction(x), 0, 1)


def is_commensurable(values):
    """(flag, unit): whether all values are rational multiples of one value.

    For positive rationals the common unit is their gcd.  For quadratic
    values the test asks every ratio v/values[0] to be rational; the unit
    is then values[0] * gcd({ratios}).
    """
    vals = [as_quadratic(v) for v in values]
    if not vals:
        raise EmptyListError("is_commensurable of empty list")
    if any(v.sign() <= 0 for v in vals):
        raise ValueError("values must be positive")
    base = vals[0]
    ratios = []
    for v in vals:
        r = v / base
        if not r.is_rational:
            return False, None
        ratios.append(r.a)
    g = ratios[0]
    for r in ratios[1:]:
        g = Fraction(math.gcd(g.numerator, r.numerator),
                     (g.denominator * r.denominator) //
                     math.gcd(g.denominator, r.denominator))
    unit = base * g
    return True, unit if not unit.is_rational else unit.a


# -- small linear algebra ----------------------------------------------


class Vector2:
    """Immutable 2-vector over any scalar supporting ring ops."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, *args):
        raise AttributeError("Vector2 is immutable")

    def __add__(self, o):
        return Vector2(self.x + o.x, self.y + o.y)

    def __sub__(self, o):
        return Vector2(self.x - o.x, self.y - o.y)

    def __neg__(self):
        return Vector2(-self.x, -self.y)

    def __rmul__(self, c):
        return Vector2(c * self.x, c * self.y)

    def cross(self, o):
        return self.x * o.y - self.y * o.x

    def dot(self, o):
        return self.x * o.x + self.y * o.y

    def __eq__(self, o):
        return isinstance(o, Vector2) and self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __iter__(self):
        return iter((self.x, self.y))

    def __repr__(self):
        return f"Vector2({self.x}, {self.y})"


class Matrix2:
    """Immutable 2x2 matrix [[a, b], [c, d]] over any scalar."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        for name, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, v)

    def __setattr__(self, *args):
        raise AttributeError("Matrix2 is immutable")

    def det(self):
        return self.a * self.d - self.b * self.c

    def __mul__(self, o):
        if isinstance(o, Matrix2):
            return Matrix2(
                self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d,
            )
        if isinstance(o, Vector2):
            return Vector2(self.a * o.x + self.b * o.y,
                           self.c * o.x + self.d * o.y)
        return NotImplemented

    def apply(self, xy):
        x, y = xy
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def inverse(self):
        det = self.det()
        if not det:
            raise ZeroDivisionError("singular matrix")
        if isinstance(det, int):
            det = Fraction(det)
        return Matrix2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __eq__(self, o):
        return (isinstance(o, Matrix2) and self.a == o.a and self.b == o.b
                and self.c == o.c and self.d == o.d)

    def __repr__(self):
        return f"Matrix2({self.a}, {self.b}, {self.c}, {self.d})"

    @staticmethod
    def identity():
        return Matrix2(1, 0, 0, 1)

    @staticmethod
    def diagonal(u, v):
        return Matrix2(u, 0, 0, v)


def format_rational(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def scalar_to_json(x):
    if isinstance(x, QuadraticNumber):
        return x.to_json()
    if isinstance(x, (int, Fraction)):
        q = Fraction(x)
        return [q.numerator, q.denominator]
    return float(x)


def scalar_from_json(obj):
    if isinstance(obj, dict):
        return QuadraticNumber.from_json(obj)
    if isinstance(obj, list):
        return Fraction(obj[0], obj[1])
    return float(obj)
