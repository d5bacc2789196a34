"""Base fields for exact arithmetic: the rationals and prime fields.

Elements are plain Python values (``Fraction`` for the rationals, ``int`` in
``[0, p)`` for a prime field); a field object supplies the arithmetic and the
serialization rules.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError

MAX_PRIME = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Common interface; subclasses implement the element representation."""

    characteristic: int
    tag: str

    zero: object
    one: object

    def __call__(self, value):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        result = self.one
        for _ in range(n):
            result = self.mul(result, a)
        return result

    def to_text(self, a) -> str:
        raise NotImplementedError

    def from_text(self, value):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return self.tag


class RationalField(Field):
    characteristic = 0
    tag = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value):
        if isinstance(value, str):
            return self.from_text(value)
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def to_text(self, a) -> str:
        a = Fraction(a)
        return f"{a.numerator}/{a.denominator}"

    def from_text(self, value):
        if isinstance(value, bool):
            raise InputError(f"not a rational literal: {value!r}")
        if isinstance(value, int):
            return Fraction(value)
        if not isinstance(value, str):
            raise InputError(f"not a rational literal: {value!r}")
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational literal: {value!r}") from exc


class PrimeField(Field):
    def __init__(self, p: int):
        if not (isinstance(p, int) and _is_prime(p) and p <= MAX_PRIME):
            raise InputError(f"F_p needs a prime p <= 2^31, got {p!r}")
        self.p = p
        self.characteristic = p
        self.tag = f"F{p}"
        self.zero = 0
        self.one = 1 % p

    def __call__(self, value):
        if isinstance(value, str):
            return self.from_text(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise InputError(f"{value} has no image in {self.tag}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, n: int):
        return pow(a, n, self.p)

    def to_text(self, a):
        return int(a)

    def from_text(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            raise InputError(f"prime-field scalars are integers, got {value!r}")
        if not 0 <= value < self.p:
            raise InputError(f"{value} is outside [0, {self.p})")
        return value

    def elements(self):
        return range(self.p)


QQ = RationalField()


def field_from_tag(tag: str) -> Field:
    """``"Q"`` or ``"F<p>"``."""
    if tag in ("Q", "QQ"):
        return QQ
    if isinstance(tag, str) and tag.startswith("F") and tag[1:].isdigit():
        return PrimeField(int(tag[1:]))
    raise InputError(f"unknown base field {tag!r}")
