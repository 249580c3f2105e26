"""Exact coefficient fields: the rationals and prime fields F_p.

Scalars are plain values, not wrapper objects: ``fractions.Fraction`` over the
rationals, Python ints in ``[0, p)`` over F_p.  A :class:`Field` value tags a
polynomial or matrix with the arithmetic to use and provides the scalar
helpers (coercion, inversion, parsing, exact formatting).  Hot loops branch on
``field.p`` directly and inline the modular reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, int]

_MAX_PRIME = 2**31


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n < 3,215,031,751."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """Field tag: ``p is None`` means the rationals, otherwise F_p (p prime)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not (2 <= self.p <= _MAX_PRIME):
                raise ValueError(f"prime modulus out of range: {self.p}")
            if not _is_prime(self.p):
                raise ValueError(f"modulus is not prime: {self.p}")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"Fp:{self.p}"

    def __str__(self) -> str:
        return self.name

    def zero(self) -> Scalar:
        return Fraction(0) if self.p is None else 0

    def one(self) -> Scalar:
        return Fraction(1) if self.p is None else 1

    def coerce(self, value) -> Scalar:
        """Bring an int, Fraction, or string into canonical scalar form.

        Over F_p a Fraction is accepted when its denominator is a unit mod p.
        """
        if isinstance(value, str):
            value = Fraction(value)
        if self.p is None:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, int):
                return Fraction(value)
        else:
            if isinstance(value, int):
                return value % self.p
            if isinstance(value, Fraction):
                den = value.denominator % self.p
                if den == 0:
                    raise ZeroDivisionError(
                        f"denominator {value.denominator} is 0 mod {self.p}"
                    )
                return value.numerator * pow(den, self.p - 2, self.p) % self.p
        raise TypeError(f"cannot coerce {value!r} into {self.name}")

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.p is None else (-a) % self.p

    def inv(self, a: Scalar) -> Scalar:
        if self.p is None:
            if a == 0:
                raise ZeroDivisionError("inverse of 0")
            return Fraction(1) / a
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def parse(self, text: str) -> Scalar:
        """Parse an exact scalar from a string such as "3", "-2/5", "0.25"."""
        return self.coerce(Fraction(text.strip()))

    def fmt(self, a: Scalar) -> str:
        """Exact string form: integers plain, non-integers as p/q."""
        return str(a)


RATIONALS = Field()


def prime_field(p: int) -> Field:
    return Field(p)


def field_from_name(name: str) -> Field:
    """Inverse of ``Field.name``: "Q" or "Fp:<p>"."""
    if name == "Q":
        return RATIONALS
    if name.startswith("Fp:"):
        return Field(int(name[3:]))
    raise ValueError(f"unknown field name: {name!r}")
