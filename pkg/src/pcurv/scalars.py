"""Prime fields and exact integer helpers.

Series and matrices elsewhere in the package store raw residues in ``[0, p)``
for speed; :class:`FpElem` is the boxed value type used at API boundaries and
in tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import ParameterError

ExactInt = int
ExactRat = Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Prime:
    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise ParameterError(f"prime: {self.p!r} is not an integer", field="prime")
        if not is_prime(self.p):
            raise ParameterError(f"prime: {self.p} is not prime", field="prime")

    def __int__(self) -> int:
        return self.p

    def __call__(self, value: int) -> FpElem:
        return FpElem(value, self)


def check_prime(p: int) -> int:
    """Validate ``p`` and return it as a plain int."""
    return Prime(p).p


@dataclass(frozen=True)
class FpElem:
    """An element of F_p, stored canonically as a residue in ``[0, p)``."""

    residue: int
    modulus: Prime

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.modulus.p)

    @property
    def p(self) -> int:
        return self.modulus.p

    def _coerce(self, other) -> int:
        if isinstance(other, FpElem):
            if other.modulus != self.modulus:
                raise ParameterError(
                    f"modulus mismatch: {self.p} vs {other.p}", field="prime"
                )
            return other.residue
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return r
        return FpElem(self.residue + r, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return r
        return FpElem(self.residue - r, self.modulus)

    def __rsub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return r
        return FpElem(r - self.residue, self.modulus)

    def __neg__(self):
        return FpElem(-self.residue, self.modulus)

    def __mul__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return r
        return FpElem(self.residue * r, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return r
        return self * fp_inverse(FpElem(r, self.modulus))

    def __pow__(self, n: int):
        return fp_pow(self, n)

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.modulus == other.modulus and self.residue == other.residue
        if isinstance(other, int):
            return self.residue == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.p))

    def __int__(self):
        return self.residue

    def __bool__(self):
        return self.residue != 0

    def signed(self) -> int:
        return signed_rep(self.residue, self.p)

    def __repr__(self):
        return f"FpElem({self.residue}, p={self.p})"


def fp_pow(x: FpElem, n: int) -> FpElem:
    """Square-and-multiply power; ``x**0 == 1`` including ``x == 0``."""
    if n < 0:
        raise ParameterError("negative exponent", field="n")
    result, base = 1, x.residue
    p = x.p
    while n:
        if n & 1:
            result = result * base % p
        base = base * base % p
        n >>= 1
    return FpElem(result, x.modulus)


def fp_inverse(x: FpElem) -> FpElem:
    if x.residue == 0:
        raise ZeroDivisionError(f"0 has no inverse in F_{x.p}")
    return FpElem(pow(x.residue, -1, x.p), x.modulus)


def binomial(n: int, k: int) -> ExactInt:
    """Exact binomial coefficient, zero when ``k > n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def signed_rep(residue: int, p: int) -> int:
    """Representative of ``residue`` in (-p/2, p/2]."""
    r = residue % p
    return r - p if 2 * r > p else r
