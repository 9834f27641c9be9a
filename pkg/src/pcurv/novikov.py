"""Energy-truncated Novikov ring over F_p.

A series is a finite sum ``sum c_A q^A`` where ``A`` is a vector of
non-negative integers and only exponents with ``energy(A) <= bound`` are kept.
Energies are integral: ``energy(A) = sum(w_i * A_i)`` with positive weights.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ParameterError
from .scalars import FpElem, Prime, check_prime, signed_rep

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class NovikovRing:
    """Ring parameters: prime ``p``, energy weights (one per generator) and bound ``E``."""

    p: int
    weights: tuple[int, ...] = (1,)
    bound: int = 0

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if not self.weights:
            raise ParameterError("rank must be at least 1", field="rank")
        if any(w < 1 for w in self.weights):
            raise ParameterError(
                f"energy_weights: all weights must be >= 1, got {list(self.weights)}",
                field="energy_weights",
            )
        if self.bound < 0:
            raise ParameterError(f"E: bound must be >= 0, got {self.bound}", field="E")

    @property
    def rank(self) -> int:
        return len(self.weights)

    @property
    def prime(self) -> Prime:
        return Prime(self.p)

    def energy(self, exp: Exponent) -> int:
        return sum(w * a for w, a in zip(self.weights, exp))

    def with_bound(self, bound: int) -> NovikovRing:
        return NovikovRing(self.p, self.weights, bound)

    def zero(self) -> NovikovSeries:
        return NovikovSeries(self, {})

    def one(self) -> NovikovSeries:
        return self.constant(1)

    def constant(self, c: int) -> NovikovSeries:
        return NovikovSeries(self, {(0,) * self.rank: c})

    def monomial(self, exp: Iterable[int], c: int = 1) -> NovikovSeries:
        return NovikovSeries(self, {tuple(exp): c})

    def q(self, power: int = 1) -> NovikovSeries:
        """``q^power`` in a rank-1 ring."""
        self._require_rank1()
        return NovikovSeries(self, {(power,): 1})

    def series(self, coeffs: Mapping) -> NovikovSeries:
        """Build from ``{exponent: coeff}``; int keys are allowed for rank 1."""
        terms = {}
        for k, c in coeffs.items():
            exp = (k,) if isinstance(k, int) else tuple(k)
            terms[exp] = terms.get(exp, 0) + c
        return NovikovSeries(self, terms)

    def geometric_like(self, a: int) -> NovikovSeries:
        """``sum_{d>=1} q^(a*d)`` truncated at the energy bound."""
        self._require_rank1()
        if a < 1:
            raise ParameterError(f"a: must be positive, got {a}", field="a")
        w = self.weights[0]
        terms = {}
        m = a
        while m * w <= self.bound:
            terms[(m,)] = 1
            m += a
        return NovikovSeries(self, terms)

    def _require_rank1(self):
        if self.rank != 1:
            raise ParameterError(f"rank: operation needs rank 1, ring has rank {self.rank}", field="rank")

    def header(self) -> dict:
        return {"p": self.p, "rank": self.rank, "weights": list(self.weights), "bound": self.bound}


class NovikovSeries:
    """Immutable sparse truncated series; coefficients are residues in ``[0, p)``."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: NovikovRing, terms: Mapping[Exponent, int] | None = None, *, _trusted: bool = False):
        self.ring = ring
        if _trusted:
            self._terms = terms
            return
        p, r = ring.p, ring.rank
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(a) for a in exp)
            if len(exp) != r:
                raise ParameterError(f"exponent {list(exp)} does not have rank {r}", field="exp")
            if any(a < 0 for a in exp):
                raise ParameterError(f"exponent {list(exp)} has a negative entry", field="exp")
            c = int(c) % p
            if c and ring.energy(exp) <= ring.bound:
                clean[exp] = c
        self._terms = clean

    # -- access ---------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, exp) -> int:
        if isinstance(exp, int):
            exp = (exp,)
        return self._terms.get(tuple(exp), 0)

    def __getitem__(self, exp) -> FpElem:
        return FpElem(self.coeff(exp), self.ring.prime)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def support(self) -> list[Exponent]:
        return sorted(self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.ring.rank, 0)

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: NovikovSeries):
        if self.ring != other.ring:
            raise ParameterError(
                f"ring mismatch: {self.ring.header()} vs {other.ring.header()}", field="ring"
            )

    def _lift(self, other):
        if isinstance(other, NovikovSeries):
            self._check(other)
            return other
        if isinstance(other, FpElem):
            if other.p != self.ring.p:
                raise ParameterError("prime mismatch", field="prime")
            return self.ring.constant(other.residue)
        if isinstance(other, int):
            return self.ring.constant(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        p = self.ring.p
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return NovikovSeries(self.ring, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return NovikovSeries(self.ring, {e: p - c for e, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def scale(self, k: int) -> NovikovSeries:
        p = self.ring.p
        k %= p
        if k == 0:
            return self.ring.zero()
        return NovikovSeries(self.ring, {e: c * k % p for e, c in self._terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self.scale(other)
        if isinstance(other, FpElem):
            other = self._lift(other)
            return self.scale(other.constant_term())
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.ring.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, NovikovSeries):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, int):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self._terms.items())))

    def log_derivative(self, divisor: Iterable[int]) -> NovikovSeries:
        return log_derivative(self, divisor)

    def truncate(self, bound: int) -> NovikovSeries:
        return truncate(self, bound)

    # -- display / serialization ---------------------------------------

    def to_json(self) -> list[dict]:
        return [{"exp": list(e), "coeff": c} for e, c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, ring: NovikovRing, data: list[dict]) -> NovikovSeries:
        terms: dict[Exponent, int] = {}
        for item in data:
            exp = tuple(item["exp"])
            c = int(item["coeff"])
            if not 0 <= c < ring.p:
                raise ParameterError(f"coeff: {c} is not a canonical residue mod {ring.p}", field="coeff")
            if exp in terms:
                raise ParameterError(f"exp: duplicate exponent {list(exp)}", field="exp")
            if ring.energy(exp) > ring.bound and c:
                raise ParameterError(
                    f"exp: {list(exp)} has energy above the bound {ring.bound}", field="exp"
                )
            terms[exp] = c
        return cls(ring, terms)

    def pretty(self, var: str = "q") -> str:
        """Signed rendering with representatives in (-p/2, p/2]."""
        if not self._terms:
            return "0"
        parts = []
        for exp, c in sorted(self._terms.items()):
            s = signed_rep(c, self.ring.p)
            mono = _monomial_str(exp, var)
            mag = abs(s)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}{mono}"
            parts.append(("-" if s < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"NovikovSeries({self.pretty()}; p={self.ring.p}, E={self.ring.bound})"


def _monomial_str(exp: Exponent, var: str) -> str:
    if len(exp) == 1:
        a = exp[0]
        return "" if a == 0 else (var if a == 1 else f"{var}^{a}")
    bits = []
    for i, a in enumerate(exp):
        if a:
            bits.append(f"{var}{i + 1}" + (f"^{a}" if a > 1 else ""))
    return "*".join(bits)


def series_mul(a: NovikovSeries, b: NovikovSeries) -> NovikovSeries:
    a._check(b)
    ring = a.ring
    if not a._terms or not b._terms:
        return ring.zero()
    p, bound = ring.p, ring.bound
    out: dict[Exponent, int] = {}
    if ring.rank == 1:
        w = ring.weights[0]
        top = bound // w
        for (i,), c in a._terms.items():
            room = top - i
            if room < 0:
                continue
            for (j,), d in b._terms.items():
                if j <= room:
                    k = (i + j,)
                    out[k] = out.get(k, 0) + c * d
    else:
        energy = ring.energy
        for ea, c in a._terms.items():
            en_a = energy(ea)
            for eb, d in b._terms.items():
                if en_a + energy(eb) <= bound:
                    k = tuple(x + y for x, y in zip(ea, eb))
                    out[k] = out.get(k, 0) + c * d
    return NovikovSeries(ring, {e: c % p for e, c in out.items() if c % p}, _trusted=True)


def log_derivative(a: NovikovSeries, divisor: Iterable[int]) -> NovikovSeries:
    """``sum c_A q^A -> sum c_A (b.A) q^A`` where ``b.A`` is the divisor pairing."""
    divisor = tuple(divisor)
    if len(divisor) != a.ring.rank:
        raise ParameterError(
            f"divisor_weights: expected {a.ring.rank} entries, got {len(divisor)}",
            field="divisor_weights",
        )
    p = a.ring.p
    out = {}
    for e, c in a._terms.items():
        v = c * sum(x * y for x, y in zip(divisor, e)) % p
        if v:
            out[e] = v
    return NovikovSeries(a.ring, out, _trusted=True)


def truncate(a: NovikovSeries, bound: int) -> NovikovSeries:
    """Drop all terms of energy above ``bound``; the ring is unchanged."""
    if bound > a.ring.bound:
        raise ParameterError(
            f"E: truncation bound {bound} exceeds the ring bound {a.ring.bound}", field="E"
        )
    if bound < 0:
        raise ParameterError(f"E: truncation bound must be >= 0, got {bound}", field="E")
    energy = a.ring.energy
    return NovikovSeries(
        a.ring, {e: c for e, c in a._terms.items() if energy(e) <= bound}, _trusted=True
    )


def geometric_like(a: int, bound: int, p: int, weight: int = 1) -> NovikovSeries:
    return NovikovRing(p, (weight,), bound).geometric_like(a)
