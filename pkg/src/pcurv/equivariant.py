"""The coefficient ring Lambda[t, theta] of mu_p-equivariant quantum cohomology.

An element is stored as two t-polynomials with Novikov coefficients,
``even + odd * theta``.  For odd ``p`` the relation is ``theta^2 = 0``; for
``p = 2`` it is ``theta^2 = t`` and products are rewritten eagerly, so both
cases share one shape.
"""
from __future__ import annotations

from typing import Mapping

from .errors import ParameterError, TDegreeOverflow
from .novikov import NovikovRing, NovikovSeries

Slots = dict[int, NovikovSeries]


def _clean(slots: Mapping[int, NovikovSeries]) -> Slots:
    return {j: s for j, s in slots.items() if not s.is_zero()}


def _add_into(out: Slots, j: int, s: NovikovSeries):
    if j in out:
        v = out[j] + s
        if v.is_zero():
            del out[j]
        else:
            out[j] = v
    elif not s.is_zero():
        out[j] = s


class EquivariantScalar:
    __slots__ = ("ring", "even", "odd", "cap")

    def __init__(self, ring: NovikovRing, even: Mapping[int, NovikovSeries] | None = None,
                 odd: Mapping[int, NovikovSeries] | None = None, cap: int | None = None):
        self.ring = ring
        self.cap = ring.p if cap is None else cap
        self.even = _clean(even or {})
        self.odd = _clean(odd or {})
        for slots in (self.even, self.odd):
            for j, s in slots.items():
                if j < 0:
                    raise ParameterError(f"negative t-power {j}", field="t_power")
                if s.ring != ring:
                    raise ParameterError("ring mismatch in equivariant slot", field="ring")
        self._check_cap()

    def _check_cap(self):
        top = max([*self.even, *self.odd], default=0)
        if top > self.cap:
            raise TDegreeOverflow(f"t-degree {top} exceeds cap {self.cap}")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, ring: NovikovRing, cap: int | None = None) -> EquivariantScalar:
        return cls(ring, cap=cap)

    @classmethod
    def from_series(cls, s: NovikovSeries, t_power: int = 0, cap: int | None = None) -> EquivariantScalar:
        return cls(s.ring, {t_power: s}, cap=cap)

    @classmethod
    def t(cls, ring: NovikovRing, power: int = 1, cap: int | None = None) -> EquivariantScalar:
        return cls(ring, {power: ring.one()}, cap=cap)

    @classmethod
    def theta(cls, ring: NovikovRing, cap: int | None = None) -> EquivariantScalar:
        return cls(ring, odd={0: ring.one()}, cap=cap)

    # -- queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.even and not self.odd

    def has_theta(self) -> bool:
        return bool(self.odd)

    def t_coeff(self, j: int) -> NovikovSeries:
        return self.even.get(j, self.ring.zero())

    def theta_coeff(self, j: int) -> NovikovSeries:
        return self.odd.get(j, self.ring.zero())

    def t_degree(self) -> int:
        return max([*self.even, *self.odd], default=-1)

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: EquivariantScalar):
        if self.ring != other.ring:
            raise ParameterError("ring mismatch", field="ring")

    def __add__(self, other: EquivariantScalar) -> EquivariantScalar:
        if not isinstance(other, EquivariantScalar):
            return NotImplemented
        self._check(other)
        even, odd = dict(self.even), dict(self.odd)
        for j, s in other.even.items():
            _add_into(even, j, s)
        for j, s in other.odd.items():
            _add_into(odd, j, s)
        return EquivariantScalar(self.ring, even, odd, max(self.cap, other.cap))

    def __neg__(self) -> EquivariantScalar:
        return EquivariantScalar(
            self.ring, {j: -s for j, s in self.even.items()}, {j: -s for j, s in self.odd.items()}, self.cap
        )

    def __sub__(self, other: EquivariantScalar) -> EquivariantScalar:
        if not isinstance(other, EquivariantScalar):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, EquivariantScalar):
            return eq_mul(self, other)
        if isinstance(other, NovikovSeries):
            return self.scale_series(other)
        if isinstance(other, int):
            return EquivariantScalar(
                self.ring,
                {j: s.scale(other) for j, s in self.even.items()},
                {j: s.scale(other) for j, s in self.odd.items()},
                self.cap,
            )
        return NotImplemented

    __rmul__ = __mul__

    def scale_series(self, lam: NovikovSeries) -> EquivariantScalar:
        return EquivariantScalar(
            self.ring,
            {j: lam * s for j, s in self.even.items()},
            {j: lam * s for j, s in self.odd.items()},
            self.cap,
        )

    def shift_t(self, k: int = 1) -> EquivariantScalar:
        """Multiply by ``t^k``."""
        return EquivariantScalar(
            self.ring,
            {j + k: s for j, s in self.even.items()},
            {j + k: s for j, s in self.odd.items()},
            self.cap,
        )

    def log_derivative(self, divisor) -> EquivariantScalar:
        """Novikov derivative extended t, theta-linearly."""
        return EquivariantScalar(
            self.ring,
            {j: s.log_derivative(divisor) for j, s in self.even.items()},
            {j: s.log_derivative(divisor) for j, s in self.odd.items()},
            self.cap,
        )

    def truncate(self, bound: int) -> EquivariantScalar:
        return EquivariantScalar(
            self.ring,
            {j: s.truncate(bound) for j, s in self.even.items()},
            {j: s.truncate(bound) for j, s in self.odd.items()},
            self.cap,
        )

    def flip_t(self) -> EquivariantScalar:
        """The involution ``t -> -t`` (theta fixed)."""
        return EquivariantScalar(
            self.ring,
            {j: (-s if j % 2 else s) for j, s in self.even.items()},
            {j: (-s if j % 2 else s) for j, s in self.odd.items()},
            self.cap,
        )

    def __eq__(self, other):
        if not isinstance(other, EquivariantScalar):
            return NotImplemented
        return self.ring == other.ring and self.even == other.even and self.odd == other.odd

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.even.items())), tuple(sorted(self.odd.items()))))

    # -- display / serialization ---------------------------------------

    def to_json(self) -> dict:
        return {
            "even": {str(j): self.even[j].to_json() for j in sorted(self.even)},
            "odd": {str(j): self.odd[j].to_json() for j in sorted(self.odd)},
        }

    @classmethod
    def from_json(cls, ring: NovikovRing, data: dict, cap: int | None = None) -> EquivariantScalar:
        even = {int(j): NovikovSeries.from_json(ring, s) for j, s in data.get("even", {}).items()}
        odd = {int(j): NovikovSeries.from_json(ring, s) for j, s in data.get("odd", {}).items()}
        return cls(ring, even, odd, cap)

    def pretty(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for slots, th in ((self.even, ""), (self.odd, "θ")):
            for j in sorted(slots, reverse=True):
                tp = "" if j == 0 else ("t" if j == 1 else f"t^{j}")
                mono = tp + th
                body = slots[j].pretty()
                if not mono:
                    parts.append(body)
                elif body == "1":
                    parts.append(mono)
                elif body == "-1":
                    parts.append("-" + mono)
                else:
                    parts.append(f"{mono}({body})")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"EquivariantScalar({self.pretty()})"


def eq_mul(a: EquivariantScalar, b: EquivariantScalar) -> EquivariantScalar:
    a._check(b)
    cap = max(a.cap, b.cap)
    even: Slots = {}
    odd: Slots = {}
    for i, s in a.even.items():
        for j, r in b.even.items():
            _add_into(even, i + j, s * r)
        for j, r in b.odd.items():
            _add_into(odd, i + j, s * r)
    for i, s in a.odd.items():
        for j, r in b.even.items():
            _add_into(odd, i + j, s * r)
        if a.ring.p == 2:
            # theta^2 = t
            for j, r in b.odd.items():
                _add_into(even, i + j + 1, s * r)
    return EquivariantScalar(a.ring, even, odd, cap)


def monomial(ring: NovikovRing, i: int, cap: int | None = None) -> EquivariantScalar:
    """The degree-``i`` generator: ``t^(i/2)`` for even ``i``, ``t^((i-1)/2) theta`` for odd ``i``."""
    if i < 0:
        raise ParameterError(f"i: must be non-negative, got {i}", field="i")
    if i % 2 == 0:
        return EquivariantScalar(ring, {i // 2: ring.one()}, cap=cap)
    return EquivariantScalar(ring, odd={(i - 1) // 2: ring.one()}, cap=cap)
