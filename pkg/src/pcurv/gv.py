"""Genus-0 Gopakumar-Vafa conversions for one-parameter Calabi-Yau 3-folds.

GW data enters as the integral triple correlators ``c_m = <b, b, b>_{0,3,m}``
(divisor axiom already applied), so the multiple-cover sum reads
``c_m = sum_{d | m} n_d d^3`` and never divides.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .connection import GradedConnection
from .errors import ParameterError
from .localp1 import ANTIDIAGONAL, BASIS
from .matrices import OperatorMatrix
from .novikov import NovikovRing, NovikovSeries


def _clean(values: dict[int, int]) -> dict[int, int]:
    out = {}
    for d, v in values.items():
        d, v = int(d), int(v)
        if d < 1:
            raise ParameterError(f"values: degree must be positive, got {d}", field="values")
        if v:
            out[d] = v
    return out


@dataclass(frozen=True)
class BPSTable:
    max_degree: int
    values: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", {d: v for d, v in _clean(self.values).items() if d <= self.max_degree})

    def __getitem__(self, d: int) -> int:
        return self.values.get(d, 0)

    def to_json(self) -> dict:
        return _table_json("bps", self.max_degree, self.values)


@dataclass(frozen=True)
class GWTable:
    max_degree: int
    values: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", {d: v for d, v in _clean(self.values).items() if d <= self.max_degree})

    def __getitem__(self, m: int) -> int:
        return self.values.get(m, 0)

    def to_json(self) -> dict:
        return _table_json("gw", self.max_degree, self.values)


def _table_json(kind: str, D: int, values: dict[int, int]) -> dict:
    return {"kind": kind, "max_degree": D, "values": {str(d): str(values[d]) for d in sorted(values)}}


def table_from_json(data: dict) -> BPSTable | GWTable:
    kind = data.get("kind")
    if kind not in ("bps", "gw"):
        raise ParameterError(f"kind: expected 'bps' or 'gw', got {kind!r}", field="kind")
    try:
        D = int(data["max_degree"])
    except (KeyError, TypeError, ValueError):
        raise ParameterError("max_degree: missing or not an integer", field="max_degree") from None
    if D < 1:
        raise ParameterError(f"max_degree: must be >= 1, got {D}", field="max_degree")
    values = {}
    for k, v in data.get("values", {}).items():
        try:
            d = int(k)
            values[d] = int(v)
        except (TypeError, ValueError):
            raise ParameterError(f"values: entry {k!r}: {v!r} is not an integer", field="values") from None
        if d > D:
            raise ParameterError(f"values: degree {d} exceeds max_degree {D}", field="values")
    cls = BPSTable if kind == "bps" else GWTable
    return cls(D, values)


def bps_to_gw(n: BPSTable, D: int | None = None) -> GWTable:
    D = n.max_degree if D is None else D
    if D < 1:
        raise ParameterError(f"D: must be >= 1, got {D}", field="max_degree")
    c = {}
    for d, nd in n.values.items():
        w = nd * d ** 3
        for m in range(d, D + 1, d):
            c[m] = c.get(m, 0) + w
    return GWTable(D, c)


def gw_to_bps(c: GWTable) -> BPSTable:
    """Invert the multiple-cover sum degree by degree (integer subtraction only)."""
    n: dict[int, int] = {}
    for d in range(1, c.max_degree + 1):
        rest = c[d]
        for e, ne in n.items():
            if d % e == 0 and e < d:
                rest -= ne * e ** 3
        # d^3 n_d enters with weight d^3 at m = d
        if rest % d ** 3:
            raise ParameterError(
                f"values: degree {d} leaves remainder {rest} not divisible by {d}^3; "
                "table is not a multiple-cover sum",
                field="values",
            )
        if rest:
            n[d] = rest // d ** 3
    return BPSTable(c.max_degree, n)


def _quantum_series(c: GWTable, ring: NovikovRing) -> NovikovSeries:
    w = ring.weights[0]
    return ring.series({m: v for m, v in c.values.items() if m * w <= ring.bound})


def build_divisor_connection(kappa: int, c: GWTable, p: int, E: int) -> GradedConnection:
    """Rank-4 divisor connection with ``b * b = (kappa + sum c_m q^m) C``."""
    ring = NovikovRing(p, (1,), E)
    z, one = ring.zero(), ring.one()
    rows = [
        [z, z, z, z],
        [one, z, z, z],
        [z, ring.constant(kappa) + _quantum_series(c, ring), z, z],
        [z, z, one, z],
    ]
    return GradedConnection(ring, BASIS, ANTIDIAGONAL, OperatorMatrix(ring, rows), (1,))


def multiple_cover_block(c: GWTable, p: int, E: int) -> NovikovSeries:
    """Predicted quantum part of the ``b -> C`` slot of the ``t^(p-1)`` coefficient."""
    ring = NovikovRing(p, (1,), E)
    return -ring.series({m: v for m, v in c.values.items() if m % p == 0 and m <= E})
