"""Square matrices over the truncated Novikov ring and t-polynomials of them."""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .equivariant import EquivariantScalar
from .errors import ParameterError
from .novikov import NovikovRing, NovikovSeries


class OperatorMatrix:
    """Immutable ``n x n`` matrix of :class:`NovikovSeries`; entry ``(i, j)`` maps ``e_j`` to ``e_i``."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring: NovikovRing, rows: Sequence[Sequence[NovikovSeries]]):
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)
        n = len(self.rows)
        for r in self.rows:
            if len(r) != n:
                raise ParameterError("B: matrix must be square", field="B")
            for s in r:
                if s.ring != ring:
                    raise ParameterError("B: entry ring mismatch", field="B")

    @classmethod
    def zeros(cls, ring: NovikovRing, n: int) -> OperatorMatrix:
        z = ring.zero()
        return cls(ring, [[z] * n for _ in range(n)])

    @classmethod
    def identity(cls, ring: NovikovRing, n: int) -> OperatorMatrix:
        z, one = ring.zero(), ring.one()
        return cls(ring, [[one if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_ints(cls, ring: NovikovRing, rows: Sequence[Sequence[int]]) -> OperatorMatrix:
        return cls(ring, [[ring.constant(c) for c in r] for r in rows])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> NovikovSeries:
        i, j = ij
        return self.rows[i][j]

    def is_zero(self) -> bool:
        return all(s.is_zero() for r in self.rows for s in r)

    def nonzero_entries(self) -> Iterable[tuple[int, int, NovikovSeries]]:
        for i, r in enumerate(self.rows):
            for j, s in enumerate(r):
                if not s.is_zero():
                    yield i, j, s

    def _check(self, other: OperatorMatrix):
        if self.ring != other.ring or self.n != other.n:
            raise ParameterError("matrix shape or ring mismatch", field="B")

    def map(self, f) -> OperatorMatrix:
        return OperatorMatrix(self.ring, [[f(s) for s in r] for r in self.rows])

    def __add__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check(other)
        return OperatorMatrix(
            self.ring, [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check(other)
        return OperatorMatrix(
            self.ring, [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __neg__(self) -> OperatorMatrix:
        return self.map(lambda s: -s)

    def scale(self, k) -> OperatorMatrix:
        return self.map(lambda s: s * k)

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check(other)
        n = self.n
        z = self.ring.zero()
        out = [[z] * n for _ in range(n)]
        cols: list[list[tuple[int, NovikovSeries]]] = [[] for _ in range(n)]
        for k, j, s in other.nonzero_entries():
            cols[j].append((k, s))
        for i, row in enumerate(self.rows):
            for j in range(n):
                acc = z
                for k, s in cols[j]:
                    a = row[k]
                    if not a.is_zero():
                        acc = acc + a * s
                out[i][j] = acc
        return OperatorMatrix(self.ring, out)

    __mul__ = __matmul__

    def __pow__(self, k: int) -> OperatorMatrix:
        out = OperatorMatrix.identity(self.ring, self.n)
        for _ in range(k):
            out = out @ self
        return out

    def log_derivative(self, divisor, times: int = 1) -> OperatorMatrix:
        out = self
        for _ in range(times):
            out = out.map(lambda s: s.log_derivative(divisor))
        return out

    def truncate(self, bound: int) -> OperatorMatrix:
        return self.map(lambda s: s.truncate(bound))

    def commutator(self, other: OperatorMatrix) -> OperatorMatrix:
        return self @ other - other @ self

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def first_difference(self, other: OperatorMatrix) -> tuple[int, int] | None:
        for i in range(self.n):
            for j in range(self.n):
                if self.rows[i][j] != other.rows[i][j]:
                    return i, j
        return None

    def to_json(self) -> list[list[list[dict]]]:
        return [[s.to_json() for s in r] for r in self.rows]

    @classmethod
    def from_json(cls, ring: NovikovRing, data) -> OperatorMatrix:
        return cls(ring, [[NovikovSeries.from_json(ring, s) for s in r] for r in data])

    def __repr__(self):
        return "OperatorMatrix(" + "; ".join(", ".join(s.pretty() for s in r) for r in self.rows) + ")"


class MatrixPolynomial:
    """``sum_k t^k M_k`` with operator-matrix coefficients; zero coefficients are not stored."""

    __slots__ = ("ring", "n", "coeffs")

    def __init__(self, ring: NovikovRing, n: int, coeffs: Mapping[int, OperatorMatrix] | None = None):
        self.ring = ring
        self.n = n
        clean = {}
        for k, m in (coeffs or {}).items():
            if k < 0:
                raise ParameterError(f"t_power: negative power {k}", field="t_power")
            if m.n != n or m.ring != ring:
                raise ParameterError("matrix polynomial coefficient shape mismatch", field="matrix")
            if not m.is_zero():
                clean[k] = m
        self.coeffs = clean

    @classmethod
    def constant(cls, m: OperatorMatrix) -> MatrixPolynomial:
        return cls(m.ring, m.n, {0: m})

    def coeff(self, k: int) -> OperatorMatrix:
        return self.coeffs.get(k) or OperatorMatrix.zeros(self.ring, self.n)

    def t_powers(self) -> list[int]:
        return sorted(self.coeffs, reverse=True)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def _check(self, other: MatrixPolynomial):
        if self.ring != other.ring or self.n != other.n:
            raise ParameterError("matrix polynomial mismatch", field="matrix")

    def __add__(self, other: MatrixPolynomial) -> MatrixPolynomial:
        self._check(other)
        out = dict(self.coeffs)
        for k, m in other.coeffs.items():
            out[k] = out[k] + m if k in out else m
        return MatrixPolynomial(self.ring, self.n, out)

    def __neg__(self) -> MatrixPolynomial:
        return MatrixPolynomial(self.ring, self.n, {k: -m for k, m in self.coeffs.items()})

    def __sub__(self, other: MatrixPolynomial) -> MatrixPolynomial:
        return self + (-other)

    def __matmul__(self, other: MatrixPolynomial) -> MatrixPolynomial:
        self._check(other)
        out: dict[int, OperatorMatrix] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                prod = a @ b
                out[i + j] = out[i + j] + prod if i + j in out else prod
        return MatrixPolynomial(self.ring, self.n, out)

    __mul__ = __matmul__

    def scale(self, k) -> MatrixPolynomial:
        return MatrixPolynomial(self.ring, self.n, {j: m.scale(k) for j, m in self.coeffs.items()})

    def shift_t(self, k: int = 1) -> MatrixPolynomial:
        return MatrixPolynomial(self.ring, self.n, {j + k: m for j, m in self.coeffs.items()})

    def log_derivative(self, divisor, times: int = 1) -> MatrixPolynomial:
        return MatrixPolynomial(
            self.ring, self.n, {j: m.log_derivative(divisor, times) for j, m in self.coeffs.items()}
        )

    def truncate(self, bound: int) -> MatrixPolynomial:
        return MatrixPolynomial(self.ring, self.n, {j: m.truncate(bound) for j, m in self.coeffs.items()})

    def commutator(self, other: MatrixPolynomial) -> MatrixPolynomial:
        return self @ other - other @ self

    def flip_t(self) -> MatrixPolynomial:
        """Apply ``t -> -t``; converts between the two sign conventions for t."""
        return MatrixPolynomial(
            self.ring, self.n, {j: (-m if j % 2 else m) for j, m in self.coeffs.items()}
        )

    def entry(self, i: int, j: int) -> EquivariantScalar:
        return EquivariantScalar(
            self.ring, {k: m.rows[i][j] for k, m in self.coeffs.items()}, cap=max(self.ring.p, self.degree())
        )

    def apply(self, v: Sequence) -> list[EquivariantScalar]:
        """Apply to a vector of Novikov series or equivariant scalars (Lambda-linear extension)."""
        cap = max(self.ring.p, self.degree() + 1)
        vec = [x if isinstance(x, EquivariantScalar) else EquivariantScalar.from_series(x, cap=cap) for x in v]
        out = []
        for i in range(self.n):
            acc = EquivariantScalar.zero(self.ring, cap)
            for j in range(self.n):
                if vec[j].is_zero():
                    continue
                e = self.entry(i, j)
                if not e.is_zero():
                    acc = acc + e * vec[j]
            out.append(acc)
        return out

    def first_difference(self, other: MatrixPolynomial) -> dict | None:
        for k in sorted(set(self.coeffs) | set(other.coeffs), reverse=True):
            slot = self.coeff(k).first_difference(other.coeff(k))
            if slot is not None:
                i, j = slot
                return {
                    "t_power": k,
                    "row": i,
                    "col": j,
                    "left": self.coeff(k).rows[i][j].to_json(),
                    "right": other.coeff(k).rows[i][j].to_json(),
                }
        return None

    def __eq__(self, other):
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        return self.ring == other.ring and self.n == other.n and self.coeffs == other.coeffs

    def to_json(self) -> list[dict]:
        return [{"t_power": k, "matrix": self.coeffs[k].to_json()} for k in self.t_powers()]

    @classmethod
    def from_json(cls, ring: NovikovRing, n: int, data: list[dict]) -> MatrixPolynomial:
        coeffs = {}
        for item in data:
            k = int(item["t_power"])
            if k in coeffs:
                raise ParameterError(f"t_power: duplicate power {k}", field="t_power")
            coeffs[k] = OperatorMatrix.from_json(ring, item["matrix"])
        return cls(ring, n, coeffs)

    def __repr__(self):
        return "MatrixPolynomial(" + ", ".join(f"t^{k}: {self.coeffs[k]!r}" for k in self.t_powers()) + ")"
