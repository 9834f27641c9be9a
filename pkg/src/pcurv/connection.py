"""Graded quantum connections ``nabla = t * d_b + B`` and their p-curvature.

Two independent engines compute the p-curvature ``psi = nabla^p - t^(p-1) nabla``:

* :func:`p_curvature_direct` iterates the operator on constant basis vectors
  and reads off columns.  It makes no use of linearity.
* :func:`solve_by_covariant_constancy` starts from the leading coefficient
  ``B^(p-1) - B`` and integrates ``t d_b psi = [psi, B]`` one t-power at a time.

Everything else in this module is a predicate that checks one of the
algebraic identities relating the two.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .equivariant import EquivariantScalar
from .errors import (
    InconsistencyError,
    InternalError,
    InvariantViolation,
    ParameterError,
    UnsupportedError,
)
from .matrices import MatrixPolynomial, OperatorMatrix
from .novikov import NovikovRing, NovikovSeries
from .verdict import Verdict

EquivariantVector = list[EquivariantScalar]


@dataclass(frozen=True)
class BasisElement:
    name: str
    degree: int


def fp_det(rows: Sequence[Sequence[int]], p: int) -> int:
    """Determinant mod ``p`` by Gaussian elimination."""
    m = [[x % p for x in r] for r in rows]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for r in range(c + 1, n):
            f = m[r][c] * inv % p
            if f:
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[c])]
    return det % p


@dataclass(frozen=True)
class GradedConnection:
    ring: NovikovRing
    basis: tuple[BasisElement, ...]
    pairing: tuple[tuple[int, ...], ...]
    B: OperatorMatrix
    divisor: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "divisor", tuple(int(d) for d in self.divisor))
        p = self.ring.p
        object.__setattr__(self, "pairing", tuple(tuple(int(x) % p for x in r) for r in self.pairing))
        n = len(self.basis)
        if n == 0:
            raise ParameterError("basis: must not be empty", field="basis")
        for e in self.basis:
            if e.degree < 0 or e.degree % 2:
                raise ParameterError(
                    f"basis: degree of {e.name!r} must be even and non-negative, got {e.degree}",
                    field="basis",
                )
        if len({e.name for e in self.basis}) != n:
            raise ParameterError("basis: names must be distinct", field="basis")
        if self.B.n != n or self.B.ring != self.ring:
            raise ParameterError(f"B: expected a {n}x{n} matrix over the connection ring", field="B")
        if len(self.pairing) != n or any(len(r) != n for r in self.pairing):
            raise ParameterError(f"pairing: expected a {n}x{n} matrix", field="pairing")
        if len(self.divisor) != self.ring.rank:
            raise ParameterError(
                f"divisor_weights: expected {self.ring.rank} entries, got {len(self.divisor)}",
                field="divisor_weights",
            )
        self.check_graded()
        top = self.top_degree
        for i, j in itertools.product(range(n), repeat=2):
            x = self.pairing[i][j]
            if x != self.pairing[j][i]:
                raise InvariantViolation(f"pairing: not symmetric at ({i}, {j})")
            if x and self.basis[i].degree + self.basis[j].degree != top:
                raise InvariantViolation(
                    f"pairing: ({self.basis[i].name}, {self.basis[j].name}) pairs degrees "
                    f"that do not sum to {top}"
                )

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def E(self) -> int:
        return self.ring.bound

    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def degrees(self) -> list[int]:
        return [e.degree for e in self.basis]

    @property
    def top_degree(self) -> int:
        d = self.degrees
        return min(d) + max(d)

    def index(self, name: str) -> int:
        for i, e in enumerate(self.basis):
            if e.name == name:
                return i
        raise KeyError(name)

    def check_graded(self):
        """B must raise cohomological degree by exactly 2."""
        deg = self.degrees
        for i, j, _ in self.B.nonzero_entries():
            if deg[i] != deg[j] + 2:
                raise InvariantViolation(
                    f"B: entry ({i}, {j}) maps degree {deg[j]} to degree {deg[i]}; "
                    "B must raise degree by 2"
                )

    def scaled(self, k: int) -> GradedConnection:
        """The connection for the class ``k * b``."""
        return GradedConnection(
            self.ring, self.basis, self.pairing, self.B.scale(k), tuple(k * d for d in self.divisor)
        )

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "E": self.E,
            "rank": self.ring.rank,
            "energy_weights": list(self.ring.weights),
            "divisor_weights": list(self.divisor),
            "basis": [{"name": e.name, "degree": e.degree} for e in self.basis],
            "pairing": [list(r) for r in self.pairing],
            "B": self.B.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> GradedConnection:
        for key in ("p", "E", "basis", "pairing", "B", "divisor_weights"):
            if key not in data:
                raise ParameterError(f"{key}: missing from connection file", field=key)
        weights = tuple(data.get("energy_weights", [1]))
        rank = data.get("rank", len(weights))
        if rank != len(weights):
            raise ParameterError(
                f"rank: {rank} does not match {len(weights)} energy weights", field="rank"
            )
        ring = NovikovRing(int(data["p"]), weights, int(data["E"]))
        basis = tuple(BasisElement(str(b["name"]), int(b["degree"])) for b in data["basis"])
        return cls(
            ring,
            basis,
            tuple(tuple(r) for r in data["pairing"]),
            OperatorMatrix.from_json(ring, data["B"]),
            tuple(data["divisor_weights"]),
        )


# -- the operator ----------------------------------------------------------


def basis_vector(conn: GradedConnection, j: int, cap: int | None = None) -> EquivariantVector:
    ring = conn.ring
    return [
        EquivariantScalar(ring, {0: ring.one()} if i == j else {}, cap=cap) for i in range(conn.n)
    ]


def vector_from_series(values: Sequence[NovikovSeries], cap: int | None = None) -> EquivariantVector:
    return [EquivariantScalar.from_series(s, cap=cap) for s in values]


def apply_nabla(conn: GradedConnection, v: EquivariantVector) -> EquivariantVector:
    if len(v) != conn.n:
        raise ParameterError(f"vector: expected {conn.n} entries, got {len(v)}", field="vector")
    for x in v:
        if x.ring != conn.ring:
            raise ParameterError("vector: ring mismatch", field="ring")
    out = []
    for i in range(conn.n):
        acc = v[i].log_derivative(conn.divisor).shift_t(1)
        for j, s in enumerate(conn.B.rows[i]):
            if not s.is_zero() and not v[j].is_zero():
                acc = acc + v[j].scale_series(s)
        out.append(acc)
    return out


def apply_p_curvature_operator(conn: GradedConnection, v: EquivariantVector) -> EquivariantVector:
    """Evaluate ``nabla^p - t^(p-1) nabla`` on ``v`` by iteration."""
    p = conn.p
    once = apply_nabla(conn, v)
    w = once
    for _ in range(p - 1):
        w = apply_nabla(conn, w)
    return [a - b.shift_t(p - 1) for a, b in zip(w, once)]


def p_curvature_direct(conn: GradedConnection) -> MatrixPolynomial:
    conn.check_graded()
    p, n, ring = conn.p, conn.n, conn.ring
    coeffs: dict[int, list[list[NovikovSeries]]] = {}
    for j in range(n):
        col = apply_p_curvature_operator(conn, basis_vector(conn, j))
        for i, x in enumerate(col):
            if x.has_theta():
                raise InternalError(f"p-curvature entry ({i}, {j}) has a theta component")
            for k, s in x.even.items():
                if k >= p:
                    raise InternalError(f"p-curvature entry ({i}, {j}) has a t^{k} term")
                rows = coeffs.setdefault(k, [[ring.zero()] * n for _ in range(n)])
                rows[i][j] = s
    return MatrixPolynomial(ring, n, {k: OperatorMatrix(ring, rows) for k, rows in coeffs.items()})


def matrix_log_derivative(conn: GradedConnection, j: int) -> OperatorMatrix:
    """``(q d/dq)^j B`` along the divisor direction."""
    if j < 0:
        raise ParameterError(f"j: order must be >= 0, got {j}", field="j")
    return conn.B.log_derivative(conn.divisor, j)


def leading_term(conn: GradedConnection) -> OperatorMatrix:
    return matrix_log_derivative(conn, conn.p - 1) - conn.B


def classical_steenrod(conn: GradedConnection) -> MatrixPolynomial:
    """``B(0)^p - t^(p-1) B(0)`` with ``B(0)`` the energy-zero part of ``B``.

    The Bockstein term is dropped: the divisor is assumed to lift integrally.
    """
    B0 = conn.B.truncate(0)
    p = conn.p
    return MatrixPolynomial(conn.ring, conn.n, {0: B0 ** p}) - MatrixPolynomial(
        conn.ring, conn.n, {p - 1: B0}
    )


# -- covariant-constancy solver --------------------------------------------


def _integrate(conn: GradedConnection, rhs: OperatorMatrix, constant: OperatorMatrix, label: str) -> OperatorMatrix:
    """Solve ``X' = rhs`` entrywise; the energy-zero part of X comes from ``constant``."""
    p, ring = conn.p, conn.ring
    rows = []
    for i, r in enumerate(rhs.rows):
        out_row = []
        for j, s in enumerate(r):
            terms = {}
            for exp, c in s.items():
                slope = sum(a * b for a, b in zip(conn.divisor, exp)) % p
                if slope == 0:
                    raise InconsistencyError(
                        f"{label}: right-hand side has a kernel term q^{list(exp)} at ({i}, {j})"
                    )
                terms[exp] = c * pow(slope, -1, p)
            out_row.append(NovikovSeries(ring, terms) + constant.rows[i][j].truncate(0))
        rows.append(out_row)
    return OperatorMatrix(ring, rows)


def _check_solver_scope(conn: GradedConnection):
    if conn.p < 5:
        raise UnsupportedError(f"prime: recursion solver needs p >= 5, got {conn.p}")
    if conn.ring.rank != 1:
        raise UnsupportedError("rank: recursion solver needs a rank-1 Novikov ring")
    if set(conn.degrees) != {0, 2, 4, 6}:
        raise UnsupportedError(
            f"basis: recursion solver needs degrees exactly {{0,2,4,6}}, got {sorted(set(conn.degrees))}"
        )
    deg = conn.degrees
    for i, j, s in conn.B.nonzero_entries():
        if (deg[j], deg[i]) != (2, 4) and s != s.truncate(0):
            raise UnsupportedError(
                f"B: quantum terms only allowed in the H^2 -> H^4 block, found one at ({i}, {j})"
            )


def solve_by_covariant_constancy(conn: GradedConnection) -> MatrixPolynomial:
    _check_solver_scope(conn)
    conn.check_graded()
    p, B = conn.p, conn.B
    classical = classical_steenrod(conn)
    C1 = leading_term(conn)
    if not C1.log_derivative(conn.divisor).is_zero():
        raise InconsistencyError("C1: leading coefficient is not killed by the derivation")
    C2 = _integrate(conn, C1.commutator(B), classical.coeff(p - 2), "C2")
    C3 = _integrate(conn, C2.commutator(B), classical.coeff(p - 3), "C3")
    if not C3.commutator(B).is_zero():
        raise InconsistencyError("C3: residual identity [C3, B] = 0 fails")
    return MatrixPolynomial(conn.ring, conn.n, {p - 1: C1, p - 2: C2, p - 3: C3})


# -- verification predicates -----------------------------------------------


def random_series(ring: NovikovRing, rng: random.Random, density: float = 0.5) -> NovikovSeries:
    """Random rank-1 series (or constant in higher rank) within the energy bound."""
    if ring.rank == 1:
        top = ring.bound // ring.weights[0]
        terms = {(m,): rng.randrange(ring.p) for m in range(top + 1) if rng.random() < density}
    else:
        terms = {(0,) * ring.rank: rng.randrange(ring.p)}
        for _ in range(4):
            exp = tuple(rng.randrange(3) for _ in range(ring.rank))
            terms[exp] = rng.randrange(ring.p)
    return NovikovSeries(ring, terms)


def check_lambda_linearity(
    conn: GradedConnection,
    psi: MatrixPolynomial,
    trials: int = 100,
    seed: int = 0,
    samples: Iterable[tuple[NovikovSeries, Sequence[NovikovSeries]]] | None = None,
) -> Verdict:
    """Compare ``(nabla^p - t^(p-1) nabla)(lam * v)`` with ``lam * psi(v)``.

    ``samples`` overrides the random draws with explicit ``(lam, v)`` pairs.
    """
    verdict = Verdict("lambda_linearity")
    if samples is None:
        rng = random.Random(seed)
        samples = (
            (random_series(conn.ring, rng), [random_series(conn.ring, rng, 0.3) for _ in range(conn.n)])
            for _ in range(trials)
        )
    for t, (lam, v) in enumerate(samples):
        lv = vector_from_series([lam * x for x in v])
        lhs = apply_p_curvature_operator(conn, lv)
        rhs = [x.scale_series(lam) for x in psi.apply(v)]
        bad = next((i for i, (a, b) in enumerate(zip(lhs, rhs)) if a != b), None)
        verdict.record(
            bad is None,
            trial=t,
            row=bad,
            lam=lam.to_json(),
            lhs=None if bad is None else lhs[bad].to_json(),
            rhs=None if bad is None else rhs[bad].to_json(),
        )
    return verdict


def check_covariant_constancy(conn: GradedConnection, psi: MatrixPolynomial) -> Verdict:
    verdict = Verdict("covariant_constancy")
    Bpoly = MatrixPolynomial.constant(conn.B)
    lhs = psi.log_derivative(conn.divisor).shift_t(1)
    rhs = psi.commutator(Bpoly)
    diff = lhs.first_difference(rhs)
    verdict.record(diff is None, **(diff or {}))
    return verdict


def check_nilpotency_words(conn: GradedConnection, max_len: int, word_length: int = 4) -> Verdict:
    """Every product of ``word_length`` matrices from ``{B^(0), ..., B^(max_len)}`` vanishes.

    Longer words have a vanishing prefix, so length ``word_length`` suffices.
    """
    verdict = Verdict("nilpotency_words")
    derivs: list[OperatorMatrix] = []
    cur = conn.B
    for _ in range(max_len + 1):
        derivs.append(cur)
        cur = cur.log_derivative(conn.divisor)
    # identical derivatives give identical words; test each distinct matrix once
    distinct: dict[OperatorMatrix, int] = {}
    for j, m in enumerate(derivs):
        distinct.setdefault(m, j)
    letters = [(j, m) for m, j in distinct.items() if not m.is_zero()]

    def walk(prefix: OperatorMatrix, word: tuple[int, ...]):
        if len(word) == word_length:
            verdict.record(prefix.is_zero(), word=list(word))
            return
        for j, m in letters:
            prod = prefix @ m
            if prod.is_zero():
                verdict.checked += 1
                continue
            walk(prod, word + (j,))

    for j, m in letters:
        walk(m, (j,))
    return verdict


def structure_constants(conn: GradedConnection, psi: MatrixPolynomial) -> dict[tuple[int, int], EquivariantScalar]:
    """``(psi(e_i), e_j)`` for every basis pair."""
    if fp_det(conn.pairing, conn.p) == 0:
        raise ParameterError("pairing: degenerate mod p", field="pairing")
    n = conn.n
    columns = [psi.apply([conn.ring.one() if k == i else conn.ring.zero() for k in range(n)]) for i in range(n)]
    table = {}
    for i in range(n):
        for j in range(n):
            acc = EquivariantScalar.zero(conn.ring)
            for k in range(n):
                g = conn.pairing[k][j]
                if g and not columns[i][k].is_zero():
                    acc = acc + columns[i][k] * g
            table[(i, j)] = acc
    return table


def structure_table(conn: GradedConnection, psi: MatrixPolynomial) -> list[dict]:
    """Sorted, JSON-ready rows of the nonzero structure constants."""
    out = []
    for (i, j), val in sorted(structure_constants(conn, psi).items()):
        if not val.is_zero():
            out.append({"input": conn.basis[i].name, "pair_with": conn.basis[j].name, "value": val.to_json()})
    return out


def check_frobenius_scaling(conn: GradedConnection, k: int, psi: MatrixPolynomial | None = None) -> Verdict:
    verdict = Verdict("frobenius_scaling")
    psi = p_curvature_direct(conn) if psi is None else psi
    psi_k = p_curvature_direct(conn.scaled(k))
    diff = psi_k.first_difference(psi.scale(k))
    verdict.record(diff is None, k=k, **(diff or {}))
    return verdict


def check_leading_term(conn: GradedConnection, psi: MatrixPolynomial) -> Verdict:
    verdict = Verdict("leading_term")
    p = conn.p
    verdict.record(psi.degree() < p, detail="t^p coefficient is nonzero")
    slot = psi.coeff(p - 1).first_difference(leading_term(conn))
    verdict.record(slot is None, t_power=p - 1, slot=slot)
    return verdict


def check_classical_limit(conn: GradedConnection, psi: MatrixPolynomial) -> Verdict:
    verdict = Verdict("classical_limit")
    diff = psi.truncate(0).first_difference(classical_steenrod(conn))
    verdict.record(diff is None, **(diff or {}))
    return verdict


def check_degree_homogeneity(conn: GradedConnection, psi: MatrixPolynomial) -> Verdict:
    """The ``t^(p-k)`` coefficient maps degree ``d`` to degree ``d + 2k``."""
    verdict = Verdict("degree_homogeneity")
    p, deg = conn.p, conn.degrees
    for tp, m in psi.coeffs.items():
        for i, j, _ in m.nonzero_entries():
            ok = deg[i] == deg[j] + 2 * (p - tp)
            verdict.record(ok, t_power=tp, row=i, col=j)
    return verdict


def fermat_support(conn: GradedConnection, psi: MatrixPolynomial) -> Verdict:
    """Quantum terms of the ``t^(p-1)`` coefficient sit on exponents with ``b.A = 0 mod p``."""
    verdict = Verdict("fermat_support")
    p = conn.p
    for i, j, s in psi.coeff(p - 1).nonzero_entries():
        for exp, _ in s.items():
            if conn.ring.energy(exp) == 0:
                continue
            slope = sum(a * b for a, b in zip(conn.divisor, exp)) % p
            verdict.record(slope == 0, row=i, col=j, exp=list(exp))
    return verdict


# -- random fixtures --------------------------------------------------------


def random_graded_connection(
    p: int,
    E: int,
    rng: random.Random,
    cy3_shape: bool = True,
    divisor: int | None = None,
    max_middle: int = 2,
) -> GradedConnection:
    """A random connection on a basis with degrees 0, 2, 4, 6.

    With ``cy3_shape`` the quantum corrections sit only in the H^2 -> H^4
    block, as the fundamental-class axiom forces for a Calabi-Yau 3-fold;
    otherwise every degree-raising slot gets a random series.
    """
    ring = NovikovRing(p, (1,), E)
    mid = rng.randint(1, max_middle)
    basis = [BasisElement("1", 0)]
    basis += [BasisElement(f"b{i + 1}", 2) for i in range(mid)]
    basis += [BasisElement(f"c{i + 1}", 4) for i in range(mid)]
    basis += [BasisElement("pt", 6)]
    n = len(basis)
    pairing = [[0] * n for _ in range(n)]
    pairing[0][n - 1] = pairing[n - 1][0] = 1
    for i in range(mid):
        pairing[1 + i][1 + mid + i] = pairing[1 + mid + i][1 + i] = 1
    rows = [[ring.zero()] * n for _ in range(n)]
    for i, j in itertools.product(range(n), repeat=2):
        if basis[i].degree != basis[j].degree + 2:
            continue
        quantum = not cy3_shape or basis[j].degree == 2
        if quantum:
            rows[i][j] = random_series(ring, rng)
        else:
            rows[i][j] = ring.constant(rng.randrange(p))
    if divisor is None:
        divisor = rng.randrange(1, 3 * p)
    return GradedConnection(ring, tuple(basis), tuple(map(tuple, pairing)), OperatorMatrix(ring, rows), (divisor,))
