"""Fixtures for the resolved conifold Tot(O(-1) + O(-1) -> P^1).

Basis ``<1, b, C, P>`` in degrees 0, 2, 4, 6.  Quantum multiplication by the
fiber class ``b`` is strictly subdiagonal with a single quantum entry
``q/(1-q)`` in the ``b -> C`` slot.
"""
from __future__ import annotations

from .connection import (
    BasisElement,
    GradedConnection,
    classical_steenrod,
    p_curvature_direct,
    structure_constants,
)
from .errors import UnsupportedError
from .matrices import MatrixPolynomial, OperatorMatrix
from .novikov import NovikovRing, NovikovSeries
from .verdict import Verdict

BASIS = (
    BasisElement("1", 0),
    BasisElement("b", 2),
    BasisElement("C", 4),
    BasisElement("P", 6),
)
ANTIDIAGONAL = ((0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0))

PROVENANCE = (
    "Quantum Steenrod structure constants are reported as the structure constants "
    "of the p-curvature of the quantum connection, using the identity between the "
    "two operations for divisor classes on Calabi-Yau 3-folds; no moduli counts are performed."
)


def voisin_matrix(p: int, E: int) -> GradedConnection:
    ring = NovikovRing(p, (1,), E)
    z, one = ring.zero(), ring.one()
    rows = [
        [z, z, z, z],
        [one, z, z, z],
        [z, ring.geometric_like(1), z, z],
        [z, z, one, z],
    ]
    return GradedConnection(ring, BASIS, ANTIDIAGONAL, OperatorMatrix(ring, rows), (1,))


def _power_sum(ring: NovikovRing, power: int, scale: int = 1) -> NovikovSeries:
    """``scale * sum_{d>=1} d^power q^d`` truncated."""
    p = ring.p
    return ring.series({d: scale * pow(d, power, p) for d in range(1, ring.bound + 1)})


def closed_form_pcurvature(p: int, E: int) -> MatrixPolynomial:
    """The six nonzero slots of psi for the local P^1, written out explicitly."""
    if p < 5:
        raise UnsupportedError(f"prime: closed form needs p >= 5, got {p}")
    ring = NovikovRing(p, (1,), E)
    z = ring.zero()

    def mat(entries: dict[tuple[int, int], NovikovSeries]) -> OperatorMatrix:
        return OperatorMatrix(ring, [[entries.get((i, j), z) for j in range(4)] for i in range(4)])

    g = _power_sum(ring, p - 2)
    top = mat({
        (1, 0): ring.constant(-1),
        (2, 1): -ring.geometric_like(p),
        (3, 2): ring.constant(-1),
    })
    mid = mat({(2, 0): g, (3, 1): -g})
    low = mat({(3, 0): _power_sum(ring, p - 3, -2)})
    return MatrixPolynomial(ring, 4, {p - 1: top, p - 2: mid, p - 3: low})


def cross_check(p: int, E: int) -> Verdict:
    verdict = Verdict(f"local_p1_cross_check(p={p}, E={E})")
    direct = p_curvature_direct(voisin_matrix(p, E))
    diff = direct.first_difference(closed_form_pcurvature(p, E))
    verdict.record(diff is None, **(diff or {}))
    return verdict


def pd_support(series: NovikovSeries, p: int) -> bool:
    return all(exp[0] % p == 0 for exp, _ in series.items() if exp[0] > 0)


def steenrod_report(p: int, E: int, conn: GradedConnection | None = None, flip_t: bool = False) -> dict:
    """Quantum Steenrod structure constants of ``b``, read off psi through the pairing.

    ``flip_t`` rewrites everything under ``t -> -t`` for comparison with the
    opposite sign convention for the equivariant parameter.
    """
    conn = voisin_matrix(p, E) if conn is None else conn
    psi = p_curvature_direct(conn)
    classical = classical_steenrod(conn)
    classical_ok = psi.truncate(0) == classical
    if flip_t:
        psi, classical = psi.flip_t(), classical.flip_t()
    names = [e.name for e in conn.basis]
    rows = []
    for (i, j), val in sorted(structure_constants(conn, psi).items()):
        if not val.is_zero():
            rows.append({
                "input": names[i],
                "pair_with": names[j],
                "value": val.to_json(),
                "pretty": val.pretty(),
            })
    leading = psi.coeff(p - 1)
    support = []
    for i, j, s in leading.nonzero_entries():
        quantum = s - s.truncate(0)
        if not quantum.is_zero():
            support.append({
                "input": names[j],
                "output": names[i],
                "exponents": [e[0] for e in quantum.support()] if conn.ring.rank == 1 else [list(e) for e in quantum.support()],
                "divisible_by_p": pd_support(quantum, p) if conn.ring.rank == 1 else None,
            })
    return {
        "p": p,
        "E": E,
        "convention": "-t" if flip_t else "t",
        "provenance": PROVENANCE,
        "correlators": rows,
        "multiple_cover_support": support,
        "classical_limit_matches": classical_ok,
        "classical": classical.to_json(),
    }
