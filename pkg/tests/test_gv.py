import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcurv.connection import classical_steenrod, p_curvature_direct, solve_by_covariant_constancy
from pcurv.errors import ParameterError
from pcurv.gv import (
    BPSTable,
    GWTable,
    build_divisor_connection,
    bps_to_gw,
    gw_to_bps,
    multiple_cover_block,
    table_from_json,
)
from pcurv.localp1 import voisin_matrix


def brute_gw(n, D):
    """Oracle: sum over all (d, k) with d * k = m."""
    return {m: sum(n.get(d, 0) * d ** 3 for d in range(1, m + 1) for k in range(1, m + 1) if d * k == m) for m in range(1, D + 1)}


def test_bps_to_gw_examples():
    assert bps_to_gw(BPSTable(5, {1: 1})).values == {m: 1 for m in range(1, 6)}
    assert [bps_to_gw(BPSTable(3, {1: 1, 2: 1}))[m] for m in (1, 2, 3)] == [1, 9, 1]
    assert bps_to_gw(BPSTable(4, {})).values == {}


def test_bps_to_gw_matches_brute_force():
    rng = random.Random(0)
    for _ in range(20):
        n = {d: rng.randint(-50, 50) for d in range(1, 13)}
        got = bps_to_gw(BPSTable(12, n))
        assert {m: got[m] for m in range(1, 13)} == brute_gw(n, 12)


def test_gw_to_bps_examples():
    assert gw_to_bps(GWTable(6, {m: 1 for m in range(1, 7)})).values == {1: 1}
    assert gw_to_bps(GWTable(3, {1: 1, 2: 9, 3: 1})).values == {1: 1, 2: 1}


def test_gw_to_bps_rejects_non_multiple_cover():
    with pytest.raises(ParameterError, match="not divisible"):
        gw_to_bps(GWTable(2, {1: 1, 2: 2}))


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.integers(1, 20), st.integers(-10 ** 6, 10 ** 6), max_size=20))
def test_round_trip(values):
    n = BPSTable(20, values)
    assert gw_to_bps(bps_to_gw(n)) == n


def test_linear():
    rng = random.Random(2)
    a = BPSTable(15, {d: rng.randint(-99, 99) for d in range(1, 16)})
    b = BPSTable(15, {d: rng.randint(-99, 99) for d in range(1, 16)})
    s = BPSTable(15, {d: a[d] + 3 * b[d] for d in range(1, 16)})
    ga, gb, gs = bps_to_gw(a), bps_to_gw(b), bps_to_gw(s)
    assert all(gs[m] == ga[m] + 3 * gb[m] for m in range(1, 16))


def test_json_uses_decimal_strings():
    n = BPSTable(3, {3: 317206375 * 10 ** 12})
    data = n.to_json()
    assert data == {"kind": "bps", "max_degree": 3, "values": {"3": "317206375000000000000"}}
    assert table_from_json(data) == n
    with pytest.raises(ParameterError, match="kind"):
        table_from_json({"kind": "xyz", "max_degree": 2, "values": {}})


def test_build_divisor_connection_reproduces_voisin():
    c = GWTable(10, {m: 1 for m in range(1, 11)})
    for p in (3, 5):
        assert build_divisor_connection(0, c, p, 10) == voisin_matrix(p, 10)


def test_constant_connection_is_classical():
    conn = build_divisor_connection(5, GWTable(5, {}), 7, 14)
    assert p_curvature_direct(conn) == classical_steenrod(conn)


def test_pipeline_smoke():
    n = BPSTable(14, {1: 2875, 2: 609250, 3: 317206375})
    conn = build_divisor_connection(5, bps_to_gw(n), 7, 14)
    assert solve_by_covariant_constancy(conn) == p_curvature_direct(conn)


def test_multiple_cover_block_examples():
    ones = GWTable(10, {m: 1 for m in range(1, 11)})
    r = multiple_cover_block(ones, 5, 10)
    assert r == r.ring.series({5: -1, 10: -1})
    assert multiple_cover_block(GWTable(2, {1: 4, 2: 7}), 5, 4).is_zero()


@pytest.mark.parametrize("seed", range(5))
def test_multiple_cover_matches_engine_p3(seed):
    rng = random.Random(seed)
    c = GWTable(9, {m: rng.randint(-1000, 1000) for m in range(1, 10)})
    psi = p_curvature_direct(build_divisor_connection(0, c, 3, 9))
    slot = psi.coeff(2).rows[2][1]
    assert slot - slot.truncate(0) == multiple_cover_block(c, 3, 9)
