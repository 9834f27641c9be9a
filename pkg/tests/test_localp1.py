import pytest

from pcurv.connection import check_nilpotency_words, leading_term, p_curvature_direct
from pcurv.errors import UnsupportedError
from pcurv.localp1 import closed_form_pcurvature, cross_check, steenrod_report, voisin_matrix


def test_voisin_matrix_shape():
    c0 = voisin_matrix(5, 0)
    assert c0.B.rows[2][1].is_zero()
    assert c0.B.rows[1][0] == 1 and c0.B.rows[3][2] == 1
    c3 = voisin_matrix(5, 3)
    assert c3.B.rows[2][1] == c3.ring.series({1: 1, 2: 1, 3: 1})
    assert (c3.B ** 4).is_zero()
    assert c3.pairing[0][3] == c3.pairing[1][2] == 1


def test_closed_form_examples():
    psi = closed_form_pcurvature(5, 5)
    assert psi.coeff(4).rows[2][1] == psi.ring.series({5: -1})
    psi = closed_form_pcurvature(5, 4)
    # d^3 mod 5 for d = 1..4
    assert psi.coeff(3).rows[2][0].terms == {(1,): 1, (2,): 3, (3,): 2, (4,): 4}
    psi = closed_form_pcurvature(7, 3)
    # -2 d^4 mod 7 for d = 1..3, reduced by hand: -2, -32, -162
    frozen = {(1,): 5, (2,): 3, (3,): 6}
    assert {(d,): (-2 * d ** 4) % 7 for d in range(1, 4)} == frozen
    assert psi.coeff(4).rows[3][0].terms == frozen


def test_closed_form_rejects_small_primes():
    with pytest.raises(UnsupportedError):
        closed_form_pcurvature(3, 6)


@pytest.mark.parametrize("p,E", [(5, 15), (7, 21), (11, 22), (13, 39)])
def test_cross_check(p, E):
    assert cross_check(p, E).passed


@pytest.mark.parametrize("p", [5, 7, 11])
def test_leading_block_equals_leading_term(p):
    E = 2 * p
    assert closed_form_pcurvature(p, E).coeff(p - 1) == leading_term(voisin_matrix(p, E))


def test_voisin_word_vanishing_all_orders():
    for p in (5, 7):
        assert check_nilpotency_words(voisin_matrix(p, 2 * p), p).passed


def test_steenrod_report():
    rep = steenrod_report(5, 10)
    assert rep["classical_limit_matches"]
    support = {(s["input"], s["output"]): s for s in rep["multiple_cover_support"]}
    assert support[("b", "C")]["exponents"] == [5, 10]
    assert support[("b", "C")]["divisible_by_p"]
    rows = {(r["input"], r["pair_with"]): r["value"] for r in rep["correlators"]}
    # pairing with b extracts the C component of psi(1)
    assert rows[("1", "b")] == {"even": {"3": [{"exp": [d], "coeff": d ** 3 % 5} for d in range(1, 11) if d % 5]}, "odd": {}}
    assert "no moduli counts" in rep["provenance"]


def test_steenrod_report_sign_flip():
    plain = steenrod_report(5, 6)
    flipped = steenrod_report(5, 6, flip_t=True)
    assert flipped["convention"] == "-t"
    # t^3 slots change sign, t^4 slots do not
    a = {(r["input"], r["pair_with"]): r["value"] for r in plain["correlators"]}
    b = {(r["input"], r["pair_with"]): r["value"] for r in flipped["correlators"]}
    assert a[("1", "C")] == b[("1", "C")]
    assert a[("1", "b")] != b[("1", "b")]


def test_direct_p2_completes():
    psi = p_curvature_direct(voisin_matrix(2, 12))
    assert psi.degree() <= 1
