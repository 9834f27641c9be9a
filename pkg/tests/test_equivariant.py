import pytest

from pcurv.equivariant import EquivariantScalar, eq_mul, monomial
from pcurv.errors import TDegreeOverflow
from pcurv.novikov import NovikovRing


def ring(p):
    return NovikovRing(p, (1,), 4)


def test_theta_squared_zero_for_odd_p():
    r = ring(5)
    th = EquivariantScalar.theta(r)
    assert eq_mul(th, th).is_zero()


def test_theta_squared_is_t_for_p2():
    r = ring(2)
    th = EquivariantScalar.theta(r)
    assert eq_mul(th, th) == EquivariantScalar.t(r)


def test_difference_of_squares_p5():
    r = ring(5)
    t, th = EquivariantScalar.t(r), EquivariantScalar.theta(r)
    assert (t + th) * (t - th) == EquivariantScalar.t(r, 2)


def test_monomial_examples():
    r = ring(7)
    assert monomial(r, 0) == EquivariantScalar(r, {0: r.one()})
    assert monomial(r, 2) == EquivariantScalar.t(r)
    assert monomial(r, 3) == EquivariantScalar(r, odd={1: r.one()})


@pytest.mark.parametrize("p", [2, 3, 5])
def test_monomial_products(p):
    r = ring(p)
    for i in range(7):
        for j in range(7):
            prod = monomial(r, i, cap=8) * monomial(r, j, cap=8)
            if p > 2 and i % 2 and j % 2:
                assert prod.is_zero()
            else:
                assert prod == monomial(r, i + j, cap=8)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_associative_and_commutative(p):
    r = ring(p)
    q = r.q()
    xs = [
        EquivariantScalar(r, {0: q + r.one(), 1: q}, {0: r.constant(2)}, cap=9),
        EquivariantScalar(r, {2: q * q}, {1: r.one()}, cap=9),
        EquivariantScalar(r, {1: r.constant(3)}, {2: q}, cap=9),
    ]
    a, b, c = xs
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


def test_cap_overflow():
    r = ring(3)
    with pytest.raises(TDegreeOverflow):
        EquivariantScalar.t(r, 2) * EquivariantScalar.t(r, 2)


def test_serialization_round_trip():
    r = ring(5)
    x = EquivariantScalar(r, {0: r.q(), 3: r.constant(4)}, {1: r.q(2)})
    data = x.to_json()
    assert list(data["even"]) == ["0", "3"]
    assert EquivariantScalar.from_json(r, data) == x


def test_flip_t():
    r = ring(5)
    x = EquivariantScalar(r, {1: r.one(), 2: r.one()})
    assert x.flip_t() == EquivariantScalar(r, {1: r.constant(-1), 2: r.one()})
