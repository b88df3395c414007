import math
from fractions import Fraction

import mpmath
import pytest

from tamerec import embed, embed_complex, is_root_of_unity, make_field
from tamerec.errors import (BadIndex, InvalidTorsionOrder,
                            NonSquarefreeMinpoly, ZeroElement)

from conftest import fe


def test_gaussian_field(Qi):
    i = Qi.gen()
    assert i * i == fe(Qi, -1)
    assert (Qi.one() + i) * (Qi.one() - i) == fe(Qi, 2)
    balls = Qi.embeddings()
    assert len(balls) == 2
    vals = sorted(complex(b.center).imag for b in balls)
    assert abs(vals[0] + 1) < 1e-25 and abs(vals[1] - 1) < 1e-25


def test_real_quadratic(Qsqrt2):
    s = Qsqrt2.gen()
    assert s * s == fe(Qsqrt2, 2)
    balls = Qsqrt2.embeddings()
    assert all(abs(complex(b.center).imag) < 1e-25 for b in balls)


def test_degenerate_minpoly_rejected():
    with pytest.raises(NonSquarefreeMinpoly):
        make_field([0, 1], 2)  # s itself: degree-0 ambiguity


def test_non_squarefree_rejected():
    with pytest.raises(NonSquarefreeMinpoly):
        make_field([0, 0, 1], 2)  # s^2


def test_reducible_rejected():
    with pytest.raises(NonSquarefreeMinpoly):
        make_field([-1, 0, 1], 2)  # s^2 - 1 = (s-1)(s+1)


def test_torsion_validation():
    with pytest.raises(InvalidTorsionOrder):
        make_field([1, 0, 1], 2)  # Q(i) contains i, order 4
    with pytest.raises(InvalidTorsionOrder):
        make_field([-2, 0, 1], 4)  # Q(sqrt 2) has only +-1


def test_root_of_unity(Q, Qi):
    assert is_root_of_unity(Q.one())
    assert is_root_of_unity(fe(Q, -1))
    assert not is_root_of_unity(fe(Q, 2))
    assert is_root_of_unity(Qi.gen())
    with pytest.raises(ZeroElement):
        is_root_of_unity(Q.zero())


def test_field_axioms_random(Q, Qi, Qsqrt2, rng):
    for field in (Q, Qi, Qsqrt2):
        d = field.degree
        for _ in range(40):
            a = field.element([Fraction(rng.randint(-9, 9),
                                        rng.randint(1, 7))
                               for _ in range(d)])
            b = field.element([Fraction(rng.randint(-9, 9),
                                        rng.randint(1, 7))
                               for _ in range(d)])
            c = field.element([Fraction(rng.randint(-9, 9),
                                        rng.randint(1, 7))
                               for _ in range(d)])
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            if not a.is_zero():
                assert a * a.inverse() == field.one()


def test_embed_rational(Q):
    ball = embed(fe(Q, Fraction(1, 2)), 0, 1e-20)
    assert abs(complex(ball.center) - 0.5) <= ball.radius + 1e-30


def test_embed_certified_radius(Qsqrt2):
    # s + 1 at the positive root: 1 + sqrt(2), certified to 1e-8
    x = Qsqrt2.one() + Qsqrt2.gen()
    ball = embed(x, 1, 1e-8)
    assert ball.radius <= 1e-8
    truth = 1 + mpmath.sqrt(2)
    assert abs(complex(ball.center) - complex(truth)) <= ball.radius


def test_embed_bad_index(Q):
    with pytest.raises(BadIndex):
        embed(Q.one(), 3, 1e-10)
    with pytest.raises(BadIndex):
        embed(Q.one(), 0, 0)


def test_embed_is_multiplicative_in_balls(Qi, rng):
    for _ in range(25):
        a = Qi.element([rng.randint(-5, 5), rng.randint(-5, 5)])
        b = Qi.element([rng.randint(-5, 5), rng.randint(-5, 5)])
        ea = embed(a, 0, 1e-20)
        eb = embed(b, 0, 1e-20)
        eab = embed(a * b, 0, 1e-20)
        prod = ea * eb
        # widen the product ball by a tiny slack for the comparison
        assert abs(prod.center - eab.center) <= \
            prod.radius + eab.radius + 1e-18 * (1 + abs(prod.center))


def test_root_of_unity_has_unit_modulus(Qi):
    i = Qi.gen()
    for idx in range(2):
        lo, hi = embed(i, idx, 1e-20).abs_bounds()
        assert lo <= 1 <= hi or abs(hi - 1) < 1e-15


def test_embedding_balls_isolate(Qsqrt2):
    balls = Qsqrt2.embeddings(1e-30)
    assert not balls[0].overlaps(balls[1])
