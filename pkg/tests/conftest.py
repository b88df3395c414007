import random
from fractions import Fraction

import pytest

from tamerec import (FactoredFunction, FieldTag, make_field, rational_field,
                     wedge_of_functions)
from tamerec.polyfun import Poly, RatFunc, TPoly


@pytest.fixture(scope="session")
def Q():
    return rational_field()

@pytest.fixture(scope="session")
def Qi():
    return make_field([1, 0, 1], 4)


@pytest.fixture(scope="session")
def Qsqrt2():
    return make_field([-2, 0, 1], 2)


@pytest.fixture()
def rng():
    return random.Random(20260810)


def fe(field, n):
    return field.element([Fraction(n)])


def rfp(field, *cs):
    return RatFunc(Poly(field, [fe(field, c) for c in cs]))


def tp(field, *coeffs):
    """TPoly builder: ints are constants, lists are polynomials in x."""
    out = []
    for c in coeffs:
        if isinstance(c, (int, Fraction)):
            out.append(rfp(field, c))
        else:
            out.append(rfp(field, *c))
    return TPoly(field, out)


def random_factored_function(field, rng, max_roots=2, allow_inverse=True):
    roots = rng.sample(range(-6, 7), rng.randint(0, max_roots))
    exps = [1, 1, 2, -1] if allow_inverse else [1, 1, 2]
    c = fe(field, rng.choice([1, 2, 3, 5, -2, 7,
                              Fraction(1, 2), Fraction(3, 4)]))
    return FactoredFunction(c, [(fe(field, r), rng.choice(exps))
                                for r in roots])


def random_line_wedge(field, rng, n=3):
    tag = FieldTag.line(field, "t")
    return wedge_of_functions(
        tag, [random_factored_function(field, rng) for _ in range(n)])
