"""Exact arithmetic in a fixed number field K0 = Q[s]/(m(s)).

The coefficient field K0 is the computable stand-in for an algebraically
closed ground field: every input (roots, constants, parametrization
coefficients) is required to lie in K0.   Elements are coordinate vectors in
the power basis of the generator, with Fraction entries, so all arithmetic
and zero tests are exact.  Complex embeddings are certified balls: a center
and a radius such that a Newton-Kantorovich test guarantees the unique root
of the minimal polynomial inside the ball, refinable on demand.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import gcd as _int_gcd

import mpmath

from .errors import (BadIndex, InvalidTorsionOrder, NonSquarefreeMinpoly,
                     ZeroElement)

Q = Fraction

# ---------------------------------------------------------------------------
# dense Fraction polynomials  (ascending coefficients, used only for minpoly
# manipulation; the heavy polynomial machinery over K0 lives in polyfun.py)
# ---------------------------------------------------------------------------


def _qtrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _qadd(a, b):
    n = max(len(a), len(b))
    return _qtrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                   for i in range(n)])


def _qscale(a, s):
    return _qtrim([x * s for x in a])


def _qmul(a, b):
    if not a or not b:
        return []
    out = [Q(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _qtrim(out)


def _qdivmod(a, b):
    a = list(a)
    q = [Q(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] -= c * y
        a = _qtrim(a)
    return _qtrim(q), a


def _qgcd(a, b):
    a, b = _qtrim(a), _qtrim(b)
    while b:
        a, b = b, _qdivmod(a, b)[1]
    if a:
        a = _qscale(a, 1 / a[-1])
    return a


def _qderiv(a):
    return _qtrim([i * a[i] for i in range(1, len(a))])


def _qxgcd(a, m):
    """Return (g, u) with u*a = g mod m, g = gcd(a, m) monic."""
    r0, r1 = list(m), _qtrim(a)
    s0, s1 = [], [Q(1)]
    while r1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qadd(s0, _qscale(_qmul(q, s1), -1))
    if r0:
        lc = r0[-1]
        r0 = _qscale(r0, 1 / lc)
        s0 = _qscale(s0, 1 / lc)
    return r0, s0


# ---------------------------------------------------------------------------
# certified complex balls
# ---------------------------------------------------------------------------


class ComplexBall:
    """A complex disk center +- radius certified to contain a value.

    Arithmetic propagates radii conservatively; centers are mpmath complex
    numbers carried at whatever working precision produced them.
    """

    __slots__ = ("center", "radius")

    def __init__(self, center, radius=0.0):
        self.center = mpmath.mpc(center)
        self.radius = float(radius)

    def __repr__(self):
        return f"ComplexBall({self.center}, r={self.radius:.3g})"

    def __add__(self, other):
        if isinstance(other, ComplexBall):
            return ComplexBall(self.center + other.center,
                               self.radius + other.radius)
        return ComplexBall(self.center + other, self.radius)

    def __sub__(self, other):
        if isinstance(other, ComplexBall):
            return ComplexBall(self.center - other.center,
                               self.radius + other.radius)
        return ComplexBall(self.center - other, self.radius)

    def __mul__(self, other):
        if isinstance(other, ComplexBall):
            r = (abs(self.center) * other.radius
                 + abs(other.center) * self.radius
                 + self.radius * other.radius)
            return ComplexBall(self.center * other.center, float(r))
        return ComplexBall(self.center * other, self.radius * abs(other))

    def contains(self, other):
        """Ball containment test (self contains other)."""
        if isinstance(other, ComplexBall):
            return abs(self.center - other.center) + other.radius \
                <= self.radius + 1e-300
        return abs(self.center - other) <= self.radius

    def overlaps(self, other):
        return abs(self.center - other.center) <= self.radius + other.radius

    def abs_bounds(self):
        a = abs(self.center)
        return max(0.0, float(a) - self.radius), float(a) + self.radius


# ---------------------------------------------------------------------------
# the field and its elements
# ---------------------------------------------------------------------------


class FieldElement:
    """An element of a NumberField, as Fraction coordinates in the power basis."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)
        self._hash = None

    # -- construction helpers
    def _new(self, coeffs):
        return FieldElement(self.field, coeffs)

    # -- predicates
    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic
    def __add__(self, other):
        other = self.field.coerce(other)
        return self._new(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return self._new(-a for a in self.coeffs)

    def __sub__(self, other):
        other = self.field.coerce(other)
        return self._new(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self.field.coerce(other)
        if self.field.degree == 1:
            return self._new((self.coeffs[0] * other.coeffs[0],))
        prod = _qmul(list(self.coeffs), list(other.coeffs))
        return self._new(self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        if self.field.degree == 1:
            return self._new((1 / self.coeffs[0],))
        g, u = _qxgcd(list(self.coeffs), list(self.field.minpoly))
        if len(g) != 1:
            # cannot happen for irreducible minpoly
            raise ZeroDivisionError("zero divisor; minpoly not irreducible?")
        return self._new(self.field._reduce(_qscale(u, 1 / g[0])))

    def __truediv__(self, other):
        other = self.field.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing
    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def sort_key(self):
        return self.coeffs

    def __repr__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        var = self.field.variable_name
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*{var}" if c != 1 else var)
            else:
                parts.append(f"{c}*{var}^{i}" if c != 1 else f"{var}^{i}")
        return " + ".join(parts) if parts else "0"


class NumberField:
    """K0 = Q[s]/(m(s)) with m monic irreducible, plus certified embeddings."""

    def __init__(self, minpoly, torsion_order, variable_name="s",
                 validate_torsion=True):
        minpoly = [Q(c) for c in minpoly]
        minpoly = _qtrim(minpoly)
        if len(minpoly) < 2:
            raise NonSquarefreeMinpoly("minpoly must have degree >= 1")
        if minpoly[-1] != 1:
            raise NonSquarefreeMinpoly("minpoly must be monic")
        if len(minpoly) == 2 and minpoly[0] == 0:
            # s itself: the generator would be 0, an ambiguous degree-0 request
            raise NonSquarefreeMinpoly(
                "minpoly s is rejected; use s-1 to present Q")
        g = _qgcd(minpoly, _qderiv(minpoly))
        if len(g) != 1:
            raise NonSquarefreeMinpoly("minpoly is not squarefree")
        self.variable_name = variable_name
        self.minpoly = tuple(minpoly)
        self.degree = len(minpoly) - 1
        self.torsion_order = int(torsion_order)
        if self.torsion_order < 1:
            raise InvalidTorsionOrder("torsion order must be positive")
        self._embed_lock = threading.Lock()
        self._embed_prec = 0
        self._embeddings = None
        if self.degree > 1:
            self._check_irreducible()
        if validate_torsion:
            self._check_torsion()
        # default certification precision 1e-30
        self.embeddings(1e-30)

    # -- construction of elements
    def element(self, coeffs):
        coeffs = [Q(c) for c in coeffs]
        if len(coeffs) > self.degree:
            coeffs = self._reduce(coeffs)
        coeffs = coeffs + [Q(0)] * (self.degree - len(coeffs))
        return FieldElement(self, coeffs)

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field is not self:
                raise ValueError("element of a different field")
            return x
        if isinstance(x, (int, Fraction)):
            return self.element([Q(x)])
        raise TypeError(f"cannot coerce {x!r} into {self!r}")

    def zero(self):
        return self.element([0])

    def one(self):
        return self.element([1])

    def gen(self):
        if self.degree == 1:
            # generator is the root of the degree-1 minpoly
            return self.element([-self.minpoly[0]])
        return self.element([0, 1])

    def _reduce(self, coeffs):
        coeffs = _qtrim(list(coeffs))
        if len(coeffs) <= self.degree:
            return coeffs + [Q(0)] * (self.degree - len(coeffs))
        _, r = _qdivmod(coeffs, list(self.minpoly))
        return r + [Q(0)] * (self.degree - len(r))

    # -- validation
    def _check_irreducible(self):
        import sympy as sp
        s = sp.Symbol("s")
        expr = sum(sp.Rational(c.numerator, c.denominator) * s**i
                   for i, c in enumerate(self.minpoly))
        _, factors = sp.factor_list(sp.Poly(expr, s, domain="QQ"))
        if len(factors) != 1 or factors[0][1] != 1:
            raise NonSquarefreeMinpoly(
                "minpoly must be irreducible over Q to present a field")

    def _check_torsion(self):
        if self.degree == 1:
            if self.torsion_order != 2:
                raise InvalidTorsionOrder("Q contains exactly {1, -1}")
            return
        actual = self._compute_torsion_order()
        if actual != self.torsion_order:
            raise InvalidTorsionOrder(
                f"declared torsion order {self.torsion_order}, "
                f"field contains a cyclic group of order {actual}")

    def _compute_torsion_order(self):
        # The torsion group is cyclic of order T; n divides T iff the n-th
        # cyclotomic polynomial has a root in K0, and phi(n) <= degree bounds
        # the candidates.
        import sympy as sp
        d = self.degree
        candidates = [n for n in range(1, 4 * d * d + 7)
                      if sp.totient(n) <= d]
        order = 1
        for n in candidates:
            if n <= 2:
                continue  # 1 and -1 are always present
            if self._has_root_of_cyclotomic(n):
                order = (order * n) // _int_gcd(order, n)
        return max(order, 2)

    def _has_root_of_cyclotomic(self, n):
        import sympy as sp
        from .sympybridge import field_domain
        z = sp.Symbol("z")
        dom, _, _ = field_domain(self)
        poly = sp.Poly(sp.cyclotomic_poly(n, z), z, domain=dom)
        _, factors = poly.factor_list()
        return any(f.degree() == 1 for f, _ in factors)

    # -- embeddings
    def embeddings(self, precision=1e-30):
        """Certified balls for the roots of minpoly, radius <= precision."""
        with self._embed_lock:
            if self._embeddings is None or any(
                    b.radius > precision for b in self._embeddings):
                self._refine_embeddings(precision)
            return list(self._embeddings)

    def _refine_embeddings(self, precision):
        import math
        digits = max(40, int(-math.log10(precision)) + 25)
        mpmath.mp.dps = digits
        coeffs = [mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
                  for c in reversed(self.minpoly)]
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=80)
        balls = []
        for r in roots:
            balls.append(self._certify_root(mpmath.mpc(r), digits))
        # deterministic order: by (real, imag) of centers
        balls.sort(key=lambda b: (mpmath.re(b.center), mpmath.im(b.center)))
        for i, b1 in enumerate(balls):
            for b2 in balls[i + 1:]:
                if b1.overlaps(b2):
                    raise NonSquarefreeMinpoly(
                        "embedding balls overlap; roots not isolated")
        self._embeddings = balls
        self._embed_prec = precision

    def _certify_root(self, center, digits):
        # Newton-Kantorovich: with beta = |p(c)/p'(c)| and M a bound for |p''|
        # on the disk of radius 2*beta, the condition 2*beta*M <= |p'(c)|
        # certifies a unique root within 2*beta of c.
        p = self.minpoly
        for _ in range(6):
            val = self._eval_mp(p, center)
            dval = self._eval_mp(_qderiv(list(p)), center)
            if dval == 0:
                center += mpmath.mpf(10) ** (-digits // 2)
                continue
            beta = abs(val / dval)
            rad = 2 * beta + mpmath.mpf(10) ** (-(digits - 10))
            ppp = _qderiv(_qderiv(list(p)))
            M = sum(abs(self._eval_abs_bound(c)) * (abs(center) + rad) ** i
                    for i, c in enumerate(ppp)) if ppp else mpmath.mpf(0)
            if 2 * beta * M <= abs(dval):
                return ComplexBall(center, float(rad))
            center = center - val / dval
        raise NonSquarefreeMinpoly("failed to certify root isolation")

    @staticmethod
    def _eval_mp(coeffs, x):
        acc = mpmath.mpc(0)
        for c in reversed(list(coeffs)):
            acc = acc * x + mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
        return acc

    @staticmethod
    def _eval_abs_bound(c):
        return mpmath.mpf(abs(c.numerator)) / mpmath.mpf(c.denominator)

    # -- misc
    def __repr__(self):
        return (f"NumberField({self.variable_name}, "
                f"minpoly={[str(c) for c in self.minpoly]}, "
                f"torsion={self.torsion_order})")

    def __eq__(self, other):
        return self is other or (
            isinstance(other, NumberField)
            and self.minpoly == other.minpoly
            and self.torsion_order == other.torsion_order)

    def __hash__(self):
        return hash(self.minpoly)


# ---------------------------------------------------------------------------
# the spec-level operations
# ---------------------------------------------------------------------------


def make_field(minpoly, torsion_order, variable_name="s"):
    """Build K0 = Q[s]/(m(s)); certifies embeddings to 1e-30 and validates
    the declared torsion order (skipped for Q with torsion 2)."""
    return NumberField(minpoly, torsion_order, variable_name)


def rational_field():
    """The field Q, presented with minpoly s - 1 and torsion order 2."""
    return make_field([-1, 1], 2)


def is_root_of_unity(x):
    """True iff x^torsion_order = 1, exactly."""
    if not isinstance(x, FieldElement):
        raise TypeError("expected a FieldElement")
    if x.is_zero():
        raise ZeroElement("0 is not a unit")
    return x ** x.field.torsion_order == x.field.one()


def embed(x, embedding_index, precision=1e-30):
    """Certified complex ball containing the image of x under one embedding."""
    field = x.field
    if not (0 <= embedding_index < field.degree):
        raise BadIndex(f"embedding index {embedding_index} out of range")
    if float(precision) <= 0:
        raise BadIndex("precision must be positive")
    # request enough root precision that the propagated radius closes
    target = float(precision)
    scale = 1 + sum(float(abs(c)) for c in x.coeffs)
    root_prec = min(1e-30, target / (10 * scale * (field.degree + 1)))
    for _ in range(8):
        ball = field.embeddings(root_prec)[embedding_index]
        out = _eval_elem_ball(x, ball)
        if out.radius <= target:
            return out
        root_prec /= 1e6
    return out


def _eval_elem_ball(x, ball):
    # Horner evaluation at the certified root ball; the derivative bound on
    # the disk controls the propagated radius.
    field = x.field
    c = ball.center
    r = ball.radius
    acc = mpmath.mpc(0)
    for coeff in reversed(x.coeffs):
        acc = acc * c + mpmath.mpf(coeff.numerator) / mpmath.mpf(coeff.denominator)
    dbound = 0.0
    R = abs(c) + r
    for i, coeff in enumerate(x.coeffs):
        if i >= 1 and coeff != 0:
            dbound += i * float(abs(coeff)) * float(R) ** (i - 1)
    return ComplexBall(acc, r * dbound + float(abs(acc)) * 1e-35 + 1e-300)


def embed_complex(x, embedding_index=0):
    """Convenience: high-accuracy complex float for numeric layers."""
    ball = embed(x, embedding_index, 1e-25)
    return complex(ball.center)
