"""Exact polynomial and rational-function arithmetic over K0.

Three layers, all with exact Fraction-vector coefficients:

* Poly     -- univariate polynomials over K0 (dense, ascending);
* RatFunc  -- the fraction field K0(x), normalized (monic denominator,
              reduced), with order/residue bookkeeping at finite points
              and at infinity;
* TPoly    -- polynomials in a second variable t with RatFunc coefficients,
              the ambient ring for function fields K0(x)(t);
* BiPoly   -- polynomials in (x, y) over K0 as monomial dicts, the ambient
              ring for curves on the surface.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotAUnit
from .numfield import FieldElement


# ---------------------------------------------------------------------------
# Poly: univariate over K0
# ---------------------------------------------------------------------------


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, field, value):
        return cls(field, [field.coerce(value)])

    @classmethod
    def gen(cls, field):
        return cls(field, [field.zero(), field.one()])

    @classmethod
    def linear(cls, field, root):
        """x - root."""
        return cls(field, [-field.coerce(root), field.one()])

    @property
    def deg(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def lc(self):
        return self.coeffs[-1]

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero()

        def at(p, i):
            return p.coeffs[i] if i < len(p.coeffs) else z
        return Poly(self.field, [at(self, i) + at(other, i) for i in range(n)])

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return Poly(self.field, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly(self.field, [])
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [self.field.zero()] * max(0, len(rem) - len(other.coeffs) + 1)
        inv = other.lc().inverse()
        while len(rem) >= len(other.coeffs) and rem:
            c = rem[-1] * inv
            k = len(rem) - len(other.coeffs)
            q[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
            while rem and rem[-1].is_zero():
                rem.pop()
        return Poly(self.field, q), Poly(self.field, rem)

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero() else a

    def monic(self):
        if self.is_zero() or self.lc() == self.field.one():
            return self
        inv = self.lc().inverse()
        return Poly(self.field, [c * inv for c in self.coeffs])

    def derivative(self):
        return Poly(self.field,
                    [self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def eval(self, x):
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_ratfunc(self, r):
        """Evaluate at a RatFunc argument, producing a RatFunc."""
        acc = RatFunc.const(self.field, 0)
        for c in reversed(self.coeffs):
            acc = acc * r + RatFunc.const(self.field, c)
        return acc

    def ord_at_root(self, a):
        """Multiplicity of (x - a) in self (0 if a is not a root)."""
        if self.is_zero():
            raise ZeroDivisionError("order of the zero polynomial")
        m = 0
        p = self
        lin = Poly.linear(self.field, a)
        while p.eval(a).is_zero():
            p = p.divmod(lin)[0]
            m += 1
        return m

    def key(self):
        return tuple(c.coeffs for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.is_zero():
            return "0"
        return " + ".join(f"({c})*x^{i}" if i else f"({c})"
                          for i, c in enumerate(self.coeffs)
                          if not c.is_zero())


# ---------------------------------------------------------------------------
# RatFunc: K0(x)
# ---------------------------------------------------------------------------


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        field = num.field
        if den is None:
            den = Poly.const(field, 1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce and not num.is_zero():
            g = num.gcd(den)
            if g.deg > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
        if num.is_zero():
            den = Poly.const(field, 1)
        elif den.lc() != field.one():
            inv = den.lc().inverse()
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    @classmethod
    def const(cls, field, value):
        return cls(Poly.const(field, value))

    @classmethod
    def gen(cls, field):
        return cls(Poly.gen(field))

    @property
    def field(self):
        return self.num.field

    def is_zero(self):
        return self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def as_field_element(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        if self.num.is_zero():
            return self.field.zero()
        return self.num.coeffs[0]

    def __add__(self, other):
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return RatFunc(self.num * other, self.den, reduce=False)
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError
        return RatFunc(self.num * other.den, self.den * other.num)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError
        return RatFunc(self.den, self.num)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = RatFunc.const(self.field, 1)
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def eval(self, a):
        dv = self.den.eval(a)
        if dv.is_zero():
            raise NotAUnit(f"pole at {a}")
        return self.num.eval(a) / dv

    # -- valuation bookkeeping
    def ord_at(self, a):
        """Order at the finite point x = a."""
        if self.is_zero():
            raise ZeroDivisionError("order of zero")
        return _poly_ord(self.num, a) - _poly_ord(self.den, a)

    def ord_inf(self):
        if self.is_zero():
            raise ZeroDivisionError("order of zero")
        return self.den.deg - self.num.deg

    def residue_at(self, a):
        """Exact value of (x-a)^(-ord) * self at x = a (never 0 or infinite)."""
        lin = Poly.linear(self.field, a)
        num, den = self.num, self.den
        while num.eval(a).is_zero():
            num = num.divmod(lin)[0]
        while den.eval(a).is_zero():
            den = den.divmod(lin)[0]
        return num.eval(a) / den.eval(a)

    def residue_inf(self):
        """Leading-coefficient ratio: the value of x^ord * self at infinity."""
        return self.num.lc() / self.den.lc()

    def key(self):
        return (self.num.key(), self.den.key())

    def __eq__(self, other):
        return isinstance(other, RatFunc) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.den.deg == 0 and self.den.coeffs and \
                self.den.coeffs[0] == self.field.one():
            return f"({self.num})"
        return f"({self.num})/({self.den})"


def _poly_ord(p, a):
    m = 0
    lin = Poly.linear(p.field, a)
    while p.eval(a).is_zero():
        p = p.divmod(lin)[0]
        m += 1
    return m


# ---------------------------------------------------------------------------
# TPoly: polynomials in t over K0(x)
# ---------------------------------------------------------------------------


class TPoly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, field, r):
        if isinstance(r, FieldElement):
            r = RatFunc.const(field, r)
        return cls(field, [r])

    @classmethod
    def gen(cls, field):
        one = RatFunc.const(field, 1)
        return cls(field, [RatFunc.const(field, 0), one])

    @property
    def deg(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def lc(self):
        return self.coeffs[-1]

    def is_monic(self):
        return (not self.is_zero()
                and self.lc() == RatFunc.const(self.field, 1))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = RatFunc.const(self.field, 0)

        def at(p, i):
            return p.coeffs[i] if i < len(p.coeffs) else z
        return TPoly(self.field,
                     [at(self, i) + at(other, i) for i in range(n)])

    def __neg__(self):
        return TPoly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return TPoly(self.field, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return TPoly(self.field, [])
        z = RatFunc.const(self.field, 0)
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return TPoly(self.field, out)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError
        rem = list(self.coeffs)
        z = RatFunc.const(self.field, 0)
        q = [z] * max(0, len(rem) - len(other.coeffs) + 1)
        inv = other.lc().inverse()
        while len(rem) >= len(other.coeffs) and rem:
            c = rem[-1] * inv
            k = len(rem) - len(other.coeffs)
            q[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
            while rem and rem[-1].is_zero():
                rem.pop()
        return TPoly(self.field, q), TPoly(self.field, rem)

    def mod(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero() or self.is_monic():
            return self
        inv = self.lc().inverse()
        return TPoly(self.field, [c * inv for c in self.coeffs])

    def xgcd_mod(self, modulus):
        """Return (g, u) with u*self = g (mod modulus), g monic gcd."""
        one = TPoly.const(self.field, self.field.one())
        zero = TPoly(self.field, [])
        r0, r1 = modulus, self.mod(modulus)
        s0, s1 = zero, one
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if not r0.is_zero() and not r0.is_monic():
            inv = r0.lc().inverse()
            r0 = r0 * inv
            s0 = s0 * inv
        return r0, s0

    def inverse_mod(self, modulus):
        g, u = self.xgcd_mod(modulus)
        if g.deg != 0:
            raise ZeroDivisionError("element not invertible mod modulus")
        return u.mod(modulus)

    def eval_ratfunc(self, r):
        """Substitute t = r (a RatFunc), returning a RatFunc."""
        acc = RatFunc.const(self.field, 0)
        for c in reversed(self.coeffs):
            acc = acc * r + c
        return acc

    def subs_param(self, xs, ys):
        """Substitute x = xs(s), t = ys(s); coefficients are pulled through."""
        acc = RatFunc.const(self.field, 0)
        for c in reversed(self.coeffs):
            pulled = _ratfunc_subs(c, xs)
            acc = acc * ys + pulled
        return acc

    def key(self):
        return tuple(c.key() for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.is_zero():
            return "0"
        return " + ".join(f"{c}*t^{i}" if i else f"{c}"
                          for i, c in enumerate(self.coeffs)
                          if not c.is_zero())


def _ratfunc_subs(r, xs):
    """r(xs(s)) for RatFunc r and RatFunc xs."""
    return r.num.eval_ratfunc(xs) / r.den.eval_ratfunc(xs)


# ---------------------------------------------------------------------------
# BiPoly: K0[x, y]
# ---------------------------------------------------------------------------


class BiPoly:
    """Polynomial in (x, y) over K0 as a dict (i, j) -> coefficient."""

    __slots__ = ("field", "monomials")

    def __init__(self, field, monomials):
        self.field = field
        self.monomials = {ij: c for ij, c in monomials.items()
                          if not c.is_zero()}

    @classmethod
    def const(cls, field, value):
        return cls(field, {(0, 0): field.coerce(value)})

    @classmethod
    def from_terms(cls, field, terms):
        """terms: iterable of (i, j, coefficient-like)."""
        d = {}
        for i, j, c in terms:
            c = field.coerce(c)
            d[(i, j)] = d.get((i, j), field.zero()) + c
        return cls(field, d)

    def is_zero(self):
        return not self.monomials

    def is_constant(self):
        return all(ij == (0, 0) for ij in self.monomials)

    @property
    def deg_x(self):
        return max((i for i, _ in self.monomials), default=-1)

    @property
    def deg_y(self):
        return max((j for _, j in self.monomials), default=-1)

    def __add__(self, other):
        d = dict(self.monomials)
        for ij, c in other.monomials.items():
            d[ij] = d.get(ij, self.field.zero()) + c
        return BiPoly(self.field, d)

    def __neg__(self):
        return BiPoly(self.field, {ij: -c for ij, c in self.monomials.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return BiPoly(self.field,
                          {ij: c * other for ij, c in self.monomials.items()})
        d = {}
        for (i1, j1), c1 in self.monomials.items():
            for (i2, j2), c2 in other.monomials.items():
                ij = (i1 + i2, j1 + j2)
                d[ij] = d.get(ij, self.field.zero()) + c1 * c2
        return BiPoly(self.field, d)

    def eval(self, a, b):
        acc = self.field.zero()
        for (i, j), c in self.monomials.items():
            acc = acc + c * (a ** i) * (b ** j)
        return acc

    def restrict_x(self, a):
        """Substitute x = a, returning a Poly in y."""
        n = self.deg_y + 1
        out = [self.field.zero()] * max(n, 0)
        for (i, j), c in self.monomials.items():
            out[j] = out[j] + c * (a ** i)
        return Poly(self.field, out)

    def restrict_y(self, b):
        n = self.deg_x + 1
        out = [self.field.zero()] * max(n, 0)
        for (i, j), c in self.monomials.items():
            out[i] = out[i] + c * (b ** j)
        return Poly(self.field, out)

    def coeff_of_y_power(self, j0):
        """Coefficient of y^j0 as a Poly in x."""
        out = [self.field.zero()] * (self.deg_x + 1)
        for (i, j), c in self.monomials.items():
            if j == j0:
                out[i] = out[i] + c
        return Poly(self.field, out)

    def coeff_of_x_power(self, i0):
        out = [self.field.zero()] * (self.deg_y + 1)
        for (i, j), c in self.monomials.items():
            if i == i0:
                out[j] = out[j] + c
        return Poly(self.field, out)

    def ord_along_x0(self):
        """Multiplicity of x dividing self."""
        if self.is_zero():
            raise ZeroDivisionError
        return min(i for i, _ in self.monomials)

    def ord_along_y0(self):
        if self.is_zero():
            raise ZeroDivisionError
        return min(j for _, j in self.monomials)

    def shift_x(self, k):
        """Multiply by x^k (k may be negative when divisible)."""
        return BiPoly(self.field,
                      {(i + k, j): c for (i, j), c in self.monomials.items()})

    def shift_y(self, k):
        return BiPoly(self.field,
                      {(i, j + k): c for (i, j), c in self.monomials.items()})

    def subs_param(self, xs, ys):
        """Substitute x = xs(s), y = ys(s) (RatFuncs over K0), return RatFunc."""
        field = self.field
        acc = RatFunc.const(field, 0)
        # Horner in y with Poly-in-x coefficients pulled through xs
        for j in range(self.deg_y, -1, -1):
            cj = self.coeff_of_y_power(j)
            acc = acc * ys + cj.eval_ratfunc(xs)
        return acc

    def partial_x(self):
        d = {}
        for (i, j), c in self.monomials.items():
            if i >= 1:
                d[(i - 1, j)] = d.get((i - 1, j), self.field.zero()) + c * i
        return BiPoly(self.field, d)

    def partial_y(self):
        d = {}
        for (i, j), c in self.monomials.items():
            if j >= 1:
                d[(i, j - 1)] = d.get((i, j - 1), self.field.zero()) + c * j
        return BiPoly(self.field, d)

    def normalized(self):
        """Scale so the lex-largest monomial has coefficient 1."""
        if self.is_zero():
            return self, self.field.one()
        lead = max(self.monomials)
        lc = self.monomials[lead]
        inv = lc.inverse()
        return BiPoly(self.field,
                      {ij: c * inv for ij, c in self.monomials.items()}), lc

    def key(self):
        return tuple(sorted((ij, c.coeffs)
                            for ij, c in self.monomials.items()))

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.monomials == other.monomials

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for (i, j), c in sorted(self.monomials.items()):
            mono = "".join(
                [f"x^{i}" if i > 1 else ("x" if i == 1 else ""),
                 f"y^{j}" if j > 1 else ("y" if j == 1 else "")])
            parts.append(f"({c}){mono}" if mono else f"({c})")
        return " + ".join(parts)
