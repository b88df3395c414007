"""Formal Q-linear chain groups of the weight-n polylogarithmic complexes.

Everything is tensored with Q: coefficients are Fractions, roots of unity are
dropped from multiplicative data, and wedge tuples are kept in a canonical
sorted normal form with the reordering sign absorbed into the coefficient.
Degrees up to 4 are supported, which covers weight <= 4 in the two top
degrees (the only part the verifiers need).

Atoms name multiplicative generators of the various function fields:

* ConstAtom   -- an element of K0^x;
* LinearAtom  -- t - a, a monic linear polynomial on a rational line;
* XPolyAtom   -- a monic irreducible polynomial in K0[x], i.e. a closed
                 point of the x-line inside a bigger function field;
* TIrredAtom  -- a monic-in-t irreducible polynomial over K0(x);
* SurfaceAtom -- an irreducible curve on the (x, y)-plane, with an optional
                 rational parametrization used by the surface verifiers.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (DegreeOverflow, DuplicatePoints, FieldMismatch,
                     NonSplitFactor)
from .numfield import FieldElement, is_root_of_unity
from .polyfun import Poly


# ---------------------------------------------------------------------------
# field tags
# ---------------------------------------------------------------------------


class FieldTag:
    """Lightweight label for which function field a formal sum lives over."""

    __slots__ = ("kind", "data")

    def __init__(self, kind, data):
        self.kind = kind
        self.data = data

    @classmethod
    def const(cls, field):
        return cls("const", (field,))

    @classmethod
    def line(cls, field, var="t"):
        return cls("line", (field, var))

    @classmethod
    def funcfield(cls, field):
        """K0(x)(t)."""
        return cls("ft", (field,))

    @classmethod
    def residue(cls, point):
        return cls("residue", (point,))

    @classmethod
    def surface(cls, field):
        return cls("surface", (field,))

    @property
    def field(self):
        """The coefficient number field K0."""
        if self.kind == "residue":
            return self.data[0].field
        return self.data[0]

    def __eq__(self, other):
        return (isinstance(other, FieldTag) and self.kind == other.kind
                and self.data == other.data)

    def __hash__(self):
        return hash((self.kind, self.data))

    def __repr__(self):
        if self.kind == "line":
            return f"K0({self.data[1]})"
        return {"const": "K0", "ft": "K0(x)(t)",
                "surface": "K0(x,y)"}.get(self.kind, f"residue[{self.data[0]}]")


# ---------------------------------------------------------------------------
# atoms
# ---------------------------------------------------------------------------


class ConstAtom:
    __slots__ = ("value",)
    rank = 0

    def __init__(self, value):
        self.value = value

    def sort_key(self):
        return (self.rank, self.value.sort_key())

    def is_torsion(self):
        return is_root_of_unity(self.value)

    def __eq__(self, other):
        return isinstance(other, ConstAtom) and self.value == other.value

    def __hash__(self):
        return hash(("C", self.value))

    def __repr__(self):
        return f"⟨{self.value}⟩"


class LinearAtom:
    __slots__ = ("root",)
    rank = 1

    def __init__(self, root):
        self.root = root

    def sort_key(self):
        return (self.rank, self.root.sort_key())

    def is_torsion(self):
        return False

    def __eq__(self, other):
        return isinstance(other, LinearAtom) and self.root == other.root

    def __hash__(self):
        return hash(("L", self.root))

    def __repr__(self):
        if self.root.is_zero():
            return "(t)"
        return f"(t-({self.root}))"


class XPolyAtom:
    """Monic irreducible element of K0[x], viewed inside K0(x) or bigger."""

    __slots__ = ("poly",)
    rank = 2

    def __init__(self, poly):
        self.poly = poly

    def sort_key(self):
        return (self.rank, len(self.poly.coeffs),
                tuple(c.sort_key() for c in self.poly.coeffs))

    def is_torsion(self):
        return False

    def __eq__(self, other):
        return isinstance(other, XPolyAtom) and self.poly == other.poly

    def __hash__(self):
        return hash(("X", self.poly))

    def __repr__(self):
        return f"[{self.poly}]x"


class TIrredAtom:
    """Monic-in-t irreducible polynomial over K0(x)."""

    __slots__ = ("tpoly",)
    rank = 3

    def __init__(self, tpoly):
        self.tpoly = tpoly

    def sort_key(self):
        return (self.rank, len(self.tpoly.coeffs), self.tpoly.key())

    def is_torsion(self):
        return False

    def __eq__(self, other):
        return isinstance(other, TIrredAtom) and self.tpoly == other.tpoly

    def __hash__(self):
        return hash(("T", self.tpoly))

    def __repr__(self):
        return f"[{self.tpoly}]"


class SurfaceAtom:
    """Irreducible curve P(x, y) = 0; parametrization is carried as metadata
    and does not participate in identity."""

    __slots__ = ("poly", "param")
    rank = 4

    def __init__(self, poly, param=None):
        self.poly = poly
        self.param = param

    def sort_key(self):
        return (self.rank, len(self.poly.monomials), self.poly.key())

    def is_torsion(self):
        return False

    def __eq__(self, other):
        return isinstance(other, SurfaceAtom) and self.poly == other.poly

    def __hash__(self):
        return hash(("S", self.poly))

    def __repr__(self):
        return f"[{self.poly}]"


INF = type("_Inf", (), {
    "__repr__": lambda self: "inf",
    "__reduce__": lambda self: ("INF",),
})()


# ---------------------------------------------------------------------------
# multiplicative normal forms
# ---------------------------------------------------------------------------


class Factored:
    """constant * prod atom^exp, the multiplicative normal form of a nonzero
    function.  Atoms are sorted; zero exponents are dropped."""

    __slots__ = ("constant", "powers")

    def __init__(self, constant, powers=()):
        merged = {}
        for atom, e in powers:
            if e:
                merged[atom] = merged.get(atom, 0) + e
        self.constant = constant
        self.powers = tuple(sorted(((a, e) for a, e in merged.items() if e),
                                   key=lambda p: p[0].sort_key()))

    @classmethod
    def one(cls, field):
        return cls(field.one())

    def is_one(self):
        return not self.powers and self.constant == self.constant.field.one()

    def is_constant(self):
        return not self.powers

    def __mul__(self, other):
        return Factored(self.constant * other.constant,
                        self.powers + other.powers)

    def inverse(self):
        return Factored(self.constant.inverse(),
                        tuple((a, -e) for a, e in self.powers))

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n):
        if n == 0:
            return Factored.one(self.constant.field)
        return Factored(self.constant ** n,
                        tuple((a, e * n) for a, e in self.powers))

    def key(self):
        return (self.constant, self.powers)

    def __eq__(self, other):
        return isinstance(other, Factored) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def atom_expansion(self):
        """The additive expansion in F^x tensor Q: [(atom, exponent)], with
        the constant included unless it is a root of unity."""
        out = []
        if not is_root_of_unity(self.constant):
            out.append((ConstAtom(self.constant), 1))
        out.extend(self.powers)
        return out

    def __repr__(self):
        parts = [] if self.constant == self.constant.field.one() \
            else [f"({self.constant})"]
        for a, e in self.powers:
            parts.append(f"{a}^{e}" if e != 1 else f"{a}")
        return "·".join(parts) if parts else "1"


class FactoredFunction(Factored):
    """A nonzero rational function on the projective line over K0 in fully
    factored form: constant * prod (t - a_i)^{e_i}."""

    def __init__(self, constant, factors=()):
        powers = [(LinearAtom(constant.field.coerce(r)), int(e))
                  for r, e in factors]
        super().__init__(constant, powers)

    @classmethod
    def from_factored(cls, f):
        out = cls.__new__(cls)
        Factored.__init__(out, f.constant, f.powers)
        return out

    @classmethod
    def constant_function(cls, field, c):
        return cls(field.coerce(c))

    @classmethod
    def linear(cls, field, root, mult=1):
        return cls(field.one(), [(root, mult)])

    @property
    def field(self):
        return self.constant.field

    @property
    def factors(self):
        return [(a.root, e) for a, e in self.powers]

    def degree(self):
        return sum(e for _, e in self.factors)

    def eval(self, a):
        out = self.constant
        for r, e in self.factors:
            out = out * (a - r) ** e
        return out

    def num_den_polys(self):
        field = self.field
        num = Poly.const(field, self.constant)
        den = Poly.const(field, 1)
        for r, e in self.factors:
            lin = Poly.linear(field, r)
            if e > 0:
                for _ in range(e):
                    num = num * lin
            else:
                for _ in range(-e):
                    den = den * lin
        return num, den

    def __mul__(self, other):
        return FactoredFunction.from_factored(Factored.__mul__(self, other))

    def inverse(self):
        return FactoredFunction.from_factored(Factored.inverse(self))

    def __truediv__(self, other):
        return FactoredFunction.from_factored(Factored.__truediv__(self, other))

    def __pow__(self, n):
        return FactoredFunction.from_factored(Factored.__pow__(self, n))


# ---------------------------------------------------------------------------
# formal sums
# ---------------------------------------------------------------------------


def _sort_with_sign(atoms):
    """Sort atoms, returning (tuple, sign) or (None, 0) if a repeat occurs."""
    keyed = [(a.sort_key(), i, a) for i, a in enumerate(atoms)]
    n = len(keyed)
    sign = 1
    # insertion sort, counting inversions
    arr = []
    for item in keyed:
        pos = len(arr)
        while pos > 0 and arr[pos - 1][0] > item[0]:
            pos -= 1
        sign *= (-1) ** (len(arr) - pos)
        arr.insert(pos, item)
    for i in range(n - 1):
        if arr[i][0] == arr[i + 1][0] and arr[i][2] == arr[i + 1][2]:
            return None, 0
    return tuple(a for _, _, a in arr), sign


class WedgeSum:
    """Q-linear combination of canonical wedge tuples of a fixed degree."""

    __slots__ = ("tag", "n", "terms")

    def __init__(self, tag, n, terms=None):
        self.tag = tag
        self.n = n
        self.terms = dict(terms or {})

    @classmethod
    def build(cls, tag, n, raw_terms):
        """raw_terms: iterable of (coeff, [atoms]); normalizes everything."""
        acc = {}
        for coeff, atoms in raw_terms:
            coeff = Fraction(coeff)
            if coeff == 0 or len(atoms) != n:
                if len(atoms) != n and coeff != 0:
                    raise ValueError("wrong wedge degree")
                continue
            if any(a.is_torsion() for a in atoms):
                continue
            tup, sign = _sort_with_sign(list(atoms))
            if sign == 0:
                continue
            acc[tup] = acc.get(tup, Fraction(0)) + sign * coeff
        return cls(tag, n, {t: c for t, c in acc.items() if c != 0})

    @classmethod
    def zero(cls, tag, n):
        return cls(tag, n, {})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        self._check(other)
        d = dict(self.terms)
        for t, c in other.terms.items():
            d[t] = d.get(t, Fraction(0)) + c
        return WedgeSum(self.tag, self.n,
                        {t: c for t, c in d.items() if c != 0})

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return WedgeSum.zero(self.tag, self.n)
        return WedgeSum(self.tag, self.n,
                        {t: c * v for t, v in self.terms.items()})

    def _check(self, other):
        if self.tag != other.tag or self.n != other.n:
            raise FieldMismatch("mixing wedge sums of different type")

    def items(self):
        return sorted(self.terms.items(),
                      key=lambda tc: tuple(a.sort_key() for a in tc[0]))

    def __eq__(self, other):
        return (isinstance(other, WedgeSum) and self.tag == other.tag
                and self.n == other.n and self.terms == other.terms)

    def __hash__(self):
        return hash((self.tag, self.n, frozenset(self.terms.items())))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for t, c in self.items():
            body = "∧".join(repr(a) for a in t)
            parts.append(f"{c}·{body}")
        return " + ".join(parts)


class BlochSum:
    """Q-span of symbols {x}_2; {0}_2, {1}_2, {inf}_2 are dropped.

    This is a free presentation: five-term relations are NOT quotiented.
    Equality claims always go through invariants (the delta_2 image and the
    Bloch-Wigner value)."""

    __slots__ = ("tag", "terms")

    def __init__(self, tag, terms=None):
        self.tag = tag
        self.terms = dict(terms or {})

    @classmethod
    def build(cls, tag, raw_terms):
        acc = {}
        for coeff, point in raw_terms:
            coeff = Fraction(coeff)
            if coeff == 0 or _is_degenerate_point(point):
                continue
            acc[point] = acc.get(point, Fraction(0)) + coeff
        return cls(tag, {p: c for p, c in acc.items() if c != 0})

    @classmethod
    def zero(cls, tag):
        return cls(tag, {})

    @classmethod
    def symbol(cls, tag, point, coeff=1):
        return cls.build(tag, [(coeff, point)])

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if self.tag != other.tag:
            raise FieldMismatch("mixing Bloch sums over different fields")
        d = dict(self.terms)
        for p, c in other.terms.items():
            d[p] = d.get(p, Fraction(0)) + c
        return BlochSum(self.tag, {p: c for p, c in d.items() if c != 0})

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return BlochSum.zero(self.tag)
        return BlochSum(self.tag, {p: c * v for p, v in self.terms.items()})

    def items(self):
        return sorted(self.terms.items(), key=lambda pc: _point_sort_key(pc[0]))

    def __eq__(self, other):
        return (isinstance(other, BlochSum) and self.tag == other.tag
                and self.terms == other.terms)

    def __repr__(self):
        if self.is_zero():
            return "0"
        return " + ".join(f"{c}·{{{p}}}₂" for p, c in self.items())


class MixedSum:
    """Q-linear combination of {x}_2 (x) (wedge of n-2 atoms), the
    degree-(n-1) chain group of the weight-n complex, n in {3, 4}."""

    __slots__ = ("tag", "n", "terms")

    def __init__(self, tag, n, terms=None):
        self.tag = tag
        self.n = n
        self.terms = dict(terms or {})

    @classmethod
    def build(cls, tag, n, raw_terms):
        """raw_terms: iterable of (coeff, point, [atoms])."""
        acc = {}
        for coeff, point, atoms in raw_terms:
            coeff = Fraction(coeff)
            if coeff == 0 or _is_degenerate_point(point):
                continue
            if len(atoms) != n - 2:
                raise ValueError("wrong tail degree")
            if any(a.is_torsion() for a in atoms):
                continue
            tup, sign = _sort_with_sign(list(atoms))
            if sign == 0:
                continue
            key = (point, tup)
            acc[key] = acc.get(key, Fraction(0)) + sign * coeff
        return cls(tag, n, {k: c for k, c in acc.items() if c != 0})

    @classmethod
    def zero(cls, tag, n):
        return cls(tag, n, {})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if self.tag != other.tag or self.n != other.n:
            raise FieldMismatch
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, Fraction(0)) + c
        return MixedSum(self.tag, self.n,
                        {k: c for k, c in d.items() if c != 0})

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return MixedSum.zero(self.tag, self.n)
        return MixedSum(self.tag, self.n,
                        {k: c * v for k, v in self.terms.items()})

    def items(self):
        return sorted(self.terms.items(),
                      key=lambda kc: (_point_sort_key(kc[0][0]),
                                      tuple(a.sort_key() for a in kc[0][1])))

    def __eq__(self, other):
        return (isinstance(other, MixedSum) and self.tag == other.tag
                and self.n == other.n and self.terms == other.terms)

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for (p, t), c in self.items():
            body = "∧".join(repr(a) for a in t)
            parts.append(f"{c}·{{{p}}}₂⊗{body}" if body else f"{c}·{{{p}}}₂")
        return " + ".join(parts)


def _is_degenerate_point(point):
    """True for {0}_2, {1}_2, {inf}_2 in any representation."""
    if point is INF:
        return True
    if isinstance(point, FieldElement):
        return point.is_zero() or point == point.field.one()
    if isinstance(point, Factored):
        return point.is_one()
    return False


def _point_sort_key(point):
    if point is INF:
        return (2,)
    if isinstance(point, FieldElement):
        return (0, point.sort_key())
    if isinstance(point, Factored):
        return (1, point.constant.sort_key(),
                tuple((a.sort_key(), e) for a, e in point.powers))
    return (3, repr(point))


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def wedge_of_functions(tag, functions, coeff=1):
    """Multilinear expansion of f_1 ^ ... ^ f_n for Factored functions."""
    slots = [f.atom_expansion() for f in functions]
    out = []
    _expand(slots, 0, Fraction(coeff), [], out)
    return WedgeSum.build(tag, len(slots), out)


def _expand(slots, i, coeff, atoms, out):
    if i == len(slots):
        out.append((coeff, list(atoms)))
        return
    for atom, e in slots[i]:
        atoms.append(atom)
        _expand(slots, i + 1, coeff * e, atoms, out)
        atoms.pop()


def mixed_of(tag, n, entries):
    """entries: iterable of (coeff, point, [Factored tail functions])."""
    out = []
    for coeff, point, tail in entries:
        slots = [f.atom_expansion() for f in tail]
        expanded = []
        _expand(slots, 0, Fraction(coeff), [], expanded)
        for c, atoms in expanded:
            out.append((c, point, atoms))
    return MixedSum.build(tag, n, out)


# ---------------------------------------------------------------------------
# the differential and the five-term generator
# ---------------------------------------------------------------------------


def delta(m, n=None):
    """delta_n({x}_2 (x) y_3 ^ ... ^ y_n) = x ^ (1-x) ^ y_3 ^ ... ^ y_n.

    Terms whose point is 0, 1 or infinity contribute zero (they are dropped
    at normalization already)."""
    if n is None:
        n = m.n
    if n != m.n or n not in (3, 4):
        raise DegreeOverflow("delta implemented for weights 3 and 4")
    out = []
    for (point, tail), coeff in m.terms.items():
        x, one_minus_x = _point_and_complement(m.tag, point)
        if x is None:
            continue
        slots = [x.atom_expansion(), one_minus_x.atom_expansion()] + \
            [[(a, 1)] for a in tail]
        _expand(slots, 0, coeff, [], out)
    return WedgeSum.build(m.tag, n, out)


def delta2(b):
    """delta_2 {x}_2 = x ^ (1-x), landing in degree-2 wedges over the same
    field."""
    out = []
    for point, coeff in b.terms.items():
        x, one_minus_x = _point_and_complement(b.tag, point)
        if x is None:
            continue
        slots = [x.atom_expansion(), one_minus_x.atom_expansion()]
        _expand(slots, 0, coeff, [], out)
    return WedgeSum.build(b.tag, 2, out)


def _point_and_complement(tag, point):
    """Both x and 1 - x as Factored objects, or (None, None) when degenerate."""
    if point is INF:
        return None, None
    if isinstance(point, FieldElement):
        field = point.field
        if point.is_zero() or point == field.one():
            return None, None
        return (Factored(point), Factored(field.one() - point))
    if isinstance(point, Factored):
        if tag.kind == "residue":
            from .normlift import residue_one_minus
            return point, residue_one_minus(point, tag.data[0])
        return point, line_one_minus(point)
    raise TypeError(f"unsupported Bloch point {point!r}")


def line_one_minus(f):
    """1 - f for a factored rational function on the K0-line.

    The difference den - num is refactored over K0; a factor that does not
    split over K0 raises NonSplitFactor (inputs are curated to avoid this)."""
    from .sympybridge import roots_in_field
    if not all(isinstance(a, LinearAtom) for a, _ in f.powers):
        raise TypeError("one_minus only implemented on rational lines")
    ff = f if isinstance(f, FactoredFunction) \
        else FactoredFunction.from_factored(f)
    num, den = ff.num_den_polys()
    diff = den - num
    if diff.is_zero():
        raise ZeroDivisionError("1 - f = 0; {1}_2 should have been dropped")
    roots, nonsplit = roots_in_field(list(diff.coeffs), ff.field)
    if nonsplit:
        raise NonSplitFactor(f"1 - ({f}) does not split over K0")
    powers = [(LinearAtom(r), m) for r, m in roots]
    # dividing by the (monic) denominator keeps its roots with negative signs
    powers += [(a, e) for a, e in ff.powers if e < 0]
    return FactoredFunction.from_factored(Factored(diff.lc(), powers))


def cross_ratio(x1, x2, x3, x4, field):
    """((x1-x3)(x2-x4)) / ((x1-x4)(x2-x3)) with the standard limits at
    infinity.  Returns a FieldElement or INF."""
    pts = [x1, x2, x3, x4]
    infs = [p is INF for p in pts]
    if sum(infs) > 1:
        raise DuplicatePoints("cross-ratio needs distinct points")

    def diff(a, b):
        return a - b
    if not any(infs):
        num = diff(x1, x3) * diff(x2, x4)
        den = diff(x1, x4) * diff(x2, x3)
    elif infs[0]:
        num, den = diff(x2, x4), diff(x2, x3)
    elif infs[1]:
        num, den = diff(x1, x3), diff(x1, x4)
    elif infs[2]:
        num, den = diff(x2, x4), diff(x1, x4)
    else:
        num, den = diff(x1, x3), diff(x2, x3)
    if den.is_zero():
        return INF
    return num / den


def five_term(x1, x2, x3, x4, x5, field=None):
    """sum_{i=1}^5 (-1)^i {c.r.(x_1, ..., omit x_i, ..., x_5)}_2.

    The points live in P^1(K0): FieldElements or INF, pairwise distinct."""
    pts = [x1, x2, x3, x4, x5]
    for i in range(5):
        for j in range(i + 1, 5):
            same = (pts[i] is INF and pts[j] is INF) or (
                pts[i] is not INF and pts[j] is not INF and pts[i] == pts[j])
            if same:
                raise DuplicatePoints("five-term points must be distinct")
    if field is None:
        field = next(p.field for p in pts if p is not INF)
    tag = FieldTag.const(field)
    raw = []
    for i in range(5):
        rest = [p for j, p in enumerate(pts) if j != i]
        cr = cross_ratio(*rest, field)
        raw.append((Fraction((-1) ** (i + 1)), cr))
    return BlochSum.build(tag, raw)


def wedge_mul(a, b):
    """Bilinear antisymmetric product of wedge sums (degrees add, <= 4)."""
    if a.tag != b.tag:
        raise FieldMismatch
    if a.n + b.n > 4:
        raise DegreeOverflow(f"wedge degree {a.n + b.n} > 4")
    out = []
    for t1, c1 in a.terms.items():
        for t2, c2 in b.terms.items():
            out.append((c1 * c2, list(t1) + list(t2)))
    return WedgeSum.build(a.tag, a.n + b.n, out)
