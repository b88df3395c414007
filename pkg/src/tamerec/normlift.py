"""Lifts over F(t) and the norm construction on lifted reciprocity maps.

Here F = K0(x) and L = F(t).  Valuations of L split into general ones
(monic irreducible polynomials over F, i.e. closed points of the affine
t-line over F) and special ones (t = infinity, fibers x = a including
a = infinity, and exceptional divisors of blowups, which are never
enumerated: inputs are kept in positions where their contributions vanish).

A lift of a degree-j element a over the residue field of a general point p
is a degree-(j+1) element b over L whose tame symbol at p is a and whose
tame symbols at every other general valuation vanish.  The single-shot
formulas

    wedge:  a = sum n (xi_1 ^ xi_2 ^ xi_3)      ->  sum n (f_p ^ l(xi_1) ^ l(xi_2) ^ l(xi_3))
    mixed:  a = sum n ({xi_1}_2 (x) xi_3)       -> -sum n ({l(xi_1)}_2 (x) f_p ^ l(xi_3))

(with l(xi) the canonical representative of degree < deg f_p) kill all
general residues of degree >= deg p; the remaining lower-degree residues
are stripped recursively, subtracting fresh single-shot lifts degree by
degree downward, which terminates because the degree strictly decreases.

H_h sums the contributions of the enumerable special valuations,

    H_h(b) = -[ h(d_tinf(b)) + sum_fibers H_line(d_fiber(b)) ],

where the fiber residue fields are rational t-lines carrying the unique
lifted reciprocity map, and the norm map transports h along p by

    norm(h, p)(a) = H_h(lift(a, p)).
"""

from __future__ import annotations

from fractions import Fraction

from .chains import (BlochSum, ConstAtom, Factored, FactoredFunction,
                     FieldTag, LinearAtom, MixedSum, TIrredAtom, WedgeSum,
                     XPolyAtom, wedge_of_functions)
from .errors import (FieldMismatch, NonSplitFactor, NotReduced,
                     UnknownDescriptor)
from .homotopy import LiftedReciprocityMap, h_rational, h_rational_map
from .polyfun import Poly, RatFunc, TPoly
from .sympybridge import factor_bivariate, factor_univariate

DESK_DEGREE_CAP = 3


# ---------------------------------------------------------------------------
# factoring elements of L = K0(x)(t) into atoms
# ---------------------------------------------------------------------------


def factor_in_L(g):
    """Multiplicative normal form of a nonzero polynomial g in F[t]:
    constant * prod(x-irreducibles)^e * prod(monic-in-t irreducibles)^e."""
    field = g.field
    if g.is_zero():
        raise ZeroDivisionError("factoring zero")
    # clear coefficient denominators: D = lcm of dens (monic)
    D = Poly.const(field, 1)
    for c in g.coeffs:
        gg = D.gcd(c.den)
        D = D.divmod(gg)[0] * c.den
    cleared = [c * RatFunc(D, reduce=False) for c in g.coeffs]
    # bivariate monomial dict (x-exp, t-exp)
    biv = {}
    for j, r in enumerate(cleared):
        num = r.num  # denominator is 1 after clearing
        for i, coef in enumerate(num.coeffs):
            if not coef.is_zero():
                biv[(i, j)] = biv.get((i, j), field.zero()) + coef
    const, factors = factor_bivariate(biv, field)
    powers = []
    for fac, mult in factors:
        deg_t = max(j for _, j in fac)
        if deg_t == 0:
            coeffs = [field.zero()] * (max(i for i, _ in fac) + 1)
            for (i, _), c in fac.items():
                coeffs[i] = c
            powers.append((XPolyAtom(Poly(field, coeffs)), mult))
        else:
            tp, extra_const, extra_powers = _tpoly_from_bivar(fac, field)
            const = const * extra_const ** mult
            powers.extend((a, e * mult) for a, e in extra_powers)
            powers.append((TIrredAtom(tp), mult))
    # denominator D contributes negative x-atom powers
    dconst, dfactors = factor_univariate(list(D.coeffs), field)
    const = const / dconst
    for fac, mult in dfactors:
        powers.append((XPolyAtom(Poly(field, list(fac))), -mult))
    return Factored(const, powers)


def _tpoly_from_bivar(fac, field):
    """Bivariate irreducible factor with deg_t >= 1, as a monic-in-t TPoly.

    The leading t-coefficient (a polynomial in x) is divided out and
    refactored into x-atoms."""
    deg_t = max(j for _, j in fac)
    cols = {}
    for (i, j), c in fac.items():
        cols.setdefault(j, {})[i] = c
    coeffs = []
    for j in range(deg_t + 1):
        col = cols.get(j, {})
        cs = [field.zero()] * (max(col, default=0) + 1)
        for i, c in col.items():
            cs[i] = c
        coeffs.append(RatFunc(Poly(field, cs)))
    lead = coeffs[-1]
    tp = TPoly(field, [c / lead for c in coeffs])
    # lead = const * prod x-irreducibles
    lconst, lfactors = factor_univariate(list(lead.num.coeffs), field)
    lpowers = [(XPolyAtom(Poly(field, list(f))), m) for f, m in lfactors]
    return tp, lconst, lpowers


def factored_to_tpoly(f):
    """Multiply a Factored of L-atoms back out to a TPoly (poly atoms only)."""
    field = _factored_field(f)
    out = TPoly.const(field, f.constant)
    for a, e in f.powers:
        if e < 0:
            raise ValueError("cannot expand negative powers to a polynomial")
        base = _atom_tpoly(a, field)
        for _ in range(e):
            out = out * base
    return out


def _atom_tpoly(a, field):
    if isinstance(a, TIrredAtom):
        return a.tpoly
    if isinstance(a, XPolyAtom):
        return TPoly(field, [RatFunc(a.poly)])
    if isinstance(a, ConstAtom):
        return TPoly.const(field, a.value)
    raise TypeError(f"not a polynomial atom: {a!r}")


def _factored_field(f):
    return f.constant.field


# ---------------------------------------------------------------------------
# general points and residue elements
# ---------------------------------------------------------------------------


class GeneralPoint:
    """A closed point of the affine t-line over F = K0(x): a monic
    irreducible f_p in F[t], optionally with a rational parametrization
    s -> (x(s), t(s)) of the curve f_p(x, t) = 0 used by oracle tests."""

    def __init__(self, fp, param=None):
        if fp.is_zero() or not fp.is_monic():
            raise UnknownDescriptor("f_p must be monic in t")
        if fp.deg < 1 or fp.deg > DESK_DEGREE_CAP:
            raise UnknownDescriptor(
                f"desk-scale cap: 1 <= deg f_p <= {DESK_DEGREE_CAP}")
        self.fp = fp
        self.field = fp.field
        self.deg = fp.deg
        self._check_irreducible()
        self.param = None
        if param is not None:
            xs, ys = param
            self._check_param(xs, ys)
            self.param = (xs, ys)

    def _check_irreducible(self):
        if self.deg == 1:
            return
        f = factor_in_L(self.fp)
        tatoms = [(a, e) for a, e in f.powers if isinstance(a, TIrredAtom)]
        if len(tatoms) != 1 or tatoms[0][1] != 1 \
                or tatoms[0][0].tpoly.deg != self.deg:
            raise UnknownDescriptor(f"f_p = {self.fp} is not irreducible")

    def _check_param(self, xs, ys):
        pulled = self.fp.subs_param(xs, ys)
        if not pulled.is_zero():
            raise UnknownDescriptor("parametrization does not satisfy f_p = 0")
        # birationality at desk scale: the coordinate maps have the degrees
        # of the corresponding projections
        def map_deg(r):
            return max(r.num.deg, r.den.deg)
        deg_x_curve = max(max((c.num.deg for c in self.fp.coeffs)), 0)
        if map_deg(xs) != self.deg or map_deg(ys) != deg_x_curve:
            raise UnknownDescriptor(
                "parametrization degrees do not match the curve bidegree")

    def atom(self):
        return TIrredAtom(self.fp)

    def residue_tag(self):
        return FieldTag.residue(self)

    def reduce(self, g):
        """Canonical representative of g mod f_p (degree < deg p)."""
        return g.mod(self.fp)

    def residue_factored(self, g):
        """Canonical multiplicative form of the class of g in the residue
        field: factor the canonical representative."""
        rep = self.reduce(g)
        if rep.is_zero():
            raise ZeroDivisionError("zero residue class")
        return factor_in_L(rep)

    def __eq__(self, other):
        return isinstance(other, GeneralPoint) and self.fp == other.fp

    def __hash__(self):
        return hash(("gp", self.fp))

    def __repr__(self):
        return f"point[{self.fp}]"


class ResidueElement:
    """An element of the residue field of a general point, stored as the
    canonical polynomial representative of degree < deg f_p."""

    __slots__ = ("point", "rep")

    def __init__(self, point, rep):
        rep = point.reduce(rep)
        self.point = point
        self.rep = rep

    @classmethod
    def from_tpoly(cls, point, g):
        return cls(point, g)

    def is_zero(self):
        return self.rep.is_zero()

    def __add__(self, other):
        return ResidueElement(self.point, self.rep + other.rep)

    def __sub__(self, other):
        return ResidueElement(self.point, self.rep - other.rep)

    def __mul__(self, other):
        return ResidueElement(self.point, self.rep * other.rep)

    def inverse(self):
        return ResidueElement(self.point, self.rep.inverse_mod(self.point.fp))

    def __truediv__(self, other):
        return self * other.inverse()

    def as_factored(self):
        return self.point.residue_factored(self.rep)

    def __eq__(self, other):
        return (isinstance(other, ResidueElement)
                and self.point == other.point and self.rep == other.rep)

    def __hash__(self):
        return hash((self.point, self.rep))

    def __repr__(self):
        return f"[{self.rep} mod {self.point.fp}]"


# ---------------------------------------------------------------------------
# valuations of L and their classification
# ---------------------------------------------------------------------------


class FTValuation:
    """A descriptor for a divisorial valuation of L = K0(x)(t)."""

    __slots__ = ("kind", "data")

    def __init__(self, kind, data=None):
        self.kind = kind
        self.data = data

    @classmethod
    def general(cls, point):
        return cls("gen", point)

    @classmethod
    def t_infinity(cls):
        return cls("tinf")

    @classmethod
    def fiber(cls, a):
        return cls("fiber", a)

    @classmethod
    def fiber_infinity(cls):
        return cls("fiberinf")

    @classmethod
    def exceptional(cls, label="exceptional"):
        return cls("exc", label)

    def __eq__(self, other):
        return isinstance(other, FTValuation) and self.kind == other.kind \
            and self.data == other.data

    def __hash__(self):
        return hash((self.kind, self.data))

    def __repr__(self):
        return {"gen": f"v[{self.data}]", "tinf": "v_tinf",
                "fiber": f"v_fiber({self.data})",
                "fiberinf": "v_fiber(inf)",
                "exc": f"v_exc({self.data})"}[self.kind]


def classify_valuation(desc):
    """``general`` for irreducible-polynomial points, ``special`` for the
    t-infinity valuation, fibers, and exceptional tags."""
    if isinstance(desc, GeneralPoint):
        return "general"
    if isinstance(desc, FTValuation):
        if desc.kind == "gen":
            return "general"
        if desc.kind in ("tinf", "fiber", "fiberinf", "exc"):
            return "special"
    raise UnknownDescriptor(f"unrecognized valuation descriptor {desc!r}")


# ---------------------------------------------------------------------------
# tame symbols on L
# ---------------------------------------------------------------------------


def _atom_ord_ft(atom, val, field):
    if val.kind == "gen":
        return 1 if (isinstance(atom, TIrredAtom)
                     and atom.tpoly == val.data.fp) else 0
    if val.kind == "tinf":
        return -atom.tpoly.deg if isinstance(atom, TIrredAtom) else 0
    if val.kind == "fiber":
        a = val.data
        if isinstance(atom, XPolyAtom):
            return atom.poly.ord_at_root(a) if atom.poly.deg == 1 else 0
        if isinstance(atom, TIrredAtom):
            return min(c.ord_at(a) for c in atom.tpoly.coeffs
                       if not c.is_zero())
        return 0
    if val.kind == "fiberinf":
        if isinstance(atom, XPolyAtom):
            return -atom.poly.deg
        if isinstance(atom, TIrredAtom):
            return min(c.ord_inf() for c in atom.tpoly.coeffs
                       if not c.is_zero())
        return 0
    raise UnknownDescriptor(f"no tame symbol at {val!r}")


def _atom_residue_ft(atom, val, field):
    """Residue of the unit part of an atom, as a Factored over the residue
    field of val (tagged by the caller)."""
    if val.kind == "gen":
        point = val.data
        if isinstance(atom, ConstAtom):
            return Factored(atom.value)
        if isinstance(atom, XPolyAtom):
            return Factored(field.one(), [(atom, 1)])
        return point.residue_factored(atom.tpoly)
    if val.kind == "tinf":
        # residue field is F = K0(x); monic t-atoms restrict to 1
        if isinstance(atom, ConstAtom):
            return Factored(atom.value)
        if isinstance(atom, XPolyAtom):
            return Factored(field.one(), [(atom, 1)])
        return Factored(field.one())
    if val.kind == "fiber":
        a = val.data
        if isinstance(atom, ConstAtom):
            return Factored(atom.value)
        if isinstance(atom, XPolyAtom):
            v = atom.poly.eval(a)
            if v.is_zero():
                # the pi-slot itself; unit part is 1 for the monic linear
                return Factored(field.one())
            return Factored(v)
        m = _atom_ord_ft(atom, val, field)
        vals = []
        for c in atom.tpoly.coeffs:
            if c.is_zero():
                vals.append(field.zero())
            elif c.ord_at(a) > m:
                vals.append(field.zero())
            else:
                vals.append(c.residue_at(a))
        return _split_tpoly_over_k0(vals, field)
    if val.kind == "fiberinf":
        if isinstance(atom, ConstAtom):
            return Factored(atom.value)
        if isinstance(atom, XPolyAtom):
            return Factored(field.one())  # monic in x
        m = _atom_ord_ft(atom, val, field)
        vals = []
        for c in atom.tpoly.coeffs:
            if c.is_zero() or c.ord_inf() > m:
                vals.append(field.zero())
            else:
                vals.append(c.residue_inf())
        return _split_tpoly_over_k0(vals, field)
    raise UnknownDescriptor(f"no tame symbol at {val!r}")


def _split_tpoly_over_k0(vals, field):
    """Factor a K0-coefficient polynomial in t on the fiber line.

    Linear factors become LinearAtoms; irreducible factors of degree >= 2
    stay as (monic) XPolyAtoms in the fiber coordinate.  They are harmless
    while the terms that carry them die against constants; h_rational
    raises NonSplitFactor only if one survives."""
    while vals and vals[-1].is_zero():
        vals.pop()
    if not vals:
        raise ZeroDivisionError("zero residue")
    if len(vals) == 1:
        return Factored(vals[0])
    const, factors = factor_univariate(vals, field)
    powers = []
    for fac, mult in factors:
        if len(fac) == 2:
            powers.append((LinearAtom(-fac[0]), mult))
        else:
            powers.append((XPolyAtom(Poly(field, list(fac))), mult))
    return Factored(const, powers)


def _residue_tag_of(val, field):
    if val.kind == "gen":
        return FieldTag.residue(val.data)
    if val.kind == "tinf":
        return FieldTag.line(field, "x")
    return FieldTag.line(field, "t")


def tame_ft_wedge(w, val):
    """Top-degree tame symbol on Lambda^n L^x at a general or enumerable
    special valuation; degree drops by one, field drops to the residue
    field of val."""
    field = w.tag.field
    out_tag = _residue_tag_of(val, field)
    out = WedgeSum.zero(out_tag, w.n - 1)
    for atoms, coeff in w.terms.items():
        ords = [_atom_ord_ft(a, val, field) for a in atoms]
        for i, m in enumerate(ords):
            if m == 0:
                continue
            sign = (-1) ** i
            residues = [_atom_residue_ft(a, val, field)
                        for j, a in enumerate(atoms) if j != i]
            if val.kind in ("tinf",):
                residues = [_to_xline(f, field) for f in residues]
            out = out + wedge_of_functions(out_tag, residues,
                                           coeff * m * sign)
    return out


def tame_ft_mixed(m, val):
    """Tame symbol on B_2(L) (x) Lambda^(n-2) L^x, n in {3, 4}."""
    field = m.tag.field
    out_tag = _residue_tag_of(val, field)
    if m.n == 3:
        out = BlochSum.zero(out_tag)
    else:
        out = MixedSum.zero(out_tag, 3)
    for (point, tail), coeff in m.terms.items():
        ordf = sum(e * _atom_ord_ft(a, val, field) for a, e in point.powers)
        if ordf != 0:
            continue
        fbar = Factored(point.constant)
        for a, e in point.powers:
            fbar = fbar * _atom_residue_ft(a, val, field) ** e
        if val.kind == "tinf":
            fbar = _to_xline(fbar, field)
        fbar_point = _factored_point(fbar)
        if m.n == 3:
            mult = sum(_atom_ord_ft(a, val, field) for a in tail)
            if mult:
                out = out + BlochSum.build(out_tag,
                                           [(-coeff * mult, fbar_point)])
        else:
            inner = tame_ft_wedge(
                WedgeSum.build(m.tag, 2, [(Fraction(1), list(tail))]), val)
            raws = [(-coeff * c2, fbar_point, list(t2))
                    for t2, c2 in inner.terms.items()]
            out = out + MixedSum.build(out_tag, 3, raws)
    return out


def _factored_point(f):
    """Collapse a Factored to a FieldElement when constant (so Bloch points
    over lines and residue fields compare canonically)."""
    if f.is_constant():
        return f.constant
    return f


def _to_xline(f, field):
    """Convert linear x-poly atoms to line atoms on the x-line.

    Irreducible x-polys of degree >= 2 are kept as XPolyAtoms: they name
    non-K0 points and are only an error if they survive into a reciprocity
    map evaluation (h_rational raises then)."""
    powers = []
    for a, e in f.powers:
        if isinstance(a, XPolyAtom) and a.poly.deg == 1:
            powers.append((LinearAtom(-a.poly.coeffs[0]), e))
        elif isinstance(a, (XPolyAtom, LinearAtom)):
            powers.append((a, e))
        else:
            raise NonSplitFactor(f"unexpected atom {a!r} on the x-line")
    return Factored(f.constant, powers)


# ---------------------------------------------------------------------------
# wedge builders over residue fields and L
# ---------------------------------------------------------------------------


def residue_wedge(point, elements, coeff=1):
    """Wedge of residue-field elements (TPoly / ResidueElement), canonically
    factored."""
    funcs = []
    for g in elements:
        if isinstance(g, ResidueElement):
            funcs.append(g.as_factored())
        else:
            funcs.append(point.residue_factored(g))
    return wedge_of_functions(point.residue_tag(), funcs, coeff)


def residue_mixed(point, entries):
    """MixedSum over a residue field: entries (coeff, point_elt, [tail])."""
    tag = point.residue_tag()
    out = MixedSum.zero(tag, 3)
    for coeff, pt, tail in entries:
        if isinstance(pt, ResidueElement):
            ptf = pt.as_factored()
        elif isinstance(pt, TPoly):
            ptf = point.residue_factored(pt)
        else:
            ptf = pt
        funcs = []
        for g in tail:
            if isinstance(g, ResidueElement):
                funcs.append(g.as_factored())
            else:
                funcs.append(point.residue_factored(g))
        slots = [f.atom_expansion() for f in funcs]
        raws = []
        from .chains import _expand
        _expand(slots, 0, Fraction(coeff), [], raws)
        out = out + MixedSum.build(tag, 3,
                                   [(c, _factored_point(ptf), atoms)
                                    for c, atoms in raws])
    return out


def embed_line_wedge(w, point):
    """j_*: wedges over the x-line F embed into the residue field of p."""
    tag = point.residue_tag()
    out = []
    for atoms, coeff in w.terms.items():
        new_atoms = []
        for a in atoms:
            if isinstance(a, LinearAtom):
                new_atoms.append(XPolyAtom(Poly.linear(point.field, a.root)))
            else:
                new_atoms.append(a)
        out.append((coeff, new_atoms))
    return WedgeSum.build(tag, w.n, out)


# ---------------------------------------------------------------------------
# the lift construction
# ---------------------------------------------------------------------------


def general_support(thing):
    """All general points where some atom can have a nonzero tame symbol."""
    terms = thing.terms
    out = {}
    for key in terms:
        if isinstance(thing, WedgeSum):
            atom_iter = list(key)
        else:
            point, tail = key
            atom_iter = [a for a, _ in point.powers] + list(tail)
        for a in atom_iter:
            if isinstance(a, TIrredAtom):
                out[a.tpoly] = a
    pts = []
    for tp in sorted(out, key=lambda t: (t.deg, t.key())):
        pts.append(GeneralPoint(tp))
    return pts


def regroup_wedge(w):
    """Rewrite each term by merging the last two slots: x^y^z = x^(yz)^z.

    The product is reduced mod f_p and refactored, which wraps whenever the
    degrees add up past deg f_p, so the presentation (and hence the lift)
    genuinely changes while the element does not; used to exercise lift
    independence."""
    tag = w.tag
    point = tag.data[0]
    out = WedgeSum.zero(tag, w.n)
    for atoms, coeff in w.terms.items():
        head = list(atoms[:-2])
        y, z = atoms[-2], atoms[-1]
        prod = _atom_tpoly(y, point.field) * _atom_tpoly(z, point.field)
        merged = point.residue_factored(prod)
        funcs = [Factored(point.field.one(), [(a, 1)]) for a in head] + \
            [merged, Factored(point.field.one(), [(z, 1)])]
        out = out + wedge_of_functions(tag, funcs, coeff)
    return out


def _single_shot_wedge(w, point):
    """The case j = m lift formula, term by term."""
    ft_tag = FieldTag.funcfield(point.field)
    out = []
    for atoms, coeff in w.terms.items():
        for a in atoms:
            if isinstance(a, TIrredAtom) and a.tpoly.deg >= point.deg:
                raise NotReduced(
                    f"slot {a} has degree >= deg f_p = {point.deg}")
        out.append((coeff, [point.atom()] + list(atoms)))
    return WedgeSum.build(ft_tag, w.n + 1, out)


def _single_shot_mixed(m, point):
    """The case j = m-1 lift formula: -{l(xi_1)}_2 (x) f_p ^ l(xi_3)."""
    ft_tag = FieldTag.funcfield(point.field)
    out = []
    for (pt, tail), coeff in m.terms.items():
        ptf = pt if isinstance(pt, Factored) else Factored(pt)
        out.append((-coeff, ptf, [point.atom()] + list(tail)))
    return MixedSum.build(ft_tag, m.n + 1, out)


def lift_wedge(a, point, order="asc", regroup=False):
    """A lift of a degree-3 wedge over the residue field of p: tame symbol
    at p equals a (in its canonical presentation) and all other general
    residues vanish; recursive stripping runs degrees downward in the given
    order ("asc" or "desc" within each degree)."""
    if a.tag != point.residue_tag():
        raise FieldMismatch("wedge is not over the residue field of p")
    if regroup:
        a = regroup_wedge(a)
    current = _single_shot_wedge(a, point)
    current = _strip(current, point, order,
                     lambda w, q: tame_ft_wedge(w, FTValuation.general(q)),
                     _single_shot_wedge)
    return current


def lift_mixed(a, point, order="asc"):
    """A lift of a degree-2 mixed element, by the displayed formula plus
    recursive stripping."""
    if a.tag != point.residue_tag():
        raise FieldMismatch("mixed sum is not over the residue field of p")
    current = _single_shot_mixed(a, point)
    current = _strip(current, point, order,
                     lambda m, q: tame_ft_mixed(m, FTValuation.general(q)),
                     _single_shot_mixed)
    return current


def _strip(current, point, order, tame_at, single_shot):
    for deg in range(point.deg - 1, 0, -1):
        while True:
            pts = [q for q in general_support(current)
                   if q.deg == deg and q != point]
            if order == "desc":
                pts = pts[::-1]
            dirty = False
            for q in pts:
                res = tame_at(current, q)
                if not res.is_zero():
                    current = current - single_shot(res, q)
                    dirty = True
            if not dirty:
                break
    return current


# ---------------------------------------------------------------------------
# H_h and the norm map
# ---------------------------------------------------------------------------


def _fiber_support(b):
    """Finite fibers x = a that can carry a nonzero tame symbol of b.

    Raises NonSplitFactor when an atom has nonzero order along a fiber that
    is not a K0-point (degree >= 2 irreducible x-factor)."""
    field = b.tag.field
    candidates = set()
    bad = {}
    for key in b.terms:
        if isinstance(b, WedgeSum):
            atom_iter = list(key)
        else:
            point, tail = key
            atom_iter = [a for a, _ in point.powers] + list(tail)
        for a in atom_iter:
            if isinstance(a, XPolyAtom):
                if a.poly.deg == 1:
                    candidates.add(-a.poly.coeffs[0])
                else:
                    bad.setdefault(a.poly, 0)
                    bad[a.poly] += 1
            elif isinstance(a, TIrredAtom):
                for c in a.tpoly.coeffs:
                    if c.is_zero():
                        continue
                    for part in (c.num, c.den):
                        if part.deg >= 1:
                            _, factors = factor_univariate(
                                list(part.coeffs), field)
                            for fac, _m in factors:
                                if len(fac) == 2:
                                    candidates.add(-fac[0])
                                else:
                                    bad.setdefault(Poly(field, list(fac)), 0)
                                    bad[Poly(field, list(fac))] += 1
    for poly in bad:
        # a non-K0 fiber contributes only if some atom has nonzero order
        # along it; check the Gauss orders there
        for key in b.terms:
            atom_iter = list(key) if isinstance(b, WedgeSum) else \
                [a for a, _ in key[0].powers] + list(key[1])
            for a in atom_iter:
                if _ord_at_xirreducible(a, poly) != 0:
                    raise NonSplitFactor(
                        f"support meets the non-K0 fiber {poly}; curate")
    return sorted(candidates, key=lambda v: v.sort_key())


def _ord_at_xirreducible(atom, q):
    if isinstance(atom, XPolyAtom):
        return 1 if atom.poly == q else 0
    if isinstance(atom, TIrredAtom):
        out = None
        for c in atom.tpoly.coeffs:
            if c.is_zero():
                continue
            o = _poly_mult(c.num, q) - _poly_mult(c.den, q)
            out = o if out is None else min(out, o)
        return out or 0
    return 0


def _poly_mult(p, q):
    if p.deg < q.deg:
        return 0
    m = 0
    while True:
        quo, rem = p.divmod(q)
        if not rem.is_zero():
            return m
        m += 1
        p = quo
        if p.is_zero():
            return m


def H_h(b, h):
    """H_h(b) = -sum over enumerable special valuations of the local
    reciprocity map applied to the tame symbol of b.

    The t-infinity residue field is F (the rational x-line is required, so h
    must live on line(K0, x)); each fiber residue field is a rational t-line
    carrying the unique map."""
    field = b.tag.field
    if h.tag != FieldTag.line(field, "x"):
        raise FieldMismatch("H_h needs a reciprocity map on K0(x)")
    total = BlochSum.zero(FieldTag.const(field))
    w_inf = tame_ft_wedge(b, FTValuation.t_infinity())
    total = total + h(w_inf)
    for a in _fiber_support(b):
        w_fib = tame_ft_wedge(b, FTValuation.fiber(a))
        total = total + h_rational(w_fib)
    w_fi = tame_ft_wedge(b, FTValuation.fiber_infinity())
    total = total + h_rational(w_fi)
    return total.scale(-1)


def norm_map(h, point, order="asc"):
    """Transport of a lifted reciprocity map to the residue field of a
    general point: a -> H_h(lift(a, p))."""

    def evaluator(w):
        return H_h(lift_wedge(w, point, order=order), h)

    return LiftedReciprocityMap(point.residue_tag(), evaluator,
                                "norm_constructed",
                                f"N[{point.fp}]({h.name})")


# ---------------------------------------------------------------------------
# parametrization pullbacks (oracle path)
# ---------------------------------------------------------------------------


def pullback_factored(f, point):
    """Pull a residue-field Factored back to the s-line through the
    parametrization; roots must land in K0."""
    if point.param is None:
        raise UnknownDescriptor("point has no parametrization")
    xs, ys = point.param
    field = point.field
    out = Factored(f.constant)
    for a, e in f.powers:
        if isinstance(a, ConstAtom):
            out = out * Factored(a.value) ** e
            continue
        if isinstance(a, XPolyAtom):
            pulled = a.poly.eval_ratfunc(xs)
        elif isinstance(a, TIrredAtom):
            pulled = a.tpoly.subs_param(xs, ys)
        else:
            raise TypeError(f"unexpected atom {a!r}")
        if pulled.is_zero():
            raise ZeroDivisionError("pullback vanished; param not birational?")
        fac = _factor_ratfunc_linear(pulled, field)
        out = out * fac ** e
    return out


def _factor_ratfunc_linear(r, field):
    from .sympybridge import roots_in_field
    powers = []
    const = field.one()
    for part, sgn in ((r.num, 1), (r.den, -1)):
        if part.deg >= 1:
            roots, nonsplit = roots_in_field(list(part.coeffs), field)
            if nonsplit:
                raise NonSplitFactor(
                    "parametrization pullback does not split over K0")
            powers.extend((LinearAtom(root), sgn * m) for root, m in roots)
        const = const * part.lc() ** sgn
    return Factored(const, powers)


def pullback_wedge(w, point, var="s"):
    """Wedge over the residue field -> wedge over the rational s-line."""
    field = point.field
    tag = FieldTag.line(field, var)
    out = WedgeSum.zero(tag, w.n)
    for atoms, coeff in w.terms.items():
        funcs = [pullback_factored(Factored(field.one(), [(a, 1)]), point)
                 for a in atoms]
        out = out + wedge_of_functions(tag, funcs, coeff)
    return out


def pullback_mixed(m, point, var="s"):
    field = point.field
    tag = FieldTag.line(field, var)
    out = MixedSum.zero(tag, 3)
    from .chains import _expand
    for (pt, tail), coeff in m.terms.items():
        ptf = pt if isinstance(pt, Factored) else Factored(pt)
        pulled_pt = pullback_factored(ptf, point)
        funcs = [pullback_factored(Factored(field.one(), [(a, 1)]), point)
                 for a in tail]
        slots = [f.atom_expansion() for f in funcs]
        raws = []
        _expand(slots, 0, Fraction(coeff), [], raws)
        out = out + MixedSum.build(tag, 3,
                                   [(c, _factored_point(pulled_pt), atoms)
                                    for c, atoms in raws])
    return out


def pullback_map(h, point, var="s"):
    """RecMaps applied to the residue-field identification: evaluate h on
    the pullback (degree-1 functoriality oracle)."""

    def evaluator(w):
        return h(pullback_wedge(w, point, var))

    return LiftedReciprocityMap(point.residue_tag(), evaluator, "pullback",
                                f"pullback[{point.fp}]({h.name})")


def curve_tame_oracle(point, var="s"):
    """Total-tame-symbol oracle on the residue field of a parametrized
    point: valuations are identified with places of the s-line through the
    degree-1 parametrization."""
    from .tame import total_tame_mixed, total_tame_wedge

    def wedge_total(w):
        return total_tame_wedge(pullback_wedge(w, point, var))

    def mixed_total(m):
        return total_tame_mixed(pullback_mixed(m, point, var))

    return wedge_total, mixed_total


# ---------------------------------------------------------------------------
# 1 - x in residue fields (for the differential on residue mixed sums)
# ---------------------------------------------------------------------------


def residue_one_minus(f, point):
    """1 - f for a canonical residue-field Factored.

    The factorization of a canonical representative has nonnegative
    exponents on its t-irreducible atoms and possibly negative exponents on
    x-polynomial atoms (coefficient denominators), so f = N/D with D
    depending on x only; then 1 - f = (D - N)/D, refactored."""
    field = point.field
    num_powers = [(a, e) for a, e in f.powers if e > 0]
    den_powers = [(a, -e) for a, e in f.powers if e < 0]
    if any(isinstance(a, TIrredAtom) for a, _ in den_powers):
        raise ValueError("not a canonical residue representative")
    N = factored_to_tpoly(Factored(f.constant, num_powers))
    D = factored_to_tpoly(Factored(field.one(), den_powers))
    diff = point.reduce(D - N)
    if diff.is_zero():
        raise ZeroDivisionError("1 - f = 0; {1}_2 should have been dropped")
    return factor_in_L(diff) / factor_in_L(D)


# ---------------------------------------------------------------------------
# ramification / inertia data of places under the covering F_p / F
# ---------------------------------------------------------------------------


class ValuationExtension:
    """One place of the residue field over a place of F = K0(x): the
    ramification index e, the inertia degree f, and the fiber factor (a
    monic irreducible in K0[s]) locating the point on the parameter line."""

    __slots__ = ("e", "f", "factor")

    def __init__(self, e, f, factor):
        self.e = int(e)
        self.f = int(f)
        self.factor = factor

    def __repr__(self):
        return f"ext(e={self.e}, f={self.f}, at {self.factor})"


def valuation_extensions(point, place):
    """All extensions to the residue field of p of the place x = a of F
    (place INF for x = infinity), through the parametrization.

    The degrees obey sum e*f = [F_p : F] = deg f_p, the basic counting
    formula for extensions of discrete valuations."""
    from .chains import INF
    if point.param is None:
        raise UnknownDescriptor("point has no parametrization")
    xs, _ = point.param
    field = point.field
    out = []
    if place is INF:
        # poles of xs: finite poles from the denominator, plus s = infinity
        # when deg num > deg den
        _, dfactors = factor_univariate(list(xs.den.coeffs), field) \
            if xs.den.deg >= 1 else (None, [])
        for fac, mult in dfactors:
            out.append(ValuationExtension(mult, len(fac) - 1,
                                          Poly(field, list(fac))))
        drop = xs.num.deg - xs.den.deg
        if drop > 0:
            out.append(ValuationExtension(drop, 1, INF))
    else:
        shifted = xs - RatFunc.const(field, field.coerce(place))
        _, nfactors = factor_univariate(list(shifted.num.coeffs), field)
        for fac, mult in nfactors:
            out.append(ValuationExtension(mult, len(fac) - 1,
                                          Poly(field, list(fac))))
        drop = shifted.den.deg - shifted.num.deg
        if drop > 0:
            out.append(ValuationExtension(drop, 1, INF))
    return out
