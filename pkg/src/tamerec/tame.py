"""Tame-symbol morphisms on the rational line K0(t).

At a place v of K0(t) (a finite K0-point or infinity) the tame symbol is the
unique map characterized on uniformiser-and-unit wedges by

    d_v(pi ^ u_2 ^ ... ^ u_n) = u_2(v) ^ ... ^ u_n(v)

together with multilinearity, and on mixed terms by

    d_v({a}_k (x) b) = 0                      when ord_v(a) != 0,
    d_v({u}_k (x) b) = -{u(v)}_k (x) d_v(b)   when u is a unit.

Writing each wedge slot as pi^m * unit and expanding multilinearly, only the
terms with exactly one pi slot survive in the top degree; the implementation
does literally that.

The global sign constant SIGMA records the relation between the homotopy map
and the total tame symbol:  delta_2(h(w)) = SIGMA * sum_v d_v(w).  The
mixed-level identity then carries the opposite sign, h(delta_3(m)) =
-SIGMA * sum_v d_v(m), because the tame symbol anticommutes with the
differential (d_v o delta = -delta o d_v).
"""

from __future__ import annotations

from fractions import Fraction

from .chains import (INF, BlochSum, ConstAtom, Factored, FactoredFunction,
                     FieldTag, LinearAtom, MixedSum, WedgeSum)
from .errors import NotAUnit
from .zerotest import wedge1_is_zero

SIGMA = -1


class Valuation:
    """A place of K0(t) trivial on K0: a finite point or infinity."""

    __slots__ = ("point",)

    def __init__(self, point):
        self.point = point  # FieldElement, or INF

    @classmethod
    def at_point(cls, a):
        return cls(a)

    @classmethod
    def infinity(cls):
        return cls(INF)

    @property
    def is_infinite(self):
        return self.point is INF

    def __eq__(self, other):
        return isinstance(other, Valuation) and (
            (self.point is INF and other.point is INF)
            or (self.point is not INF and other.point is not INF
                and self.point == other.point))

    def __hash__(self):
        return hash("inf" if self.point is INF else self.point)

    def __repr__(self):
        return "v_inf" if self.is_infinite else f"v({self.point})"


# -- orders and residues of factored functions ------------------------------


def _atom_ord(atom, v):
    if isinstance(atom, LinearAtom):
        if v.is_infinite:
            return -1
        return 1 if atom.root == v.point else 0
    if isinstance(atom, ConstAtom):
        return 0
    from .chains import XPolyAtom
    if isinstance(atom, XPolyAtom):
        # an irreducible polynomial atom on the line (degree >= 2 names a
        # non-K0 point; it is a unit at every K0 place)
        if v.is_infinite:
            return -atom.poly.deg
        return atom.poly.ord_at_root(v.point)
    raise TypeError(f"unsupported line atom {atom!r}")


def _atom_residue(atom, v):
    """Residue of the unit part of the atom at v (the atom itself when it is
    a unit; 1 for a monic factor at infinity)."""
    field = _atom_field(atom)
    if isinstance(atom, LinearAtom):
        if v.is_infinite:
            return field.one()
        if atom.root == v.point:
            raise NotAUnit(f"{atom} is not a unit at {v}")
        return v.point - atom.root
    if isinstance(atom, ConstAtom):
        return atom.value
    from .chains import XPolyAtom
    if isinstance(atom, XPolyAtom):
        if v.is_infinite:
            return field.one()
        val = atom.poly.eval(v.point)
        if val.is_zero():
            raise NotAUnit(f"{atom} is not a unit at {v}")
        return val
    raise TypeError(f"unsupported line atom {atom!r}")


def _atom_field(atom):
    if isinstance(atom, LinearAtom):
        return atom.root.field
    if isinstance(atom, ConstAtom):
        return atom.value.field
    return atom.poly.field


def ord_ff(f, v):
    """Order of a Factored function at a place."""
    return sum(e * _atom_ord(a, v) for a, e in f.powers)


def residue_value(f, v):
    """Exact residue class at v of a unit; NotAUnit when ord_ff(f, v) != 0."""
    if ord_ff(f, v) != 0:
        raise NotAUnit(f"{f} has nonzero order at {v}")
    out = f.constant
    for a, e in f.powers:
        # pi-parts cancel overall because the total order is zero, so the
        # product of unit-part residues is the residue class
        out = out * _atom_residue(a, v) ** e
    return out


# -- the symbols --------------------------------------------------------------


def tame_wedge(w, v):
    """d_v on Lambda^n K0(t)^x, n in {2, 3, 4}; lands in Lambda^(n-1) K0^x."""
    field = w.tag.field
    out_tag = FieldTag.const(field)
    raw = []
    for atoms, coeff in w.terms.items():
        slots = [(_atom_ord(a, v), a) for a in atoms]
        for i, (m, _) in enumerate(slots):
            if m == 0:
                continue
            sign = (-1) ** i
            residues = []
            for j, (_, a) in enumerate(slots):
                if j == i:
                    continue
                residues.append(ConstAtom(_atom_residue(a, v)))
            raw.append((coeff * m * sign, residues))
    return WedgeSum.build(out_tag, w.n - 1, raw)


def ord_of_tail(atoms, v):
    """Total order sum_i ord_v(atom_i): the degree-1 tame symbol."""
    return sum(_atom_ord(a, v) for a in atoms)


def tame_mixed(m, v):
    """d_v on B_2(K0(t)) (x) Lambda^(n-2) K0(t)^x for n in {3, 4}.

    For n = 3 the result is a BlochSum over K0 (the Lambda^0 factor
    collapses); for n = 4 it is a MixedSum over K0 of weight 3."""
    field = m.tag.field
    if m.n == 3:
        out = []
        for (point, tail), coeff in m.terms.items():
            f = _as_factored(point, field)
            if ord_ff(f, v) != 0:
                continue
            fbar = residue_value(f, v)
            mult = ord_of_tail(tail, v)
            if mult:
                out.append((-coeff * mult, fbar))
        return BlochSum.build(FieldTag.const(field), out)
    if m.n == 4:
        raws = []
        for (point, tail), coeff in m.terms.items():
            f = _as_factored(point, field)
            if ord_ff(f, v) != 0:
                continue
            fbar = residue_value(f, v)
            inner = tame_wedge(
                WedgeSum.build(m.tag, 2, [(Fraction(1), list(tail))]), v)
            for (atom,), c2 in inner.terms.items():
                raws.append((-coeff * c2, fbar, [atom]))
        return MixedSum.build(FieldTag.const(field), 3, raws)
    raise ValueError("tame_mixed implemented for weights 3 and 4")


def _as_factored(point, field):
    if isinstance(point, Factored):
        return point
    return Factored(field.coerce(point))


# -- supports and reciprocity --------------------------------------------------


def support_of_wedge(w):
    """All places where some atom has nonzero order, plus infinity."""
    pts = set()
    for atoms in w.terms:
        for a in atoms:
            if isinstance(a, LinearAtom):
                pts.add(a.root)
    vals = [Valuation.at_point(p) for p in sorted(pts,
                                                  key=lambda x: x.sort_key())]
    vals.append(Valuation.infinity())
    return vals


def support_of_mixed(m):
    pts = set()
    for (point, tail) in m.terms:
        if isinstance(point, Factored):
            for a, _ in point.powers:
                if isinstance(a, LinearAtom):
                    pts.add(a.root)
        for a in tail:
            if isinstance(a, LinearAtom):
                pts.add(a.root)
    vals = [Valuation.at_point(p) for p in sorted(pts,
                                                  key=lambda x: x.sort_key())]
    vals.append(Valuation.infinity())
    return vals


def total_tame_wedge(w):
    """sum_v d_v(w) over the support (a finite sum)."""
    field = w.tag.field
    out = WedgeSum.zero(FieldTag.const(field), w.n - 1)
    for v in support_of_wedge(w):
        out = out + tame_wedge(w, v)
    return out


def total_tame_mixed(m):
    field = m.tag.field
    if m.n == 3:
        out = BlochSum.zero(FieldTag.const(field))
    else:
        out = MixedSum.zero(FieldTag.const(field), 3)
    for v in support_of_mixed(m):
        out = out + tame_mixed(m, v)
    return out


def weil_check(w):
    """Weil reciprocity: sum_v d_v(f ^ g) = 0 in K0^x tensor Q, exactly.

    Returns a report dict; is_zero is decided by clearing denominators and
    testing the resulting product for being a root of unity."""
    if w.n != 2:
        raise ValueError("weil_check takes a degree-2 wedge")
    total = total_tame_wedge(w)
    ok = wedge1_is_zero(total)
    return {
        "sum_terms": [(repr(t[0]), str(c)) for t, c in total.items()],
        "is_zero": bool(ok),
        "method": "exact",
        "sigma": SIGMA,
    }
