"""Conversions between exact K0 arithmetic and sympy polynomial domains.

All polynomial factorization in the package funnels through here: univariate
factorization over K0 (support enumeration for valuations), bivariate
factorization over K0 (atoms of function fields on surfaces), and Groebner
triviality tests (transversality checks).  K0 = Q uses the plain QQ domain;
otherwise coefficients travel as ANP vectors over QQ.algebraic_field.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import sympy as sp
from sympy.polys.domains import QQ as _QQ

from .numfield import FieldElement

_DOMAIN_CACHE = {}


def field_domain(field):
    """Return (domain, to_dom, from_dom) for a NumberField."""
    key = id(field)
    if key in _DOMAIN_CACHE:
        return _DOMAIN_CACHE[key]
    if field.degree == 1:
        dom = _QQ
        gen_value = -field.minpoly[0]  # s == this rational

        def to_dom(x):
            return dom.from_sympy(sp.Rational(x.coeffs[0].numerator,
                                              x.coeffs[0].denominator))

        def from_dom(v):
            fr = Fraction(int(dom.numer(v)), int(dom.denom(v)))
            return field.element([fr])
    else:
        s = sp.Symbol("_s")
        expr = sum(sp.Rational(c.numerator, c.denominator) * s**i
                   for i, c in enumerate(field.minpoly))
        # deterministic root choice: index 0 of sympy's CRootOf ordering
        theta = sp.AlgebraicNumber(sp.CRootOf(expr, 0))
        dom = _QQ.algebraic_field(theta)

        def to_dom(x):
            # ANP representation: coefficients of powers of theta, descending
            coeffs = [sp.Rational(c.numerator, c.denominator)
                      for c in reversed(x.coeffs)]
            return dom.dtype(coeffs, dom.mod.to_list(), _QQ)

        def from_dom(v):
            lst = v.to_list()  # descending powers of theta
            lst = list(reversed(lst))
            out = [Fraction(0)] * field.degree
            for i, c in enumerate(lst):
                fr = Fraction(int(_QQ.numer(c)), int(_QQ.denom(c)))
                out[i] = fr
            return field.element(out)

    _DOMAIN_CACHE[key] = (dom, to_dom, from_dom)
    return _DOMAIN_CACHE[key]


def _poly_from_coeffs(coeffs, field, x):
    dom, to_dom, _ = field_domain(field)
    rep = {(i,): to_dom(c) for i, c in enumerate(coeffs) if not c.is_zero()}
    return sp.Poly.from_dict(rep, x, domain=dom)


def factor_univariate(coeffs, field):
    """Factor a univariate polynomial over K0.

    coeffs: ascending list of FieldElement.  Returns (const, factors) where
    const is a FieldElement and factors is a list of (monic ascending
    coefficient list, multiplicity), deterministically ordered.
    """
    key = (id(field), tuple(c.coeffs for c in coeffs))
    return _factor_univariate_cached(key, tuple(coeffs), field)


@lru_cache(maxsize=4096)
def _factor_univariate_cached(key, coeffs, field):
    dom, to_dom, from_dom = field_domain(field)
    x = sp.Symbol("_x")
    poly = _poly_from_coeffs(list(coeffs), field, x)
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        fac = fac.monic()
        cs = [from_dom(c) for c in fac.rep.to_list()[::-1]]
        out.append((tuple(cs), int(mult)))
    out.sort(key=lambda fm: (len(fm[0]), [c.sort_key() for c in fm[0]]))
    # all factors are reported monic, so the constant is the input's leading
    # coefficient
    const = coeffs[-1]
    return const, out


def roots_in_field(coeffs, field):
    """All roots (with multiplicity) of a univariate polynomial that lie in K0.

    Returns (roots, nonsplit) where roots is a list of (FieldElement, mult)
    and nonsplit is the total degree of irreducible factors of degree >= 2.
    """
    const, factors = factor_univariate(coeffs, field)
    roots = []
    nonsplit = 0
    for fac, mult in factors:
        if len(fac) == 2:
            roots.append((-fac[0], mult))
        else:
            nonsplit += (len(fac) - 1) * mult
    return roots, nonsplit


def factor_bivariate(monomials, field):
    """Factor a polynomial in two variables over K0.

    monomials: dict (i, j) -> FieldElement for x^i y^j.  Returns
    (const FieldElement, [(factor dict, multiplicity)]) with factors
    normalized so their lexicographically-largest monomial has coefficient 1.
    """
    key = (id(field), tuple(sorted((ij, c.coeffs)
                                   for ij, c in monomials.items())))
    return _factor_bivariate_cached(key, tuple(sorted(monomials.items())),
                                    field)


@lru_cache(maxsize=4096)
def _factor_bivariate_cached(key, items, field):
    dom, to_dom, from_dom = field_domain(field)
    x, y = sp.symbols("_x _y")
    rep = {ij: to_dom(c) for ij, c in items if not c.is_zero()}
    poly = sp.Poly.from_dict(rep, x, y, domain=dom)
    _, factors = poly.factor_list()
    out = []
    lead_total = (0, 0)
    for fac, mult in factors:
        d = {ij: from_dom(c) for ij, c in fac.rep.to_dict().items()}
        # normalize: leading (lex-largest) monomial coefficient 1
        lead = max(d)
        lc = d[lead]
        d = {ij: c / lc for ij, c in d.items()}
        lead_total = (lead_total[0] + mult * lead[0],
                      lead_total[1] + mult * lead[1])
        out.append((d, int(mult)))
    # lex order is multiplicative, so the input coefficient at the product of
    # the factor lead monomials is exactly the constant
    const = dict(items)[lead_total]
    out.sort(key=_bivar_sort_key)
    return const, out


def _bivar_sort_key(fm):
    d, mult = fm
    items = sorted(d.items())
    return (len(items), [(ij, c.sort_key()) for ij, c in items], mult)


def groebner_is_trivial(poly_dicts, field):
    """True iff the polynomials have no common zero over the algebraic closure.

    poly_dicts: iterable of dict (i, j) -> FieldElement in two variables.
    """
    dom, to_dom, _ = field_domain(field)
    x, y = sp.symbols("_x _y")
    polys = []
    for d in poly_dicts:
        rep = {ij: to_dom(c) for ij, c in d.items() if not c.is_zero()}
        if not rep:
            continue
        polys.append(sp.Poly.from_dict(rep, x, y, domain=dom))
    if not polys:
        return False
    g = sp.groebner(polys, x, y, domain=dom, order="lex")
    exprs = list(g.exprs)
    return exprs == [1] or exprs == [sp.Integer(1)]


def solve_common_zeros(poly_dicts, field):
    """Best-effort common zeros of two-variable polynomials, for witnesses."""
    dom, to_dom, _ = field_domain(field)
    x, y = sp.symbols("_x _y")
    polys = []
    for d in poly_dicts:
        rep = {ij: to_dom(c) for ij, c in d.items() if not c.is_zero()}
        polys.append(sp.Poly.from_dict(rep, x, y, domain=dom).as_expr())
    try:
        sols = sp.solve(polys, [x, y], dict=True)
    except Exception:
        return []
    out = []
    for sol in sols:
        try:
            out.append((complex(sol[x]), complex(sol[y])))
        except Exception:
            out.append((str(sol.get(x)), str(sol.get(y))))
    return out
