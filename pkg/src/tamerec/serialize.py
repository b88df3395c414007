"""JSON encoding of fields, elements, functions, and job payloads.

Rationals travel as strings "p/q" so exactness survives serialization;
complex numbers appear only in reports, as [re, im] decimal strings.
"""

from __future__ import annotations

from fractions import Fraction

from .chains import FactoredFunction, INF
from .errors import SchemaError
from .numfield import NumberField, make_field
from .polyfun import BiPoly, Poly, RatFunc, TPoly


def rat_to_str(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 \
        else str(q.numerator)


def str_to_rat(s):
    try:
        if isinstance(s, int):
            return Fraction(s)
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {s!r}: {exc}") from exc


def encode_field(field):
    return {"var": field.variable_name,
            "minpoly": [rat_to_str(c) for c in field.minpoly],
            "torsion": field.torsion_order}


def decode_field(obj):
    try:
        return make_field([str_to_rat(c) for c in obj["minpoly"]],
                          int(obj["torsion"]), obj.get("var", "s"))
    except KeyError as exc:
        raise SchemaError(f"field object missing {exc}") from exc


def encode_element(x):
    return [rat_to_str(c) for c in x.coeffs]


def decode_element(field, obj):
    if isinstance(obj, (str, int)):
        obj = [obj]
    if not isinstance(obj, list) or len(obj) > field.degree:
        raise SchemaError(f"bad element {obj!r}")
    return field.element([str_to_rat(c) for c in obj])


def decode_point(field, obj):
    """P^1(K0) point: an element or the string "inf"."""
    if obj == "inf":
        return INF
    return decode_element(field, obj)


def encode_factored_function(f):
    return {"constant": encode_element(f.constant),
            "factors": [[encode_element(r), int(e)] for r, e in f.factors]}


def decode_factored_function(field, obj):
    try:
        const = decode_element(field, obj["constant"])
        factors = [(decode_element(field, r), int(e))
                   for r, e in obj.get("factors", [])]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad factored function {obj!r}: {exc}") from exc
    if const.is_zero():
        raise SchemaError("factored function must be nonzero")
    return FactoredFunction(const, factors)


def decode_poly(field, obj):
    return Poly(field, [decode_element(field, c) for c in obj])


def decode_ratfunc(field, obj):
    if isinstance(obj, list):
        return RatFunc(decode_poly(field, obj))
    try:
        num = decode_poly(field, obj["num"])
        den = decode_poly(field, obj.get("den", [[1]]))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad rational function {obj!r}: {exc}") from exc
    return RatFunc(num, den)


def decode_tpoly(field, obj):
    return TPoly(field, [decode_ratfunc(field, c) for c in obj])


def decode_bipoly(field, obj):
    try:
        return BiPoly.from_terms(
            field, [(int(i), int(j), decode_element(field, c))
                    for i, j, c in obj])
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad bivariate polynomial {obj!r}: {exc}") from exc


def encode_bloch(b, embedding_index=0):
    from .dilognum import bloch_wigner
    from .numfield import embed_complex
    terms = []
    for point, coeff in b.items():
        if point is INF:
            terms.append({"point": "inf", "coeff": rat_to_str(coeff)})
        else:
            try:
                terms.append({"point": encode_element(point),
                              "coeff": rat_to_str(coeff)})
            except AttributeError:
                terms.append({"point": repr(point),
                              "coeff": rat_to_str(coeff)})
    return terms
