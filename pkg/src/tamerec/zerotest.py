"""Exact and certified-numeric zero tests in Lambda^k K0^x tensor Q.

Degree 1 is exactly decidable over any K0: clear the rational coefficients
to integers and test whether the resulting product is a root of unity.

Degree 2 is exactly decidable when every atom is rational, by expanding in
the prime basis of Q^x tensor Q and antisymmetrizing.  Over a general K0 a
log-pairing across all complex embeddings is used instead; it is one-sided
(a nonzero pairing certifies nonzero) and results are flagged "numeric".
"""

from __future__ import annotations

import math
from fractions import Fraction

import sympy as sp

from .chains import ConstAtom
from .numfield import embed_complex, is_root_of_unity

_PRIME_CACHE = {}


def _prime_vector(q):
    """Exponent vector of a nonzero rational in the prime basis (sign dropped)."""
    q = Fraction(q)
    key = (q.numerator, q.denominator)
    if key in _PRIME_CACHE:
        return _PRIME_CACHE[key]
    vec = {}
    for n, s in ((abs(q.numerator), 1), (q.denominator, -1)):
        if n > 1:
            for p, e in sp.factorint(n).items():
                vec[p] = vec.get(p, 0) + s * e
    vec = {p: e for p, e in vec.items() if e}
    _PRIME_CACHE[key] = vec
    return vec


def wedge1_is_zero(w):
    """Exact zero test in K0^x tensor Q for a degree-1 wedge sum."""
    if w.is_zero():
        return True
    denom_lcm = 1
    for _, c in w.terms.items():
        denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm,
                                                          c.denominator)
    field = w.tag.field
    prod = field.one()
    for (atom,), c in w.terms.items():
        e = int(c * denom_lcm)
        prod = prod * atom.value ** e
    return is_root_of_unity(prod)


def wedge2_zero_report(w, tol=1e-9):
    """Zero test in Lambda^2 K0^x tensor Q.

    Returns (is_zero, method) with method "exact" when every atom is a
    rational number, else "numeric"."""
    if w.is_zero():
        return True, "exact"
    atoms = {a for t in w.terms for a in t}
    if all(isinstance(a, ConstAtom) and a.value.is_rational() for a in atoms):
        coords = {}
        for (a1, a2), c in w.terms.items():
            v1 = _prime_vector(a1.value.as_fraction())
            v2 = _prime_vector(a2.value.as_fraction())
            for p, e1 in v1.items():
                for q, e2 in v2.items():
                    if p == q:
                        continue
                    key = (p, q) if p < q else (q, p)
                    s = 1 if p < q else -1
                    coords[key] = coords.get(key, Fraction(0)) + s * c * e1 * e2
        return all(v == 0 for v in coords.values()), "exact"
    return _wedge2_numeric(w, tol), "numeric"


def _wedge2_numeric(w, tol):
    field = w.tag.field
    d = field.degree
    logs = {}

    def logvec(a):
        if a not in logs:
            logs[a] = [math.log(abs(embed_complex(a.value, i)))
                       for i in range(d)]
        return logs[a]

    size = 0.0
    pair = [[0.0] * d for _ in range(d)]
    for (a1, a2), c in w.terms.items():
        v1, v2 = logvec(a1), logvec(a2)
        size += abs(c) * max(1.0, max(map(abs, v1))) * max(1.0,
                                                           max(map(abs, v2)))
        for i in range(d):
            for j in range(d):
                pair[i][j] += float(c) * (v1[i] * v2[j] - v2[i] * v1[j])
    norm = max(abs(pair[i][j]) for i in range(d) for j in range(d))
    return norm <= tol * max(1.0, size)
