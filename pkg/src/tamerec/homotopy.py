"""The unique lifted reciprocity map on the rational line, as an algorithm.

A lifted reciprocity map on a one-variable function field F is a Q-linear
map h: Lambda^3 F^x -> B_2(K0) that (1) is a homotopy between the total tame
symbol and zero in the weight-3 complexes, and (2) kills every wedge
containing a constant.  On K0(t) there is exactly one such map, and its
value on a wedge of distinct monic linear factors is forced:

    h((t-a) ^ (t-b) ^ (t-c)) = -{(c-a)/(b-a)}_2.

The derivation: with u = (t-a)/(b-a) one has 1-u = -(t-b)/(b-a), so modulo
constant-containing wedges (t-a)^(t-b)^(t-c) = delta_3({u}_2 (x) (t-c)),
and the homotopy property forces the value sum_v d_v({u}_2 (x) (t-c)),
whose only surviving place is v = c.

Sign conventions (reported as "sigma" everywhere):

    delta_2(h(w))   = SIGMA * sum_v d_v(w),      SIGMA = -1,
    h(delta_3(m))   = -SIGMA * sum_v d_v(m),

the two sides differing by the sign with which the tame symbol anticommutes
with the differential.
"""

from __future__ import annotations

from fractions import Fraction

from .chains import (BlochSum, ConstAtom, FieldTag, LinearAtom, WedgeSum,
                     delta, delta2)
from .errors import FieldMismatch
from .tame import SIGMA, total_tame_mixed, total_tame_wedge
from .zerotest import wedge2_zero_report


def h_rational(w):
    """Evaluate the unique lifted reciprocity map on Lambda^3 K0(t)^x.

    Input must be a degree-3 wedge over a rational line (Const/Linear
    atoms).  Terms containing a constant atom vanish; each surviving term is
    lambda * (t-a)^(t-b)^(t-c) in canonical root order."""
    if w.n != 3 or w.tag.kind != "line":
        raise FieldMismatch("h_rational consumes degree-3 line wedges")
    field = w.tag.field
    out = []
    for atoms, coeff in w.terms.items():
        if any(isinstance(a, ConstAtom) for a in atoms):
            continue
        if not all(isinstance(a, LinearAtom) for a in atoms):
            from .errors import NonSplitFactor
            raise NonSplitFactor(
                "a surviving wedge slot names a non-K0 point of the line; "
                "the input is outside the curated coefficient field")
        a, b, c = (atom.root for atom in atoms)
        value = (c - a) / (b - a)
        out.append((-coeff, value))
    return BlochSum.build(FieldTag.const(field), out)


class LiftedReciprocityMap:
    """An evaluatable map Lambda^3 F^x -> B_2(K0), tagged with its field."""

    __slots__ = ("tag", "evaluator", "provenance", "name")

    def __init__(self, tag, evaluator, provenance, name=""):
        self.tag = tag
        self.evaluator = evaluator
        self.provenance = provenance
        self.name = name or provenance

    def __call__(self, w):
        return self.evaluator(w)

    def __repr__(self):
        return f"LiftedReciprocityMap({self.name}, {self.provenance})"


def h_rational_map(field, var="t"):
    return LiftedReciprocityMap(FieldTag.line(field, var), h_rational,
                                "rational_base", f"H_{{K0({var})}}")


def zero_map(field, var="t"):
    tag = FieldTag.line(field, var)

    def ev(w):
        return BlochSum.zero(FieldTag.const(field))
    return LiftedReciprocityMap(tag, ev, "rational_base", "zero")


# ---------------------------------------------------------------------------
# B_2 equality through invariants
# ---------------------------------------------------------------------------


def bloch_invariants_match(b1, b2, tol=1e-9, embedding=0):
    """Compare Bloch sums by (delta_2 image, Bloch-Wigner value).

    Returns (ok, details).  The delta_2 comparison is exact over Q atoms and
    certified-numeric otherwise; the regulator comparison uses the chosen
    embedding of K0."""
    from .dilognum import l2_tilde
    diff = b1 - b2
    d2 = delta2(diff)
    d2_zero, method = wedge2_zero_report(d2)
    val = l2_tilde(diff, embedding)
    ok = d2_zero and abs(val) <= tol
    return ok, {"delta2_zero": bool(d2_zero), "delta2_method": method,
                "bloch_wigner_diff": val, "tol": tol}


# ---------------------------------------------------------------------------
# the defining predicate of Def. of lifted reciprocity maps
# ---------------------------------------------------------------------------


def is_lifted_reciprocity_map(h, wedge_samples=(), mixed_samples=(),
                              const_samples=(), tol=1e-9, embedding=0,
                              tame_oracle=None):
    """Check the two defining conditions of a lifted reciprocity map on
    sample inputs, and report failures.

    (a) delta_2(h(w)) = SIGMA * sum_v d_v(w) for wedge samples (exact over
        rational atoms, certified-numeric otherwise);
    (b) h(delta_3(m)) = -SIGMA * sum_v d_v(m) for mixed samples, compared in
        B_2 invariants (delta_2 image and Bloch-Wigner value);
    (c) h vanishes exactly on wedges containing a constant atom.

    For maps on residue fields of general points, pass tame_oracle =
    (wedge_total, mixed_total) computing the total tame symbol of samples
    over that field (e.g. through a rational parametrization)."""
    wedge_total = total_tame_wedge
    mixed_total = total_tame_mixed
    if tame_oracle is not None:
        wedge_total, mixed_total = tame_oracle
    failures = []
    n_a = n_b = n_c = 0

    for i, w in enumerate(wedge_samples):
        n_a += 1
        lhs = delta2(h(w))
        rhs = wedge_total(w).scale(SIGMA)
        ok, method = wedge2_zero_report(lhs - rhs)
        if not ok:
            failures.append(("a", i, f"delta_2 h != sigma*sum d_v [{method}]"))

    for i, m in enumerate(mixed_samples):
        n_b += 1
        lhs = h(delta(m))
        rhs = mixed_total(m).scale(-SIGMA)
        ok, details = bloch_invariants_match(lhs, rhs, tol, embedding)
        if not ok:
            failures.append(("b", i, f"h delta_3 mismatch: {details}"))

    for i, w in enumerate(const_samples):
        n_c += 1
        if not h(w).is_zero():
            failures.append(("c", i, "nonzero on a constant-containing wedge"))

    return {
        "passed": not failures,
        "checked": {"homotopy_wedge": n_a, "homotopy_mixed": n_b,
                    "constants": n_c},
        "failures": failures,
        "sigma": SIGMA,
        "tol": tol,
    }


# ---------------------------------------------------------------------------
# Moebius substitution (functoriality oracle for degree-1 maps)
# ---------------------------------------------------------------------------


def mobius_substitute(w, abcd):
    """Pull a line wedge back along t -> (alpha t + beta)/(gamma t + delta).

    The substitution is an automorphism of the projective line (nonzero
    determinant required), so the h-value must be invariant in regulator."""
    field = w.tag.field
    alpha, beta, gamma, dlt = (field.coerce(x) for x in abcd)
    det = alpha * dlt - beta * gamma
    if det.is_zero():
        raise ValueError("Moebius substitution needs nonzero determinant")
    from .chains import Factored, FactoredFunction, wedge_of_functions

    def subst_atom(atom):
        if isinstance(atom, ConstAtom):
            return Factored(atom.value)
        a = atom.root
        # (alpha t + beta)/(gamma t + delta) - a
        top_lin = alpha - a * gamma
        top_const = beta - a * dlt
        powers = []
        const = field.one()
        if top_lin.is_zero():
            const = const * top_const
        else:
            const = const * top_lin
            powers.append((LinearAtom(-top_const / top_lin), 1))
        if gamma.is_zero():
            const = const / dlt
        else:
            const = const / gamma
            powers.append((LinearAtom(-dlt / gamma), -1))
        return Factored(const, powers)

    out = WedgeSum.zero(w.tag, w.n)
    for atoms, coeff in w.terms.items():
        funcs = [subst_atom(a) for a in atoms]
        out = out + wedge_of_functions(w.tag, funcs, coeff)
    return out
