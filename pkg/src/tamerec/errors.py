"""Exception taxonomy shared across the package."""


class TameRecError(Exception):
    """Base class for all package errors."""


# -- number field layer -------------------------------------------------

class NonSquarefreeMinpoly(TameRecError):
    pass


class InvalidTorsionOrder(TameRecError):
    pass


class ZeroElement(TameRecError):
    pass


class BadIndex(TameRecError):
    pass


# -- chain groups --------------------------------------------------------

class DuplicatePoints(TameRecError):
    pass


class DegreeOverflow(TameRecError):
    pass


class FieldMismatch(TameRecError):
    pass


# -- tame symbols / function fields ---------------------------------------

class NotAUnit(TameRecError):
    pass


class NonSplitFactor(TameRecError):
    """A support enumeration needed a root outside the coefficient field.

    Raised when a residue restriction or a parametrization pullback does not
    factor into linear pieces over K0.  The corpora are curated so this never
    fires on shipped inputs.
    """


# -- lifts and norm maps ---------------------------------------------------

class NotReduced(TameRecError):
    pass


class UnknownDescriptor(TameRecError):
    pass


# -- surface layer ----------------------------------------------------------

class NotSNC(TameRecError):
    pass


class MissingParametrization(TameRecError):
    pass


class NonUnitRestriction(TameRecError):
    pass


class NotAGenerator(TameRecError):
    pass


# -- numeric layer -----------------------------------------------------------

class SingularOverlap(TameRecError):
    pass


class NoConvergence(TameRecError):
    pass


# -- CLI ----------------------------------------------------------------------

class SchemaError(TameRecError):
    pass


class ComputeError(TameRecError):
    pass
