"""Exception types raised across the package."""


class QDomainError(Exception):
    """Base class for every error raised by qdomain."""


class Violation:
    """One failed axiom together with the elements that witness it."""

    __slots__ = ("kind", "witness")

    def __init__(self, kind, witness=()):
        self.kind = kind
        self.witness = tuple(witness)

    def __repr__(self):
        return f"{self.kind}{self.witness!r}"

    def __eq__(self, other):
        return isinstance(other, Violation) and (self.kind, self.witness) == (other.kind, other.witness)

    def to_json(self):
        return {"kind": self.kind, "witness": [str(w) for w in self.witness]}


class ValidationError(QDomainError):
    """A candidate structure failed validation.

    ``violations`` lists every detected failure; the first one is the
    witness reported in the message.
    """

    def __init__(self, violations, what="structure"):
        self.violations = list(violations)
        self.what = what
        head = self.violations[0] if self.violations else "unknown"
        more = f" (+{len(self.violations) - 1} more)" if len(self.violations) > 1 else ""
        super().__init__(f"invalid {what}: {head}{more}")

    @property
    def kinds(self):
        return {v.kind for v in self.violations}


class ParseError(QDomainError):
    """A document could not be parsed into the expected shape."""


class ForeignElement(QDomainError):
    """An element does not belong to the lattice or category it was used with."""


class TypeMismatch(QDomainError):
    """Arrows, distributors or functors were combined with incompatible types."""


class NotDivisible(QDomainError):
    pass


class NotOver2(QDomainError):
    pass


class EnumerationCapExceeded(QDomainError):
    def __init__(self, cap, what="presheaves"):
        self.cap = cap
        super().__init__(f"enumeration of {what} exceeded cap {cap}")


class SubsetSearchCapExceeded(QDomainError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"subset search exceeded cap of {cap} candidates")


class InternalInconsistency(QDomainError):
    """Two characterizations that must agree disagreed: an implementation bug."""


class PreconditionFailed(QDomainError):
    pass


class MismatchFound(QDomainError):
    """The enriched engine and the classical poset oracle disagree."""

    def __init__(self, message, details=None):
        self.details = details or {}
        super().__init__(message)
