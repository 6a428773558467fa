"""Exception types shared across the package."""


class PolyadicError(Exception):
    """Base class for every domain error raised by this package."""


class UsageError(PolyadicError):
    """Bad configuration or arguments (CLI exit code 2)."""


class ArityMismatch(PolyadicError):
    pass


class NonMember(PolyadicError):
    def __init__(self, element, where=""):
        suffix = f" of {where}" if where else ""
        super().__init__(f"{element!r} is not a carrier member{suffix}")
        self.element = element


class NotAZero(PolyadicError):
    def __init__(self, element):
        super().__init__(f"{element!r} is not a polyadic zero of the structure")
        self.element = element


class ExhaustiveOnInfiniteCarrier(PolyadicError):
    """Exhaustive checks need a finite enumerated carrier."""


class QuerNotFound(PolyadicError):
    def __init__(self, element, bound):
        super().__init__(f"no querelement for {element!r} within the first {bound} elements")
        self.element = element
        self.bound = bound


class QuerNotUnique(PolyadicError):
    def __init__(self, element, solutions):
        super().__init__(f"querelement of {element!r} is not unique: {solutions!r}")
        self.element = element
        self.solutions = solutions


class QuerPlacementFailed(PolyadicError):
    """The defining-slot solution exists but fails at another placement."""

    def __init__(self, element, quer, placement):
        super().__init__(
            f"querelement candidate {quer!r} for {element!r} fails at placement {placement}"
        )
        self.element = element
        self.quer = quer
        self.placement = placement


class QuerFormulaFailsVerification(PolyadicError):
    def __init__(self, cls, detail=""):
        suffix = f": {detail}" if detail else ""
        super().__init__(f"quer candidate for class {cls!r} fails the quer equation{suffix}")
        self.cls = cls


class NotQuantized(PolyadicError):
    """The intact-element arity formula does not give an integer."""


class InvalidQuiver(PolyadicError):
    pass


class UnknownQuiver(PolyadicError):
    def __init__(self, name):
        super().__init__(f"unknown quiver {name!r}")
        self.name = name


class BoundExhausted(PolyadicError):
    """A bounded witness search ended without a definite answer."""

    def __init__(self, bound):
        super().__init__(f"witness search exhausted after {bound} candidates (verdict unknown)")
        self.bound = bound


class NoClosedArity(PolyadicError):
    def __init__(self, bound):
        super().__init__(f"no arity <= {bound} closes the residue class under products")
        self.bound = bound


class NotAHomomorphism(PolyadicError):
    def __init__(self, witness):
        super().__init__(f"mapping is not a homomorphism, witness {witness!r}")
        self.witness = witness
