"""Exception hierarchy for lindyn."""


class LindynError(Exception):
    """Base class for every error raised by this package."""


class InvalidSystem(LindynError, ValueError):
    """A system, profile or vector description is malformed."""


class OutOfDomain(LindynError, IndexError):
    """A weight was requested outside the index domain of its profile."""


class UnboundedRatio(LindynError):
    """The (star) ratio sup is infinite; the input is not a measurable system.

    ``witness`` is a list of ``(index, ratio)`` pairs along which the ratio grows.
    """

    def __init__(self, message, witness=()):
        super().__init__(message)
        self.witness = list(witness)


class UndecidedError(LindynError):
    """A verdict needs a certificate that no built-in rule provides."""


class NotDissipative(LindynError):
    pass


class NotWandering(LindynError):
    pass


class NotGenerating(LindynError):
    pass


class ForwardOnly(LindynError):
    """An inverse iterate was requested on a forward-only (injective) system."""


class CannotApproximate(LindynError):
    pass


class SCRequired(LindynError):
    pass


class TailNotCertified(LindynError):
    pass


class RatioHypothesisViolated(LindynError):
    pass


class NotInvertibleSystem(LindynError):
    pass


class InvalidDigit(LindynError, ValueError):
    pass


class UnboundedStarConstant(LindynError):
    pass


class OpenProblem(LindynError):
    """The requested implication is an open problem; no verdict is given."""


class NotFoundWithinBound(LindynError):
    """A search (e.g. for a return time) ended without a hit."""


class FixedPointCoversB(LindynError):
    pass
