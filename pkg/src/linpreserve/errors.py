"""Exception hierarchy.

Input problems derive from :class:`InputError`, numerical breakdowns from
:class:`NumericalError`. The CLI maps the two families to distinct exit codes.
"""


class LinPreserveError(Exception):
    pass


class InputError(LinPreserveError, ValueError):
    """The caller handed over something the operation cannot accept."""


class NumericalError(LinPreserveError, ArithmeticError):
    """An iteration or search ran out of budget or lost accuracy."""


class DimensionError(InputError):
    pass


class NonFiniteError(InputError):
    pass


class NotRankOneError(InputError):
    pass


class HermiticityError(InputError):
    pass


class NotSquareZeroError(InputError):
    pass


class SingularError(InputError):
    """A matrix or map that has to be invertible is not."""


class NoWitnessError(InputError):
    """No pair can realize the requested product (e.g. a bracket with nonzero trace)."""


class ParseError(InputError):
    pass


class NoPrincipalRootError(NumericalError):
    pass


class WitnessSearchError(NumericalError):
    def __init__(self, message, attempts):
        super().__init__(message)
        self.attempts = attempts


class IllConditionedError(NumericalError):
    pass


class NotCanonicalError(LinPreserveError):
    """The map does not have the expected canonical shape."""


class DegenerateMapError(NotCanonicalError):
    pass


class AmbiguousFormError(NotCanonicalError):
    def __init__(self, message, candidates):
        super().__init__(message)
        self.candidates = candidates
