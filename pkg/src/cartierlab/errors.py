"""Exception hierarchy shared by all cartierlab modules."""


class CartierLabError(Exception):
    """Base class for every error raised by cartierlab."""


class RingMismatchError(CartierLabError, ValueError):
    pass


class InvalidMapError(CartierLabError, ValueError):
    """A module map does not send relations into relations."""


class InconsistentKappaError(CartierLabError, ValueError):
    """A kappa table is not compatible with the module relations.

    ``relation`` is the index of the offending relation vector and ``digit``
    the digit monomial ``x^d`` for which ``kappa(x^d * relation)`` is nonzero.
    """

    def __init__(self, message, relation=None, digit=None):
        super().__init__(message)
        self.relation = relation
        self.digit = digit


class NotEquivariantError(CartierLabError, ValueError):
    pass


class CapExceededError(CartierLabError, RuntimeError):
    """A chain that provably stabilizes did not do so within the cap."""


class UndecidedError(CartierLabError, RuntimeError):
    """A bounded search ended without a verdict."""


class NotFiniteError(CartierLabError, ValueError):
    pass


class ContractionError(CartierLabError, RuntimeError):
    pass


class SupportError(CartierLabError, ValueError):
    pass
