"""Exception hierarchy.

Errors split into three families so the CLI can map them onto exit codes:
bad input (2), size caps (3) and internal inconsistencies (4). The last one
is only raised when a computed identity that must hold does not, i.e. a bug.
"""


class OrderError(Exception):
    """Base class for all errors raised by ordcomplete."""


class InputError(OrderError, ValueError):
    """Malformed or inconsistent user data."""


class CycleError(InputError):
    """The reflexive-transitive closure of a relation is not antisymmetric."""


class DuplicateLabelError(InputError):
    pass


class UnknownElement(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class PosetMismatch(InputError):
    """A subset or cut was used with a poset it does not belong to."""


class NotACut(InputError):
    pass


class NotIncreasing(InputError):
    pass


class NotCompleteLattice(InputError):
    pass


class EmptySubset(InputError):
    pass


class NotSurjective(InputError):
    pass


class StencilUnderflow(InputError):
    """The grid has too few nodes for the requested derivative order."""


class SizeCapExceeded(OrderError):
    pass


class InternalInconsistency(OrderError, AssertionError):
    pass
