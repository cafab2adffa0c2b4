"""Exception types raised across the package.

The CLI reports ``type(err).__name__`` verbatim, so class names are part of
the external interface.
"""


class AlgebraError(Exception):
    """Base class for every domain error raised by evenclifford."""


class NonUnit(AlgebraError):
    pass


class NoCanonicalHom(AlgebraError):
    pass


class SingularMatrix(AlgebraError):
    pass


class InfiniteRing(AlgebraError):
    pass


class NotASimilarity(AlgebraError):
    pass


class NotAnAlgebraIso(AlgebraError):
    pass


class SquareRootUnavailable(AlgebraError):
    pass


class NotAField(AlgebraError):
    pass


class FieldTooLarge(AlgebraError):
    pass


class NotSpecialized(AlgebraError):
    pass


class NotSemiregular(AlgebraError):
    pass


class DescriptorError(AlgebraError, ValueError):
    """Malformed ring descriptor or element literal."""
