"""Exception types raised across the package.

Every error carries a plain message; the CLI maps ``InputError`` subclasses to
exit code 2 and everything else that escapes a command to a failed report.
"""


class NilorbitError(Exception):
    """Base class for all package errors."""


# exact core
class NotUnipotent(NilorbitError):
    pass


class NotNilpotent(NilorbitError):
    pass


# filtrations
class InteriorDisagreement(NilorbitError):
    pass


class NotMHS(NilorbitError):
    pass


class UnknownDiagram(NilorbitError):
    pass


# cones
class FormNotPreserved(NilorbitError):
    pass


class RayOutside(NilorbitError):
    pass


class NotFaceClosed(NilorbitError):
    pass


# fans
class MissingWitness(NilorbitError):
    pass


class MixedRegime(NilorbitError):
    pass


# reductions
class WrongShape(NilorbitError):
    pass


class NotParabolic(NilorbitError):
    pass


class NotTypeI(NilorbitError):
    pass


class NotTypeIV(NilorbitError):
    pass


class RealityFailure(NilorbitError):
    pass


# toric charts
class NotARefinement(NilorbitError):
    pass


class NotReachableByStars(NilorbitError):
    pass


class CenterOutside(NilorbitError):
    pass


class MissingLimit(NilorbitError):
    pass


# scenario input
class InputError(NilorbitError):
    """Problems with user-supplied files; the CLI exits with status 2."""


class ParseError(InputError):
    pass


class SchemaError(InputError):
    pass


class InvariantError(InputError):
    pass


class UnknownCommand(InputError):
    pass


class NotNilpotentOrbit(NilorbitError):
    """A classification or reduction was asked for data that fails the orbit test."""
