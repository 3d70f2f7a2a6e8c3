"""Exception hierarchy.

``DomainError`` covers bad input data (CLI exit code 1), ``SizeLimitExceeded``
covers resource caps (exit code 2).  ``InternalInvariantViolation`` is always
a bug.
"""


class ToralMapsError(Exception):
    pass


class DomainError(ToralMapsError):
    pass


class SizeLimitExceeded(ToralMapsError):
    pass


class InternalInvariantViolation(ToralMapsError):
    pass


class ParseError(DomainError):
    pass


# group-core

class GroupAxiomError(DomainError):
    witness = None

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotClosed(GroupAxiomError):
    pass


class NoIdentity(GroupAxiomError):
    pass


class NotAssociative(GroupAxiomError):
    pass


class NoInverse(GroupAxiomError):
    pass


class NotAHomomorphism(GroupAxiomError):
    pass


class MixedSignature(DomainError):
    pass


# exact-linalg

class DimensionMismatch(DomainError):
    pass


# toral-group

class ToralGroupError(GroupAxiomError):
    pass


class ActionNotHomomorphism(ToralGroupError):
    pass


class ActionNotUnimodular(ToralGroupError):
    pass


class CocycleNotNormalized(ToralGroupError):
    pass


class CocycleIdentityFails(ToralGroupError):
    pass


class ParentMismatch(DomainError):
    pass


# cochain

class WrongCoefficients(DomainError):
    pass


class NotACocycle(GroupAxiomError):
    pass


# mapping-space

class SignatureMismatch(DomainError):
    pass


class ObstructionSolverFailure(InternalInvariantViolation):
    pass


# nerve-lab

class NotMonotone(DomainError):
    pass


class IncompatibleFaces(DomainError):
    pass


class InvalidPair(GroupAxiomError):
    pass
