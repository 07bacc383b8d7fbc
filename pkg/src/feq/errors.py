"""Exception hierarchy.

Every error carries a machine-readable ``code`` (the class name) and an
optional ``witness`` (indices, pairs, distances) so the CLI can serialize it.
"""


class FeqError(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    @property
    def code(self):
        return type(self).__name__

    def to_dict(self):
        return {"code": self.code, "message": self.message, "witness": self.witness}


# group-core
class GroupError(FeqError):
    pass


class InvalidTable(GroupError):
    pass


class NotLatinSquare(GroupError):
    pass


class NotAssociative(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class UnsupportedParams(GroupError):
    pass


class NotClosed(GroupError):
    pass


class MissingIdentity(GroupError):
    pass


class MissingInverse(GroupError):
    pass


# funcspace
class InvalidFunction(FeqError):
    pass


class NotMultiplicative(FeqError):
    pass


class VanishingValue(FeqError):
    pass


class BadIdentity(FeqError):
    pass


# linear algebra / chartab / spherical
class DegenerateSplitFailed(FeqError):
    pass


class NotCentralPair(FeqError):
    pass


class NormalizationFailure(FeqError):
    pass


# equations
class ConstructionResidualExceeded(FeqError):
    pass


class NonCommutingFamily(FeqError):
    pass


class GNotRecognized(FeqError):
    pass


class NotAWilsonSolution(FeqError):
    pass


class Unclassifiable(FeqError):
    pass


class ResidualExceeded(FeqError):
    pass


# stability
class NonUnitaryMu(FeqError):
    pass
