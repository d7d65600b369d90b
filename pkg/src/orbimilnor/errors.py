"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can emit it
alongside the human message.
"""


class OrbimilnorError(Exception):
    code = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class InputError(OrbimilnorError):
    """Malformed user input (polynomial text, group text, map files)."""

    code = "input-error"


class ParseError(InputError):
    code = "parse-error"

    def __init__(self, message, position=None, text=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message, position=position, text=text)
        self.position = position


class ReducibleModulusError(InputError):
    code = "reducible-modulus"


class WeightError(OrbimilnorError):
    code = "weight-error"


class NotQuasihomogeneousError(WeightError):
    code = "not-quasihomogeneous"


class NonUniqueWeightsError(WeightError):
    code = "non-unique-weights"


class WeightMismatchError(WeightError):
    code = "weight-mismatch"


class InfiniteDimensionalError(OrbimilnorError):
    code = "infinite-dimensional"


class HessianError(OrbimilnorError):
    code = "hessian-reduces-to-zero"


class GroupError(OrbimilnorError):
    code = "group-error"


class NotASymmetryError(GroupError):
    code = "not-a-symmetry"


class InfiniteGroupError(GroupError):
    code = "infinite-group"


class NotInSLError(GroupError):
    code = "not-in-sl"


class DegenerateSectorError(OrbimilnorError):
    code = "restricted-polynomial-degenerate"


class GammaNotDivisibleError(OrbimilnorError):
    code = "gamma-not-divisible"


class NotWellBehavedError(OrbimilnorError):
    code = "not-well-behaved"


class PreconditionError(OrbimilnorError):
    code = "precondition-failed"


class SectorImageMismatchError(OrbimilnorError):
    code = "sector-image-mismatch"


class SearchInconclusiveError(OrbimilnorError):
    code = "search-inconclusive"


class UnsolvableSystemError(OrbimilnorError):
    """Constraint system outside what the binomial solver handles."""

    code = "not-binomial-solvable"


class BasisMismatchError(OrbimilnorError):
    code = "basis-mismatch"
