"""Exception hierarchy.  Every error carries the data named in its message."""


class SpiralTowerError(Exception):
    """Base class for all errors raised by this package."""


# relations ---------------------------------------------------------------

class RelationError(SpiralTowerError, ValueError):
    pass


class NotSurjective(RelationError):
    def __init__(self, direction, vertex):
        self.direction = direction
        self.vertex = vertex
        super().__init__(f"vertex {vertex!r} has no {direction} edge")


class UnknownVertex(RelationError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"edge {pair!r} has an endpoint outside the vertex set")


class DuplicateVertex(RelationError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex {vertex!r} is listed twice")


class DomainMismatch(RelationError):
    pass


class NotSurjectiveMap(RelationError):
    def __init__(self, missed):
        self.missed = missed
        super().__init__(f"map misses codomain element {missed!r}")


# adding machine ----------------------------------------------------------

class InvalidModulus(SpiralTowerError, ValueError):
    def __init__(self, modulus):
        self.modulus = modulus
        super().__init__(f"modulus must be positive, got {modulus}")


class NotDivisor(SpiralTowerError, ValueError):
    def __init__(self, m, modulus):
        self.m = m
        self.modulus = modulus
        super().__init__(f"{m} does not divide {modulus}")


# spirals / tower ---------------------------------------------------------

class LevelTooLarge(SpiralTowerError, ValueError):
    def __init__(self, level, cap):
        self.level = level
        self.cap = cap
        super().__init__(f"level {level} exceeds the cap {cap}")


class BadLevels(SpiralTowerError, ValueError):
    pass


# lifting ------------------------------------------------------------------

class LiftError(SpiralTowerError):
    pass


class NotEquivariant(LiftError):
    pass


class SpiralImageNotAPiece(LiftError):
    def __init__(self, spiral_id):
        self.spiral_id = spiral_id
        super().__init__(f"spiral {spiral_id} does not map onto a single piece")


class PieceNotCovered(LiftError):
    def __init__(self, piece):
        self.piece = piece
        super().__init__(f"no spiral maps onto piece {piece}")


class ClimbTooSmall(LiftError):
    def __init__(self, piece, have, capacity):
        self.piece = piece
        self.have = have
        self.capacity = capacity
        super().__init__(
            f"piece {piece} is hit by {have} spirals but only {capacity} "
            "target spirals project onto it; increase k"
        )


class SourceTooShallow(LiftError):
    def __init__(self, required, spiral_id=None):
        self.required = required
        self.spiral_id = spiral_id
        where = "" if spiral_id is None else f"spiral {spiral_id}: "
        super().__init__(f"{where}source level must be at least {required}")


class InternalVerificationFailed(SpiralTowerError, AssertionError):
    pass


# rohlin group -------------------------------------------------------------

class PermutationError(SpiralTowerError, ValueError):
    pass


class NotInvariant(PermutationError):
    def __init__(self, level):
        self.level = level
        super().__init__(f"permutation does not preserve J^{level}")


class ImageOutsideBlock(PermutationError):
    pass


class NotInjective(PermutationError):
    pass


class UnsupportedVariantCombination(PermutationError):
    pass


class WrongStructure(PermutationError):
    pass
