"""Exception types raised across the package."""


class ResidueForgeError(ValueError):
    """Base class for input validation failures."""


class NotPrime(ResidueForgeError):
    pass


class EvenPrime(ResidueForgeError):
    pass


class NotCoprime(ResidueForgeError):
    pass


class BadMultiplier(ResidueForgeError):
    pass


class WrongPrimeClass(ResidueForgeError):
    pass


class NotAResidue(ResidueForgeError):
    pass


class NotASquare(ResidueForgeError):
    pass


class ReducibleForm(ResidueForgeError):
    pass


class VanishingFactor(ResidueForgeError):
    pass


class BadDivisorClass(ResidueForgeError):
    pass


class BadMultiplierB(ResidueForgeError):
    pass


class TooLarge(ResidueForgeError):
    """Input exceeds a configured resource ceiling."""
