"""Exception types shared across the package."""


class GkpError(Exception):
    """Base class for every error raised by gkpbreak."""


class ModulusMismatch(GkpError, TypeError):
    """Arithmetic was attempted between residues of different moduli."""


class NotInvertible(GkpError, ArithmeticError):
    """A division needed the inverse of a non-unit."""

    def __init__(self, value: int, modulus: int):
        super().__init__(f"{value} is not invertible modulo {modulus}")
        self.value = value
        self.modulus = modulus


class NoRoot(GkpError, ArithmeticError):
    """The requested n-th root does not exist."""


class ExpansionTooLarge(GkpError):
    """A dense token expansion would exceed the configured entry cap."""


class MissingAssignment(GkpError, KeyError):
    """A token was evaluated without a value for one of its variables."""


class NotAMember(GkpError):
    """A node tried to derive the key of a group it does not belong to."""


class ShapeMismatch(GkpError):
    """Attack inputs do not have the group relationship the attack needs."""


class SameOwner(GkpError):
    """Collusion needs material from two distinct nodes."""


class OwnerInGroup(GkpError):
    """The leaked-key oracle cannot answer for groups containing its owner."""


class ConfigError(GkpError, ValueError):
    """A scenario configuration failed validation."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
