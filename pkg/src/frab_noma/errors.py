"""Exception types shared across the package."""


class InvalidConfigError(ValueError):
    """A scenario parameter violates one of the documented invariants."""


class InvalidInputError(ValueError):
    """An operation received an argument outside its supported domain."""


class InsufficientDataError(ValueError):
    """Not enough usable points for a statistical fit."""
