"""Exception types shared across the package."""


class SizeError(ValueError):
    """An enumeration guard was exceeded or a size argument is out of range."""


class OrderError(ValueError):
    """Two partitions are not comparable in the direction an operation needs."""


class NumericalError(ArithmeticError):
    """A numerical routine failed to converge."""
