"""Exception types shared across the simulator.

The CLI maps these onto exit codes: ConfigError -> 1, CapacityError -> 2,
validation failures -> 3.
"""


class ConfigError(ValueError):
    """A configuration value or experiment spec violates the documented schema."""


class CapacityError(RuntimeError):
    """The requested problem size exceeds what a backend can handle."""


class CutoffError(CapacityError):
    """The bosonic Fock cutoff is too small for the requested displacement."""


class DomainError(ValueError):
    """An operation was evaluated outside its mathematical domain."""
