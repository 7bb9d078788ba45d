"""Error taxonomy shared by the whole package.

Three failure classes map onto the CLI exit codes: bad configuration or
inputs (2), insufficient tracked precision (3), and violated mathematical
contracts (4).
"""


class ConfigError(ValueError):
    """Malformed configuration, flags, or out-of-domain user input."""


class PrecisionError(ArithmeticError):
    """A computation needed more p-adic precision than an element guarantees."""


class ContractError(AssertionError):
    """An internal mathematical invariant failed; always a bug trap.

    The message names the violated invariant.
    """
