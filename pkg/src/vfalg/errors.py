"""Error taxonomy shared by all modules.

InputError covers malformed user data (bad documents, mismatched rings or
models); the CLI maps it to exit code 2.  Everything else signals a
mathematical failure or a broken contract and maps to exit code 1.
"""


class AlgebraError(Exception):
    """Base class for all package errors."""


class InputError(AlgebraError, ValueError):
    """Malformed input: bad ring data, unknown keys, mismatched models."""


class ModelMismatchError(InputError):
    """A class was combined with data living on a different space model."""


class ContractError(AlgebraError):
    """An operation was called outside its stated precondition."""


class ValidationError(AlgebraError):
    """A candidate formal group law failed an axiom; carries a witness."""


class InversionError(AlgebraError):
    """No unit leading term: the series is not invertible here."""


class DivergenceError(AlgebraError):
    """A substitution would produce an infinite constant-term sum."""


class NotARingError(AlgebraError):
    """Product of two Laurent series that are both unbounded below."""
