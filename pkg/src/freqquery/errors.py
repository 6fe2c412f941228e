"""Exception hierarchy shared by every engine module."""


class FreqQueryError(Exception):
    """Base class for all errors raised by :mod:`freqquery`."""


class MalformedInputError(FreqQueryError, ValueError):
    """Input does not describe a valid object (bad index, bad length, bad value)."""


class UnknownItemsetError(FreqQueryError, KeyError):
    """An itemset was looked up in a family that does not contain it."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class PreconditionError(FreqQueryError):
    """A structural precondition failed, e.g. the family is not antimonotonic."""


class ResourceLimitError(FreqQueryError):
    """The sample space 2^K is larger than the configured limit."""


class InconsistentError(FreqQueryError):
    """The frequencies cannot be satisfied by any distribution."""


class ModeError(FreqQueryError, TypeError):
    """Exact and floating distributions were mixed in one operation."""
