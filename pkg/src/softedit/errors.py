"""Exception types raised by the softedit package."""


class SoftEditError(Exception):
    """Base class for all softedit errors."""


class UserInputError(SoftEditError):
    """Bad user-supplied data or parameters (CLI exit code 2)."""


class UnknownSymbol(UserInputError):
    """A character is not part of the alphabet.

    ``where`` is the position for bare strings, or (record, position)
    context when raised during file parsing.
    """

    def __init__(self, where, char):
        self.where = where
        self.char = char
        super().__init__(f"unknown symbol {char!r} at {where}")


class AlphabetMismatch(UserInputError):
    """Two encodings do not share the same alphabet size."""


class TooLong(UserInputError):
    """Sequence exceeds the brute-force enumeration guard."""


class EmptyBatch(UserInputError):
    """An operation requiring a nonempty batch received an empty one."""


class EmptyDataset(UserInputError):
    """An operation requiring a nonempty dataset received an empty one."""


class TooFewSequences(UserInputError):
    """Fewer sequences than clusters requested."""


class Unsatisfiable(UserInputError):
    """Rejection sampling could not satisfy the constraints."""


class ParseError(UserInputError):
    """Malformed input file."""

    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class DegenerateInput(UserInputError):
    """Statistic undefined for the given input (e.g. zero variance)."""


class LengthMismatch(UserInputError):
    """Paired label lists have different lengths."""


class CountMismatch(UserInputError):
    """Paired string lists have different counts."""
