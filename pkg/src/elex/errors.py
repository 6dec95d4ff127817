"""Exception types shared across the toolkit.

Exit-code mapping used by the CLI: UsageError -> 1, FormatError -> 2,
NumericalError -> 3.
"""


class ElexError(Exception):
    """Base class for all toolkit errors."""


class UsageError(ElexError):
    """Invalid invocation: bad flag values, impossible parameter ranges."""


class FormatError(ElexError):
    """Malformed input data (lexicon, embedding file, corpus row).

    Carries an optional source location so messages can point at the
    offending line.
    """

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc = f"{path}: "
        if line is not None:
            loc += f"line {line}: "
        super().__init__(loc + message)
        self.path = path
        self.line = line


class NumericalError(ElexError):
    """Numerical failure: degenerate input to a fit, invalid statistics."""


class MergeConflictError(ElexError):
    """Expansion words collide with base lexicon words."""

    def __init__(self, words):
        self.words = sorted(words)
        shown = ", ".join(self.words[:10])
        more = "" if len(self.words) <= 10 else f" (+{len(self.words) - 10} more)"
        super().__init__(f"expansion collides with base lexicon on: {shown}{more}")
