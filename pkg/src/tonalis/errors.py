"""Exception types shared across the package."""


class TonalisError(Exception):
    """Base class for all analysis errors."""


class MalformedChord(TonalisError, ValueError):
    def __init__(self, token, line=None, column=None):
        self.token = token
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}, token {column}"
        super().__init__(f"malformed chord {token!r}{where}")


class EmptySequence(TonalisError, ValueError):
    def __init__(self, msg="chord sequence is empty"):
        super().__init__(msg)


class SequenceTooShort(TonalisError, ValueError):
    def __init__(self, length, window):
        self.length = length
        self.window = window
        super().__init__(f"sequence of {length} chords is shorter than window W={window}")


class UnmappableChord(TonalisError, ValueError):
    def __init__(self, chord, key, index=None):
        self.chord = chord
        self.key = key
        self.index = index
        at = f" (chord {index})" if index is not None else ""
        super().__init__(f"no numeral for {chord} in key {key}{at}")


class NoParse(TonalisError):
    """Raised when a numeral sequence is not in the grammar's language.

    ``prefix_length`` is the longest k such that the first k terminals can
    still be extended to a sentence.
    """

    def __init__(self, prefix_length, length):
        self.prefix_length = prefix_length
        self.length = length
        super().__init__(
            f"no parse: viable prefix covers {prefix_length} of {length} terminals"
        )


class EmptyInput(TonalisError, ValueError):
    def __init__(self):
        super().__init__("cannot parse an empty terminal sequence")
