"""Exception hierarchy shared by every module."""


class SCGError(Exception):
    """Base class for library errors."""


class DimensionCap(SCGError):
    pass


class BoxTooLarge(SCGError):
    pass


class EmptySet(SCGError):
    """The lattice set S has no points."""


class NotIntegral(SCGError):
    pass


class NotValid(SCGError):
    """The inequality is violated somewhere on P (beta below the max)."""


class NotSupporting(SCGError):
    """The inequality is valid but slack (beta above the max)."""


class Unbounded(SCGError):
    pass


class PreconditionRatio(SCGError):
    """Tilting ratio does not exceed M; the multiplier reduction does not apply."""


class VerificationFailed(SCGError):
    pass


class ParseError(SCGError):
    def __init__(self, message, line=0, column=0):
        # line 0 marks problems with command arguments rather than file text
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.line = line
        self.column = column
