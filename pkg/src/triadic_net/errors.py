"""Exception hierarchy shared by all modules."""


class TriadicNetError(Exception):
    pass


# graph-core
class UnknownNode(TriadicNetError):
    pass


class SelfLoop(TriadicNetError):
    pass


class DuplicateLink(TriadicNetError):
    pass


LinkAlreadyPresent = DuplicateLink


class TimeOutOfRange(TriadicNetError):
    pass


# sim-engine
class InvalidParams(TriadicNetError, ValueError):
    pass


class RunComplete(TriadicNetError):
    pass


# measures
class EmptyWindow(TriadicNetError):
    pass


class DegenerateSupport(TriadicNetError):
    pass


class ZeroVariance(TriadicNetError):
    pass


class EmptyClass(TriadicNetError):
    pass


# io
class MalformedLine(TriadicNetError):
    def __init__(self, lineno, line, reason=""):
        self.lineno = lineno
        self.line = line
        msg = f"line {lineno}: {line!r}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class NonMonotoneTime(MalformedLine):
    pass


class EmptyAfterFilter(TriadicNetError):
    pass
