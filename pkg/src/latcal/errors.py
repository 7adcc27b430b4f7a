"""Exception hierarchy shared by every latcal module."""


class LatticeError(Exception):
    """Base class for all latcal errors."""


class CycleError(LatticeError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        path = " < ".join(self.cycle + self.cycle[:1])
        super().__init__(f"cover relation contains a cycle: {path}")


class DuplicateElementError(LatticeError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"duplicate element identifier {element!r}")


class UnknownElementError(LatticeError, KeyError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"unknown element {element!r}")

    def __str__(self):
        return self.args[0]


class EmptyPosetError(LatticeError):
    pass


class NotALatticeError(LatticeError):
    pass


class NotComparableError(LatticeError):
    pass


class SizeLimitError(LatticeError):
    def __init__(self, what, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(f"{what}: {size} exceeds the limit of {limit}")


class NotDistributiveError(LatticeError):
    pass


class MissingSeedError(LatticeError):
    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__("seed does not cover join-irreducible(s): " + ", ".join(self.missing))


class LatticeMismatchError(LatticeError):
    pass


class UndefinedContextError(LatticeError):
    pass


class DivisionByZeroError(LatticeError, ZeroDivisionError):
    pass


class UnknownDemoError(LatticeError):
    pass


class ParseError(LatticeError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class InvalidSeedError(LatticeError):
    pass
