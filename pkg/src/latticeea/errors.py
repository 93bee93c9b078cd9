"""Exception hierarchy shared by every module."""


class EAError(Exception):
    pass


class StructuralError(EAError, ValueError):
    """Malformed input: entries outside the carrier, bad labels, contradictory triples."""


class AxiomError(EAError, ValueError):
    """A table was used as an effect algebra but fails one of the axioms."""

    def __init__(self, report):
        self.report = report
        first = report.violations[0] if report.violations else None
        super().__init__(f"not an effect algebra: {first}")


class NotALatticeError(EAError, ValueError):
    pass


class PreconditionError(EAError, ValueError):
    """An operation was called outside its documented domain."""


class CapExceeded(EAError, RuntimeError):
    def __init__(self, what: str, size: int, cap: int):
        self.what, self.size, self.cap = what, size, cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class Falsification(EAError, AssertionError):
    """A machine check of a theorem failed on a concrete instance.

    This is never expected; raising it means either a bug or a counterexample.
    """
