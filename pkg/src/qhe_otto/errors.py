"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class OttoError(Exception):
    """Base class for every error raised by qhe_otto."""


class DegenerateGenerator(OttoError, ValueError):
    """Generator has zero magnitude, so no eigenbasis is preferred."""


class NotNormalized(OttoError, ValueError):
    pass


class InvalidStepCount(OttoError, ValueError):
    pass


class NonFiniteDrive(OttoError, ValueError):
    pass


class ToleranceNotReached(OttoError, RuntimeError):
    pass


class GapTooLarge(OttoError, ValueError):
    """The avoided-crossing gap x exceeds the compressed energy ratio*eps1."""


class RadicandNegative(OttoError, ValueError):
    """Invariant coefficients would be complex somewhere on [0, tau]."""

    def __init__(self, t: float, radicand: float):
        self.t = float(t)
        self.radicand = float(radicand)
        super().__init__(
            f"invariant radicand A^2 - zdot^2/(4X^2) - z^2 = {self.radicand:.6g} < 0 "
            f"at t = {self.t:.6g}"
        )


class UnphysicalFidelity(OttoError, ValueError):
    """A required stroke fidelity lies outside [0, 1]."""


class Inconsistent(OttoError, ValueError):
    """Heats and work do not satisfy W = Q1 + Q2, or the sign pattern is unphysical."""


class ConfigParse(OttoError, ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
