"""Exception and warning classes."""

import numpy as np


class QBError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(QBError, ValueError):
    pass


class SingularE(QBError, ValueError):
    """The descriptor matrix E is numerically singular."""


class SingularResolvent(QBError, np.linalg.LinAlgError):
    """``s E - A`` is singular, i.e. ``s`` is a generalized eigenvalue."""

    def __init__(self, s, index=None):
        self.s = s
        self.index = index
        msg = f"s E - A is singular at s = {s!r}"
        if index is not None:
            msg += f" (sample pair {index})"
        super().__init__(msg)


class PartitionError(QBError, ValueError):
    pass


class OddCount(PartitionError):
    pass


class MinimumCount(PartitionError):
    pass


class DuplicateFrequency(PartitionError):
    pass


class NotConjugateClosed(QBError, ValueError):
    pass


class EmptyPencil(QBError, ValueError):
    pass


class EmptyGrid(QBError, ValueError):
    pass


class PoleHit(QBError, ZeroDivisionError):
    pass


class DimensionCap(QBError, ValueError):
    pass


class StepSizeUnderflow(QBError, RuntimeError):
    pass


class IntegrationFailure(QBError, RuntimeError):
    pass


class GridMismatch(QBError, ValueError):
    pass


class InsufficientData(UserWarning):
    """Fewer kernel samples than unknowns in the least-squares problem."""


class OverflowWarning(RuntimeWarning):
    """An exponent argument was clamped to avoid floating-point overflow."""
