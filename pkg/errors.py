"""Exception hierarchy shared by every module."""

from typing import Optional

import numpy as np
import numpy.typing as npt


class EnlargementError(Exception):
    """Base class for all toolkit errors."""


class InputError(EnlargementError, ValueError):
    """Malformed arguments or inconsistent dimensions."""


class DocumentError(InputError):
    """A JSON document failed to parse or validate."""

    def __init__(self, message: str, location: str = "") -> None:
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class RankError(InputError):
    """Functionals or vectors that were required to be independent are not."""


class SpaceMismatchError(InputError):
    """Two objects live over different normed spaces."""


class PreconditionError(EnlargementError):
    """A stated precondition does not hold; may carry a witness vector."""

    def __init__(
        self,
        message: str,
        witness: Optional[npt.NDArray[np.float64]] = None,
    ) -> None:
        self.witness = witness
        super().__init__(message)


class HypothesisError(PreconditionError):
    """The hypothesis of the construction being applied fails."""


class UnsupportedRepresentationError(EnlargementError):
    """The operation is not available for this body representation or dimension."""


class SolverError(EnlargementError):
    """The LP backend failed in a way that is neither infeasible nor unbounded."""
