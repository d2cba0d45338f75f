"""Exception types shared across the package."""


class Error(Exception):
    """Base class for all gtcert errors."""


class NotSquareError(Error):
    """Input array is not a square 2-d matrix."""


class HermiticityViolation(Error):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class UnitarityViolation(Error):
    """Matrix fails the U*U = I check at construction tolerance."""


class DimensionMismatch(Error):
    """Operands have incompatible dimensions."""


class ConvergenceFailure(Error):
    """The eigensolver did not converge."""


class OverflowRisk(Error):
    """An exponential would overflow double precision."""


class NonFiniteInput(Error):
    """Input contains NaN or infinity."""


class ArityMismatch(Error):
    """A fixed-arity function was applied to the wrong dimension."""


class MatrixParseError(Error):
    """A matrix file is malformed."""


class CampaignTrialError(Error):
    """A campaign trial raised; carries the trial seed for replay."""

    def __init__(self, trial_index: int, trial_seed: int, cause: BaseException):
        self.trial_index = trial_index
        self.trial_seed = trial_seed
        self.cause = cause
        super().__init__(
            f"trial {trial_index} (trial_seed={trial_seed}) failed: {cause!r}"
        )
