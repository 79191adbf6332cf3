"""Exception types shared across the package.

The command line maps these onto exit codes: input validation problems
exit with 2, size-cap violations with 3, and solver failures with 4.
"""


class OpenBakerError(Exception):
    """Base class for all package-specific errors."""


class OutOfRange(OpenBakerError):
    """A numeric argument lies outside its admissible range."""


class Duplicate(OpenBakerError):
    """A symbol list contains repeated entries."""


class EmptySymbols(OpenBakerError):
    """A symbol list is empty."""


class DegenerateAlphabet(OpenBakerError):
    """The operation requires 1 < |symbols| < base."""


class SymbolNotInAlphabet(OpenBakerError):
    """A requested symbol is not part of the alphabet."""


class CapExceeded(OpenBakerError):
    """A size or cost guard was exceeded; override the cap to proceed."""


class Overflow(OpenBakerError):
    """Integer arguments exceed the exact-arithmetic range."""


class NonConvergence(OpenBakerError):
    """An iterative solver exhausted its budget before reaching tolerance."""


class HypothesisViolated(OpenBakerError):
    """Input does not satisfy the hypotheses of the checked inequality."""


class NotAssembled(OpenBakerError):
    """The operation needs a dense or trimmed matrix that is not present."""


class NotSmoothCutoff(OpenBakerError):
    """The operation requires equal smooth cutoffs on both sides."""


class DegenerateFit(OpenBakerError):
    """Fewer than two usable data points for a least-squares fit."""


class SolverFailure(OpenBakerError):
    """A dense eigenvalue solve failed its internal accuracy checks."""


class NearSingular(OpenBakerError):
    """The probed point is too close to the spectrum for a stable solve."""


# Exit codes used by the command line interface.
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_SOLVER = 4

_CAP_ERRORS = (CapExceeded, Overflow)
_SOLVER_ERRORS = (NonConvergence, SolverFailure, NearSingular)


def exit_code_for(exc):
    """Exit code for an exception raised during a CLI run."""
    if isinstance(exc, _CAP_ERRORS):
        return EXIT_CAP
    if isinstance(exc, _SOLVER_ERRORS):
        return EXIT_SOLVER
    if isinstance(exc, OpenBakerError):
        return EXIT_VALIDATION
    raise exc
