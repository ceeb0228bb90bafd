"""Exception hierarchy shared across the package.

Every error carries a distinct process exit code so the CLI can map
failures to stable, scriptable statuses.
"""


class TensorsplitError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigInvalid(TensorsplitError):
    exit_code = 2


class InclusionViolated(TensorsplitError):
    """Embedding constant does not exist on the inspected index set."""

    exit_code = 3


class OracleUnavailable(TensorsplitError):
    """An infinite sum was requested from a model that cannot certify it."""

    exit_code = 4


class NormDegenerate(TensorsplitError):
    """The redundant-splitting seminorm is not a norm for these weights.

    The witness is the constant function 1, whose seminorm collapses to
    zero when the inverse weights are not summable.
    """

    exit_code = 5

    def __init__(self, message="inverse weights not summable", unit_seminorm=0.0):
        super().__init__(message)
        self.unit_seminorm = unit_seminorm


class NotCompact(TensorsplitError):
    """The threshold index set cannot be certified finite."""

    exit_code = 6


class EnumerationCap(TensorsplitError):
    exit_code = 7


class OrderOutOfRange(TensorsplitError):
    exit_code = 8


class NormInfinite(TensorsplitError):
    """A decomposition component falls outside the weighted space."""

    exit_code = 9


class DegenerateDenominator(TensorsplitError):
    exit_code = 10


class GammaL1Violated(TensorsplitError):
    exit_code = 11


class QTildeOutOfRange(TensorsplitError):
    exit_code = 12


class TailUnavailable(TensorsplitError):
    exit_code = 13


class KernelAsymmetric(TensorsplitError):
    exit_code = 14


class SolveFailed(TensorsplitError):
    exit_code = 15


class NoCertificate(TensorsplitError):
    """Equivalence conditions could not be certified (not a disproof)."""

    exit_code = 16
