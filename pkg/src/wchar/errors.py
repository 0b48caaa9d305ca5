"""Exception hierarchy with stable machine-readable codes."""

from __future__ import annotations


class WCharError(Exception):
    """Base class; ``code`` is the stable identifier surfaced by the CLI."""

    code = "error"

    def __init__(self, detail: str = "") -> None:
        super().__init__(detail)
        self.detail = detail


class InvalidPyramid(WCharError):
    code = "invalid_pyramid"


class HeightTooSmall(WCharError):
    code = "height_too_small"


class ShapeMismatch(WCharError):
    code = "shape_mismatch"


class LengthMismatch(WCharError):
    code = "length_mismatch"


class NotAPermutation(WCharError):
    code = "not_permutation"


class NotStandard(WCharError):
    code = "not_standard"


class NotColumnStrict(WCharError):
    code = "not_column_strict"


class NotDominant(WCharError):
    code = "not_dominant"


class RangeRequired(WCharError):
    code = "range_required"


class IntegralOnly(WCharError):
    code = "integral_only"


class SizeLimit(WCharError):
    code = "size_limit"


class BudgetExceeded(WCharError):
    code = "budget_exceeded"


class DegreeTooSmall(WCharError):
    code = "degree_too_small"


class NormalizationError(WCharError):
    """A module failed its highest-weight normalization contract."""

    code = "normalization_failed"


class UnsupportedHeight(WCharError):
    code = "unsupported_height"


class ShiftMismatch(WCharError):
    code = "shift_mismatch"


class NoGenerator(WCharError):
    code = "no_generator"


class ConsistencyError(WCharError):
    """An internal cross-check of the matrix engine failed."""

    code = "consistency_failed"
