"""Exception types raised across the package.

Every error carries enough context to be rendered as a CLI message or an
HTTP error body without further lookup.
"""

from __future__ import annotations


class SemprojError(Exception):
    """Base class for all package errors."""

    code = "internal"


# --- ingest / store ---------------------------------------------------------


class EmptyDataset(SemprojError):
    code = "empty_dataset"


class UndecodableImage(SemprojError):
    code = "undecodable_image"

    def __init__(self, path: str, reason: str = ""):
        self.path = path
        self.reason = reason
        super().__init__(f"cannot decode image {path!r}" + (f": {reason}" if reason else ""))


class MissingField(SemprojError):
    code = "missing_field"

    def __init__(self, row: int, field: str):
        self.row = row
        self.field = field
        super().__init__(f"row {row}: required field {field!r} missing or empty")


class ParseError(SemprojError):
    code = "parse_error"

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class DuplicateKey(SemprojError):
    code = "duplicate_key"


class DuplicateSample(SemprojError):
    code = "duplicate_sample"


class CorruptCache(SemprojError):
    code = "corrupt_cache"

    def __init__(self, offset: int, reason: str = ""):
        self.offset = offset
        super().__init__(f"cache corrupt at line {offset}" + (f": {reason}" if reason else ""))


class VersionMismatch(SemprojError):
    code = "version_mismatch"


# --- gateway ----------------------------------------------------------------


class EndpointUnavailable(SemprojError):
    code = "endpoint_unavailable"


class GatewayTimeout(SemprojError):
    code = "timeout"


class OverLimit(SemprojError):
    code = "over_limit"


class DimMismatch(SemprojError):
    code = "dim_mismatch"

    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"embedding dim mismatch: expected {expected}, got {got}")


class InvalidLabel(SemprojError):
    code = "invalid_label"


class InvalidPrompt(SemprojError):
    code = "invalid_prompt"


class ParseFailure(SemprojError):
    code = "parse_failure"

    def __init__(self, slot: str, raw: str):
        self.slot = slot
        self.raw = raw
        super().__init__(f"no vocabulary match for slot {slot!r} in {raw!r}")


class PortInUse(SemprojError):
    code = "port_in_use"


# --- fusion -----------------------------------------------------------------


class IdSetMismatch(SemprojError):
    code = "id_set_mismatch"


class ZeroVector(SemprojError):
    code = "zero_vector"


# --- projection -------------------------------------------------------------


class NonFiniteInput(SemprojError):
    code = "non_finite_input"


class KTooLarge(SemprojError):
    code = "k_too_large"


class DegenerateCovariance(SemprojError):
    code = "degenerate_covariance"


class AllNegativeSpectrum(SemprojError):
    code = "all_negative_spectrum"


class CalibrationFailure(SemprojError):
    code = "calibration_failure"

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"bandwidth search did not bracket a solution for point {index}")


class NumericalBlowup(SemprojError):
    code = "numerical_blowup"

    def __init__(self, iteration: int, trace: list[float]):
        self.iteration = iteration
        self.trace = trace
        super().__init__(f"non-finite coordinate at iteration {iteration}")


class DegenerateReference(SemprojError):
    code = "degenerate_reference"


class UnknownMethod(SemprojError):
    code = "unknown_method"


class ExternalShapeMismatch(SemprojError):
    code = "external_shape_mismatch"


# --- quality ----------------------------------------------------------------


class KTooLargeForNormalizer(SemprojError):
    code = "k_too_large_for_normalizer"


class ZeroVariance(SemprojError):
    code = "zero_variance"


class SingleClass(SemprojError):
    code = "single_class"


# --- service ----------------------------------------------------------------


class AlphaOutOfRange(SemprojError):
    code = "alpha_out_of_range"


class NotAnImage(SemprojError):
    code = "not_an_image"


class UnknownResource(SemprojError):
    code = "unknown_resource"
