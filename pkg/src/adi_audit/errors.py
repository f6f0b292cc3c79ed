"""Exception types shared across the toolkit."""


class AdiAuditError(Exception):
    """Base class; the CLI maps these to exit code 1."""

    code = "error"


class FormatError(AdiAuditError):
    code = "format_error"


class MappingError(AdiAuditError):
    code = "mapping_error"


class LabelError(AdiAuditError):
    code = "label_error"


class AlignmentError(AdiAuditError):
    code = "alignment_error"


class ValidationError(AdiAuditError, ValueError):
    code = "validation_error"


class ConsistencyError(AdiAuditError):
    code = "consistency_error"
