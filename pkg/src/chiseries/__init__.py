"""Certified evaluation and irrationality certificates for factorial series."""

from .certify import (
    Certificate,
    CertificateFormatError,
    DenominatorRecord,
    RationalSeriesError,
    ScreeningInconclusive,
    VerificationOutcome,
    certificate_from_json,
    certificate_to_json,
    certify,
    factorial_inequality_check,
    screen_denominator,
    theorem_bound,
    verify,
    x_enclosure,
    x_partial,
)
from .evaluate import (
    Interval,
    RoundingUndecidable,
    ValueEnclosure,
    decimal,
    enclose_to_width,
    enclose_value,
    partial_sum,
    tail_bound,
)
from .oracle import (
    ExclusionReport,
    deep_tail_probe,
    exclude_rationals,
    geometric_tail_closed_form,
)
from .parser import SpecSyntaxError, parse_spec, render_spec
from .series import (
    ChiSpec,
    SeriesClass,
    SpecError,
    builtin_example,
    chi_at,
    classify,
    effective_bound,
    rational_shortcut,
    subtract_e,
)

__version__ = "0.1.0"
