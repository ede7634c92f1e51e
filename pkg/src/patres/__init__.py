"""Aperiodic resonator patterns: point sets, tight-binding spectra, gap
labels, and boundary spectra."""

from .patterns import (
    ConsistencyError,
    DeloneCertificate,
    Kind,
    PatternError,
    PatternSpec,
    PointPattern,
    WindowError,
    check_consistency,
    delone_check,
    gamma,
    generate,
    label_period,
    shift_relabel,
    tau,
)

__version__ = "0.1.0"
