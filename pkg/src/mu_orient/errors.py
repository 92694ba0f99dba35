"""Exception hierarchy.

Everything raised on purpose by this package derives from MuOrientError so
callers (and the CLI) can tell contract violations apart from genuine bugs.
"""

from __future__ import annotations


class MuOrientError(Exception):
    """Base class for all library errors."""


class NotPLocal(MuOrientError):
    """A division would introduce the working prime into a denominator."""


class NotDivisible(MuOrientError):
    """Exact division by p requested on an element not divisible by p."""


class UnknownVariable(MuOrientError):
    """A substitution or action referenced a variable the ring lacks."""


class NotInvertible(MuOrientError):
    """Reciprocal of a series or ring element without a unit constant term."""


class NoConvergence(MuOrientError):
    """A fixed-point iteration failed to stabilise within its bound."""


class NotOrderP(MuOrientError):
    """An operator claimed to generate C_p does not satisfy gamma^p = 1."""


class PatternViolation(MuOrientError):
    """A computed decomposition landed outside the certified shape."""


class NotFixed(MuOrientError):
    """A vector expected to be gamma-invariant is not."""


class NoWitness(MuOrientError):
    """A linear system guaranteed to be solvable had no p-local solution."""


class CheckFailed(MuOrientError):
    """A verification routine found a counterexample; details in args."""


class AxiomViolation(MuOrientError):
    """A formal group law failed unit, commutativity or associativity."""


class TruncationTooSmall(MuOrientError):
    """The series truncation order is too small for the requested datum."""


class WindowTooSmall(MuOrientError):
    """A spectral sequence window cannot hold the requested computation."""


class EvennessViolation(MuOrientError):
    """The spectral sequence chart contradicts an evenness assertion."""


class NotStabilized(MuOrientError):
    """Two truncation stages disagreed; increase the cutoff."""


class DimensionMismatch(MuOrientError):
    """Two independently computed dimensions disagree."""
