"""Error types shared across the toolkit.

Every numeric failure raises a subclass of NumericsError whose class name is
the error name the rest of the library (and the CLI exit-code contract)
reports. Precondition violations on shapes and domains use the same hierarchy
so callers can catch one base type.
"""

from __future__ import annotations


class NumericsError(Exception):
    """Base class for all toolkit errors."""


# shape / input contract violations
class ShapeMismatch(NumericsError):
    pass


class SizeMismatch(NumericsError):
    pass


class EmptyInput(NumericsError):
    pass


class NonFinite(NumericsError):
    pass


class DivisionByZero(NumericsError):
    pass


class ZeroNorm(NumericsError):
    pass


class RelativeUndefined(NumericsError):
    pass


# linear algebra
class Singular(NumericsError):
    pass


class NotSpd(NumericsError):
    pass


class ZeroDiagonal(NumericsError):
    pass


class NoConvergence(NumericsError):
    pass


class BadRank(NumericsError):
    pass


class RankDeficient(NumericsError):
    pass


# autodiff
class DomainError(NumericsError):
    pass


# root finding
class NoSignChange(NumericsError):
    pass


class MaxIterations(NumericsError):
    pass


class ZeroDerivative(NumericsError):
    pass


class FlatSecant(NumericsError):
    pass


class SingularJacobian(NumericsError):
    pass


class SingularApproximation(NumericsError):
    pass


# interpolation
class DuplicateKnots(NumericsError):
    pass


class UnsortedKnots(NumericsError):
    pass


class TooFewPoints(NumericsError):
    pass


# quadrature
class BadPartition(NumericsError):
    pass


class OddPartition(NumericsError):
    pass


class BadOrder(NumericsError):
    pass


# spectral
class NotPowerOfTwo(NumericsError):
    pass


class BadCutoff(NumericsError):
    pass


class BadKeep(NumericsError):
    pass


class NoPeak(NumericsError):
    pass


# optimization
class SingularHessian(NumericsError):
    pass


class LineSearchFailure(NumericsError):
    pass


# dynamics
class NewtonFailure(NumericsError):
    pass


class Unstable(NumericsError):
    pass


# micro-ML
class BadArchitecture(NumericsError):
    pass


class TooSmallBatch(NumericsError):
    pass


# serialization
class MalformedCsv(NumericsError):
    pass


class MalformedPgm(NumericsError):
    pass
