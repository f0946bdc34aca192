"""Custom exceptions used within the package.

Copyright 2024 Blue Brain Project / EPFL

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""


class QilabError(Exception):
    """Base class of every error raised by the package."""


class NonPositiveDefinite(QilabError):
    """Exception to be raised when a covariance violates the uncertainty principle."""


class DegenerateForm(QilabError):
    """Exception to be raised when a two-mode standard form has (a+b)^2 <= 4c^2."""


class StandardFormUnavailable(QilabError):
    """Exception to be raised when a covariance cannot be cast to a supported block form."""


class NegativeEnergy(QilabError):
    """Exception to be raised when a mean photon number is negative."""


class BadModeIndex(QilabError):
    """Exception to be raised when a mode index is outside the state."""


class CutoffOverflow(QilabError):
    """Exception to be raised when the Fock truncation loses more mass than tolerated."""


class SingularSum(QilabError):
    """Exception to be raised when V0 + V1 is not invertible."""


class OutOfRange(QilabError):
    """Exception to be raised when a scalar parameter is outside its domain."""


class NoisyDerivative(QilabError):
    """Exception to be raised when the Richardson check of a finite difference fails."""


class RadiusViolation(QilabError):
    """Exception to be raised when a generating function is evaluated outside its radius."""


class QuadratureNonConverged(QilabError):
    """Exception to be raised when quadrature refinement shifts the result."""


class NoConvergence(QilabError):
    """Exception to be raised when an iterative solver exhausts its iterations."""


class TruncationTooSmall(QilabError):
    """Exception to be raised when a solution keeps mass at the truncation index."""


class ConstraintVacuous(QilabError):
    """Exception to be raised when the covertness constraint admits every PMF."""


class ConvergenceConditionViolated(QilabError):
    """Exception to be raised when the floor's series argument leaves its convergence region."""


class BracketFailure(QilabError):
    """Exception to be raised when a root bracket does not straddle the root."""


class GainAtUnity(QilabError):
    """Exception to be raised when a gain quantity diverges at G = 1."""


class NoCrossing(QilabError):
    """Exception to be raised when two curves never cross in the search range."""


class ClosedFormMismatch(QilabError):
    """Exception to be raised when two constructions of the same state disagree."""


class DegenerateVariances(QilabError):
    """Exception to be raised when both hypotheses have zero variance and distinct means."""


class ConfigError(QilabError):
    """Exception to be raised when a sweep configuration is missing or invalid."""


class IoError(QilabError):
    """Exception to be raised when reading or writing a file fails."""
