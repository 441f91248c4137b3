"""Exception hierarchy for the qlsid toolkit.

Analysis-level failures derive from :class:`QlsError`; malformed files and
CLI usage problems derive from :class:`ParseError`.  The CLI maps the former
to exit code 1 and the latter to exit code 2.
"""


class QlsError(Exception):
    """Base class for analysis-level failures."""


class ShapeMismatch(QlsError):
    """Operands have incompatible shapes."""


class NotDoubledUp(QlsError):
    """A matrix does not have the required doubled-up block symmetry."""


class NotHurwitz(QlsError):
    """A drift matrix has an eigenvalue with non-negative real part."""


class NonSemisimple(QlsError):
    """Eigenvector matrix numerically rank deficient; canonical form needs
    semisimple eigenvalues."""


class NotACovariance(QlsError):
    """Matrix violates the Gaussian covariance constraints."""


class NotSymplectic(QlsError):
    """Matrix fails the symplectic test."""


class NotMinimal(QlsError):
    """System fails the observability rank test."""


class NotPassive(QlsError):
    """System has active coupling or hamiltonian terms."""


class NotPure(QlsError):
    """Input covariance is not a pure Gaussian state."""


class VacuumInput(QlsError):
    """Operation requires a squeezed input (M != 0)."""


class PoleHit(QlsError):
    """Evaluation point coincides with a pole."""


class DegenerateSpectrum(QlsError):
    """Eigenvalues collide within tolerance where distinctness is required."""


class RealPole(QlsError):
    """Transfer function has a real pole; diagonal realization requires all
    poles to have non-zero imaginary part."""


class RepeatedPole(QlsError):
    """Transfer function has a repeated pole."""


class ResidueRankExceedsOne(QlsError):
    """A partial-fraction residue matrix is not numerically rank one."""


class SingularTransform(QlsError):
    """The realization transform is numerically singular."""


class NonPhysical(QlsError):
    """Constructed realization violates the physical-realizability
    conditions beyond tolerance."""


class NotGloballyMinimal(QlsError):
    """Power spectrum forces a hidden passive factor during reconstruction."""


class Inconsistent(QlsError):
    """Zero/pole bookkeeping admits no consistent assignment."""


class SingularInput(QlsError):
    """Entangled input correlations are singular (|N2| == |M2|)."""


class IllConditioned(QlsError):
    """Least-squares rational fit is numerically ill conditioned."""


class ChannelMismatch(QlsError):
    """Series product requires equal channel counts."""


class ParseError(Exception):
    """Malformed input file or CLI usage error (exit code 2)."""


class RangeError(ParseError):
    """Invalid numeric range in a CLI request."""
