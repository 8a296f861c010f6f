"""Exception hierarchy shared by every stage of the pipeline.

Each stage raises a specific subclass so that callers (notably the command
line front end) can map failures onto exit codes without string matching.
"""


class HyperwedgeError(Exception):
    """Base class for all package errors."""


class ConfigError(HyperwedgeError, ValueError):
    """Invalid user-facing configuration."""


class VerificationFailure(HyperwedgeError):
    """A consistency or identity check did not hold."""


class NumericFailure(HyperwedgeError):
    """Base class for failures of a numerical routine."""


# --- gas model and shock polar -------------------------------------------------

class NonPhysicalState(NumericFailure, ValueError):
    """Speed at or beyond the limit speed, so the density would be <= 0."""


class FluxTooLarge(NumericFailure, ValueError):
    """Incoming mass flux above the admissible maximum."""


class BadSlope(HyperwedgeError, ValueError):
    """Polar slope parameter k outside the admissible interval."""


class NoConvergence(NumericFailure):
    """An iterative solver hit its iteration budget."""


class EntropyViolation(NumericFailure):
    """Downstream speed does not satisfy u_in > q."""


class DegenerateCoefficient(NumericFailure):
    """A coefficient denominator such as c^2 - v^2 vanished."""


class NotOnPolar(NumericFailure, ValueError):
    """The state is not on the shock polar to the required tolerance."""


class BadState(NumericFailure, ValueError):
    """A state lies outside the region where a formula is valid."""


class SonicDegeneracy(NumericFailure):
    """Evaluation too close to the sonic point where a denominator vanishes."""


class SingularSystem(NumericFailure):
    """A linear system (oracle or Jacobian) is numerically singular."""


class ZeroGradient(NumericFailure):
    """The limit-solution gradient vanished where it must not."""


class TangentialSlope(NumericFailure):
    """A slope vector is tangent to the level sets of k (division by zero)."""


# --- wall profile --------------------------------------------------------------

class BlendNotConvex(HyperwedgeError, ValueError):
    """The blended wall profile fails the convexity/monotonicity requirement."""


# --- free boundary -------------------------------------------------------------

class StepFailure(NumericFailure):
    """The ODE integrator could not take a step."""


class QuadFailure(NumericFailure):
    """Adaptive quadrature failed to reach its tolerance."""


# --- elliptic solve ------------------------------------------------------------

class DegenerateWidth(NumericFailure, ValueError):
    """The strip between the free boundary and the polar is too thin."""


class SolverBreakdown(NumericFailure):
    """The sparse direct solver failed or produced non-finite values."""


class OutOfDomain(HyperwedgeError, ValueError):
    """Evaluation point outside the discretised domain."""


# --- diagnostics ---------------------------------------------------------------

class InsufficientData(HyperwedgeError, ValueError):
    """Too few samples to fit a convergence order."""


class ZeroDenominator(NumericFailure):
    """A ratio diagnostic has a vanishing denominator."""
