"""Exception types shared across harperlab modules."""


class HarperlabError(Exception):
    """Base class for all harperlab computation errors."""


class PrecisionExhausted(HarperlabError):
    """A partial quotient (or big-integer convergent) cannot be certified
    at the available precision, or the expansion terminated (rational input)."""


class CapExceeded(HarperlabError):
    """A denominator grew past the configured size cap."""


class SingularPoint(HarperlabError):
    """An evaluation point landed inside the guard radius of a log singularity."""


class SingularOrbitPoint(HarperlabError):
    """An orbit point landed on (or too close to) a zero of the sampling
    function c, so a cocycle step is not defined."""


class SingularModel(HarperlabError):
    """The operator is singular (c has zeros on the circle), but the requested
    computation needs a non-singular model."""


class InsufficientGrid(HarperlabError):
    """Not enough grid points on the requested side for a slope estimate."""


class OutOfDomain(HarperlabError):
    """A closed-form formula was requested outside its domain of validity."""


class InvalidCoupling(HarperlabError):
    """The coupling triple violates the model normalization."""


class AlphaRationalTheta(HarperlabError):
    """The phase failed the finite-horizon alpha-rationality screen."""
