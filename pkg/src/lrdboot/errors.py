"""Exception hierarchy shared by all lrdboot modules."""


class LRDBootError(Exception):
    """Base class for every error raised by this package."""


class EmbeddingNotPSD(LRDBootError):
    """The circulant embedding of a covariance has a negative eigenvalue."""


class RankTooLarge(LRDBootError):
    """Hermite degree above the supported numerical range."""


class QuadratureFailure(LRDBootError):
    """A Gaussian integral could not be evaluated to the requested tolerance."""


class RankNotFound(LRDBootError):
    """No Hermite coefficient up to ``q_max`` exceeds the tolerance."""


class RegimeViolation(LRDBootError):
    """Parameters outside the long-memory regime ``m * D < 1``."""


class ConfigError(LRDBootError):
    """Invalid experiment configuration.

    Parameters
    ----------
    path : str
        Dotted location of the offending field, e.g. ``"l_rule.beta"``.
    reason : str
        Human readable explanation.
    """

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class DegenerateSample(LRDBootError):
    """A sample with zero spread was passed where studentization is needed."""
