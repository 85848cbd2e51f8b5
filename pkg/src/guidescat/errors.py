"""Exception hierarchy shared by all modules."""


class GuideScatError(Exception):
    """Base class for every error raised by guidescat."""


class InvalidArgument(GuideScatError, ValueError):
    pass


class DomainError(GuideScatError, ValueError):
    """Argument outside the domain where a function is defined (e.g. a singularity)."""


class ParityViolation(GuideScatError, ValueError):
    """A partial-wave pair with odd l + l' was requested; the guide does not couple them."""


class NoOpenChannel(GuideScatError, ValueError):
    pass


class ThresholdDegeneracy(GuideScatError, ValueError):
    """Total wavenumber sits exactly on a transverse threshold k = q_n."""


class UnsupportedGuide(GuideScatError, ValueError):
    pass


class OutsideGuide(GuideScatError, ValueError):
    pass


class PoleEncountered(GuideScatError, ArithmeticError):
    """A linear system or closed form hit a real-axis pole.

    Attributes
    ----------
    block : str or None
        Parity block ("even" / "odd") of the singular system, if any.
    ls : tuple of int
        Partial waves that entered the singular block.
    """

    def __init__(self, message, block=None, ls=()):
        super().__init__(message)
        self.block = block
        self.ls = tuple(ls)


class NotBracketed(GuideScatError, ValueError):
    pass


class ExtrapolationError(GuideScatError, ValueError):
    pass


class NoLimitError(GuideScatError, ArithmeticError):
    pass


class AccuracyError(GuideScatError, ArithmeticError):
    pass


class ConfigError(GuideScatError, ValueError):
    pass
