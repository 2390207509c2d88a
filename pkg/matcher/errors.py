"""
Error types for the distribution matcher
Each error carries the process exit code the CLI reports for it
"""


class CCDMError(Exception):
    """Base class for all matcher errors"""

    exit_code = 2


class SupportViolation(CCDMError, ValueError):
    """A distribution puts mass where the reference distribution has none"""


class ZeroProbability(CCDMError, ValueError):
    """A bound that needs a strictly positive distribution got a zero entry"""


class CompositionMismatch(CCDMError, ValueError):
    """A symbol sequence does not have the expected composition"""

    exit_code = 3


class IndexOutOfRange(CCDMError, IndexError):
    """A type-class index lies outside [0, |T|)"""


class LengthMismatch(CCDMError, ValueError):
    """An input block does not have length m"""


class NotACodeword(CCDMError, ValueError):
    """A type-class member that the encoder never produces"""

    exit_code = 3


class TooLarge(CCDMError, ValueError):
    """An enumeration would exceed the configured limit on m"""


class Exhausted(CCDMError):
    """The draw-without-replacement model has no symbols left"""


class DistributionFormatError(CCDMError, ValueError):
    """Malformed distribution text"""


class BlockFileFormatError(CCDMError, ValueError):
    """Malformed bit or symbol block file"""


class IoFailure(CCDMError, OSError):
    """Reading or writing a file failed"""

    exit_code = 1
