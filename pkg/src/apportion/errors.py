"""Exception types shared across the package."""


class ApportionError(Exception):
    """Base class for every error raised by this package."""


class InputError(ApportionError):
    """Malformed votes, shares, or configuration."""


class DimensionMismatchError(InputError):
    """Two inputs disagree on the number of parties."""


class InfeasibleHouseSizeError(ApportionError):
    """The house size cannot be reached by the method (too small for
    mandatory seats, or negative)."""


class CapExceededError(ApportionError):
    """A capped signpost table makes the requested house size unreachable,
    or a value lies beyond the last finite signpost."""


class NonpositiveQuotaError(ApportionError):
    """Quota methods need house_size + gamma > 0."""


class NegativeSeatError(ApportionError):
    """An extreme quota parameter produced a negative seat count; reported
    rather than silently clamped."""


class NonRationalWeightsError(ApportionError):
    """Operation requires exact rational vote counts."""


class UnsupportedMethodError(ApportionError):
    """No closed-form result exists for this method/functional combination."""


class InstanceTooLargeError(ApportionError):
    """Brute-force enumeration would exceed the configured size limit."""
