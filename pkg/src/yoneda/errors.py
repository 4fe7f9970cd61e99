class YonedaError(ValueError):
    """Base class for contract violations raised by the toolkit."""


class NotWellDefined(YonedaError):
    """A matrix does not send relations of the source into those of the target."""


class EndpointMismatch(YonedaError):
    """Objects that must coincide (sources, targets, ends) do not."""


class RingMismatch(YonedaError):
    pass


class NotExact(YonedaError):
    pass


class NotMono(YonedaError):
    pass


class MalformedDiagram(YonedaError):
    pass
