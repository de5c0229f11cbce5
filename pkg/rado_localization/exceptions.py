from .rado_core import describe_set, describe_vertex


class RadoLocalizationError(Exception):
    pass


# A copy failed to supply a cone member within the enumeration bound
class SearchExhausted(RadoLocalizationError):
    def __init__(self, bound, n=None, K=(), reason=None):
        self.bound = bound
        self.n = n
        self.K = frozenset(K)
        message = "No vertex found within %d enumerated copy members" % bound
        if n is not None:
            message += " for q(%d, %s)" % (n, describe_set(self.K))
        if reason:
            message += ": %s" % reason
        super().__init__(message)


class Untagged(RadoLocalizationError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(
            "Vertex %s was not produced by this labeling" % describe_vertex(vertex)
        )


class RefinerFailure(RadoLocalizationError):
    def __init__(self, n, K, cone=None):
        self.n = n
        self.K = frozenset(K)
        self.cone = cone
        super().__init__(
            "Refiner for stage %d at K=%s gave %s, which is not a sub-cone of its input"
            % (n, describe_set(self.K), cone)
        )


# No split below a condition within the search window
class Undecided(RadoLocalizationError):
    def __init__(self, n, K):
        self.n = n
        self.K = frozenset(K)
        super().__init__(
            "Name model is undecided below q(%d, %s): no split found"
            % (n, describe_set(self.K))
        )


class DepthInsufficient(RadoLocalizationError):
    def __init__(self, needed, built):
        self.needed = needed
        self.built = built
        super().__init__(
            "Stage %d is required but only %d stages were built" % (needed, built)
        )


class IndexOutOfRange(RadoLocalizationError):
    pass


class ConfigError(RadoLocalizationError):
    pass


# Malformed matrix or name-model table
class GridError(RadoLocalizationError):
    pass


class StateFormatError(RadoLocalizationError):
    pass
