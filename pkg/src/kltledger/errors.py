"""Exception types shared across the package."""


class GraphError(ValueError):
    """A dual graph violates a structural or minimality requirement."""


class NotKltError(ValueError):
    """An operation that needs a klt configuration met a non-klt one."""


class ScenarioError(ValueError):
    """A contraction scenario is malformed or illegal."""


class LedgerError(ValueError):
    """A surface state is inconsistent with the scenario applied to it."""


class InternalInvariantError(RuntimeError):
    """An invariant the code itself guarantees was observed to fail."""
