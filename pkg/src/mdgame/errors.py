"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration document, parameter, or security-profile entry."""


class NoRouteError(RuntimeError):
    """No route exists between cluster head and requestor under the given bounds."""


class GenerationError(RuntimeError):
    """Random topology generation failed (e.g. connectivity never achieved)."""


class SolverError(RuntimeError):
    """A game LP came back infeasible or unbounded, which indicates a bug."""
