"""Failure taxonomy shared by the builder and the CLI."""


class ConstructionError(Exception):
    """A trajectory construction failed (e.g. the inflow curve crossed
    the upper critical line before reaching the sonic node)."""


class ToleranceError(Exception):
    """A cross-validation disagreed beyond its stated tolerance."""
