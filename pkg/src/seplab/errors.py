"""Shared exception types."""


class InfeasibleError(Exception):
    """A request is exact but too large for desk-scale brute force.

    Raised by operations with explicit feasibility guards (factorial-size
    generators, code enumeration, tiny-field ambient spaces).  The message
    always states the guard that was exceeded.
    """
