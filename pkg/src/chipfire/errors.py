"""Exception types shared across the package.

The CLI maps these onto exit codes: parse errors exit 2, graph
preconditions exit 3, domain preconditions exit 4.
"""


class GraphParseError(ValueError):
    """A graph file (or divisor/structure text) could not be parsed."""


class DisconnectedError(ValueError):
    """An operation that requires a connected graph got a disconnected one."""


class InvalidStructureError(ValueError):
    """A candidate r-vector is not an arithmetical structure on the graph."""


class GuardError(RuntimeError):
    """A brute-force operation was asked to exceed its documented size guard."""
