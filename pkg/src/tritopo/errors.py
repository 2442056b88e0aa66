"""Exception hierarchy shared by all modules."""


class TopologyError(ValueError):
    """Base class for every error raised by tritopo."""


class ComplexError(TopologyError):
    """Malformed complex: missing faces, bad simplices, bad labels."""


class InvalidChainError(TopologyError):
    """A chain refers to simplices that are not in its complex."""


class PreconditionError(TopologyError):
    """An operation was called outside its documented domain."""


class StructureError(TopologyError):
    """Input is not the expected kind of manifold, surface or cell complex."""


class NoRepresentativeError(TopologyError):
    """No cycle in the requested homology class avoids the forbidden region."""


class FormatError(TopologyError):
    """Syntax error in a complex text file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
