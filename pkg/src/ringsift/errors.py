"""Exception hierarchy shared by all ringsift modules."""


class RingsiftError(Exception):
    """Base class for every error raised by this package."""


class GraphError(RingsiftError):
    """Domain error on a graph operation (unknown node, mismatched tree, ...)."""


class FormatError(RingsiftError):
    """Malformed input file (bad CSV header, unparseable config line, ...)."""


class SizeLimitError(RingsiftError):
    """An operation refused an input that exceeds its guard rail."""


class ConfigError(RingsiftError):
    """Invalid run configuration (bad bounds, unknown strategy, ...)."""


class StageError(RingsiftError):
    """Pipeline stage failure; carries the stage tag for exit-code mapping."""

    def __init__(self, stage, message):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
