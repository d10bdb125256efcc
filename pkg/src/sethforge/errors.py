"""Exception hierarchy. Every error carries a short machine-readable category."""


class SethForgeError(Exception):
    category = "error"

    def __init__(self, detail: str = ""):
        super().__init__(detail)
        self.detail = detail

    def __str__(self):
        return f"{self.category}: {self.detail}"


class ParseError(SethForgeError):
    category = "parse"

    def __init__(self, kind: str, detail: str):
        super().__init__(detail)
        self.kind = kind

    def __str__(self):
        return f"parse: {self.kind}: {self.detail}"


class DegenerateInput(SethForgeError):
    category = "degenerate-input"


class CapExceeded(SethForgeError):
    category = "cap-exceeded"


class DecompositionError(SethForgeError):
    category = "invalid-decomposition"


class CoverageError(DecompositionError):
    def __init__(self, vertex: int):
        super().__init__(f"vertex {vertex} is in no bag")
        self.vertex = vertex


class EdgeCoverageError(DecompositionError):
    def __init__(self, edge: tuple[int, int]):
        super().__init__(f"edge {{{edge[0]}, {edge[1]}}} uncovered")
        self.edge = edge


class ContiguityError(DecompositionError):
    def __init__(self, vertex: int):
        super().__init__(f"bags containing vertex {vertex} are not contiguous")
        self.vertex = vertex


class UnsupportedKind(SethForgeError):
    category = "unsupported-kind"


class ShapeMismatch(SethForgeError):
    category = "shape-mismatch"


class NotSatisfying(SethForgeError):
    category = "not-satisfying"


class InvalidBundle(SethForgeError):
    category = "invalid-bundle"
