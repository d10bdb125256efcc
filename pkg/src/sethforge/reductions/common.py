from __future__ import annotations

from sethforge.errors import CapExceeded, DegenerateInput
from sethforge.formula import CnfFormula


def label(prefix: str, role: str, **fields) -> str:
    """Provenance label such as ``IS:path:copy=2:i=3:pos=5``."""
    return ":".join([prefix, role, *(f"{k}={v}" for k, v in fields.items())])


def parse_label(text: str) -> tuple[str, str, dict[str, str]]:
    prefix, role, *rest = text.split(":")
    return prefix, role, dict(item.split("=", 1) for item in rest)


def require_clauses(phi: CnfFormula):
    if phi.m == 0:
        raise DegenerateInput("formula has no clauses")
    if phi.n == 0:
        raise DegenerateInput("formula has no variables")


def base_digits(rank: int, base: int, width: int) -> tuple[int, ...]:
    """Most significant digit first."""
    digits = []
    for _ in range(width):
        digits.append(rank % base)
        rank //= base
    return tuple(reversed(digits))


def code_str(digits) -> str:
    return "".join(str(d) for d in digits)


# Size cap on per-gadget blow-up (3^p subsets / colourings) to keep instances finite.
MAX_CODEWORDS = 3**8


def check_codewords(base: int, p: int):
    if base**p > MAX_CODEWORDS:
        raise CapExceeded(f"{base}^{p} codewords exceed the size cap {MAX_CODEWORDS}")
