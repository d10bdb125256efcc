"""CNF formulas, DIMACS I/O, brute-force satisfiability and variable grouping."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from sethforge.errors import CapExceeded, DegenerateInput, ParseError

Literal = tuple[int, bool]  # (variable index, polarity)


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise DegenerateInput("empty clause")

    @property
    def size(self) -> int:
        return len(self.literals)

    @classmethod
    def from_ints(cls, lits: Iterable[int]) -> "Clause":
        return cls(tuple((abs(x), x > 0) for x in lits))

    def to_ints(self) -> list[int]:
        return [v if pos else -v for v, pos in self.literals]

    def variables(self) -> set[int]:
        return {v for v, _ in self.literals}

    def __str__(self):
        return "(" + " ∨ ".join(("" if pos else "¬") + f"x{v}" for v, pos in self.literals) + ")"


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        for c in self.clauses:
            for v, _ in c.literals:
                if not 1 <= v <= self.num_vars:
                    raise ParseError("variable-range", f"variable {v} outside [1, {self.num_vars}]")

    @property
    def n(self) -> int:
        return self.num_vars

    @property
    def m(self) -> int:
        return len(self.clauses)

    @classmethod
    def from_lists(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> "CnfFormula":
        """Build from signed-integer clause lists, e.g. ``[[1, -2], [-1]]``."""
        return cls(num_vars, tuple(Clause.from_ints(c) for c in clauses))

    def to_lists(self) -> list[list[int]]:
        return [c.to_ints() for c in self.clauses]

    def __str__(self):
        return " ∧ ".join(str(c) for c in self.clauses) or "⊤"


def parse_dimacs(text: str | bytes) -> CnfFormula:
    """Parse DIMACS CNF text.

    Raises ParseError with category ``header``, ``variable-range``,
    ``empty-clause``, ``clause-count`` or ``syntax``.
    """
    if isinstance(text, bytes):
        text = text.decode()
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise ParseError("header", f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("header", f"line {lineno}: expected 'p cnf <n> <m>'")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError("header", f"line {lineno}: non-integer header field") from None
            if header[0] < 0 or header[1] < 0:
                raise ParseError("header", f"line {lineno}: negative header field")
            continue
        if header is None:
            raise ParseError("header", f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError("syntax", f"line {lineno}: bad token {tok!r}") from None
            if lit == 0:
                if not current:
                    raise ParseError("empty-clause", f"line {lineno}: empty clause")
                clauses.append(current)
                current = []
            else:
                if abs(lit) > header[0]:
                    raise ParseError("variable-range", f"line {lineno}: variable {abs(lit)} > {header[0]}")
                current.append(lit)
    if header is None:
        raise ParseError("header", "missing 'p cnf' header")
    if current:
        raise ParseError("syntax", "last clause is not 0-terminated")
    if len(clauses) != header[1]:
        raise ParseError("clause-count", f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula.from_lists(header[0], clauses)


def write_dimacs(phi: CnfFormula) -> str:
    lines = [f"p cnf {phi.num_vars} {phi.m}"]
    lines += [" ".join(map(str, c.to_ints())) + " 0" for c in phi.clauses]
    return "\n".join(lines) + "\n"


def _check_length(phi: CnfFormula, tau: Sequence[bool]):
    if len(tau) != phi.num_vars:
        raise ValueError(f"assignment has {len(tau)} values, formula has {phi.num_vars} variables")


def evaluate(phi: CnfFormula, tau: Sequence[bool]) -> bool:
    """Truth value of ``phi`` under ``tau`` (``tau[i-1]`` is the value of x_i)."""
    _check_length(phi, tau)
    return all(any(tau[v - 1] == pos for v, pos in c.literals) for c in phi.clauses)


def assignment_from_rank(rank: int, num_vars: int) -> tuple[bool, ...]:
    """x_1 is the most significant bit."""
    return tuple(bool((rank >> (num_vars - 1 - k)) & 1) for k in range(num_vars))


def assignment_rank(tau: Sequence[bool]) -> int:
    r = 0
    for b in tau:
        r = (r << 1) | int(b)
    return r


def brute_force_sat(phi: CnfFormula, cap: int = 24) -> tuple[bool, ...] | None:
    """Lowest-rank satisfying assignment, or None if unsatisfiable."""
    if phi.num_vars > cap:
        raise CapExceeded(f"{phi.num_vars} variables exceed brute-force cap {cap}")
    for rank in range(1 << phi.num_vars):
        tau = assignment_from_rank(rank, phi.num_vars)
        if evaluate(phi, tau):
            return tau
    return None


def pad_to_even(phi: CnfFormula) -> CnfFormula:
    """Make every clause even-sized with a fresh variable z forced false by (¬z ∨ ¬z)."""
    if all(c.size % 2 == 0 for c in phi.clauses):
        return phi
    z = phi.num_vars + 1
    clauses = [Clause(c.literals + ((z, True),)) if c.size % 2 else c for c in phi.clauses]
    clauses.append(Clause(((z, False), (z, False))))
    return CnfFormula(z, tuple(clauses))


@dataclass(frozen=True)
class VariableGrouping:
    group_size: int
    groups: tuple[tuple[int, ...], ...]
    rounding: str

    @property
    def num_groups(self) -> int:
        return len(self.groups)

    def group_of(self, var: int) -> int:
        return (var - 1) // self.group_size


def group_size_for(base: int, p: int, rounding: str) -> int:
    # exact integer test avoids float trouble at powers of two
    power = base**p
    floor = power.bit_length() - 1
    if rounding == "floor":
        return floor
    if rounding == "ceil":
        return floor if 1 << floor == power else floor + 1
    raise ValueError(f"rounding must be 'floor' or 'ceil', got {rounding!r}")


def make_groups(n: int, base: int, p: int, rounding: str = "floor") -> VariableGrouping:
    if base < 2 or p < 1 or n < 1:
        raise DegenerateInput(f"need base >= 2, p >= 1, n >= 1 (got base={base}, p={p}, n={n})")
    beta = group_size_for(base, p, rounding)
    if beta < 1:
        raise DegenerateInput("group size is 0")
    t = math.ceil(n / beta)
    groups = tuple(tuple(range(g * beta + 1, min(n, (g + 1) * beta) + 1)) for g in range(t))
    return VariableGrouping(beta, groups, rounding)


@dataclass(frozen=True)
class GroupAssignment:
    group_index: int
    values: tuple[bool, ...]

    @property
    def rank(self) -> int:
        return assignment_rank(self.values)

    @classmethod
    def unrank(cls, group_index: int, rank: int, size: int) -> "GroupAssignment":
        return cls(group_index, assignment_from_rank(rank, size))


def group_assignments(g: VariableGrouping, i: int) -> Iterator[GroupAssignment]:
    size = len(g.groups[i])
    for r in range(1 << size):
        yield GroupAssignment.unrank(i, r, size)


def group_assignment_satisfies(g: VariableGrouping, ga: GroupAssignment, clause: Clause) -> bool:
    members = g.groups[ga.group_index]
    for v, pos in clause.literals:
        if v in members and ga.values[members.index(v)] == pos:
            return True
    return False


def satisfying_group_assignments(phi: CnfFormula, g: VariableGrouping, i: int, j: int) -> list[GroupAssignment]:
    """Assignments of group ``i`` (0-based) that set a literal of clause ``j`` (0-based) true."""
    clause = phi.clauses[j]
    return [ga for ga in group_assignments(g, i) if group_assignment_satisfies(g, ga, clause)]


def restrict(g: VariableGrouping, tau: Sequence[bool], i: int) -> GroupAssignment:
    return GroupAssignment(i, tuple(tau[v - 1] for v in g.groups[i]))


def all_assignments(n: int) -> Iterator[tuple[bool, ...]]:
    # rank order: x1 most significant
    return (tuple(bits) for bits in itertools.product((False, True), repeat=n))
