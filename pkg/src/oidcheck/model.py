"""Core vocabulary: terms, atoms, facts, instances, and the two query classes.

Everything here is immutable after construction and safe to share across
threads. Rule bodies are plain (function-free) atoms over variables; heads may
carry exactly one function term, which is how new object identifiers enter
query results.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Union

from .errors import (
    ArityClashError,
    HeadPredicateInBodyError,
    MultipleFunctionsError,
    NestedTermError,
    NoFunctionError,
    UnsafeVariableError,
)

# Constants with this prefix stand for frozen variables and are rejected in
# user-supplied input.
FROZEN_PREFIX = "frz:"


@dataclass(frozen=True, order=True)
class Variable:
    name: str

    def __repr__(self) -> str:
        return f"Variable({self.name!r})"


@dataclass(frozen=True, order=True)
class Constant:
    name: str

    def __repr__(self) -> str:
        return f"Constant({self.name!r})"


@dataclass(frozen=True)
class FuncTerm:
    """Application of a function symbol to variables (in rules) or constants
    (in extended facts). Arguments are always atomic; nesting is rejected at
    validation time."""

    symbol: str
    args: tuple

    @property
    def arity(self) -> int:
        return len(self.args)

    def __repr__(self) -> str:
        return f"FuncTerm({self.symbol!r}, {self.args!r})"


Term = Union[Variable, Constant, FuncTerm]


def render_term(term: Term) -> str:
    if isinstance(term, FuncTerm):
        return f"{term.symbol}({','.join(render_term(a) for a in term.args)})"
    return term.name


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Variable, ...]

    @property
    def arity(self) -> int:
        return len(self.args)

    @cached_property
    def variables(self) -> frozenset[Variable]:
        return frozenset(self.args)

    def render(self) -> str:
        return f"{self.predicate}({','.join(a.name for a in self.args)})"


@dataclass(frozen=True)
class Fact:
    predicate: str
    args: tuple[Constant, ...]

    @property
    def arity(self) -> int:
        return len(self.args)

    def render(self) -> str:
        return f"{self.predicate}({','.join(a.name for a in self.args)})"


@dataclass(frozen=True)
class ExtendedFact:
    """Like a Fact but arguments may be function terms (created oids)."""

    predicate: str
    args: tuple[Term, ...]

    @property
    def arity(self) -> int:
        return len(self.args)

    def render(self) -> str:
        return f"{self.predicate}({','.join(render_term(a) for a in self.args)})"


Instance = frozenset  # of Fact
ExtendedInstance = frozenset  # of ExtendedFact

Valuation = Mapping  # Variable -> Constant
VariableMapping = Mapping  # Variable -> Variable


def adom(facts: Iterable) -> frozenset:
    """Active domain: every term appearing in some argument position."""
    out = set()
    for f in facts:
        out.update(f.args)
    return frozenset(out)


def oids(extended: Iterable) -> frozenset:
    """The non-constant data terms of an extended instance."""
    return frozenset(t for t in adom(extended) if isinstance(t, FuncTerm))


def consts(extended: Iterable) -> frozenset:
    """The constants appearing in an extended instance."""
    return frozenset(t for t in adom(extended) if isinstance(t, Constant))


def body_variables(body: Iterable[Atom]) -> frozenset[Variable]:
    out = set()
    for atom in body:
        out.update(atom.args)
    return frozenset(out)


def predicate_arities(items: Iterable) -> dict[str, int]:
    """Arity map of atoms/facts, raising on inconsistent use."""
    arities: dict[str, int] = {}
    for item in items:
        known = arities.get(item.predicate)
        if known is None:
            arities[item.predicate] = item.arity
        elif known != item.arity:
            raise ArityClashError(
                f"predicate {item.predicate} used with arity {known} and {item.arity}"
            )
    return arities


def merge_arities(*maps: Mapping[str, int]) -> dict[str, int]:
    merged: dict[str, int] = {}
    for m in maps:
        for pred, ar in m.items():
            if merged.setdefault(pred, ar) != ar:
                raise ArityClashError(
                    f"predicate {pred} used with arity {merged[pred]} and {ar}"
                )
    return merged


def make_instance(facts: Iterable[Fact]) -> Instance:
    """Set of facts with a consistent arity per predicate."""
    facts = frozenset(facts)
    predicate_arities(facts)
    return facts


def sort_facts(facts: Iterable) -> list:
    """Canonical display order: by predicate, then rendered arguments."""
    return sorted(facts, key=lambda f: (f.predicate, tuple(render_term(a) for a in f.args)))


@dataclass(frozen=True)
class ConjunctiveQuery:
    head: Atom
    body: frozenset[Atom]

    def __post_init__(self):
        missing = self.head.variables - body_variables(self.body)
        if missing:
            names = ", ".join(sorted(v.name for v in missing))
            raise UnsafeVariableError(f"head variable(s) {names} not in body")
        if any(a.predicate == self.head.predicate for a in self.body):
            raise HeadPredicateInBodyError(
                f"head predicate {self.head.predicate} occurs in body"
            )
        predicate_arities(self.body)

    @cached_property
    def variables(self) -> frozenset[Variable]:
        return body_variables(self.body)

    def render(self) -> str:
        atoms = sorted(self.body, key=lambda a: (a.predicate, a.args))
        return f"{self.head.render()} <- {', '.join(a.render() for a in atoms)}."


@dataclass(frozen=True)
class SkolemQuery:
    """A single rule whose head creates one new value per distinct binding of
    the function term's arguments.

    The head reads ``T(distinguished..., f(creation...))`` with the function
    term kept at ``func_pos`` among the head arguments (0-based).
    """

    head_predicate: str
    distinguished: tuple[Variable, ...]
    func_symbol: str
    creation: tuple[Variable, ...]
    body: frozenset[Atom]
    func_pos: int

    @property
    def head_arity(self) -> int:
        return len(self.distinguished) + 1

    @property
    def func_arity(self) -> int:
        return len(self.creation)

    @cached_property
    def x_set(self) -> frozenset[Variable]:
        return frozenset(self.distinguished)

    @cached_property
    def z_set(self) -> frozenset[Variable]:
        return frozenset(self.creation)

    @cached_property
    def variables(self) -> frozenset[Variable]:
        return body_variables(self.body)

    @property
    def head_args(self) -> tuple:
        func = FuncTerm(self.func_symbol, tuple(self.creation))
        args = list(self.distinguished)
        args.insert(self.func_pos, func)
        return tuple(args)

    def render(self) -> str:
        head_args = ",".join(render_term(t) for t in self.head_args)
        atoms = sorted(self.body, key=lambda a: (a.predicate, a.args))
        body = ", ".join(a.render() for a in atoms)
        return f"{self.head_predicate}({head_args}) <- {body}."


@dataclass(frozen=True)
class RawRule:
    """Parsed but not yet validated rule. Head arguments may still contain
    arbitrarily shaped function terms; validation rejects the bad ones."""

    head_predicate: str
    head_args: tuple
    body: tuple[Atom, ...]


def validate_rule(raw: RawRule) -> SkolemQuery:
    """Check a raw rule against the query class and build a SkolemQuery.

    Requirements: exactly one function term in the head, no nested function
    terms, every head variable occurring in the body, head predicate absent
    from the body, and globally consistent arities.
    """
    func_positions = [i for i, t in enumerate(raw.head_args) if isinstance(t, FuncTerm)]
    if not func_positions:
        raise NoFunctionError("head has no function term")
    if len(func_positions) > 1:
        raise MultipleFunctionsError("head has more than one function term")
    pos = func_positions[0]
    func = raw.head_args[pos]
    for arg in func.args:
        if isinstance(arg, FuncTerm):
            raise NestedTermError(
                f"nested function term {render_term(arg)} inside {func.symbol}(...)"
            )
        if isinstance(arg, Constant):
            raise NestedTermError(
                f"constant {arg.name} not allowed inside {func.symbol}(...)"
            )
    distinguished = []
    for i, t in enumerate(raw.head_args):
        if i == pos:
            continue
        if not isinstance(t, Variable):
            raise NestedTermError(f"head argument {render_term(t)} must be a variable")
        distinguished.append(t)

    if not raw.body:
        raise UnsafeVariableError("rule body is empty")
    body = frozenset(raw.body)
    if any(a.predicate == raw.head_predicate for a in body):
        raise HeadPredicateInBodyError(
            f"head predicate {raw.head_predicate} occurs in body"
        )
    arities = predicate_arities(body)
    if raw.head_predicate in arities:  # unreachable after the check above; kept defensive
        raise HeadPredicateInBodyError(
            f"head predicate {raw.head_predicate} occurs in body"
        )
    in_body = body_variables(body)
    head_vars = set(distinguished) | set(func.args)
    missing = head_vars - in_body
    if missing:
        names = ", ".join(sorted(v.name for v in missing))
        raise UnsafeVariableError(f"head variable(s) {names} not in body")

    return SkolemQuery(
        head_predicate=raw.head_predicate,
        distinguished=tuple(distinguished),
        func_symbol=func.symbol,
        creation=tuple(func.args),
        body=body,
        func_pos=pos,
    )


def flatten_query(q: SkolemQuery) -> ConjunctiveQuery:
    """Replace the function term by its argument list: the head becomes
    ``T_hat(distinguished..., creation...)`` over the same body."""
    name = q.head_predicate + "_hat"
    body_preds = {a.predicate for a in q.body}
    while name in body_preds:
        name += "_"
    head = Atom(name, tuple(q.distinguished) + tuple(q.creation))
    return ConjunctiveQuery(head=head, body=q.body)


def freeze_body(body: Iterable[Atom]) -> Instance:
    """Read a body as an instance, turning each variable into a reserved
    constant ``frz:<name>``."""
    return frozenset(
        Fact(a.predicate, tuple(Constant(FROZEN_PREFIX + v.name) for v in a.args))
        for a in body
    )


def frozen_constant(v: Variable) -> Constant:
    return Constant(FROZEN_PREFIX + v.name)


def rename_atoms(body: Iterable[Atom], mapping: Mapping[Variable, Variable]) -> frozenset[Atom]:
    return frozenset(
        Atom(a.predicate, tuple(mapping.get(v, v) for v in a.args)) for a in body
    )


def rename_query(q: SkolemQuery, mapping: Mapping[Variable, Variable],
                 func_symbol: str | None = None) -> SkolemQuery:
    """Apply a variable renaming to head and body; optionally swap the
    function symbol."""
    return SkolemQuery(
        head_predicate=q.head_predicate,
        distinguished=tuple(mapping.get(v, v) for v in q.distinguished),
        func_symbol=func_symbol if func_symbol is not None else q.func_symbol,
        creation=tuple(mapping.get(v, v) for v in q.creation),
        body=rename_atoms(q.body, mapping),
        func_pos=q.func_pos,
    )
