"""Reference semantics: matchings, query evaluation, multiset (combined)
semantics, tableau evaluation, oid counts, and the chase.

Matching enumeration is a backtracking search over body atoms, most
constrained first. Everything is deterministic: atoms, facts, and created
constants are processed in a canonical sorted order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .model import (
    Atom,
    ConjunctiveQuery,
    Constant,
    ExtendedFact,
    Fact,
    FuncTerm,
    SkolemQuery,
    Variable,
    adom,
    body_variables,
    render_term,
)


def _ordered_atoms(body: Iterable[Atom], by_pred: dict[str, list[Fact]]) -> list[Atom]:
    # fewer distinct variables and fewer candidate facts first
    return sorted(
        body,
        key=lambda a: (len(a.variables), len(by_pred.get(a.predicate, ())), a.predicate, a.args),
    )


def _facts_by_predicate(instance) -> dict[str, list[Fact]]:
    by_pred: dict[str, list[Fact]] = {}
    for f in instance:
        by_pred.setdefault(f.predicate, []).append(f)
    for facts in by_pred.values():
        facts.sort(key=lambda f: tuple(c.name for c in f.args))
    return by_pred


def _match_atom(atom: Atom, fact: Fact, val: dict) -> dict | None:
    if len(atom.args) != len(fact.args):
        return None
    new = val
    for v, c in zip(atom.args, fact.args):
        bound = new.get(v)
        if bound is None:
            if new is val:
                new = dict(val)
            new[v] = c
        elif bound != c:
            return None
    # copies are made only on first write, so sharing the input dict is safe
    return new


def matchings(body: Iterable[Atom], instance) -> list[dict]:
    """All valuations sending every body atom into the instance.

    Returns plain dicts Variable -> Constant, in deterministic search order.
    """
    body = list(body)
    if not body:
        return [{}]
    by_pred = _facts_by_predicate(instance)
    atoms = _ordered_atoms(body, by_pred)
    out: list[dict] = []

    def extend(i: int, val: dict) -> None:
        if i == len(atoms):
            out.append(val)
            return
        atom = atoms[i]
        for fact in by_pred.get(atom.predicate, ()):
            new = _match_atom(atom, fact, val)
            if new is not None:
                extend(i + 1, new)

    extend(0, {})
    return out


def eval_cq(q: ConjunctiveQuery, instance) -> frozenset:
    """Classical conjunctive-query result: one head fact per matching."""
    return frozenset(
        Fact(q.head.predicate, tuple(m[v] for v in q.head.args))
        for m in matchings(q.body, instance)
    )


def eval_ocq(q: SkolemQuery, instance) -> frozenset:
    """Object-creating result: the head's function term is instantiated into
    a data term, one extended fact per matching."""
    out = set()
    for m in matchings(q.body, instance):
        oid = FuncTerm(q.func_symbol, tuple(m[v] for v in q.creation))
        args = [m[v] for v in q.distinguished]
        args.insert(q.func_pos, oid)
        out.add(ExtendedFact(q.head_predicate, tuple(args)))
    return frozenset(out)


@dataclass(frozen=True)
class MVQuery:
    """A conjunctive query paired with multiset variables, evaluated under
    combined bag-set semantics: each answer carries the number of distinct
    restrictions of its matchings to the multiset variables."""

    core: ConjunctiveQuery
    multiset_vars: frozenset[Variable]

    def __post_init__(self):
        head_vars = self.core.head.variables
        if self.multiset_vars & head_vars:
            raise ValueError("multiset variables must not occur in the head")
        if not self.multiset_vars <= body_variables(self.core.body):
            raise ValueError("multiset variables must occur in the body")


def eval_mv(q: MVQuery, instance) -> dict[Fact, int]:
    """Combined-semantics result: answer fact -> multiplicity."""
    groups: dict[Fact, set] = {}
    mvars = sorted(q.multiset_vars)
    for m in matchings(q.core.body, instance):
        fact = Fact(q.core.head.predicate, tuple(m[v] for v in q.core.head.args))
        restriction = tuple(m[v] for v in mvars)
        groups.setdefault(fact, set()).add(restriction)
    return {fact: len(restrictions) for fact, restrictions in groups.items()}


def oid_count(q: SkolemQuery, instance, values: tuple[Constant, ...]) -> int:
    """Number of distinct created terms paired with the given distinguished
    values in the query result."""
    if len(values) != len(q.distinguished):
        raise ValueError(
            f"expected {len(q.distinguished)} distinguished values, got {len(values)}"
        )
    found = set()
    for fact in eval_ocq(q, instance):
        args = list(fact.args)
        oid = args.pop(q.func_pos)
        if tuple(args) == tuple(values):
            found.add(oid)
    return len(found)


# -- tableau queries and join dependencies -----------------------------------

Row = frozenset  # of (Variable, Constant) pairs


@dataclass(frozen=True)
class TableauQuery:
    body: frozenset[Atom]
    out_vars: frozenset[Variable]

    def __post_init__(self):
        if not self.out_vars <= body_variables(self.body):
            raise ValueError("projection variables must occur in the body")


@dataclass(frozen=True)
class JoinDependency:
    left: frozenset[Variable]
    right: frozenset[Variable]


def eval_tableau(q: TableauQuery, instance) -> frozenset:
    """Projection of the matching relation onto the output variables."""
    rows = set()
    for m in matchings(q.body, instance):
        rows.add(frozenset((v, m[v]) for v in q.out_vars))
    return frozenset(rows)


def project(relation, variables: frozenset[Variable]) -> frozenset:
    return frozenset(
        frozenset((v, c) for v, c in row if v in variables) for row in relation
    )


def join(left, right) -> frozenset:
    """Natural join of two relations given as sets of rows."""
    out = set()
    for a in left:
        da = dict(a)
        for b in right:
            db = dict(b)
            if all(da[v] == c for v, c in db.items() if v in da):
                merged = dict(da)
                merged.update(db)
                out.add(frozenset(merged.items()))
    return frozenset(out)


def satisfies_jd(relation, jd: JoinDependency) -> bool:
    """Does the relation equal the join of its two projections?"""
    joined = join(project(relation, jd.left), project(relation, jd.right))
    return joined <= relation


# -- the chase ----------------------------------------------------------------


@dataclass(frozen=True)
class ChaseResult:
    instance: frozenset  # ground facts over the head predicate
    oid_table: dict  # FuncTerm -> Constant, the fresh-constant assignment

    def __iter__(self) -> Iterator:
        return iter((self.instance, self.oid_table))


def chase(q: SkolemQuery, instance) -> ChaseResult:
    """Evaluate the query and replace each distinct created term by a fresh
    constant ``@k``, assigned in lexicographic order of the terms' renderings
    and kept disjoint from the input's active domain."""
    extended = eval_ocq(q, instance)
    terms = sorted(
        {t for f in extended for t in f.args if isinstance(t, FuncTerm)},
        key=render_term,
    )
    taken = {c.name for c in adom(instance)}
    table: dict[FuncTerm, Constant] = {}
    k = 1
    for term in terms:
        while f"@{k}" in taken:
            k += 1
        table[term] = Constant(f"@{k}")
        k += 1
    ground = frozenset(
        Fact(f.predicate, tuple(table[a] if isinstance(a, FuncTerm) else a for a in f.args))
        for f in extended
    )
    return ChaseResult(ground, table)
