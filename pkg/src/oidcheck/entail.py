"""Decide logical entailment between two queries read as schema mappings
(existentially quantified function, universally quantified body variables).

Two independent decision paths are implemented and cross-checked:

* witness path: search for a homomorphism h from the entailing body into the
  entailed one that matches the distinguished tuples, sends distinguished
  creation variables into the target's creation variables, and whose
  preimage of the target creation variables induces a join dependency that
  the body implies (checked with a two-copy chase body);
* semantic path: build the colored canonical instance of the entailed query
  (one copy of its body per color, creation variables kept white), chase the
  entailing query over it, and test whether the resulting source/target pair
  satisfies the entailed mapping. A failure here is a genuine counterexample
  pair, since the chased pair always satisfies the entailing mapping.

A negative decision always carries an oracle-checked counterexample pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HeadMismatchError
from .evaluation import JoinDependency, chase
from .hom import HomConstraint, find_homomorphism, iter_homomorphisms
from .model import (
    Atom,
    Constant,
    Fact,
    SkolemQuery,
    Variable,
    body_variables,
    frozen_constant,
    rename_atoms,
)
from .normalize import disjoint_frozen_union
from . import oracle

COPY_SUFFIXES = ("^0", "^1")


@dataclass(frozen=True)
class TwoCopyBody:
    """Union of two copies of a body sharing exactly the given variables;
    expresses the join of the body's projections for the dependency test."""

    b0: frozenset[Atom]
    b1: frozenset[Atom]
    shared: frozenset[Variable]

    @property
    def b2(self) -> frozenset[Atom]:
        return self.b0 | self.b1


def two_copy_body(body: frozenset[Atom], shared: frozenset[Variable]) -> TwoCopyBody:
    copies = []
    for suffix in COPY_SUFFIXES:
        mapping = {
            v: Variable(v.name + suffix) for v in body_variables(body) if v not in shared
        }
        copies.append(rename_atoms(body, mapping))
    return TwoCopyBody(b0=copies[0], b1=copies[1], shared=shared)


def check_jd_implication(
    body: frozenset[Atom],
    x_set: frozenset[Variable],
    y_set: frozenset[Variable],
    z_set: frozenset[Variable],
) -> dict | None:
    """Does the body, projected onto x+y+z, imply the join dependency
    (x+y) join (y+z)? Returns the certifying homomorphism into the two-copy
    body, or None."""
    if not (x_set & z_set) <= y_set:
        raise ValueError("shared x/z variables must be part of the overlap")
    tcb = two_copy_body(body, y_set)
    fixed: dict[Variable, Variable] = {}
    for v in body_variables(body):
        if v in y_set:
            fixed[v] = v
        elif v in x_set:
            fixed[v] = Variable(v.name + COPY_SUFFIXES[0])
        elif v in z_set:
            fixed[v] = Variable(v.name + COPY_SUFFIXES[1])
    return find_homomorphism(body, tcb.b2, HomConstraint(fixed=fixed))


@dataclass(frozen=True)
class ColoredInstance:
    """One copy of a body per color; creation variables stay white (frozen),
    all others get per-color constants."""

    instance: frozenset  # of Fact
    decolor: dict  # Constant -> Variable, the color-removing map

    def __iter__(self):
        return iter((self.instance, self.decolor))


def canonical_colored_instance(q_prime: SkolemQuery, colors: int) -> ColoredInstance:
    """Instance with ``colors + 1`` copies of the body, colored 0..colors."""
    white = q_prime.z_set
    facts: set[Fact] = set()
    decolor: dict[Constant, Variable] = {}
    for level in range(colors + 1):
        for atom in sorted(q_prime.body, key=lambda a: (a.predicate, a.args)):
            args = []
            for v in atom.args:
                c = frozen_constant(v) if v in white else Constant(f"{v.name}#{level}")
                decolor[c] = v
                args.append(c)
            facts.add(Fact(atom.predicate, tuple(args)))
    return ColoredInstance(frozenset(facts), decolor)


@dataclass(frozen=True)
class EntailWitness:
    h: dict  # body-to-body homomorphism
    y_h: frozenset[Variable]  # preimage of the target creation variables
    jd: JoinDependency
    jd_certificate: dict  # homomorphism into the two-copy body


@dataclass(frozen=True)
class EntailDecision:
    entails: bool
    witness: EntailWitness | None = None
    counterexample: tuple | None = None  # (source Instance, target Instance)
    note: str = ""


def decide_entails_semantic(q: SkolemQuery, q_prime: SkolemQuery) -> bool:
    """Entailment via the colored canonical instance; assumes the function
    terms sit at the same head position."""
    colored = canonical_colored_instance(q_prime, q.func_arity)
    ground, _ = chase(q, colored.instance)
    return oracle.satisfies_sotgd(colored.instance, ground, q_prime).satisfied


def _checked_counterexample(q: SkolemQuery, q_prime: SkolemQuery, source) -> tuple:
    ground, _ = chase(q, source)
    if not oracle.satisfies_sotgd(source, ground, q).satisfied:
        raise AssertionError("internal check failed: chased pair must satisfy the query")
    if oracle.satisfies_sotgd(source, ground, q_prime).satisfied:
        raise AssertionError(
            "internal check failed: constructed pair fails to separate the queries"
        )
    return source, ground


def decide_entails(
    q: SkolemQuery, q_prime: SkolemQuery, *, dual_check: bool = True
) -> EntailDecision:
    """Does every source/target pair satisfying q also satisfy q_prime?

    All candidate homomorphisms meeting the head conditions are tried, since
    the dependency condition depends on the individual homomorphism. With
    ``dual_check`` the verdict is asserted against the semantic path.
    """
    if q.head_predicate != q_prime.head_predicate or q.head_arity != q_prime.head_arity:
        raise HeadMismatchError(
            f"heads differ: {q.head_predicate}/{q.head_arity} vs "
            f"{q_prime.head_predicate}/{q_prime.head_arity}"
        )
    if q.func_pos != q_prime.func_pos:
        source = disjoint_frozen_union(q, q_prime)
        counterexample = _checked_counterexample(q, q_prime, source)
        return EntailDecision(
            entails=False,
            counterexample=counterexample,
            note=f"function term at head position {q.func_pos} vs {q_prime.func_pos}",
        )

    witness = None
    fixed: dict[Variable, Variable] | None = {}
    for v, w in zip(q.distinguished, q_prime.distinguished):
        if fixed.setdefault(v, w) != w:
            fixed = None  # one variable cannot match two distinguished positions
            break
    if fixed is not None:
        constraint = HomConstraint(
            fixed=fixed,
            image_in={v: frozenset(q_prime.z_set) for v in q.x_set & q.z_set},
        )
        for h in iter_homomorphisms(q.body, q_prime.body, constraint):
            y_h = frozenset(v for v in body_variables(q.body) if h[v] in q_prime.z_set)
            certificate = check_jd_implication(q.body, q.x_set, y_h, q.z_set)
            if certificate is not None:
                witness = EntailWitness(
                    h=h,
                    y_h=y_h,
                    jd=JoinDependency(q.x_set | y_h, y_h | q.z_set),
                    jd_certificate=certificate,
                )
                break

    if dual_check and (witness is not None) != decide_entails_semantic(q, q_prime):
        raise AssertionError(
            "internal check failed: witness and semantic entailment paths disagree"
        )

    if witness is not None:
        return EntailDecision(entails=True, witness=witness)

    colored = canonical_colored_instance(q_prime, q.func_arity)
    counterexample = _checked_counterexample(q, q_prime, colored.instance)
    return EntailDecision(entails=False, counterexample=counterexample)


@dataclass(frozen=True)
class LogicalEquivalence:
    forward: EntailDecision
    backward: EntailDecision

    @property
    def equivalent(self) -> bool:
        return self.forward.entails and self.backward.entails


def decide_logical_equiv(
    q: SkolemQuery, q_prime: SkolemQuery, *, dual_check: bool = True
) -> LogicalEquivalence:
    """Entailment in both directions."""
    return LogicalEquivalence(
        forward=decide_entails(q, q_prime, dual_check=dual_check),
        backward=decide_entails(q_prime, q, dual_check=dual_check),
    )
