"""Decide whether two object-creating queries produce identical results on
every input, up to a renaming of the created identifiers.

After normalization the decision runs along two independent routes that must
agree:

* multiset route: homomorphisms between the queries read under combined
  bag-set semantics, injective on the non-distinguished creation variables
  in both directions;
* permutation route: a permutation of the non-distinguished creation
  variables under which the flattened queries are classically equivalent.

A positive decision carries both witness families, made mutually consistent
by reconstructing the permutation as the inverse of the multiset
homomorphism's action on the creation variables. A negative decision carries
the refutation stage and, when bounded search finds one, a separating
instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .evaluation import MVQuery
from .hom import cq_contained, cq_equivalent, mv_homomorphism
from .model import Atom, ConjunctiveQuery, SkolemQuery
from .normalize import NormalizedPair, NormalizeRefutation, normalize_pair
from . import oracle

CHARACTERIZATION_STAGE = "CharacterizationFailed"

DEFAULT_MAX_PERMUTATION_VARS = 8


@dataclass(frozen=True)
class EquivWitness:
    pi: dict  # permutation of the non-distinguished creation variables
    h_forward: dict
    h_backward: dict
    mv_forward: dict
    mv_backward: dict


@dataclass(frozen=True)
class EquivRefutation:
    stage: str
    counterexample: frozenset | None
    detail: str = ""


@dataclass(frozen=True)
class EquivDecision:
    equivalent: bool
    witness: EquivWitness | None = None
    refutation: EquivRefutation | None = None
    normalized: NormalizedPair | None = None


def _fresh_predicate(base: str, bodies) -> str:
    taken = {a.predicate for body in bodies for a in body}
    name = base
    while name in taken:
        name += "_"
    return name


def _flattened(pair: NormalizedPair, pi: dict | None = None) -> tuple[ConjunctiveQuery, ConjunctiveQuery]:
    """Flattenings of both queries over a shared fresh head predicate, the
    first one with its creation tuple permuted by pi."""
    name = _fresh_predicate(
        pair.q.head_predicate + "_hat", (pair.q.body, pair.q_prime.body)
    )
    creation = tuple((pi or {}).get(z, z) for z in pair.q.creation)
    left = ConjunctiveQuery(Atom(name, pair.q.distinguished + creation), pair.q.body)
    right = ConjunctiveQuery(
        Atom(name, pair.q_prime.distinguished + pair.q_prime.creation), pair.q_prime.body
    )
    return left, right


def _mv_pair(pair: NormalizedPair) -> tuple[MVQuery, MVQuery]:
    name = _fresh_predicate(
        pair.q.head_predicate + "_0", (pair.q.body, pair.q_prime.body)
    )
    multiset = frozenset(pair.z_set - pair.x_set)
    left = MVQuery(
        ConjunctiveQuery(Atom(name, pair.q.distinguished), pair.q.body), multiset
    )
    right = MVQuery(
        ConjunctiveQuery(Atom(name, pair.q_prime.distinguished), pair.q_prime.body),
        multiset,
    )
    return left, right


def equiv_via_permutation(pair: NormalizedPair):
    """First permutation (in lexicographic order) of the non-distinguished
    creation variables making the flattened queries equivalent, with the two
    homomorphisms; None when no permutation works."""
    base = sorted(pair.z_set - pair.x_set)
    for image in itertools.permutations(base):
        pi = dict(zip(base, image))
        left, right = _flattened(pair, pi)
        homs = cq_equivalent(left, right)
        if homs is not None:
            return pi, homs[0], homs[1]
    return None


def equiv_via_mv(pair: NormalizedPair):
    """Multiset homomorphisms in both directions, or None."""
    left, right = _mv_pair(pair)
    forward = mv_homomorphism(left, right)
    if forward is None:
        return None
    backward = mv_homomorphism(right, left)
    if backward is None:
        return None
    return forward, backward


def _witness_from_mv(pair: NormalizedPair, mv_forward: dict, mv_backward: dict) -> EquivWitness:
    """Build the permutation-route witnesses consistently with the multiset
    ones: pi is the inverse of mv_forward on the creation variables."""
    base = sorted(pair.z_set - pair.x_set)
    pi = {mv_forward[z]: z for z in base}
    left, right = _flattened(pair, pi)
    h_forward = cq_contained(left, right)
    h_backward = cq_contained(right, left)
    if h_forward is None or h_backward is None:
        raise AssertionError(
            "internal check failed: multiset witnesses exist but the permuted "
            "flattenings are not equivalent"
        )
    return EquivWitness(
        pi=pi,
        h_forward=h_forward,
        h_backward=h_backward,
        mv_forward=mv_forward,
        mv_backward=mv_backward,
    )


def decide_oid_equiv(
    q: SkolemQuery,
    q_prime: SkolemQuery,
    *,
    max_permutation_vars: int = DEFAULT_MAX_PERMUTATION_VARS,
    search_counterexamples: bool = True,
    max_domain: int = 4,
    budget: int = 2000,
    seed: int = 0,
) -> EquivDecision:
    """Decide oid-equivalence, with witnesses or a refutation.

    Normalization failures refute directly. Otherwise both decision routes
    run (the permutation route is skipped above ``max_permutation_vars``
    non-distinguished creation variables) and must agree. Refutations without
    a constructed instance get a bounded counterexample search.
    """
    outcome = normalize_pair(q, q_prime)
    if isinstance(outcome, NormalizeRefutation):
        counterexample = outcome.counterexample
        if counterexample is None and search_counterexamples:
            counterexample = oracle.search_counterexample_oid(
                q, q_prime, max_domain=max_domain, budget=budget, seed=seed
            )
        return EquivDecision(
            equivalent=False,
            refutation=EquivRefutation(
                stage=outcome.stage,
                counterexample=counterexample,
                detail=outcome.detail,
            ),
        )

    pair = outcome
    mv = equiv_via_mv(pair)
    if len(pair.z_set - pair.x_set) <= max_permutation_vars:
        perm = equiv_via_permutation(pair)
        if (mv is None) != (perm is None):
            raise AssertionError(
                "internal check failed: multiset and permutation routes disagree"
            )

    if mv is None:
        counterexample = None
        note = ""
        if search_counterexamples:
            counterexample = oracle.search_counterexample_oid(
                q, q_prime, max_domain=max_domain, budget=budget, seed=seed
            )
        if counterexample is None:
            note = "no small counterexample found within the search budget"
        return EquivDecision(
            equivalent=False,
            refutation=EquivRefutation(
                stage=CHARACTERIZATION_STAGE, counterexample=counterexample, detail=note
            ),
            normalized=pair,
        )

    witness = _witness_from_mv(pair, mv[0], mv[1])
    return EquivDecision(equivalent=True, witness=witness, normalized=pair)
