import pytest

from conftest import brute_contained
from oidcheck.errors import HeadMismatchError
from oidcheck.evaluation import MVQuery, eval_cq
from oidcheck.hom import (
    HomConstraint,
    cq_contained,
    cq_equivalent,
    find_homomorphism,
    iter_homomorphisms,
    mv_homomorphism,
)
from oidcheck.model import Atom, ConjunctiveQuery, Fact, Variable, freeze_body
from oidcheck.oracle import instance_enumerator

c, w, x, y, z = (Variable(n) for n in "cwxyz")
R_xyz = frozenset([Atom("R", (x, y, z))])


def test_identity_on_same_body():
    h = find_homomorphism(R_xyz, R_xyz, HomConstraint(fixed={x: x}))
    assert h == {x: x, y: y, z: z}


def test_image_restriction_blocks():
    constraint = HomConstraint(fixed={x: x}, image_in={x: frozenset({y})})
    assert find_homomorphism(R_xyz, R_xyz, constraint) is None


def test_injective_identity():
    body = frozenset([Atom("Mother", (c, x)), Atom("Father", (c, y))])
    h = find_homomorphism(body, body, HomConstraint(injective_on=frozenset({x, y})))
    assert h == {c: c, x: x, y: y}


def test_injectivity_enforced():
    # collapsing body: only non-injective maps exist on {x, y}
    src = frozenset([Atom("R", (x,)), Atom("R", (y,))])
    dst = frozenset([Atom("R", (z,))])
    assert find_homomorphism(src, dst) == {x: z, y: z}
    assert find_homomorphism(src, dst, HomConstraint(injective_on=frozenset({x, y}))) is None


def test_iter_homomorphisms_order_and_determinism():
    src = frozenset([Atom("R", (x,))])
    dst = frozenset([Atom("R", (y,)), Atom("R", (z,))])
    first = list(iter_homomorphisms(src, dst))
    second = list(iter_homomorphisms(src, dst))
    assert first == second == [{x: y}, {x: z}]


def canonical_instance_contained(qa, qb) -> bool:
    """Independent containment oracle: evaluate qa over qb's frozen body and
    look for qb's frozen head."""
    frozen = freeze_body(qb.body)
    from oidcheck.model import frozen_constant

    target = Fact(qb.head.predicate, tuple(frozen_constant(v) for v in qb.head.args))
    return target in eval_cq(qa, frozen)


def test_cq_contained_extra_atom():
    qa = ConjunctiveQuery(Atom("T_hat", (x, y)), R_xyz)
    qb = ConjunctiveQuery(
        Atom("T_hat", (x, y)), frozenset([Atom("R", (x, y, z)), Atom("R", (x, y, w))])
    )
    h = cq_contained(qa, qb)
    assert h is not None
    assert h[x] == x and h[y] == y
    assert canonical_instance_contained(qa, qb)
    # soundness on small instances
    instances = list(instance_enumerator({"R": 3}, 2, 3))
    assert brute_contained(qa, qb, instances)


def test_cq_contained_self():
    qa = ConjunctiveQuery(Atom("T_hat", (x, y)), R_xyz)
    assert cq_contained(qa, qa) == {x: x, y: y, z: z}


def test_cq_contained_fails_on_collapse():
    qa = ConjunctiveQuery(Atom("T_hat", (x,)), frozenset([Atom("R", (x, x))]))
    qb = ConjunctiveQuery(Atom("T_hat", (x,)), frozenset([Atom("R", (x, y))]))
    assert cq_contained(qa, qb) is None
    assert not canonical_instance_contained(qa, qb)
    # counterexample instance: R(a,b) makes qb produce T_hat(a) but qa nothing
    from oidcheck.parser import parse_instance

    witness = parse_instance("R(a,b).")
    assert eval_cq(qb, witness) and not eval_cq(qa, witness)


def test_cq_contained_completeness_at_desk_scale():
    # whenever the search refutes, the frozen body of qb exhibits a violation
    pairs = [
        (
            ConjunctiveQuery(Atom("T_hat", (x,)), frozenset([Atom("R", (x, x))])),
            ConjunctiveQuery(Atom("T_hat", (x,)), frozenset([Atom("R", (x, y))])),
        ),
        (
            ConjunctiveQuery(Atom("T_hat", (x,)), frozenset([Atom("S", (x,))])),
            ConjunctiveQuery(Atom("T_hat", (x,)), frozenset([Atom("R", (x, y))])),
        ),
    ]
    for qa, qb in pairs:
        assert cq_contained(qa, qb) is None
        assert not canonical_instance_contained(qa, qb)


def test_cq_contained_head_mismatch():
    qa = ConjunctiveQuery(Atom("T_hat", (x, y)), R_xyz)
    qb = ConjunctiveQuery(Atom("U", (x, y)), R_xyz)
    with pytest.raises(HeadMismatchError):
        cq_contained(qa, qb)


def test_cq_equivalent_identity_and_extra_atom():
    qa = ConjunctiveQuery(Atom("T_hat", (x, y)), R_xyz)
    qb = ConjunctiveQuery(
        Atom("T_hat", (x, y)), frozenset([Atom("R", (x, y, z)), Atom("R", (x, y, w))])
    )
    assert cq_equivalent(qa, qa) == ({x: x, y: y, z: z}, {x: x, y: y, z: z})
    assert cq_equivalent(qa, qb) is not None
    qc = ConjunctiveQuery(Atom("T_hat", (x,)), frozenset([Atom("R", (x, x))]))
    qd = ConjunctiveQuery(Atom("T_hat", (x,)), frozenset([Atom("R", (x, y))]))
    assert cq_equivalent(qc, qd) is None


def test_mv_homomorphism_family():
    body = frozenset([Atom("Mother", (c, x)), Atom("Father", (c, y))])
    core = ConjunctiveQuery(Atom("T0", (c,)), body)
    q = MVQuery(core, frozenset({x, y}))
    assert mv_homomorphism(q, q) == {c: c, x: x, y: y}


def test_mv_homomorphism_empty_multiset_is_containment():
    core = ConjunctiveQuery(Atom("T0", (x,)), R_xyz)
    qa = MVQuery(core, frozenset())
    assert mv_homomorphism(qa, qa) == cq_contained(core, core)


def test_mv_homomorphism_keyed_direction():
    # single-atom bodies with multiset variable {y}: mapping exists when the
    # image constraint holds
    core_a = ConjunctiveQuery(Atom("T0", (x,)), R_xyz)
    qa = MVQuery(core_a, frozenset({y}))
    qb = MVQuery(core_a, frozenset({y}))
    assert mv_homomorphism(qa, qb) == {x: x, y: y, z: z}
    qc = MVQuery(core_a, frozenset({z}))
    assert mv_homomorphism(qa, qc) is None


def test_find_homomorphism_deterministic_repeat():
    src = frozenset([Atom("R", (x, y, z))])
    dst = frozenset([Atom("R", (w, w, c)), Atom("R", (c, c, w))])
    assert find_homomorphism(src, dst) == find_homomorphism(src, dst)
