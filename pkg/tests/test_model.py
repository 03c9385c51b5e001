import pytest

from oidcheck.errors import (
    ArityClashError,
    HeadPredicateInBodyError,
    MultipleFunctionsError,
    NestedTermError,
    NoFunctionError,
    UnsafeVariableError,
)
from oidcheck.model import (
    Atom,
    Constant,
    Fact,
    FuncTerm,
    RawRule,
    Variable,
    adom,
    flatten_query,
    freeze_body,
    validate_rule,
)

x, y, z, c, w = (Variable(n) for n in "xyzcw")


def raw(head_pred, head_args, body):
    return RawRule(head_pred, tuple(head_args), tuple(body))


def test_validate_family_rule():
    q = validate_rule(
        raw(
            "Family",
            [c, FuncTerm("f", (x, y))],
            [Atom("Mother", (c, x)), Atom("Father", (c, y))],
        )
    )
    assert q.distinguished == (c,)
    assert q.creation == (x, y)
    assert q.func_pos == 1
    assert q.head_arity == 2


def test_validate_keyed_rule():
    q = validate_rule(raw("T", [x, FuncTerm("f", (x,))], [Atom("R", (x, y, z))]))
    assert q.distinguished == (x,)
    assert q.creation == (x,)


def test_validate_unsafe_variable():
    with pytest.raises(UnsafeVariableError):
        validate_rule(raw("T", [w, FuncTerm("f", (x,))], [Atom("R", (x, y, z))]))


def test_validate_no_function():
    with pytest.raises(NoFunctionError):
        validate_rule(raw("T", [x, y], [Atom("R", (x, y, z))]))


def test_validate_multiple_functions():
    with pytest.raises(MultipleFunctionsError):
        validate_rule(
            raw("T", [FuncTerm("f", (x,)), FuncTerm("g", (y,))], [Atom("R", (x, y, z))])
        )


def test_validate_nested_term():
    with pytest.raises(NestedTermError):
        validate_rule(
            raw("T", [x, FuncTerm("f", (FuncTerm("g", (y,)),))], [Atom("R", (x, y, z))])
        )


def test_validate_head_predicate_in_body():
    with pytest.raises(HeadPredicateInBodyError):
        validate_rule(raw("R", [x, FuncTerm("f", (y,))], [Atom("R", (x, y, z))]))


def test_validate_arity_clash():
    with pytest.raises(ArityClashError):
        validate_rule(
            raw("T", [x, FuncTerm("f", (y,))], [Atom("R", (x, y)), Atom("R", (x, y, z))])
        )


def test_flatten_moves_creation_args_into_head():
    q = validate_rule(raw("T", [x, FuncTerm("f", (y,))], [Atom("R", (x, y, z))]))
    flat = flatten_query(q)
    assert flat.head.args == (x, y)
    assert flat.head.predicate == "T_hat"
    assert flat.body == q.body


def test_flatten_family():
    q = validate_rule(
        raw(
            "Family",
            [c, FuncTerm("f", (x, y))],
            [Atom("Mother", (c, x)), Atom("Father", (c, y))],
        )
    )
    flat = flatten_query(q)
    assert flat.head.args == (c, x, y)


def test_flatten_repeated_head_variable():
    q = validate_rule(raw("T", [x, FuncTerm("f", (x,))], [Atom("R", (x, y, z))]))
    assert flatten_query(q).head.args == (x, x)


def test_flatten_injective_up_to_name():
    q1 = validate_rule(raw("T", [x, FuncTerm("f", (y,))], [Atom("R", (x, y, z))]))
    q2 = validate_rule(raw("T", [x, FuncTerm("g", (y,))], [Atom("R", (x, y, z))]))
    assert flatten_query(q1) == flatten_query(q2)  # symbol does not survive
    q3 = validate_rule(raw("T", [y, FuncTerm("f", (x,))], [Atom("R", (x, y, z))]))
    assert flatten_query(q1) != flatten_query(q3)


def test_flatten_avoids_body_predicate_collision():
    q = validate_rule(raw("T", [x, FuncTerm("f", (y,))], [Atom("T_hat", (x, y, z))]))
    assert flatten_query(q).head.predicate == "T_hat_"


def test_freeze_single_atom():
    frozen = freeze_body([Atom("R", (x, y, z))])
    assert frozen == {
        Fact("R", (Constant("frz:x"), Constant("frz:y"), Constant("frz:z")))
    }


def test_freeze_two_atoms():
    frozen = freeze_body([Atom("Mother", (c, x)), Atom("Father", (c, y))])
    assert len(frozen) == 2
    assert adom(frozen) == {
        Constant("frz:c"),
        Constant("frz:x"),
        Constant("frz:y"),
    }


def test_freeze_empty():
    assert freeze_body([]) == frozenset()


def test_freeze_bijection_with_variables():
    body = [Atom("R", (x, y, z)), Atom("S", (x, w))]
    frozen = freeze_body(body)
    assert len(frozen) == len(body)
    assert len(adom(frozen)) == 4


def test_head_args_roundtrip_position():
    q = validate_rule(raw("T", [FuncTerm("f", (y,)), x], [Atom("R", (x, y, z))]))
    assert q.func_pos == 0
    assert q.head_args == (FuncTerm("f", (y,)), x)
    assert q.render() == "T(f(y),x) <- R(x,y,z)."
