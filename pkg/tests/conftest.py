"""Shared fixtures: the worked examples used across the suite, plus tiny
brute-force oracles kept independent of the implementation under test."""

from __future__ import annotations

import itertools

import pytest

from oidcheck.model import Constant, adom, body_variables, oids
from oidcheck.parser import parse_extended_instance, parse_instance, parse_rule


# -- queries -------------------------------------------------------------------


@pytest.fixture
def family_q():
    return parse_rule("Family(c,f(x,y)) <- Mother(c,x), Father(c,y).")


@pytest.fixture
def family_q_prime():
    return parse_rule("Family(c,g(x,y,x)) <- Mother(c,x), Father(c,y).")


@pytest.fixture
def abstract_q():
    return parse_rule("T(x,f(y)) <- R(x,y,z).")


@pytest.fixture
def abstract_q_prime():
    return parse_rule("T(x,f(x,y)) <- R(x,y,z).")


@pytest.fixture
def keyed_q():
    return parse_rule("T(x,f(x)) <- R(x,y,z).")


@pytest.fixture
def keyed_q_prime():
    return parse_rule("T(x,f(x,y,z)) <- R(x,y,z).")


@pytest.fixture
def merge_q():
    return parse_rule("T(x,f(z1)) <- R(z1,x), R(z1,z2).")


@pytest.fixture
def merge_q_prime():
    return parse_rule("T(x,g(z1,z2)) <- R(z1,x), R(z1,z2).")


# -- instances -----------------------------------------------------------------


@pytest.fixture
def parents():
    return parse_instance(
        """
        Mother(beth,anne). Mother(ben,anne). Mother(eric,claire).
        Mother(emma,diana). Mother(dave,diana).
        Father(beth,adam). Father(ben,adam). Father(eric,carl). Father(emma,carl).
        """
    )


@pytest.fixture
def family_result():
    return parse_extended_instance(
        """
        Family(beth,f(anne,adam)). Family(ben,f(anne,adam)).
        Family(eric,f(claire,carl)). Family(emma,f(diana,carl)).
        """
    )


@pytest.fixture
def family_result_g():
    return parse_extended_instance(
        """
        Family(beth,g(anne,adam,anne)). Family(ben,g(anne,adam,anne)).
        Family(eric,g(claire,carl,claire)). Family(emma,g(diana,carl,diana)).
        """
    )


@pytest.fixture
def four_rows():
    return parse_instance("R(a,b,c). R(a,b,d). R(c,b,d). R(d,c,a).")


@pytest.fixture
def shared_middle():
    # two rows agreeing on the middle column
    return parse_instance("R(a,b,c). R(d,b,e).")


@pytest.fixture
def shared_first():
    # two rows agreeing on the first column
    return parse_instance("R(a,b,c). R(a,d,e).")


@pytest.fixture
def family_names_varied():
    return parse_instance(
        "Family(beth,jones). Family(ben,jones). Family(eric,simpson). Family(emma,smith)."
    )


@pytest.fixture
def family_names_constant():
    return parse_instance(
        "Family(beth,jones). Family(ben,jones). Family(eric,jones). Family(emma,jones)."
    )


@pytest.fixture
def family_names_split():
    return parse_instance(
        "Family(beth,jones). Family(ben,murphy). Family(eric,simpson). Family(emma,smith)."
    )


# -- independent brute-force oracles --------------------------------------------


def brute_matchings(body, instance) -> list[dict]:
    """Every valuation of the body variables into the active domain that maps
    all atoms into the instance; plain exhaustive enumeration."""
    from oidcheck.model import Fact

    variables = sorted(body_variables(body))
    domain = sorted(adom(instance), key=lambda c: c.name)
    found = []
    for assignment in itertools.product(domain, repeat=len(variables)):
        val = dict(zip(variables, assignment))
        if all(
            Fact(a.predicate, tuple(val[v] for v in a.args)) in instance for a in body
        ):
            found.append(val)
    return found


def brute_oid_isomorphic(j1, j2) -> bool:
    """Exhaustive bijection search between created terms; identity on
    constants."""
    if {t for t in adom(j1) if isinstance(t, Constant)} != {
        t for t in adom(j2) if isinstance(t, Constant)
    }:
        return False
    left = sorted(oids(j1), key=str)
    right = sorted(oids(j2), key=str)
    if len(left) != len(right):
        return False
    for image in itertools.permutations(right):
        rho = dict(zip(left, image))
        mapped = {
            type(f)(f.predicate, tuple(rho.get(a, a) for a in f.args)) for f in j1
        }
        if mapped == set(j2):
            return True
    return False


def brute_contained(qa, qb, instances) -> bool:
    """Is qb's result inside qa's on every given instance?"""
    from oidcheck.evaluation import eval_cq

    return all(eval_cq(qb, i) <= eval_cq(qa, i) for i in instances)
