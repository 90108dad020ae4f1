from fractions import Fraction

import pytest
from hypothesis import given

from qpbcalc.errors import StepLimitExceeded
from qpbcalc.ncalg import (
    Generator,
    Presentation,
    _w,
    check_confluence,
    commutative_fingerprint,
    enumerate_basis,
    presentation_b1,
    presentation_free,
    presentation_oq_m,
    presentation_oq_p,
    presentation_oq_sl2,
    presentation_uqsl2,
    render_element,
    rule,
    specialize_q,
)
from qpbcalc.scalar import lambda_const, qconst
from strategies import elements

A = presentation_oq_sl2()
al, be, ga, de = (A.gen(n) for n in ("alpha", "beta", "gamma", "delta"))
q = qconst(1)


def test_sl2_reorderings():
    assert be * al == (al * be).scale(q)
    assert de * al == A.one() + (be * ga).scale(q)
    assert al * de == A.one() + (be * ga).scale(qconst(-1))
    assert al * A.one() == al


def test_sl2_relations_by_hand():
    # alpha delta - delta alpha = (q^-1 - q) beta gamma
    assert al * de - de * al == (be * ga).scale(lambda_const())
    assert ga * be == be * ga


def test_quantum_plane_and_uq():
    P = presentation_oq_p()
    t, p = P.gen("t"), P.gen("p")
    assert p * t == (t * p).scale(q)
    assert t * P.gen("tinv") == P.one()
    U = presentation_uqsl2()
    E, F, K, Ki = (U.gen(n) for n in ("E", "F", "K", "Kinv"))
    assert K * Ki == U.one() == Ki * K
    assert E * F - F * E == (K * K - Ki * Ki).scale(lambda_const().inv())
    assert K * E == (E * K).scale(qconst(-1))
    assert K * F == (F * K).scale(q)


def test_free_algebra_b1():
    B = presentation_b1()
    u = B.gen("u")
    assert render_element(u * u) == "u^2"


def test_confluence_clean():
    for p in (presentation_oq_m(2), A, presentation_oq_p(), presentation_uqsl2()):
        assert check_confluence(p, 4).ok


def test_confluence_single_rule():
    P = presentation_free("one rule", ["a", "b"], [rule(_w((0, 1), (1, 1)), (_w((1, 1), (0, 1)), qconst(-1)))])
    rep = check_confluence(P, 5)
    assert rep.ok


def test_confluence_detects_inconsistency():
    gens = [Generator("a", 0), Generator("b", 1), Generator("c", 2)]
    # ab -> c and bc -> a overlap on abc with different normal forms
    rules = [rule(_w((0, 1), (1, 1)), (_w((2, 1)), 1)), rule(_w((1, 1), (2, 1)), (_w((0, 1)), 1))]
    rep = check_confluence(Presentation("bad", gens, rules), 4)
    assert not rep.ok


def test_enumerate_basis_counts():
    assert [A.render_monomial(m) for m in enumerate_basis(A, 1, 0)] == ["alpha", "beta", "gamma", "delta"]
    # a+b+c = 2 gives 6 words, b+c+d = 2 with d > 0 gives 3
    assert len(enumerate_basis(A, 2, 0)) == 9
    # PBW count of O_q(M_2) in degree 2 is 10
    assert len(enumerate_basis(presentation_oq_m(2), 2, 0)) == 10


def test_specialize():
    assert specialize_q(al * be - be * al, 1) == {}
    assert specialize_q((al * be).scale(q), 2) == {((0, 1), (1, 1)): Fraction(2)}
    assert commutative_fingerprint(de * al, 1) == {(): 1, ((1, 1), (2, 1)): 1}


def test_step_budget():
    P = presentation_oq_sl2()
    P.step_budget = 3
    with pytest.raises(StepLimitExceeded):
        P.word_element(((3, 1),) * 3 + ((0, 1),) * 3)


@given(elements(A), elements(A), elements(A))
def test_multiplication_is_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(elements(A), elements(A), elements(A))
def test_distributive(x, y, z):
    assert x * (y + z) == x * y + x * z
    assert (y + z) * x == y * x + z * x


@given(elements(A, degree=3))
def test_normal_forms_are_normal(x):
    for m in x.terms:
        assert A.is_normal_word(tuple((g, 1 if e > 0 else -1) for g, e in m for _ in range(abs(e))))


@given(elements(A), elements(A))
def test_classical_limit_commutes(x, y):
    assert commutative_fingerprint(x * y) == commutative_fingerprint(y * x)
