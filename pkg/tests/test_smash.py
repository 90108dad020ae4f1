import random

import pytest
from hypothesis import given, strategies as st

from qpbcalc.errors import CorrespondenceFailure, RoundTripFailure
from qpbcalc.fodc import Calculus, OneForm
from qpbcalc.hopf import TensorElement
from qpbcalc.scalar import qconst
from qpbcalc.smash import (
    build_correspondence,
    cleaving_u1,
    cleaving_u2,
    correspondence_check,
    random_form,
    random_smash,
    round_trip,
)
from qpbcalc.standard import standard

std = standard()
pure = TensorElement.pure


@pytest.fixture(scope="module")
def co1():
    return build_correspondence(std.chart("U1"), cleaving_u1())


@pytest.fixture(scope="module")
def co2():
    return build_correspondence(std.chart("U2"), cleaving_u2())


def test_cleaving_maps():
    assert cleaving_u1().verify(3) == []
    assert cleaving_u2().verify(3) == []


def test_cleaving_images():
    j = cleaving_u1()
    L, H = j.target, j.hopf.alg
    assert j(H.gen("p")) == L.gen("beta")
    assert j.inv(H.gen("t")) == L.gen("ainv")
    assert j(H.gen("t")) * j.inv(H.gen("t")) == L.one()


def test_pullback_ranks(co1, co2):
    for co in (co1, co2):
        assert co.sc.cB.rank == 1
        assert co.sc.cH.rank == 3
        assert co.calc.rank == 4


def test_action_on_u(co1):
    S = co1.smash
    B, H = S.B, S.H
    u = B.gen("u")
    assert S.act(H.gen("t"), u) == u.scale(qconst(-1))
    assert S.act(H.gen("tinv"), u) == u.scale(qconst(1))
    assert S.act(H.gen("p"), u).is_zero()


def test_action_on_v(co2):
    # p acting on v leaves the base's degree-one part: p > v = 1 - q^2
    S = co2.smash
    B, H = S.B, S.H
    v = B.gen("v")
    assert S.act(H.gen("t"), v) == v.scale(qconst(1))
    assert S.act(H.gen("p"), v) == B.one().scale(1 - qconst(2))
    assert S.act(H.gen("p"), v * v) == v.scale(qconst(-1) - qconst(3))


@pytest.mark.parametrize("which", ["co1", "co2"])
@given(seed=st.integers(0, 10**6))
def test_theta_is_multiplicative_and_bijective(which, seed, request):
    co = request.getfixturevalue(which)
    S = co.smash
    rng = random.Random(seed)
    x, y = random_smash(S, rng, 3), random_smash(S, rng, 3)
    assert S.theta(S.mul(x, y)) == S.theta(x) * S.theta(y)
    assert S.theta_inv(S.theta(x)) == x


@given(seed=st.integers(0, 10**6))
def test_smash_leibniz_u1(seed, co1):
    S, sc = co1.smash, co1.sc
    rng = random.Random(seed)
    x, z = random_smash(S, rng, 2), random_smash(S, rng, 2)
    assert sc.d(S.mul(x, z)) == sc.lmul(x, sc.d(z)) + sc.rmul(sc.d(x), z)


def test_smash_leibniz_breaks_on_u2(co2):
    # the action does not respect (dv) v = q^-2 v dv once p > v is a nonzero scalar
    S, sc = co2.smash, co2.sc
    B, H = S.B, S.H
    x = pure(B.one(), H.gen("p") * H.gen("p"))
    z = pure(B.gen("v"), H.one())
    assert sc.d(S.mul(x, z)) != sc.lmul(x, sc.d(z)) + sc.rmul(sc.d(x), z)


@pytest.mark.parametrize("which", ["co1", "co2"])
def test_sub_calculi_are_recovered(which, request):
    co = request.getfixturevalue(which)
    sc, S = co.sc, co.smash
    B, H = S.B, S.H
    for l in B.letters():
        g = pure(B.word_element((l,)), H.one())
        assert sc.d(g) == sc.part1(OneForm(sc.cB, sc.cB.dtable[l]), H.one())
    for l in H.letters():
        g = pure(B.one(), H.word_element((l,)))
        assert sc.d(g) == sc.part2(B.one(), OneForm(sc.cH, sc.cH.dtable[l]))


def test_theta_gamma_is_not_linear(co1):
    # [u, ainv d alpha] != 0 in the 4D+ calculus, so u ainv dalpha and ainv dalpha u differ
    c, L = co1.calc, co1.calc.alg
    u = L.gen("gamma") * L.gen("ainv")
    w = c.left_mul(L.gen("ainv"), c.d(L.gen("alpha")))
    assert c.left_mul(u, w) != c.right_mul(w, u)
    rep = correspondence_check(std.chart("U1"), cleaving_u1(), samples=5, raise_on_failure=False)
    names = {f[0] for f in rep.failures}
    assert "theta_Gamma left linear" in names
    assert not names & {"d_# restricts to d_B", "d_# restricts to d_H"}


def test_round_trip_failure(co1):
    with pytest.raises(RoundTripFailure):
        round_trip(co1, co1.calc.form(0))


def test_correspondence_raises(co1):
    with pytest.raises(CorrespondenceFailure):
        correspondence_check(std.chart("U1"), cleaving_u1(), samples=3)


def test_zero_calculus_closes():
    ch = std.chart("U1")
    L = ch.alg
    zero = Calculus(L, (), {l: [] for l in L.letters()}, {l: {} for l in L.letters()}, name="zero")
    rep = correspondence_check(ch, cleaving_u1(), calc=zero)
    assert rep.ok and rep.rank == 0


def test_perturbed_calculus_is_rejected():
    ch = std.chart("U1")
    c = ch.calc
    L = c.alg
    al = L.letter_of("alpha")
    dtable = dict(c.dtable)
    dtable[al] = {i: e.scale(2) for i, e in c.dtable[al].items()}
    bad = Calculus(L, c.labels, c.table, dtable, name="perturbed")
    assert bad.well_definedness_failures()
    with pytest.raises(CorrespondenceFailure):
        correspondence_check(ch, cleaving_u1(), calc=bad)


def test_random_form_lives_in_calculus(co1):
    w = random_form(co1.calc, random.Random(0))
    assert w.calc is co1.calc
