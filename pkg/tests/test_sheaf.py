import dataclasses

import pytest

from qpbcalc.errors import LawViolation
from qpbcalc.fodc import quotient_calculus
from qpbcalc.scalar import qconst
from qpbcalc.sheaf import (
    OpenIndex,
    basic_opens,
    build_p1_bundle,
    chains,
    check_gluing,
    check_morphisms,
    check_presheaf_laws,
    coinvariants_match_base,
    constant_structure_calculus,
    horizontal_subsheaf,
    quantum_section_check,
)
from qpbcalc.standard import standard

O = OpenIndex
M, U1, U2, U12 = O(()), O.of(1), O.of(2), O.of(1, 2)


@pytest.fixture(scope="module")
def bundle():
    return build_p1_bundle(6)


def test_opens_and_chains():
    assert basic_opens(2) == [M, U1, U2, U12]
    assert [str(I) for I in basic_opens(2)] == ["M", "U1", "U2", "U12"]
    assert M.contains(U12) and U1.contains(U12) and not U1.contains(U2)
    strict = [c for c in chains(basic_opens(2), 3) if len(set(c)) == 3]
    assert sorted(strict) == sorted([(M, U1, U12), (M, U2, U12)])


def test_presheaf_laws(bundle):
    for s in (bundle.total_functions, bundle.base_functions, bundle.total_forms, bundle.base_forms):
        rep = check_presheaf_laws(s)
        assert rep.ok and rep.checked > 0, s.name


def test_restrictions_are_morphisms(bundle):
    assert check_morphisms(bundle).ok


def test_transition_map(bundle):
    v = bundle.base_functions.at(U2).gen("v")
    assert bundle.base_functions.r(U2, U12)(v) == bundle.base_functions.at(U12).gen("uinv")


def test_global_sections_are_constants(bundle):
    assert bundle.global_sections.is_constants()


def test_gluing(bundle):
    rep = check_gluing(bundle, 4, 2)
    assert rep.ok, rep.failures


@pytest.mark.parametrize("degree,bound", [(2, 1), (3, 2), (4, 3)])
def test_coinvariants_are_base_functions(bundle, degree, bound):
    dims = coinvariants_match_base(bundle, degree, bound)
    for I, (same, dco, dbase) in dims.items():
        assert same, (I, dco, dbase)
    # 1, u, ..., u^bound on a single chart
    assert dims["U1"][1] == bound + 1
    assert dims["M"][1] == 1


def test_horizontal_identity(bundle):
    assert horizontal_subsheaf(bundle, degree=2).ok


def test_quantum_sections():
    A = standard().A
    assert quantum_section_check(A.gen("alpha"))
    assert not quantum_section_check(A.gen("gamma"))  # pi(gamma) = 0 but gamma (x) t survives
    assert not quantum_section_check(A.gen("beta"))


def test_induced_calculi_on_structure_group():
    std = standard()
    qd = quotient_calculus(std.calc, std.quotient)
    cc = constant_structure_calculus(qd.calculus)
    assert cc.isomorphism.ok
    assert cc.u1.rank == 3
    # the induced calculus is three-dimensional; the quotient calculus only two
    assert not cc.matches_quotient
    assert "rank 3 vs 2" in cc.quotient_witness


def test_corrupted_restriction_is_caught(bundle):
    F = bundle.total_functions
    restrict = dict(F.restrict)
    good = restrict[(M, U12)]
    restrict[(M, U12)] = lambda x: good(x).scale(qconst(1))
    bad = dataclasses.replace(F, name="corrupted", restrict=restrict)
    assert not check_presheaf_laws(bad).ok
    with pytest.raises(LawViolation):
        check_presheaf_laws(bad, raise_on_failure=True)
