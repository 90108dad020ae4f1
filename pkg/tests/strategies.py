"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from qpbcalc.hopf import mono_element, monomials_up_to
from qpbcalc.scalar import RatQ, qconst

small = st.integers(min_value=-5, max_value=5)


@st.composite
def laurent(draw, max_terms=3):
    out = RatQ.of(0)
    for _ in range(draw(st.integers(1, max_terms))):
        c = draw(small)
        e = draw(st.integers(-3, 3))
        out = out + qconst(e) * c
    return out


@st.composite
def ratq(draw):
    num = draw(laurent())
    den = draw(laurent())
    if den.is_zero():
        den = RatQ.of(1)
    c = draw(st.fractions(min_value=-3, max_value=3, max_denominator=4))
    return num / den * RatQ.of(Fraction(c)) if c else num / den


def elements(alg, degree=2, bound=1, max_terms=3):
    monos = monomials_up_to(alg, degree, bound)

    @st.composite
    def build(draw):
        out = alg.zero()
        for _ in range(draw(st.integers(0, max_terms))):
            m = draw(st.sampled_from(monos))
            out = out + mono_element(alg, m).scale(draw(small) or 1)
        return out

    return build()
