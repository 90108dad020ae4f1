"""Exact scalars: rational functions in q with rational coefficients.

Internally a value is a reduced fraction of polynomials in a formal variable
``r`` with ``q = r**2``, so that the half powers ``q^(1/2)`` needed by the
U_q(sl2) pairing live in the same field as everything else.  Numerator and
denominator are ``flint.fmpq_poly``; the denominator is kept monic, which makes
the representation canonical.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Union

from flint import fmpq, fmpq_poly

from .errors import DivisionByZero, PoleAtPoint

_ZERO = fmpq_poly([])
_ONE = fmpq_poly([1])

Coercible = Union["RatQ", int, Fraction]


def _monic_split(num: fmpq_poly, den: fmpq_poly) -> tuple[fmpq_poly, fmpq_poly]:
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    if num.is_zero():
        return _ZERO, _ONE
    g = num.gcd(den)
    if g.degree() > 0:
        num = num // g
        den = den // g
    lead = den[den.degree()]
    if lead != 1:
        num = num / lead
        den = den / lead
    return num, den


class RatQ:
    """An element of Q(r), r**2 = q.  Immutable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: fmpq_poly, den: fmpq_poly = _ONE, canonical: bool = False):
        if not canonical:
            num, den = _monic_split(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def of(cls, x: Coercible) -> "RatQ":
        if isinstance(x, RatQ):
            return x
        if isinstance(x, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(x, int):
            return cls(fmpq_poly([x]), _ONE, True) if x else ZERO
        if isinstance(x, Fraction):
            if x == 0:
                return ZERO
            return cls(fmpq_poly([fmpq(x.numerator, x.denominator)]), _ONE, True)
        raise TypeError(f"cannot coerce {type(x).__name__} to RatQ")

    @classmethod
    def rpow(cls, k: int) -> "RatQ":
        """r**k, i.e. q**(k/2)."""
        if k >= 0:
            return cls(fmpq_poly([0] * k + [1]), _ONE, True)
        return cls(_ONE, fmpq_poly([0] * (-k) + [1]), True)

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den == _ONE and self.num == _ONE

    def is_constant(self) -> bool:
        return self.den == _ONE and self.num.degree() <= 0

    def in_q(self) -> bool:
        """True when only integral powers of q occur."""
        return all(self.num[i] == 0 for i in range(1, self.num.degree() + 1, 2)) and all(
            self.den[i] == 0 for i in range(1, self.den.degree() + 1, 2)
        )

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: Coercible) -> "RatQ":
        o = RatQ.of(other)
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.den == o.den:
            return RatQ(self.num + o.num, self.den)
        return RatQ(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatQ":
        return RatQ(-self.num, self.den, True)

    def __sub__(self, other: Coercible) -> "RatQ":
        return self + (-RatQ.of(other))

    def __rsub__(self, other: Coercible) -> "RatQ":
        return RatQ.of(other) - self

    def __mul__(self, other: Coercible) -> "RatQ":
        o = RatQ.of(other)
        if self.is_zero() or o.is_zero():
            return ZERO
        if o.den == _ONE and self.den == _ONE:
            return RatQ(self.num * o.num, _ONE, True)
        return RatQ(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "RatQ":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return RatQ(self.den, self.num)

    def __truediv__(self, other: Coercible) -> "RatQ":
        return self * RatQ.of(other).inv()

    def __rtruediv__(self, other: Coercible) -> "RatQ":
        return RatQ.of(other) * self.inv()

    def __pow__(self, n: int) -> "RatQ":
        if n < 0:
            return self.inv() ** (-n)
        return RatQ(self.num**n, self.den**n, True)

    # -- comparison ---------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = RatQ.of(other)
        if not isinstance(other, RatQ):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((tuple(self.num.coeffs()), tuple(self.den.coeffs())))
        return self._hash

    # -- evaluation ---------------------------------------------------
    def eval_r(self, r0: Fraction) -> Fraction:
        """Exact value at r = r0."""
        r0 = fmpq(Fraction(r0).numerator, Fraction(r0).denominator)
        d = self.den(r0)
        if d == 0:
            raise PoleAtPoint(f"denominator vanishes at r = {r0}")
        v = self.num(r0) / d
        return Fraction(int(v.p), int(v.q))

    def __repr__(self) -> str:
        return f"RatQ({render(self)})"

    def __str__(self) -> str:
        return render(self)


ZERO = RatQ(_ZERO, _ONE, True)
ONE = RatQ(_ONE, _ONE, True)


def qconst(n: int) -> RatQ:
    return RatQ.rpow(2 * n)


def qhalf(k: int) -> RatQ:
    """q**(k/2)."""
    return RatQ.rpow(k)


def lambda_const() -> RatQ:
    return qconst(-1) - qconst(1)


def big_q_const() -> RatQ:
    """(lambda^2 (q^-1 + 1) - 1) / lambda, the constant in d(beta) of the 4D+ calculus."""
    lam = lambda_const()
    return (lam * lam * (qconst(-1) + 1) - 1) / lam


def _exact_sqrt(x: Fraction) -> Fraction | None:
    from math import isqrt

    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    a, b = isqrt(n), isqrt(d)
    if a * a == n and b * b == d:
        return Fraction(a, b)
    return None


def eval_at(x: Coercible, q0) -> Fraction:
    """Exact value of x at q = q0.

    Values involving half powers of q need q0 to be the square of a rational;
    otherwise the value is irrational and ValueError is raised.
    """
    x = RatQ.of(x)
    q0 = Fraction(q0)
    if x.in_q():
        # substitute r -> sqrt(q0) through the even polynomials
        num = fmpq_poly([x.num[i] for i in range(0, x.num.degree() + 1, 2)]) if not x.num.is_zero() else _ZERO
        den = fmpq_poly([x.den[i] for i in range(0, x.den.degree() + 1, 2)])
        qq = fmpq(q0.numerator, q0.denominator)
        d = den(qq)
        if d == 0:
            raise PoleAtPoint(f"denominator vanishes at q = {q0}")
        v = num(qq) / d
        return Fraction(int(v.p), int(v.q))
    r0 = _exact_sqrt(q0)
    if r0 is None:
        raise ValueError(f"value involves half powers of q; q = {q0} is not a rational square")
    return x.eval_r(r0)


# -- rendering ---------------------------------------------------------


def _fmt_rat(c: fmpq) -> str:
    if c.q == 1:
        return str(int(c.p))
    return f"{int(c.p)}/{int(c.q)}"


def _fmt_power(k: int) -> str:
    """q**(k/2) as text, k = r-exponent."""
    if k % 2 == 0:
        e = k // 2
        if e == 1:
            return "q"
        return f"q^{e}"
    return f"q^({k}/2)"


def _poly_terms(p: fmpq_poly, shift: int = 0) -> list[tuple[int, fmpq]]:
    return [(i + shift, p[i]) for i in range(p.degree() + 1) if p[i] != 0]


def _render_terms(terms: list[tuple[int, fmpq]]) -> str:
    out: list[str] = []
    for k, c in terms:
        neg = c < 0
        a = -c if neg else c
        if k == 0:
            body = _fmt_rat(a)
        elif a == 1:
            body = _fmt_power(k)
        else:
            body = f"{_fmt_rat(a)}*{_fmt_power(k)}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def render(x: RatQ) -> str:
    """ASCII rendering, ascending powers of q.

    A denominator that is a pure power of q is folded into negative exponents;
    anything else prints as ``N/D`` with multi-term parts parenthesized.
    """
    if x.is_zero():
        return "0"
    den = x.den
    dterms = _poly_terms(den)
    if len(dterms) == 1:
        shift = -dterms[0][0]
        return _render_terms(_poly_terms(x.num, shift))
    # clear rational content of the denominator, then pull out its lowest power
    scale = fmpq(1)
    for _, c in dterms:
        scale = fmpq(lcm(int(scale.p), int(c.q)))
    content = 0
    for _, c in dterms:
        content = gcd(content, int((c * scale).p))
    scale = scale / content
    low = dterms[0][0]
    dterms = [(k - low, c * scale) for k, c in dterms]
    nterms = [(k, c * scale) for k, c in _poly_terms(x.num, -low)]
    n = _render_terms(nterms)
    d = _render_terms(dterms)
    if len(nterms) > 1:
        n = f"({n})"
    return f"{n}/({d})"
