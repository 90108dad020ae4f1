"""Presented noncommutative algebras over RatQ and their normal forms.

A *letter* is ``(gen_index, sign)`` with sign +1 for a generator and -1 for the
inverse of an invertible generator.  A *word* is a tuple of letters.  A
*monomial* is the run-length form of an irreducible word: a tuple of
``(gen_index, exponent)`` pairs, consecutive indices distinct.  For all factory
presentations irreducible words are sorted, so monomials list generators in
increasing order.

Rewriting uses three kinds of redexes, tried in this priority:

1. a letter with a length-one rule (elimination such as delta -> ...);
2. the leftmost adjacent pair that has a rule, or is ``g g^-1`` / ``g^-1 g``;
3. an *elimination pair* ``x ... y`` whose intervening letters all commute
   with ``x`` up to a scalar.  The last ``x`` is moved next to the first ``y``
   (collecting the scalars) and the rule for ``x y`` is applied in the same
   step.  Without this, ``alpha beta delta`` would bounce between
   ``alpha delta`` and ``delta alpha`` forever.

Termination for the factory presentations: every adjacent rule removes a
descent (``y x`` with ``y > x``) or an inverse pair and never increases
length; the elimination step strictly lowers the number of (x, y) letters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import PresentationMismatch, StepLimitExceeded
from .scalar import ONE, ZERO, Coercible, RatQ, eval_at, lambda_const, qconst

Letter = tuple[int, int]
Word = tuple[Letter, ...]
Monomial = tuple[tuple[int, int], ...]
Terms = dict  # Monomial -> RatQ

DEFAULT_STEP_BUDGET = 10**6


@dataclass(frozen=True)
class Generator:
    name: str
    index: int
    invertible: bool = False
    inverse_name: str | None = None
    degree: int = 1


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: tuple[tuple[Word, RatQ], ...]

    def scalar(self) -> RatQ | None:
        """c when the rule reads ``y x -> c x y`` (a pure q-commutation)."""
        if len(self.lhs) != 2 or len(self.rhs) != 1:
            return None
        w, c = self.rhs[0]
        if w == (self.lhs[1], self.lhs[0]):
            return c
        return None


def word_to_monomial(w: Word) -> Monomial:
    out: list[list[int]] = []
    for g, s in w:
        if out and out[-1][0] == g:
            out[-1][1] += s
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, s])
    return tuple((g, e) for g, e in out)


def monomial_to_word(m: Monomial) -> Word:
    w: list[Letter] = []
    for g, e in m:
        s = 1 if e > 0 else -1
        w.extend([(g, s)] * abs(e))
    return tuple(w)


def mono_key(m: Monomial) -> tuple:
    """Deterministic display order: by length, then lexicographic."""
    return (sum(abs(e) for _, e in m), m)


class Presentation:
    """Ordered generators plus a rewriting system.

    ``eliminations`` lists generator pairs ``(x, y)``, ``x < y``, for which the
    non-adjacent redex of the module docstring is active.  ``ore`` maps a
    generator index to ``{partner: rhs}`` where rhs is the rewrite of the
    partner once that generator is inverted (used by module ore).
    ``root``/``inverted`` record how a localization was built.
    """

    def __init__(
        self,
        name: str,
        gens: Sequence[Generator],
        rules: Iterable[Rule],
        eliminations: Iterable[tuple[int, int]] = (),
        ore: Mapping[int, Mapping[int, tuple[tuple[Word, RatQ], ...]]] | None = None,
        root: "Presentation | None" = None,
        inverted: frozenset[int] = frozenset(),
        graded: bool = True,
        step_budget: int = DEFAULT_STEP_BUDGET,
        notes: str = "",
    ):
        self.name = name
        self.gens = tuple(gens)
        assert [g.index for g in self.gens] == list(range(len(self.gens)))
        self.rules = tuple(rules)
        self.eliminations = tuple(sorted(set(eliminations)))
        self.ore = {k: dict(v) for k, v in (ore or {}).items()}
        self.root = root
        self.inverted = frozenset(inverted)
        self.graded = graded
        self.step_budget = step_budget
        self.notes = notes
        self.by_name = {g.name: g for g in self.gens}
        self._unary: dict[Letter, Rule] = {}
        self._binary: dict[Word, Rule] = {}
        for r in self.rules:
            if len(r.lhs) == 1:
                self._unary.setdefault(r.lhs[0], r)
            else:
                self._binary.setdefault(r.lhs, r)
        self._elim_first = {x: y for x, y in self.eliminations}
        self._nf_cache: dict[Word, dict] = {}
        self._mul_cache: dict[tuple[Monomial, Monomial], dict] = {}

    # -- identity -----------------------------------------------------
    def signature(self) -> tuple:
        rules = tuple(sorted((r.lhs, tuple(sorted(r.rhs))) for r in self.rules))
        return (
            tuple((g.name, g.invertible, g.degree) for g in self.gens),
            tuple(sorted((r[0], tuple((w, (c.num.coeffs(), c.den.coeffs())) for w, c in r[1])) for r in rules)),
            self.eliminations,
        )

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Presentation):
            return NotImplemented
        return self.name == other.name and self.signature() == other.signature()

    def __hash__(self) -> int:
        return hash(self.name)

    def __repr__(self) -> str:
        return f"Presentation({self.name})"

    # -- letters ------------------------------------------------------
    def gen(self, name: str) -> "Element":
        for g in self.gens:
            if g.name == name:
                return self.word_element(((g.index, 1),))
            if g.invertible and g.inverse_name == name:
                return self.word_element(((g.index, -1),))
        raise KeyError(f"{name!r} is not a generator of {self.name}")

    def letter_of(self, name: str) -> Letter:
        for g in self.gens:
            if g.name == name:
                return (g.index, 1)
            if g.invertible and g.inverse_name == name:
                return (g.index, -1)
        raise KeyError(name)

    def letters(self) -> list[Letter]:
        out: list[Letter] = []
        for g in self.gens:
            out.append((g.index, 1))
            if g.invertible:
                out.append((g.index, -1))
        return out

    def letter_name(self, l: Letter) -> str:
        g = self.gens[l[0]]
        return g.name if l[1] > 0 else str(g.inverse_name)

    def one(self) -> "Element":
        return Element(self, {(): ONE})

    def zero(self) -> "Element":
        return Element(self, {})

    def scalar(self, c: Coercible) -> "Element":
        c = RatQ.of(c)
        return Element(self, {(): c} if not c.is_zero() else {})

    def degree(self, m: Monomial) -> int:
        return sum(self.gens[g].degree * e for g, e in m)

    # -- rewriting ----------------------------------------------------
    def _redexes(self, w: Word) -> Iterator[tuple[str, int, Rule | None]]:
        """All single-step redexes of w (used by the confluence check)."""
        for i, l in enumerate(w):
            if l in self._unary:
                for r in self.rules:
                    if r.lhs == (l,):
                        yield ("u", i, r)
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a[0] == b[0] and a[1] == -b[1]:
                yield ("c", i, None)
            for r in self.rules:
                if r.lhs == (a, b):
                    yield ("b", i, r)
        e = self._elim_redex(w)
        if e is not None:
            yield ("e", e[0], None)

    def _elim_redex(self, w: Word) -> tuple[int, int, Rule] | None:
        if not self._elim_first:
            return None
        for i, (g, s) in enumerate(w):
            if s != 1 or g not in self._elim_first:
                continue
            y = self._elim_first[g]
            # i must be the last occurrence of g before a y
            j = i + 1
            while j < len(w) and w[j] != (y, 1):
                if w[j] == (g, 1) or w[j][0] == g:
                    break
                j += 1
            if j < len(w) and w[j] == (y, 1) and j > i + 1:
                rule = self._binary.get(((g, 1), (y, 1)))
                if rule is None:
                    continue
                if all(self._commute_scalar(w[k], (g, 1)) is not None for k in range(i + 1, j)):
                    return (i, j, rule)
        return None

    def _commute_scalar(self, z: Letter, x: Letter) -> RatQ | None:
        """c with ``x z = c z x`` if the presentation provides it, else None."""
        r = self._binary.get((z, x))
        if r is not None:
            c = r.scalar()
            return None if c is None else c.inv()
        r = self._binary.get((x, z))
        if r is not None:
            return r.scalar()
        return None

    def _apply(self, w: Word, kind: str, i: int, rule: Rule | None) -> list[tuple[Word, RatQ]]:
        if kind == "u":
            return [(w[:i] + rw + w[i + 1 :], c) for rw, c in rule.rhs]
        if kind == "c":
            return [(w[:i] + w[i + 2 :], ONE)]
        if kind == "b":
            return [(w[:i] + rw + w[i + 2 :], c) for rw, c in rule.rhs]
        # elimination pair
        i0, j, rule = self._elim_redex(w)
        x = w[i0]
        coeff = ONE
        for k in range(i0 + 1, j):
            coeff = coeff * self._commute_scalar(w[k], x)
        head = w[:i0] + w[i0 + 1 : j]
        tail = w[j + 1 :]
        return [(head + rw + tail, coeff * c) for rw, c in rule.rhs]

    def _step(self, w: Word) -> list[tuple[Word, RatQ]] | None:
        if self._unary:
            for i, l in enumerate(w):
                r = self._unary.get(l)
                if r is not None:
                    return self._apply(w, "u", i, r)
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a[0] == b[0] and a[1] == -b[1]:
                return self._apply(w, "c", i, None)
            r = self._binary.get((a, b))
            if r is not None:
                return self._apply(w, "b", i, r)
        if self._elim_first:
            e = self._elim_redex(w)
            if e is not None:
                return self._apply(w, "e", e[0], None)
        return None

    def reduce_word(self, w: Word) -> dict:
        """Normal form of a word as {Monomial: RatQ}."""
        w = tuple(w)
        hit = self._nf_cache.get(w)
        if hit is not None:
            return hit
        result: dict = {}
        work: dict[Word, RatQ] = {w: ONE}
        steps = 0
        while work:
            # process the longest pending word first; merges duplicates early
            u = max(work, key=len)
            c = work.pop(u)
            if c.is_zero():
                continue
            cached = self._nf_cache.get(u)
            if cached is not None:
                for m, v in cached.items():
                    _acc(result, m, c * v)
                continue
            nxt = self._step(u)
            steps += 1
            if steps > self.step_budget:
                raise StepLimitExceeded(f"{self.name}: more than {self.step_budget} rewrite steps")
            if nxt is None:
                _acc(result, word_to_monomial(u), c)
                continue
            for v, k in nxt:
                _acc(work, v, c * k)
        if len(self._nf_cache) < 200000:
            self._nf_cache[w] = result
        return result

    def is_normal_word(self, w: Word) -> bool:
        return self._step(tuple(w)) is None

    def mul_monomials(self, a: Monomial, b: Monomial) -> dict:
        if not a:
            return {b: ONE}
        if not b:
            return {a: ONE}
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is None:
            hit = self.reduce_word(monomial_to_word(a) + monomial_to_word(b))
            if len(self._mul_cache) < 400000:
                self._mul_cache[key] = hit
        return hit

    # -- convenience --------------------------------------------------
    def relations(self) -> list[tuple[Word, tuple[tuple[Word, RatQ], ...]]]:
        """Defining relations lhs = rhs, including g g^-1 = 1 = g^-1 g."""
        rels = [(r.lhs, r.rhs) for r in self.rules]
        for g in self.gens:
            if g.invertible:
                rels.append((((g.index, 1), (g.index, -1)), (((), ONE),)))
                rels.append((((g.index, -1), (g.index, 1)), (((), ONE),)))
        return rels

    def word_element(self, w: Word) -> "Element":
        return Element(self, dict(self.reduce_word(w)))

    def render_monomial(self, m: Monomial) -> str:
        if not m:
            return "1"
        parts = []
        for g, e in m:
            gg = self.gens[g]
            nm = gg.name if e > 0 else str(gg.inverse_name)
            parts.append(nm if abs(e) == 1 else f"{nm}^{abs(e)}")
        return " * ".join(parts)


def _acc(d: dict, k, v: RatQ) -> None:
    if v.is_zero():
        return
    old = d.get(k)
    if old is None:
        d[k] = v
    else:
        s = old + v
        if s.is_zero():
            del d[k]
        else:
            d[k] = s


class Element:
    """Finite RatQ-combination of normal monomials of one presentation."""

    __slots__ = ("alg", "terms", "_hash")

    def __init__(self, alg: Presentation, terms: Mapping[Monomial, RatQ]):
        self.alg = alg
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}
        self._hash = None

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "Element") -> None:
        if other.alg is not self.alg and other.alg != self.alg:
            raise PresentationMismatch(f"{self.alg.name} vs {other.alg.name}")

    def _lift(self, other) -> "Element":
        if isinstance(other, Element):
            self._check(other)
            return other
        return self.alg.scalar(other)

    def __add__(self, other) -> "Element":
        o = self._lift(other)
        t = dict(self.terms)
        for m, c in o.terms.items():
            _acc(t, m, c)
        return Element(self.alg, t)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Element":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Element":
        return self._lift(other) - self

    def scale(self, c: Coercible) -> "Element":
        c = RatQ.of(c)
        if c.is_zero():
            return Element(self.alg, {})
        return Element(self.alg, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other) -> "Element":
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c = c1 * c2
                for m, v in self.alg.mul_monomials(m1, m2).items():
                    _acc(out, m, c * v)
        return Element(self.alg, out)

    def __rmul__(self, other) -> "Element":
        return self.scale(other)

    def __pow__(self, n: int) -> "Element":
        if n < 0:
            raise ValueError("negative power of an element")
        r = self.alg.one()
        for _ in range(n):
            r = r * self
        return r

    # -- comparison ---------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, RatQ)) and not isinstance(other, bool):
            other = self.alg.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return (other.alg is self.alg or other.alg == self.alg) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, m: Monomial) -> RatQ:
        return self.terms.get(m, ZERO)

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms, key=mono_key)

    def degree_set(self) -> set[int]:
        return {self.alg.degree(m) for m in self.terms}

    def __repr__(self) -> str:
        return render_element(self)

    __str__ = __repr__


def render_coeff_prefix(c: RatQ, body: str | None) -> str:
    """Render ``c * body`` (body None means a bare scalar); sign handled by caller."""
    from .scalar import render

    s = render(c)
    if body is None:
        return s
    if c.is_one():
        return body
    if s == "-1":
        return "-" + body
    multi = ("+" in s[1:] or " - " in s) and not s.startswith("(")
    if "/" in s and not multi:
        # a bare fraction binds loosely against *, parenthesize for clarity
        return f"({s}) * {body}"
    if multi:
        return f"({s}) * {body}"
    return f"{s} * {body}"


def render_terms(pairs: list[tuple[str | None, RatQ]]) -> str:
    """Join rendered (body, coeff) terms with + / - signs."""
    if not pairs:
        return "0"
    out = []
    for body, c in pairs:
        t = render_coeff_prefix(c, body)
        if out:
            if t.startswith("-") and not t.startswith("(-"):
                out.append(" - " + t[1:])
            else:
                out.append(" + " + t)
        else:
            out.append(t)
    return "".join(out)


def render_element(x: Element) -> str:
    pairs = []
    for m in x.monomials():
        pairs.append((x.alg.render_monomial(m) if m else None, x.terms[m]))
    return render_terms(pairs)


# -- constructors of rules --------------------------------------------------


def _w(*letters: Letter) -> Word:
    return tuple(letters)


def rule(lhs: Word, *rhs: tuple[Word, Coercible]) -> Rule:
    return Rule(tuple(lhs), tuple((tuple(w), RatQ.of(c)) for w, c in rhs if not RatQ.of(c).is_zero()))


def derive_inverse_rules(gens: Sequence[Generator], rules: Sequence[Rule], inverted: Iterable[int]) -> list[Rule]:
    """Commutation rules for inverse letters from the scalar rules.

    From ``z g -> c g z`` (z > g) we get ``z g^-1 -> c^-1 g^-1 z``; from
    ``g z -> c z g`` (g > z) we get ``g^-1 z -> c^-1 z g^-1``.  Two inverse
    letters commute with the inverse scalar of the underlying pair.
    """
    inv = set(inverted)
    scal: dict[tuple[int, int], RatQ] = {}
    for r in rules:
        c = r.scalar()
        if c is None:
            continue
        (y, sy), (x, sx) = r.lhs
        if sy == 1 and sx == 1:
            scal[(y, x)] = c  # y x = c x y, y > x
    out: list[Rule] = []
    for (y, x), c in sorted(scal.items()):
        # y x -> c x y ; inverses:
        if x in inv:  # y x^-1 = c^-1 x^-1 y
            out.append(rule(_w((y, 1), (x, -1)), (_w((x, -1), (y, 1)), c.inv())))
        if y in inv:  # y^-1 x = c^-1 x y^-1
            out.append(rule(_w((y, -1), (x, 1)), (_w((x, 1), (y, -1)), c.inv())))
        if x in inv and y in inv:  # y^-1 x^-1 = c x^-1 y^-1
            out.append(rule(_w((y, -1), (x, -1)), (_w((x, -1), (y, -1)), c)))
    return out


# -- factory presentations --------------------------------------------------


def presentation_oq_m(n: int) -> Presentation:
    """Quantum matrix bialgebra O_q(M_n) with Manin relations.

    Generators a_ij in lexicographic order; every rule rewrites a descent
    ``a_kl a_ij`` (kl > ij) so the order is deglex by misordering.
    """
    if n < 2:
        raise ValueError("n >= 2 required")
    lam = lambda_const()
    q = qconst(1)
    idx = {}
    gens = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            idx[(i, j)] = len(gens)
            gens.append(Generator(f"a{i}{j}", len(gens)))
    rules = []
    for (i, j), a in idx.items():
        for (k, l), b in idx.items():
            if b <= a:
                continue
            # a < b in the order; rewrite b a
            if i == k:  # same row, j < l: a_il a_ij -> q a_ij a_il
                rules.append(rule(_w((b, 1), (a, 1)), (_w((a, 1), (b, 1)), q)))
            elif j == l:  # same column
                rules.append(rule(_w((b, 1), (a, 1)), (_w((a, 1), (b, 1)), q)))
            elif j < l:  # i < k, j < l
                rules.append(
                    rule(
                        _w((b, 1), (a, 1)),
                        (_w((a, 1), (b, 1)), 1),
                        (_w((idx[(i, l)], 1), (idx[(k, j)], 1)), -lam),
                    )
                )
            else:  # i < k, j > l
                rules.append(rule(_w((b, 1), (a, 1)), (_w((a, 1), (b, 1)), 1)))
    return Presentation(f"O_q(M_{n})", gens, rules, notes="Manin relations; descents rewritten")


AL, BE, GA, DE = 0, 1, 2, 3


def _sl2_gens(inv: Iterable[int] = ()) -> list[Generator]:
    inv = set(inv)
    return [
        Generator("alpha", AL, AL in inv, "ainv" if AL in inv else None),
        Generator("beta", BE),
        Generator("gamma", GA, GA in inv, "ginv" if GA in inv else None),
        Generator("delta", DE),
    ]


def sl2_base_rules() -> list[Rule]:
    q = qconst(1)
    qi = qconst(-1)
    return [
        rule(_w((BE, 1), (AL, 1)), (_w((AL, 1), (BE, 1)), q)),
        rule(_w((GA, 1), (AL, 1)), (_w((AL, 1), (GA, 1)), q)),
        rule(_w((DE, 1), (BE, 1)), (_w((BE, 1), (DE, 1)), q)),
        rule(_w((DE, 1), (GA, 1)), (_w((GA, 1), (DE, 1)), q)),
        rule(_w((GA, 1), (BE, 1)), (_w((BE, 1), (GA, 1)), 1)),
        rule(_w((DE, 1), (AL, 1)), ((), 1), (_w((BE, 1), (GA, 1)), q)),
        rule(_w((AL, 1), (DE, 1)), ((), 1), (_w((BE, 1), (GA, 1)), qi)),
    ]


def _sl2_ore() -> dict:
    qi = qconst(-1)
    return {
        # alpha inverted: delta = alpha^-1 (1 + q^-1 beta gamma)
        AL: {DE: ((_w((AL, -1)), ONE), (_w((AL, -1), (BE, 1), (GA, 1)), qi))},
        GA: {},
    }


def presentation_oq_sl2() -> Presentation:
    """O_q(SL_2): alpha < beta < gamma < delta.

    Normal monomials alpha^a beta^b gamma^c and beta^b gamma^c delta^d; the
    pair (alpha, delta) is eliminated through the determinant relation.
    """
    return Presentation(
        "O_q(SL_2)",
        _sl2_gens(),
        sl2_base_rules(),
        eliminations=[(AL, DE)],
        ore=_sl2_ore(),
        graded=False,
        notes="descents rewritten; alpha..delta eliminated non-adjacently",
    )


def presentation_oq_p() -> Presentation:
    """O_q(P) = O_q(SL_2)/(gamma): t invertible, t p = q^-1 p t.  Normal form t^k p^m."""
    q = qconst(1)
    gens = [Generator("t", 0, True, "tinv"), Generator("p", 1)]
    base = [rule(_w((1, 1), (0, 1)), (_w((0, 1), (1, 1)), q))]
    return Presentation("O_q(P)", gens, base + derive_inverse_rules(gens, base, [0]), inverted=frozenset({0}))


def presentation_uqsl2() -> Presentation:
    """U_q(sl_2): F < K < E, K invertible.  Normal form F^a K^b E^c."""
    q = qconst(1)
    lam = lambda_const()
    F, K, E = 0, 1, 2
    gens = [Generator("F", F), Generator("K", K, True, "Kinv", 0), Generator("E", E)]
    base = [
        rule(_w((K, 1), (F, 1)), (_w((F, 1), (K, 1)), q)),
        rule(_w((E, 1), (K, 1)), (_w((K, 1), (E, 1)), q)),
        rule(
            _w((E, 1), (F, 1)),
            (_w((F, 1), (E, 1)), 1),
            (_w((K, 1), (K, 1)), lam.inv()),
            (_w((K, -1), (K, -1)), -lam.inv()),
        ),
    ]
    return Presentation(
        "U_q(sl_2)", gens, base + derive_inverse_rules(gens, base, [K]), inverted=frozenset({K}), graded=False
    )


def presentation_b1() -> Presentation:
    return Presentation("B_1", [Generator("u", 0, False, "uinv")], [])


def presentation_b2() -> Presentation:
    return Presentation("B_2", [Generator("v", 0, False, "vinv")], [])


def presentation_free(name: str, names: Sequence[str], rules: Iterable[Rule] = ()) -> Presentation:
    """Ad-hoc presentation; used for tests and negative controls."""
    gens = [Generator(n, i) for i, n in enumerate(names)]
    return Presentation(name, gens, rules)


# -- analysis ---------------------------------------------------------------


@dataclass
class ConfluenceReport:
    presentation: str
    max_len: int
    words_checked: int = 0
    violations: list[tuple[Word, dict, dict]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _normalize_terms(p: Presentation, pairs: list[tuple[Word, RatQ]]) -> dict:
    out: dict = {}
    for w, c in pairs:
        for m, v in p.reduce_word(w).items():
            _acc(out, m, c * v)
    return out


def _overlap_words(p: Presentation, max_len: int) -> Iterator[Word]:
    """Words built by chaining rule left sides and inverse pairs along overlaps.

    Any word with two redexes whose supports overlap arises this way; disjoint
    redexes commute trivially.  Elimination redexes span arbitrary scalar
    letters, so we also include every word up to max_len over the letters
    involved in elimination pairs, which covers their overlaps exhaustively.
    """
    seeds: set[Word] = set()
    for r in p.rules:
        seeds.add(r.lhs)
    for l in p.letters():
        if l[1] == -1:
            seeds.add(((l[0], 1), l))
            seeds.add((l, (l[0], 1)))
    frontier = set(seeds)
    seen = set(seeds)
    while frontier:
        nxt = set()
        for w in frontier:
            for s in seeds:
                for k in range(1, min(len(w), len(s))):
                    if w[-k:] == s[:k]:
                        v = w + s[k:]
                        if len(v) <= max_len and v not in seen:
                            seen.add(v)
                            nxt.add(v)
                # concatenation without overlap can still hide a redex
                # spanning the junction, handled by letter extension below
        frontier = nxt
    ext = set(seen)
    letters = p.letters()
    for w in seen:
        for l in letters:
            for v in ((l,) + w, w + (l,)):
                if len(v) <= max_len:
                    ext.add(v)
    if p.eliminations:
        for n in range(2, max_len + 1):
            for v in itertools.product(letters, repeat=n):
                ext.add(v)
    return iter(sorted(ext))


def check_confluence(p: Presentation, max_overlap_len: int = 5, exhaustive: bool = False) -> ConfluenceReport:
    """Local confluence: every single step from a word reaches the same normal form.

    With ``exhaustive`` all words up to the length are tried; otherwise the
    overlap words of the rule set (plus one letter on either side).
    """
    rep = ConfluenceReport(p.name, max_overlap_len)
    if exhaustive:
        words: Iterable[Word] = (
            v for n in range(2, max_overlap_len + 1) for v in itertools.product(p.letters(), repeat=n)
        )
    else:
        words = _overlap_words(p, max_overlap_len)
    for w in words:
        reds = list(p._redexes(w))
        if len(reds) < 2:
            continue
        rep.words_checked += 1
        results = []
        for kind, i, r in reds:
            results.append(_normalize_terms(p, p._apply(w, kind, i, r)))
        first = results[0]
        for other in results[1:]:
            if other != first:
                rep.violations.append((w, first, other))
                break
    return rep


def enumerate_basis(p: Presentation, degree: int, exponent_bound: int) -> list[Monomial]:
    """Normal monomials of total degree ``degree`` with |exponent| <= bound on invertibles."""
    n_inv = sum(1 for g in p.gens if g.invertible)
    top = max(degree, 0) + exponent_bound * n_inv * max((g.degree for g in p.gens), default=1)
    ranges = []
    for g in p.gens:
        if g.invertible:
            ranges.append(range(-exponent_bound, exponent_bound + 1))
        else:
            ranges.append(range(0, top + 1))
    found: set[Monomial] = set()
    for exps in itertools.product(*ranges):
        if sum(e * g.degree for e, g in zip(exps, p.gens)) != degree:
            continue
        m = tuple((g.index, e) for g, e in zip(p.gens, exps) if e != 0)
        w = monomial_to_word(m)
        if p.is_normal_word(w):
            found.add(m)
    return sorted(found, key=mono_key)


def specialize_q(x: Element, q0) -> dict:
    """Coefficient map at q = q0 (zero entries dropped)."""
    out = {}
    for m, c in x.terms.items():
        v = eval_at(c, q0)
        if v != 0:
            out[m] = v
    return out


def commutative_fingerprint(x: Element, q0=1) -> dict:
    """Evaluate at q0 and forget the order of letters: a commutative polynomial."""
    out: dict = {}
    for m, c in x.terms.items():
        v = eval_at(c, q0)
        key = tuple(sorted(m))
        out[key] = out.get(key, 0) + v
    return {k: v for k, v in out.items() if v != 0}
