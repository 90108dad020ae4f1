"""Hopf structure maps, quotients, coactions, coinvariants and the U_q(sl2) pairing."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .errors import AxiomViolation, NoHopfData, NotAHopfIdeal
from .linalg import kernel, probe_affine, solve_affine
from .ncalg import (
    AL,
    BE,
    DE,
    GA,
    Element,
    Generator,
    Monomial,
    Presentation,
    Rule,
    _acc,
    derive_inverse_rules,
    enumerate_basis,
    mono_key,
    monomial_to_word,
    presentation_oq_sl2,
    presentation_uqsl2,
    render_terms,
    rule,
    word_to_monomial,
)
from .ore import algebra_map
from .scalar import ONE, ZERO, Coercible, RatQ, qconst, qhalf

DEFAULT_CHECK_DEGREE = 4


class TensorElement:
    """Element of A_1 (x) ... (x) A_k as {(m_1, ..., m_k): coeff}."""

    __slots__ = ("algs", "terms")

    def __init__(self, algs: Sequence[Presentation], terms: Mapping[tuple, RatQ]):
        self.algs = tuple(algs)
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    @classmethod
    def pure(cls, *xs: Element) -> "TensorElement":
        out: dict = {}
        for combo in itertools.product(*[list(x.terms.items()) for x in xs]):
            c = ONE
            for _, v in combo:
                c = c * v
            _acc(out, tuple(m for m, _ in combo), c)
        return cls([x.alg for x in xs], out)

    @classmethod
    def one(cls, algs: Sequence[Presentation]) -> "TensorElement":
        return cls(algs, {tuple(() for _ in algs): ONE})

    def __add__(self, other: "TensorElement") -> "TensorElement":
        t = dict(self.terms)
        for k, c in other.terms.items():
            _acc(t, k, c)
        return TensorElement(self.algs, t)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.algs, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c: Coercible) -> "TensorElement":
        c = RatQ.of(c)
        return TensorElement(self.algs, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                parts = [list(A.mul_monomials(a, b).items()) for A, a, b in zip(self.algs, k1, k2)]
                c = c1 * c2
                for combo in itertools.product(*parts):
                    v = c
                    for _, x in combo:
                        v = v * x
                    _acc(out, tuple(m for m, _ in combo), v)
        return TensorElement(self.algs, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def map_factor(self, i: int, f: Callable[[Element], Element], new_alg: Presentation | None = None) -> "TensorElement":
        """Apply a linear map to factor i (f receives single-monomial Elements)."""
        algs = list(self.algs)
        src = algs[i]
        cache: dict = {}
        out: dict = {}
        for k, c in self.terms.items():
            img = cache.get(k[i])
            if img is None:
                img = f(Element(src, {k[i]: ONE}))
                cache[k[i]] = img
            for m, v in img.terms.items():
                _acc(out, k[:i] + (m,) + k[i + 1 :], c * v)
        if new_alg is not None:
            algs[i] = new_alg
        elif cache:
            algs[i] = next(iter(cache.values())).alg
        return TensorElement(algs, out)

    def map_left(self, f: Callable[[Element], Element]) -> "TensorElement":
        return self.map_factor(0, f)

    def expand_factor(self, i: int, f: Callable[[Element], "TensorElement"]) -> "TensorElement":
        """Replace factor i by a tensor (e.g. a coproduct), raising the arity."""
        out: dict = {}
        algs = None
        for k, c in self.terms.items():
            t = f(Element(self.algs[i], {k[i]: ONE}))
            if algs is None:
                algs = self.algs[:i] + t.algs + self.algs[i + 1 :]
            for kk, v in t.terms.items():
                _acc(out, k[:i] + kk + k[i + 1 :], c * v)
        if algs is None:
            algs = self.algs[:i] + (self.algs[i],) * 2 + self.algs[i + 1 :]
        return TensorElement(algs, out)

    def contract(self, f: Callable[[tuple], Element], alg: Presentation) -> Element:
        out = alg.zero()
        for k, c in self.terms.items():
            out = out + f(k).scale(c)
        return out

    def keys_sorted(self) -> list[tuple]:
        return sorted(self.terms, key=lambda k: tuple(mono_key(m) for m in k))

    def __repr__(self) -> str:
        pairs = []
        for k in self.keys_sorted():
            body = " (x) ".join(A.render_monomial(m) for A, m in zip(self.algs, k))
            pairs.append((body, self.terms[k]))
        return render_terms(pairs)


def mono_element(A: Presentation, m: Monomial) -> Element:
    return Element(A, {m: ONE})


class HopfData:
    """Generator data for Delta, epsilon and S on a presentation.

    Letters of inverse generators carry their own data.  The maps extend
    (anti-)multiplicatively over normal monomials with caching.
    """

    def __init__(
        self,
        alg: Presentation,
        delta: Mapping[tuple[int, int], TensorElement],
        eps: Mapping[tuple[int, int], RatQ],
        antipode: Mapping[tuple[int, int], Element],
        name: str = "",
    ):
        self.alg = alg
        self.delta = dict(delta)
        self.eps = dict(eps)
        self.S = dict(antipode)
        self.name = name or alg.name
        self._dcache: dict = {}
        self._ecache: dict = {}
        self._scache: dict = {}

    def coproduct_mono(self, m: Monomial) -> TensorElement:
        hit = self._dcache.get(m)
        if hit is None:
            A = self.alg
            hit = TensorElement.one((A, A))
            for l in monomial_to_word(m):
                hit = hit * self.delta[l]
            self._dcache[m] = hit
        return hit

    def coproduct(self, x: Element) -> TensorElement:
        out: dict = {}
        for m, c in x.terms.items():
            for k, v in self.coproduct_mono(m).terms.items():
                _acc(out, k, c * v)
        return TensorElement((self.alg, self.alg), out)

    def counit_mono(self, m: Monomial) -> RatQ:
        hit = self._ecache.get(m)
        if hit is None:
            hit = ONE
            for l in monomial_to_word(m):
                hit = hit * self.eps[l]
            self._ecache[m] = hit
        return hit

    def counit(self, x: Element) -> RatQ:
        s = ZERO
        for m, c in x.terms.items():
            s = s + c * self.counit_mono(m)
        return s

    def antipode_mono(self, m: Monomial) -> Element:
        hit = self._scache.get(m)
        if hit is None:
            hit = self.alg.one()
            for l in monomial_to_word(m):
                hit = self.S[l] * hit
            self._scache[m] = hit
        return hit

    def antipode(self, x: Element) -> Element:
        out = self.alg.zero()
        for m, c in x.terms.items():
            out = out + self.antipode_mono(m).scale(c)
        return out


def _require(x: Element, hd: HopfData | None) -> HopfData:
    if hd is None:
        raise NoHopfData(f"{x.alg.name} carries no Hopf data")
    return hd


def coproduct(x: Element, hd: HopfData | None) -> TensorElement:
    return _require(x, hd).coproduct(x)


def counit(x: Element, hd: HopfData | None) -> RatQ:
    return _require(x, hd).counit(x)


def antipode(x: Element, hd: HopfData | None) -> Element:
    return _require(x, hd).antipode(x)


# -- axiom checks ------------------------------------------------------------


@dataclass
class AxiomReport:
    name: str
    degree: int
    checked: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _mu(t: TensorElement) -> Element:
    A = t.algs[0]
    out: dict = {}
    for (a, b), c in t.terms.items():
        for m, v in A.mul_monomials(a, b).items():
            _acc(out, m, c * v)
    return Element(A, out)


def check_hopf_axioms(hd: HopfData, monomials: Iterable[Monomial], relations: bool = True) -> AxiomReport:
    """Coassociativity, counit and antipode identities on the given monomials.

    With ``relations`` also checks that Delta, epsilon, S respect every
    defining relation (i.e. the generator data is well defined).
    """
    A = hd.alg
    rep = AxiomReport(hd.name, -1)
    for m in monomials:
        x = mono_element(A, m)
        D = hd.coproduct(x)
        left = D.expand_factor(0, hd.coproduct)
        right = D.expand_factor(1, hd.coproduct)
        if left != right:
            rep.failures.append(("coassociativity", A.render_monomial(m)))
        e = hd.counit(x)
        l1 = D.contract(lambda k: mono_element(A, k[1]).scale(hd.counit_mono(k[0])), A)
        l2 = D.contract(lambda k: mono_element(A, k[0]).scale(hd.counit_mono(k[1])), A)
        if l1 != x or l2 != x:
            rep.failures.append(("counit", A.render_monomial(m)))
        s1 = _mu(D.map_factor(0, hd.antipode))
        s2 = _mu(D.map_factor(1, hd.antipode))
        if s1 != A.scalar(e) or s2 != A.scalar(e):
            rep.failures.append(("antipode", A.render_monomial(m)))
        rep.checked += 1
    if relations:
        for lhs, rhs in A.relations():
            def word_tensor(w):
                t = TensorElement.one((A, A))
                for l in w:
                    t = t * hd.delta[l]
                return t

            def word_eps(w):
                c = ONE
                for l in w:
                    c = c * hd.eps[l]
                return c

            def word_S(w):
                r = A.one()
                for l in w:
                    r = hd.S[l] * r
                return r

            dl = word_tensor(lhs)
            el = word_eps(lhs)
            sl = word_S(lhs)
            for w, c in rhs:
                dl = dl - word_tensor(w).scale(c)
                el = el - c * word_eps(w)
                sl = sl - word_S(w).scale(c)
            rel = " ".join(A.letter_name(l) for l in lhs)
            if not dl.is_zero():
                rep.failures.append(("coproduct respects relation", rel))
            if not el.is_zero():
                rep.failures.append(("counit respects relation", rel))
            if not sl.is_zero():
                rep.failures.append(("antipode respects relation", rel))
    return rep


def monomials_up_to(A: Presentation, degree: int, bound: int = 0) -> list[Monomial]:
    """Normal monomials of word length <= degree (exponents bounded on invertibles)."""
    letters = A.letters()
    found: set = {()}
    frontier = [()]
    for _ in range(degree):
        nxt = []
        for m in frontier:
            for l in letters:
                w = monomial_to_word(m) + (l,)
                if A.is_normal_word(w):
                    mm = word_to_monomial(w)
                    if len(monomial_to_word(mm)) != len(w):
                        continue
                    if bound and any(A.gens[g].invertible and abs(e) > bound for g, e in mm):
                        continue
                    if mm not in found:
                        found.add(mm)
                        nxt.append(mm)
        frontier = nxt
    return sorted(found, key=mono_key)


# -- factories ---------------------------------------------------------------


def _t(A: Presentation, *pairs) -> TensorElement:
    out: dict = {}
    for c, a, b in pairs:
        _acc(out, (a, b), RatQ.of(c))
    return TensorElement((A, A), out)


def _solve_antipode(A: Presentation, delta, eps) -> dict:
    """S on generators from S(x_1) x_2 = eps(x) = x_1 S(x_2), degree-one ansatz."""
    gens = [(g.index, 1) for g in A.gens]
    basis = [((g.index, 1),) for g in A.gens]
    n = len(gens) * len(basis)

    def build(c):
        S = {}
        for gi, l in enumerate(gens):
            terms = {}
            for bi, b in enumerate(basis):
                v = c.get(gi * len(basis) + bi)
                if v is not None:
                    terms[b] = v
            S[l] = Element(A, terms)
        return S

    def residual(c):
        S = build(c)
        out: dict = {}
        for l in gens:
            D = delta[l]
            r1 = A.zero()
            r2 = A.zero()
            for (a, b), v in D.terms.items():
                r1 = r1 + (_mono_S(S, A, a) * mono_element(A, b)).scale(v)
                r2 = r2 + (mono_element(A, a) * _mono_S(S, A, b)).scale(v)
            r1 = r1 - A.scalar(eps[l])
            r2 = r2 - A.scalar(eps[l])
            for m, v in r1.terms.items():
                out[("L", l, m)] = v
            for m, v in r2.terms.items():
                out[("R", l, m)] = v
        return out

    rows = probe_affine(n, residual)
    sol, null, bad = solve_affine(rows, n)
    if sol is None:
        raise AxiomViolation("antipode system inconsistent")
    if null:
        raise AxiomViolation(f"antipode not unique: {len(null)} free parameters")
    return build(sol)


def _mono_S(S, A, m):
    r = A.one()
    for l in monomial_to_word(m):
        r = S[l] * r
    return r


def build_hopf_oq_sl2(A: Presentation | None = None) -> HopfData:
    A = A or presentation_oq_sl2()
    a, b, c, d = ((AL, 1),), ((BE, 1),), ((GA, 1),), ((DE, 1),)
    delta = {
        (AL, 1): _t(A, (1, a, a), (1, b, c)),
        (BE, 1): _t(A, (1, a, b), (1, b, d)),
        (GA, 1): _t(A, (1, c, a), (1, d, c)),
        (DE, 1): _t(A, (1, c, b), (1, d, d)),
    }
    eps = {(AL, 1): ONE, (BE, 1): ZERO, (GA, 1): ZERO, (DE, 1): ONE}
    S = _solve_antipode(A, delta, eps)
    return HopfData(A, delta, eps, S)


def build_hopf_uqsl2(U: Presentation | None = None) -> HopfData:
    U = U or presentation_uqsl2()
    F, K, E = 0, 1, 2
    f, k, ki, e = ((F, 1),), ((K, 1),), ((K, -1),), ((E, 1),)
    q = qconst(1)
    delta = {
        (E, 1): _t(U, (1, e, k), (1, ki, e)),
        (F, 1): _t(U, (1, f, k), (1, ki, f)),
        (K, 1): _t(U, (1, k, k)),
        (K, -1): _t(U, (1, ki, ki)),
    }
    eps = {(E, 1): ZERO, (F, 1): ZERO, (K, 1): ONE, (K, -1): ONE}
    S = {
        (E, 1): Element(U, {e: -qconst(-1)}),
        (F, 1): Element(U, {f: -q}),
        (K, 1): Element(U, {ki: ONE}),
        (K, -1): Element(U, {k: ONE}),
    }
    return HopfData(U, delta, eps, S)


# -- quotients ---------------------------------------------------------------


@dataclass
class HopfQuotient:
    source: HopfData
    target: HopfData
    images: dict  # source letter -> target Element
    killed: tuple[int, ...]
    project: Callable[[Element], Element]
    checked_degree: int

    def __call__(self, x: Element) -> Element:
        return self.project(x)


def hopf_quotient(
    hd: HopfData,
    ideal_generators: Sequence[Element],
    rename: Mapping[str, str] | None = None,
    name: str | None = None,
    check_degree: int = DEFAULT_CHECK_DEGREE,
) -> HopfQuotient:
    """Quotient by the two-sided ideal generated by some generators.

    Rules that collapse to ``x y -> 1`` and ``y x -> 1`` identify y with x^-1.
    The surviving q-commutations are re-oriented along the generator order and
    the result is verified: pi kills every defining relation, the ideal is a
    Hopf ideal, and the induced structure passes the axiom checks.
    """
    A = hd.alg
    rename = dict(rename or {})
    killed: set[int] = set()
    for g in ideal_generators:
        if len(g.terms) != 1:
            raise NotAHopfIdeal("only ideals generated by generators are supported")
        (m, _), = g.terms.items()
        if len(m) != 1 or m[0][1] != 1:
            raise NotAHopfIdeal("only ideals generated by generators are supported")
        killed.add(m[0][0])

    def drop(words):
        return tuple((w, c) for w, c in words if not any(l[0] in killed for l in w))

    mapped = []
    for r in A.rules:
        if any(l[0] in killed for l in r.lhs):
            continue
        mapped.append((r.lhs, drop(r.rhs)))
    unit_pairs = {lhs for lhs, rhs in mapped if len(lhs) == 2 and rhs == (((), ONE),)}
    inverse_of: dict[int, int] = {}
    for lhs in unit_pairs:
        (x, _), (y, _) = lhs
        if ((y, 1), (x, 1)) in unit_pairs and x != y:
            lo, hi = min(x, y), max(x, y)
            inverse_of[hi] = lo
    surviving = [g for g in A.gens if g.index not in killed and g.index not in inverse_of]
    new_index = {g.index: i for i, g in enumerate(surviving)}
    inv_set = {new_index[lo] for lo in inverse_of.values()}
    inv_name = {new_index[lo]: rename.get(A.gens[hi].name, A.gens[hi].name) for hi, lo in inverse_of.items()}
    gens = [
        Generator(
            rename.get(g.name, g.name),
            new_index[g.index],
            g.invertible or new_index[g.index] in inv_set,
            inv_name.get(new_index[g.index], g.inverse_name),
            g.degree,
        )
        for g in surviving
    ]

    def letter_map(l):
        g, s = l
        if g in killed:
            return None
        if g in inverse_of:
            return ((new_index[inverse_of[g]], -s),)
        return ((new_index[g], s),)

    def map_word(w):
        out = ()
        for l in w:
            ml = letter_map(l)
            if ml is None:
                return None
            out += ml
        return out

    # surviving q-commutations between distinct positive letters
    base_rules: list[Rule] = []
    seen = set()
    for lhs, rhs in mapped:
        if lhs in unit_pairs:
            continue
        ml = map_word(lhs)
        if ml is None or len(rhs) != 1:
            continue
        mw = map_word(rhs[0][0])
        if mw is None or len(ml) != 2 or mw != (ml[1], ml[0]):
            continue
        (y, sy), (x, sx) = ml
        c = rhs[0][1]
        # normalise to "big small -> c small big" on positive letters
        if sy == 1 and sx == 1:
            key = (y, x) if y > x else (x, y)
            cc = c if y > x else c.inv()
        elif sy == -1 and sx == 1:  # y^-1 x = c x y^-1  =>  x y = c y x
            key = (y, x) if y > x else (x, y)
            cc = c.inv() if y > x else c
        elif sy == 1 and sx == -1:  # y x^-1 = c x^-1 y  =>  x y = c y x
            key = (x, y) if x > y else (y, x)
            cc = c if x > y else c.inv()
        else:
            continue
        if key in seen:
            continue
        seen.add(key)
        hi, lo = key
        base_rules.append(rule(((hi, 1), (lo, 1)), (((lo, 1), (hi, 1)), cc)))
    rules = base_rules + derive_inverse_rules(gens, base_rules, inv_set)
    Q = Presentation(name or f"{A.name}/I", gens, rules, inverted=frozenset(inv_set))
    images = {}
    for l in A.letters():
        ml = letter_map(l)
        images[l] = Q.zero() if ml is None else Q.word_element(ml)
    pi = algebra_map(A, Q, images)
    # pi is well defined
    for lhs, rhs in A.relations():
        lv = _word_image(images, Q, lhs)
        for w, c in rhs:
            lv = lv - _word_image(images, Q, w).scale(c)
        if not lv.is_zero():
            raise NotAHopfIdeal(f"relation {lhs} does not survive the quotient")
    # Hopf ideal conditions on the ideal generators
    for g in killed:
        l = (g, 1)
        if not hd.delta[l].map_factor(0, pi, Q).map_factor(1, pi, Q).is_zero():
            raise NotAHopfIdeal(f"Delta({A.gens[g].name}) not in I(x)A + A(x)I")
        if not hd.eps[l].is_zero():
            raise NotAHopfIdeal(f"eps({A.gens[g].name}) != 0")
        if not pi(hd.S[l]).is_zero():
            raise NotAHopfIdeal(f"S({A.gens[g].name}) not in I")
    # induced data through preimage letters
    pre: dict = {}
    for l in A.letters():
        ml = letter_map(l)
        if ml is not None and len(ml) == 1:
            pre.setdefault(ml[0], l)
    delta, eps, S = {}, {}, {}
    for ql in Q.letters():
        src = pre[ql]
        delta[ql] = hd.delta[src].map_factor(0, pi, Q).map_factor(1, pi, Q)
        eps[ql] = hd.eps[src]
        S[ql] = pi(hd.S[src])
    target = HopfData(Q, delta, eps, S)
    # consistency of the induced data across all preimages
    for l in A.letters():
        ml = letter_map(l)
        if ml is None:
            continue
        t = hd.delta[l].map_factor(0, pi, Q).map_factor(1, pi, Q)
        img = Q.word_element(ml)
        if t != target.coproduct(img):
            raise NotAHopfIdeal(f"coproduct of {A.letter_name(l)} does not descend")
    rep = check_hopf_axioms(target, monomials_up_to(Q, check_degree, check_degree))
    if not rep.ok:
        raise AxiomViolation(f"quotient Hopf data: {rep.failures[:3]}")
    return HopfQuotient(hd, target, images, tuple(sorted(killed)), pi, check_degree)


def _word_image(images, Q, w):
    r = Q.one()
    for l in w:
        r = r * images[l]
    return r


def build_hopf_oq_p(sl2: HopfData | None = None) -> HopfQuotient:
    """O_q(P) as O_q(SL_2)/(gamma): alpha -> t, beta -> p, delta -> t^-1."""
    sl2 = sl2 or build_hopf_oq_sl2()
    A = sl2.alg
    return hopf_quotient(sl2, [A.gen("gamma")], rename={"alpha": "t", "beta": "p", "delta": "tinv"}, name="O_q(P)")


# -- coactions ---------------------------------------------------------------


class Coaction:
    """Right coaction A -> A (x) H given on letters, extended multiplicatively."""

    def __init__(self, source: Presentation, hopf: Presentation, images: Mapping, hopf_data: HopfData | None = None):
        self.source = source
        self.hopf = hopf
        self.images = dict(images)
        self.hopf_data = hopf_data
        self._cache: dict = {}

    def apply_mono(self, m: Monomial) -> TensorElement:
        hit = self._cache.get(m)
        if hit is None:
            hit = TensorElement.one((self.source, self.hopf))
            for l in monomial_to_word(m):
                hit = hit * self.images[l]
            self._cache[m] = hit
        return hit

    def __call__(self, x: Element) -> TensorElement:
        out: dict = {}
        for m, c in x.terms.items():
            for k, v in self.apply_mono(m).terms.items():
                _acc(out, k, c * v)
        return TensorElement((self.source, self.hopf), out)

    def check(self, monomials: Iterable[Monomial]) -> AxiomReport:
        """Comodule axioms and well-definedness on relations."""
        A, hd = self.source, self.hopf_data
        rep = AxiomReport(f"coaction {A.name}", -1)
        for m in monomials:
            x = mono_element(A, m)
            D = self(x)
            left = D.expand_factor(0, self)
            right = D.expand_factor(1, hd.coproduct)
            if left != right:
                rep.failures.append(("(delta_R (x) id) delta_R = (id (x) Delta) delta_R", A.render_monomial(m)))
            back = D.contract(lambda k: mono_element(A, k[0]).scale(hd.counit_mono(k[1])), A)
            if back != x:
                rep.failures.append(("(id (x) eps) delta_R = id", A.render_monomial(m)))
            rep.checked += 1
        for lhs, rhs in A.relations():
            if any(l not in self.images for l in lhs):
                continue
            t = _coact_word(self, lhs)
            for w, c in rhs:
                t = t - _coact_word(self, w).scale(c)
            if not t.is_zero():
                rep.failures.append(("delta_R respects relation", " ".join(A.letter_name(l) for l in lhs)))
        return rep


def _coact_word(c: Coaction, w) -> TensorElement:
    t = TensorElement.one((c.source, c.hopf))
    for l in w:
        t = t * c.images[l]
    return t


def coaction_from_quotient(hd: HopfData, quo: HopfQuotient, source: Presentation | None = None) -> Coaction:
    """delta_R = (id (x) pi) Delta."""
    A = source or hd.alg
    images = {}
    for l in A.letters():
        if l in hd.delta:
            images[l] = hd.delta[l].map_factor(1, quo.project, quo.target.alg)
    return Coaction(A, quo.target.alg, images, quo.target)


def is_coinvariant(x: Element, c: Coaction) -> bool:
    return c(x) == TensorElement.pure(x, c.hopf.one())


def coinvariant_basis(c: Coaction, degree: int | Iterable[int], exponent_bound: int) -> list[Element]:
    """Basis of {x : delta_R(x) = x (x) 1} inside a monomial window."""
    A = c.source
    degrees = [degree] if isinstance(degree, int) else list(degree)
    monos = []
    for d in degrees:
        monos.extend(enumerate_basis(A, d, exponent_bound))
    vecs = []
    one = c.hopf.one()
    for m in monos:
        x = mono_element(A, m)
        v = c(x) - TensorElement.pure(x, one)
        vecs.append((m, v.terms))
    order = {m: i for i, m in enumerate(monos)}
    out = []
    for combo in kernel(vecs):
        # normalise: leading (lowest-order) monomial coefficient 1
        lead = min(combo, key=lambda m: order[m])
        inv = combo[lead].inv()
        out.append(Element(A, {m: v * inv for m, v in combo.items()}))
    return out


def coinvariant_split(m: Element, hd: HopfData) -> TensorElement:
    """m -> m_1 S(m_2) (x) m_3 for H coacting on itself."""
    H = hd.alg
    D2 = hd.coproduct(m).expand_factor(0, hd.coproduct)
    out: dict = {}
    for (a, b, c), v in D2.terms.items():
        left = mono_element(H, a) * hd.antipode_mono(b)
        for mm, w in left.terms.items():
            _acc(out, (mm, c), v * w)
    return TensorElement((H, H), out)


def coinvariant_join(t: TensorElement) -> Element:
    H = t.algs[0]
    return t.contract(lambda k: mono_element(H, k[0]) * mono_element(H, k[1]), H)


# -- pairing -----------------------------------------------------------------


class Pairing:
    """Bialgebra pairing U_q(sl2) x O_q(SL_2) -> RatQ from the generator table.

    Values not fixed by the table default to zero.
    """

    def __init__(self, uhd: HopfData, ohd: HopfData):
        self.U = uhd.alg
        self.O = ohd.alg
        self.uhd = uhd
        self.ohd = ohd
        F, K, E = 0, 1, 2
        self.table = {
            ((K, 1), (AL, 1)): qhalf(1),
            ((K, 1), (DE, 1)): qhalf(-1),
            ((K, -1), (AL, 1)): qhalf(-1),
            ((K, -1), (DE, 1)): qhalf(1),
            ((E, 1), (GA, 1)): ONE,
            ((F, 1), (BE, 1)): ONE,
        }
        self._cache: dict = {}

    def pair_mono(self, u: Monomial, x: Monomial) -> RatQ:
        key = (u, x)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        uw, xw = monomial_to_word(u), monomial_to_word(x)
        if not uw:
            val = self.ohd.counit_mono(x)
        elif not xw:
            val = self.uhd.counit_mono(u)
        elif len(uw) == 1 and len(xw) == 1:
            val = self.table.get((uw[0], xw[0]), ZERO)
        elif len(xw) >= 2:
            # <u, x y> = <u_1, x><u_2, y>
            first = ((xw[0][0], xw[0][1]),)
            rest = x_rest(x)
            val = ZERO
            for (a, b), c in self.uhd.coproduct_mono(u).terms.items():
                v1 = self.pair_mono(a, first)
                if v1.is_zero():
                    continue
                val = val + c * v1 * self.pair_mono(b, rest)
        else:
            # <u v, x> = <u, x_1><v, x_2>
            first = ((uw[0][0], uw[0][1]),)
            rest = x_rest(u)
            val = ZERO
            for (a, b), c in self.ohd.coproduct_mono(x).terms.items():
                v1 = self.pair_mono(first, a)
                if v1.is_zero():
                    continue
                val = val + c * v1 * self.pair_mono(rest, b)
        self._cache[key] = val
        return val

    def __call__(self, u: Element, x: Element) -> RatQ:
        s = ZERO
        for m1, c1 in u.terms.items():
            for m2, c2 in x.terms.items():
                s = s + c1 * c2 * self.pair_mono(m1, m2)
        return s

    def convolve(self, f: Element, x: Element) -> Element:
        """f * x = x_1 <f, x_2>."""
        out = self.O.zero()
        for m, c in x.terms.items():
            for (a, b), v in self.ohd.coproduct_mono(m).terms.items():
                w = self(f, mono_element(self.O, b))
                if not w.is_zero():
                    out = out + mono_element(self.O, a).scale(c * v * w)
        return out


def x_rest(m: Monomial) -> Monomial:
    """Drop the first letter of a monomial."""
    g, e = m[0]
    s = 1 if e > 0 else -1
    if e - s == 0:
        return m[1:]
    return ((g, e - s),) + m[1:]
