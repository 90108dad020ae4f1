"""Cleaving maps, the smash product B#H and its first order calculus.

For a trivial extension B = A^coH ⊂ A with an algebra map j: H -> A that is
H-colinear, A is isomorphic to the smash product B#H under b#h -> b j(h).
A right covariant calculus on A is then rebuilt from calculi on B and H:

    Gamma_# = Gamma_B (x) H  (+)  B (x) Gamma_H,
    d_#(b#h) = d_B b (x) h + b (x) d_H h.

Smash elements are TensorElements over (B, H).  Smash forms keep the two
summands apart as sparse dicts:

* part 1, key (k, b, h): the form (b e_k) (x) h with e_k a basis form of Gamma_B;
* part 2, key (b, k, h): the form b (x) (h f_k) with f_k a basis form of Gamma_H.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import AxiomViolation, CorrespondenceFailure, NotCoinvariant, QpbError, RoundTripFailure
from .fodc import (
    Calculus,
    FormCoaction,
    FormExpression,
    OneForm,
    PullbackData,
    Preimage,
    basis_expressions,
    pullback_calculus,
    realize,
)
from .hopf import Coaction, HopfData, TensorElement, mono_element, monomials_up_to
from .ncalg import Element, Monomial, Presentation, _acc, mono_key
from .ore import algebra_map
from .scalar import ONE, RatQ
from .standard import Chart, standard


# -- cleaving maps ---------------------------------------------------------------


@dataclass
class CleavingMap:
    """An algebra map j: H -> A, colinear and convolution invertible with j^-1 = j S."""

    hopf: HopfData
    target: Presentation
    images: dict  # H letter -> Element of target
    inverse_images: dict  # H letter -> Element of target, j^-1 on letters
    coaction: Coaction = field(repr=False)
    name: str = ""

    def __post_init__(self):
        self.j = algebra_map(self.hopf.alg, self.target, self.images)

    def __call__(self, h: Element) -> Element:
        return self.j(h)

    def inv(self, h: Element) -> Element:
        return self.j(self.hopf.antipode(h))

    def verify(self, degree: int = 3) -> list[str]:
        """Names of failed axioms (empty when j is a cleaving map)."""
        H, A, hd = self.hopf.alg, self.target, self.hopf
        bad = []
        if self.j(H.one()) != A.one():
            bad.append("j(1) = 1")
        for lhs, rhs in H.relations():
            val = self.j(H.word_element(lhs))
            for w, c in rhs:
                val = val - self.j(H.word_element(w)).scale(c)
            if not val.is_zero():
                bad.append(f"algebra map on {' '.join(H.letter_name(l) for l in lhs)}")
        for l in H.letters():
            h = H.word_element((l,))
            if self.inv(h) != self.inverse_images[l]:
                bad.append(f"j^-1 = j S on {H.letter_name(l)}")
        for m in monomials_up_to(H, degree, 1):
            h = mono_element(H, m)
            name = H.render_monomial(m)
            lhs = self.coaction(self.j(h))
            rhs = hd.coproduct(h).map_factor(0, self.j, A)
            if lhs != rhs:
                bad.append(f"colinear on {name}")
            eps = A.one().scale(hd.counit(h))
            D = hd.coproduct(h)
            left = D.contract(lambda k: self.j(mono_element(H, k[0])) * self.inv(mono_element(H, k[1])), A)
            right = D.contract(lambda k: self.inv(mono_element(H, k[0])) * self.j(mono_element(H, k[1])), A)
            if left != eps or right != eps:
                bad.append(f"convolution inverse on {name}")
            # delta_R j^-1(h) = j^-1(h_2) (x) S(h_1)
            want: dict = {}
            for (a, b), c in D.terms.items():
                for k, v in TensorElement.pure(self.inv(mono_element(H, b)), hd.antipode_mono(a)).terms.items():
                    _acc(want, k, c * v)
            if self.coaction(self.inv(h)).terms != want:
                bad.append(f"delta_R j^-1 = (j^-1 (x) S) tau Delta on {name}")
        return bad


def make_cleaving(chart: Chart, images: Mapping[str, Element], name: str = "", degree: int = 3) -> CleavingMap:
    std = standard()
    hd = std.quotient.target
    H = hd.alg
    imgs = {}
    for l in H.letters():
        nm = H.letter_name(l)
        imgs[l] = images[nm]
    j = algebra_map(H, chart.alg, imgs)
    inv = {l: j(hd.antipode(H.word_element((l,)))) for l in H.letters()}
    cm = CleavingMap(hd, chart.alg, imgs, inv, chart.coaction, name)
    bad = cm.verify(degree)
    if bad:
        raise AxiomViolation(f"{name}: " + "; ".join(bad))
    return cm


def cleaving_u1() -> CleavingMap:
    L = standard().chart("U1").alg
    return make_cleaving(
        standard().chart("U1"), {"t": L.gen("alpha"), "tinv": L.gen("ainv"), "p": L.gen("beta")}, "j1"
    )


def cleaving_u2() -> CleavingMap:
    L = standard().chart("U2").alg
    return make_cleaving(
        standard().chart("U2"), {"t": L.gen("gamma"), "tinv": L.gen("ginv"), "p": L.gen("delta")}, "j2"
    )


# -- smash product -----------------------------------------------------------------


class Smash:
    """The algebra B#H for a chart with base B, inclusion iota and cleaving map j."""

    def __init__(self, chart: Chart, j: CleavingMap):
        self.chart = chart
        self.j = j
        self.B = chart.base
        self.H = j.hopf.alg
        self.hd = j.hopf
        self.A = chart.alg
        self.iota = chart.base_map
        self.pre = Preimage(self.B, self.iota, 3, 2)
        self._act: dict = {}

    # elements
    def element(self, b: Element, h: Element) -> TensorElement:
        return TensorElement.pure(b, h)

    def one(self) -> TensorElement:
        return TensorElement.one((self.B, self.H))

    def zero(self) -> TensorElement:
        return TensorElement((self.B, self.H), {})

    def to_base(self, a: Element) -> Element:
        """Preimage under iota of a coinvariant element of A."""
        if not self.chart.coaction(a) == TensorElement.pure(a, self.H.one()):
            raise NotCoinvariant(f"{a} is not coinvariant")
        b = self.pre(a)
        if b is None:
            raise NotCoinvariant(f"{a} is coinvariant but not in the image of {self.B.name} within {self.pre.size}")
        return b

    def act_mono(self, hm: Monomial, bm: Monomial) -> Element:
        """h |> b = j(h_1) b j^-1(h_2) for monomials."""
        key = (hm, bm)
        hit = self._act.get(key)
        if hit is None:
            H, A = self.H, self.A
            ib = self.iota(mono_element(self.B, bm))
            out = A.zero()
            for (a, b), c in self.hd.coproduct_mono(hm).terms.items():
                out = out + (self.j(mono_element(H, a)) * ib * self.j.inv(mono_element(H, b))).scale(c)
            hit = self.to_base(out)
            self._act[key] = hit
        return hit

    def act(self, h: Element, b: Element) -> Element:
        out = self.B.zero()
        for hm, c in h.terms.items():
            for bm, v in b.terms.items():
                out = out + self.act_mono(hm, bm).scale(c * v)
        return out

    def mul(self, x: TensorElement, y: TensorElement) -> TensorElement:
        """(b#h)(b'#h') = b (h_1 |> b') # h_2 h'."""
        B, H = self.B, self.H
        out: dict = {}
        for (b, h), c in x.terms.items():
            D = self.hd.coproduct_mono(h)
            for (b2, h2), c2 in y.terms.items():
                for (h1a, h1b), c3 in D.terms.items():
                    left = mono_element(B, b) * self.act_mono(h1a, b2)
                    right = mono_element(H, h1b) * mono_element(H, h2)
                    for k, v in TensorElement.pure(left, right).terms.items():
                        _acc(out, k, c * c2 * c3 * v)
        return TensorElement((B, H), out)

    def theta(self, x: TensorElement) -> Element:
        """b#h -> b j(h)."""
        out = self.A.zero()
        for (b, h), c in x.terms.items():
            out = out + (self.iota(mono_element(self.B, b)) * self.j(mono_element(self.H, h))).scale(c)
        return out

    def theta_inv(self, a: Element) -> TensorElement:
        """a -> a_0 j^-1(a_1) # a_2."""
        D = self.chart.coaction(a).expand_factor(1, self.hd.coproduct)
        A, H = self.A, self.H
        grouped: dict = {}
        for (m0, m1, m2), c in D.terms.items():
            x = (mono_element(A, m0) * self.j.inv(mono_element(H, m1))).scale(c)
            grouped[m2] = grouped.get(m2, A.zero()) + x
        out: dict = {}
        for m2, x in grouped.items():
            if x.is_zero():
                continue
            for bm, v in self.to_base(x).terms.items():
                _acc(out, (bm, m2), v)
        return TensorElement((self.B, H), out)


def triangle(h: Element, b: Element, j: CleavingMap, smash: Smash | None = None) -> Element:
    s = smash or Smash(_chart_of(j), j)
    return s.act(h, b)


def smash_mul(x: TensorElement, y: TensorElement, j: CleavingMap, smash: Smash | None = None) -> TensorElement:
    s = smash or Smash(_chart_of(j), j)
    return s.mul(x, y)


def theta(x: TensorElement, j: CleavingMap, smash: Smash | None = None) -> Element:
    return (smash or Smash(_chart_of(j), j)).theta(x)


def theta_inv(a: Element, j: CleavingMap, smash: Smash | None = None) -> TensorElement:
    return (smash or Smash(_chart_of(j), j)).theta_inv(a)


def _chart_of(j: CleavingMap) -> Chart:
    for ch in standard().charts.values():
        if ch.alg is j.target:
            return ch
    raise QpbError(f"no chart for {j.target.name}")


# -- smash calculus ------------------------------------------------------------------


class SmashForm:
    """Element of Gamma_B (x) H (+) B (x) Gamma_H (see the module docstring for keys)."""

    __slots__ = ("sc", "p1", "p2")

    def __init__(self, sc: "SmashCalculus", p1: Mapping | None = None, p2: Mapping | None = None):
        self.sc = sc
        self.p1 = {k: v for k, v in (p1 or {}).items() if not v.is_zero()}
        self.p2 = {k: v for k, v in (p2 or {}).items() if not v.is_zero()}

    def __add__(self, other: "SmashForm") -> "SmashForm":
        p1, p2 = dict(self.p1), dict(self.p2)
        for k, v in other.p1.items():
            _acc(p1, k, v)
        for k, v in other.p2.items():
            _acc(p2, k, v)
        return SmashForm(self.sc, p1, p2)

    def __neg__(self) -> "SmashForm":
        return self.scale(-ONE)

    def __sub__(self, other: "SmashForm") -> "SmashForm":
        return self + (-other)

    def scale(self, c) -> "SmashForm":
        c = RatQ.of(c)
        return SmashForm(self.sc, {k: v * c for k, v in self.p1.items()}, {k: v * c for k, v in self.p2.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SmashForm):
            return NotImplemented
        return self.p1 == other.p1 and self.p2 == other.p2

    def __hash__(self) -> int:
        return hash((frozenset(self.p1.items()), frozenset(self.p2.items())))

    def is_zero(self) -> bool:
        return not self.p1 and not self.p2

    def __repr__(self) -> str:
        sc = self.sc
        B, H = sc.B, sc.H
        parts = []
        for (k, b, h), v in sorted(self.p1.items(), key=lambda kv: (kv[0][0], mono_key(kv[0][1]), mono_key(kv[0][2]))):
            parts.append(f"{v}*({B.render_monomial(b)} {sc.cB.labels[k]} (x) {H.render_monomial(h)})")
        for (b, k, h), v in sorted(self.p2.items(), key=lambda kv: (kv[0][1], mono_key(kv[0][0]), mono_key(kv[0][2]))):
            parts.append(f"{v}*({B.render_monomial(b)} (x) {H.render_monomial(h)} {sc.cH.labels[k]})")
        return " + ".join(parts) if parts else "0"


class SmashCalculus:
    """Gamma_# with d_#, both module actions and the comparison map to the chart calculus."""

    def __init__(self, smash: Smash, cB: Calculus, cH: Calculus, expr_B: Mapping | None = None, expr_H: Mapping | None = None):
        self.s = smash
        self.B, self.H = smash.B, smash.H
        self.cB, self.cH = cB, cH
        self.expr_B = expr_B if expr_B is not None else basis_expressions(cB)
        self.expr_H = expr_H if expr_H is not None else basis_expressions(cH)
        self._dcache: dict = {}

    def zero(self) -> SmashForm:
        return SmashForm(self)

    # embeddings of the two summands
    def part1(self, w: OneForm, h: Element) -> SmashForm:
        out: dict = {}
        for k, e in w.comps.items():
            for bm, c in e.terms.items():
                for hm, v in h.terms.items():
                    _acc(out, (k, bm, hm), c * v)
        return SmashForm(self, out)

    def part2(self, b: Element, w: OneForm) -> SmashForm:
        out: dict = {}
        for bm, c in b.terms.items():
            for k, e in w.comps.items():
                for hm, v in e.terms.items():
                    _acc(out, (bm, k, hm), c * v)
        return SmashForm(self, {}, out)

    def d(self, x: TensorElement) -> SmashForm:
        """d_#(b#h) = d_B b (x) h + b (x) d_H h."""
        out = self.zero()
        for (bm, hm), c in x.terms.items():
            hit = self._dcache.get((bm, hm))
            if hit is None:
                b, h = mono_element(self.B, bm), mono_element(self.H, hm)
                hit = self.part1(self.cB.d(b), h) + self.part2(b, self.cH.d(h))
                self._dcache[(bm, hm)] = hit
            out = out + hit.scale(c)
        return out

    def d_of(self, a: Element) -> SmashForm:
        """d_# of an element of the chart algebra, through theta^-1."""
        return self.d(self.s.theta_inv(a))

    # left action
    def _act_formB(self, hm: Monomial, x: Element, y: Element) -> OneForm:
        """h |> (x d_B y) = (h_1 |> x) d_B (h_2 |> y)."""
        out = self.cB.zero()
        for (a, b), c in self.s.hd.coproduct_mono(hm).terms.items():
            ha, hb = mono_element(self.H, a), mono_element(self.H, b)
            out = out + self.cB.left_mul(self.s.act(ha, x), self.cB.d(self.s.act(hb, y))).scale(c)
        return out

    def lmul(self, z: TensorElement, X: SmashForm) -> SmashForm:
        B, H, hd = self.B, self.H, self.s.hd
        out = self.zero()
        for (zb, zh), c in z.terms.items():
            bt = mono_element(B, zb)
            D = hd.coproduct_mono(zh)
            for (k, bm, hm), v in X.p1.items():
                for x, y in self.expr_B[self.cB.labels[k]].pairs:
                    bx = mono_element(B, bm) * x
                    for (h1, h2), c2 in D.terms.items():
                        w = self.cB.left_mul(bt, self._act_formB(h1, bx, y))
                        out = out + self.part1(w, mono_element(H, h2) * mono_element(H, hm)).scale(c * v * c2)
            for (bm, k, hm), v in X.p2.items():
                for (h1, h2), c2 in D.terms.items():
                    b = bt * self.s.act_mono(h1, bm)
                    hh = mono_element(H, h2) * mono_element(H, hm)
                    out = out + self.part2(b, self.cH.left_mul(hh, self.cH.form(k))).scale(c * v * c2)
        return out

    # right action through the decomposition X = sum a d_#(a')
    def decompose(self, X: SmashForm) -> list[tuple[TensorElement, TensorElement]]:
        """Pairs (a, a') with X = sum a . d_#(a')."""
        B, H = self.B, self.H
        one_h = H.one()
        pairs = []
        for (k, bm, hm), v in X.p1.items():
            h = mono_element(H, hm)
            for x, y in self.expr_B[self.cB.labels[k]].pairs:
                bx = (mono_element(B, bm) * x).scale(v)
                pairs.append((TensorElement.pure(bx, one_h), TensorElement.pure(y, h)))
                pairs.append((TensorElement.pure(-(bx * y), one_h), TensorElement.pure(B.one(), h)))
        for (bm, k, hm), v in X.p2.items():
            b = mono_element(B, bm).scale(v)
            for x, y in self.expr_H[self.cH.labels[k]].pairs:
                pairs.append((TensorElement.pure(b, mono_element(H, hm) * x), TensorElement.pure(B.one(), y)))
        return pairs

    def rmul(self, X: SmashForm, z: TensorElement) -> SmashForm:
        out = self.zero()
        mul = self.s.mul
        for a, a2 in self.decompose(X):
            out = out + self.lmul(a, self.d(mul(a2, z))) - self.lmul(mul(a, a2), self.d(z))
        return out

    # comparison with the chart calculus
    def theta_gamma(self, X: SmashForm, c: Calculus, real_B: Callable, real_H: Callable) -> OneForm:
        """(b e_k) (x) h -> iota(b) e_k j(h) and b (x) h f_k -> iota(b) j(h) f_k."""
        s = self.s
        out = c.zero()
        for (k, bm, hm), v in X.p1.items():
            w = c.left_mul(s.iota(mono_element(self.B, bm)), real_B(k))
            out = out + c.right_mul(w, s.j(mono_element(self.H, hm))).scale(v)
        for (bm, k, hm), v in X.p2.items():
            a = s.iota(mono_element(self.B, bm)) * s.j(mono_element(self.H, hm))
            out = out + c.left_mul(a, real_H(k)).scale(v)
        return out

    def theta_gamma_inv(self, w: OneForm, exprs: Mapping[str, FormExpression]) -> SmashForm:
        """sum_i c_i omega^i with omega^i = sum a d(a') -> sum theta^-1(c_i a) d_# theta^-1(a')."""
        c = w.calc
        out = self.zero()
        for i, ci in w.comps.items():
            for a, a2 in exprs[c.labels[i]].pairs:
                out = out + self.lmul(self.s.theta_inv(ci * a), self.d_of(a2))
        return out


# -- the correspondence --------------------------------------------------------------


@dataclass
class CorrespondenceReport:
    chart: str
    rank_B: int
    rank_H: int
    rank: int
    checks: dict = field(default_factory=dict)  # name -> number of samples checked
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class Correspondence:
    """Pullbacks to the base and the fibre, then the smash calculus, for one chart."""

    chart: Chart
    calc: Calculus
    j: CleavingMap
    smash: Smash
    pb_B: PullbackData
    pb_H: PullbackData
    sc: SmashCalculus
    exprs: dict

    def theta_gamma(self, X: SmashForm) -> OneForm:
        c = self.calc
        return self.sc.theta_gamma(
            X,
            c,
            lambda k: self.pb_B.basis_forms[k],
            lambda k: self.pb_H.basis_forms[k],
        )

    def theta_gamma_inv(self, w: OneForm) -> SmashForm:
        return self.sc.theta_gamma_inv(w, self.exprs)

    def coact_H(self, w: OneForm, fc: FormCoaction) -> list[tuple[OneForm, Element]]:
        """Right coaction on Gamma_H, inherited from the chart calculus."""
        ft = fc(realize(w, self.calc, self.j))
        grouped: dict = {}
        A = self.calc.alg
        for (i, am, hm), v in ft.terms.items():
            grouped.setdefault(hm, {}).setdefault(i, A.zero())
            grouped[hm][i] = grouped[hm][i] + mono_element(A, am).scale(v)
        out = []
        for hm in sorted(grouped, key=mono_key):
            f = OneForm(self.calc, grouped[hm])
            if not f.is_zero():
                out.append((self.pb_H.pull(f), mono_element(fc.coaction.hopf, hm)))
        return out


def build_correspondence(chart: Chart, j: CleavingMap, calc: Calculus | None = None, exprs: Mapping | None = None) -> Correspondence:
    c = calc or chart.calc
    smash = Smash(chart, j)
    if c.rank == 0:
        pb_B = PullbackData(Calculus(chart.base, [], {}, {l: {} for l in chart.base.letters()}), [], [], (0, 0), lambda f: {})
        pb_H = PullbackData(Calculus(j.hopf.alg, [], {}, {l: {} for l in j.hopf.alg.letters()}), [], [], (0, 0), lambda f: {})
        ex = {}
    else:
        pb_B = pullback_calculus(c, chart.base, chart.base_map, labels_prefix="b", name=f"Gamma_B on {chart.name}")
        pb_H = pullback_calculus(c, j.hopf.alg, j.j, labels_prefix="h", name=f"Gamma_H via {j.name}")
        ex = dict(exprs) if exprs is not None else dict(chart.forms.expressions[0])
    sc = SmashCalculus(smash, pb_B.calculus, pb_H.calculus)
    return Correspondence(chart, c, j, smash, pb_B, pb_H, sc, ex)


def random_smash(s: Smash, rng: random.Random, degree: int = 3, terms: int = 2) -> TensorElement:
    """A random element of B#H with monomials of total degree at most ``degree``."""
    bm = monomials_up_to(s.B, degree, 1)
    hm = monomials_up_to(s.H, degree, 1)
    pairs = [(b, h) for b in bm for h in hm if len(b) + len(h) <= degree and sum(abs(e) for _, e in b) + sum(abs(e) for _, e in h) <= degree]
    out: dict = {}
    for _ in range(terms):
        _acc(out, rng.choice(pairs), RatQ.of(rng.randint(-3, 3) or 1))
    return TensorElement((s.B, s.H), out)


def random_form(c: Calculus, rng: random.Random, degree: int = 2, terms: int = 2) -> OneForm:
    A = c.alg
    monos = monomials_up_to(A, degree, 1)
    comps: dict = {}
    for _ in range(terms):
        i = rng.randrange(c.rank)
        comps[i] = comps.get(i, A.zero()) + mono_element(A, rng.choice(monos)).scale(rng.randint(1, 3))
    return OneForm(c, comps)


# checks of the direction Gamma_# -> (Gamma_B, Gamma_H)
CORRESPONDENCE_INVERSE = frozenset(
    {
        "d_# restricts to d_B",
        "right B-action restricts to Gamma_B",
        "d_# restricts to d_H",
        "right H-action restricts to Gamma_H",
    }
)


def correspondence_check(
    chart: Chart,
    j: CleavingMap,
    calc: Calculus | None = None,
    samples: int = 10,
    seed: int = 0,
    raise_on_failure: bool = True,
) -> CorrespondenceReport:
    """Run pullbacks -> smash -> theta_Gamma and smash -> pullbacks on random samples."""
    rng = random.Random(seed)
    try:
        co = build_correspondence(chart, j, calc)
    except QpbError as exc:
        if raise_on_failure:
            raise CorrespondenceFailure(f"construction failed: {exc}") from exc
        rep = CorrespondenceReport(chart.name, 0, 0, 0)
        rep.failures.append(("construction", str(exc)))
        return rep
    c, sc, s = co.calc, co.sc, co.smash
    rep = CorrespondenceReport(chart.name, sc.cB.rank, sc.cH.rank, c.rank)

    def fail(name, witness):
        rep.failures.append((name, witness))

    def count(name):
        rep.checks[name] = rep.checks.get(name, 0) + 1

    if c.rank:
        # direction 1 then 2: Gamma -> Gamma_# -> Gamma
        for i in range(c.rank):
            w = c.form(i)
            X = co.theta_gamma_inv(w)
            if co.theta_gamma(X) != w:
                fail("theta_Gamma theta_Gamma^-1 = id", f"{c.labels[i]} -> {X}")
            count("theta_Gamma theta_Gamma^-1 = id")
        for _ in range(samples):
            w = random_form(c, rng)
            X = co.theta_gamma_inv(w)
            if co.theta_gamma(X) != w:
                fail("theta_Gamma theta_Gamma^-1 = id", repr(w))
            count("theta_Gamma theta_Gamma^-1 = id")
            if co.theta_gamma_inv(co.theta_gamma(X)) != X:
                fail("theta_Gamma^-1 theta_Gamma = id", repr(X))
            count("theta_Gamma^-1 theta_Gamma = id")
        for _ in range(samples):
            x, z = random_smash(s, rng, 2), random_smash(s, rng, 2)
            dx = sc.d(x)
            if co.theta_gamma(dx) != c.d(s.theta(x)):
                fail("theta_Gamma d_# = d theta", repr(x))
            count("theta_Gamma d_# = d theta")
            if co.theta_gamma(sc.lmul(z, dx)) != c.left_mul(s.theta(z), co.theta_gamma(dx)):
                fail("theta_Gamma left linear", f"{z} . d_#({x})")
            count("theta_Gamma left linear")
            if co.theta_gamma(sc.rmul(dx, z)) != c.right_mul(co.theta_gamma(dx), s.theta(z)):
                fail("theta_Gamma right linear", f"d_#({x}) . {z}")
            count("theta_Gamma right linear")
        # direction 2 then 1: the sub-calculi generated by B#1 and 1#H
        B, H = s.B, s.H
        for l in B.letters():
            g = TensorElement.pure(B.word_element((l,)), H.one())
            if sc.d(g) != sc.part1(OneForm(sc.cB, sc.cB.dtable[l]), H.one()):
                fail("d_# restricts to d_B", B.letter_name(l))
            for k in range(sc.cB.rank):
                lhs = sc.rmul(sc.part1(sc.cB.form(k), H.one()), g)
                if lhs != sc.part1(OneForm(sc.cB, sc.cB.table[l][k]), H.one()):
                    fail("right B-action restricts to Gamma_B", f"{sc.cB.labels[k]} {B.letter_name(l)}")
                count("Gamma_B (x) 1 recovered")
        for l in H.letters():
            g = TensorElement.pure(B.one(), H.word_element((l,)))
            if sc.d(g) != sc.part2(B.one(), OneForm(sc.cH, sc.cH.dtable[l])):
                fail("d_# restricts to d_H", H.letter_name(l))
            for k in range(sc.cH.rank):
                lhs = sc.rmul(sc.part2(B.one(), sc.cH.form(k)), g)
                if lhs != sc.part2(B.one(), OneForm(sc.cH, sc.cH.table[l][k])):
                    fail("right H-action restricts to Gamma_H", f"{sc.cH.labels[k]} {H.letter_name(l)}")
                count("1 (x) Gamma_H recovered")
    if rep.failures and raise_on_failure:
        name, witness = rep.failures[0]
        raise CorrespondenceFailure(f"{chart.name}: {name} fails at {witness}")
    return rep


def round_trip(co: Correspondence, w: OneForm) -> SmashForm:
    X = co.theta_gamma_inv(w)
    back = co.theta_gamma(X)
    if back != w:
        raise RoundTripFailure(f"{w} -> {X} -> {back}")
    return X
