"""Sheaves over the basic opens of quantum P^1.

The base of the topology is the finite poset of index sets I ⊆ {1, ..., n};
the empty index set stands for the whole space M, and U_J ⊆ U_I iff I ⊆ J.
The empty open is not a basic open; by convention every sheaf assigns it the
zero object (``ZERO_SECTION``).

Four sheaves are assembled for n = 2:

* F_G: O_q(SL_2) and its localizations A_1, A_2, A_12;
* O_M: the coinvariant subalgebras B_1 = C[u], B_2 = C[v], B_12 = B_1[u^-1],
  with global sections computed as an equalizer;
* Upsilon_G: the localized 4D+ calculi;
* Upsilon_M: their pullbacks to the B's.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

from .errors import GluingFailure, IdentityViolation, LawViolation, NotIsomorphic
from .fodc import (
    Calculus,
    FormTensor,
    OneForm,
    Preimage,
    PullbackData,
    horizontal_forms,
    pullback_calculus,
    realize,
)
from .hopf import TensorElement, coinvariant_basis, mono_element, monomials_up_to
from .linalg import RowReducer, kernel
from .ncalg import Element, Presentation, enumerate_basis, mono_key, presentation_free
from .ore import algebra_map, calculus_embedding, embedding, induced_calculi_isomorphic
from .scalar import ONE
from .standard import Chart, standard

ZERO_SECTION = None  # sections over the empty open: the zero algebra / zero module


@dataclass(frozen=True, order=True)
class OpenIndex:
    """U_I for a sorted index set I; the empty set is the whole space M."""

    indices: tuple[int, ...]

    @classmethod
    def of(cls, *idx: int) -> "OpenIndex":
        return cls(tuple(sorted(set(idx))))

    @property
    def is_whole(self) -> bool:
        return not self.indices

    def contains(self, other: "OpenIndex") -> bool:
        """U_other ⊆ U_self."""
        return set(self.indices) <= set(other.indices)

    def __str__(self) -> str:
        return "M" if self.is_whole else "U" + "".join(map(str, self.indices))


def basic_opens(n: int) -> list[OpenIndex]:
    """M and every nonempty intersection U_I, coarsest first."""
    out = [OpenIndex(())]
    for r in range(1, n + 1):
        out.extend(OpenIndex(c) for c in itertools.combinations(range(1, n + 1), r))
    return out


def chains(opens: Iterable[OpenIndex], length: int = 3) -> list[tuple[OpenIndex, ...]]:
    """Chains I ⊆ J ⊆ ... of the requested length (repetitions allowed)."""
    opens = list(opens)
    out = []
    for combo in itertools.product(opens, repeat=length):
        if all(a.contains(b) for a, b in zip(combo, combo[1:])):
            out.append(combo)
    return out


@dataclass
class SheafAssignment:
    """Sections per open and restriction maps per inclusion U_J ⊆ U_I.

    ``restrict[(I, J)]`` maps sections over U_I to sections over U_J.
    """

    name: str
    sections: dict
    restrict: dict
    samples: Callable[[OpenIndex], list] = field(repr=False, default=lambda I: [])

    def at(self, I: OpenIndex):
        if not I.is_whole and not I.indices:
            return ZERO_SECTION
        return self.sections[I]

    def r(self, I: OpenIndex, J: OpenIndex) -> Callable:
        if I == J:
            return lambda x: x
        return self.restrict[(I, J)]

    @property
    def opens(self) -> list[OpenIndex]:
        return sorted(self.sections, key=lambda I: (len(I.indices), I.indices))


@dataclass
class Bundle:
    total_functions: SheafAssignment  # F_G: functions on the total space
    base_functions: SheafAssignment  # O_M
    total_forms: SheafAssignment  # Upsilon_G: one-forms on the total space
    base_forms: SheafAssignment  # Upsilon_M
    pullbacks: dict  # OpenIndex -> PullbackData of base_forms inside total_forms
    global_sections: "Equalizer"


CHART_OF = {(): "M", (1,): "U1", (2,): "U2", (1, 2): "U12"}


def _sample_elements(alg: Presentation, degree: int = 3, bound: int = 1) -> list[Element]:
    return [mono_element(alg, m) for m in monomials_up_to(alg, degree, bound)]


# -- global sections of O_M ---------------------------------------------------------


@dataclass
class Equalizer:
    """Pairs (f_1, f_2) in B_1 (+) B_2 with equal restrictions to B_12, at degree <= D."""

    degree: int
    basis: list[tuple[Element, Element]]

    def is_constants(self) -> bool:
        if len(self.basis) != 1:
            return False
        f1, f2 = self.basis[0]
        return f1 == f1.alg.one().scale(f1.terms.get((), ONE)) and f2 == f2.alg.one().scale(f2.terms.get((), ONE)) and not f1.is_zero()


def equalizer(B1: Presentation, B2: Presentation, r1: Callable, r2: Callable, degree: int) -> Equalizer:
    m1 = [m for m in monomials_up_to(B1, degree, degree)]
    m2 = [m for m in monomials_up_to(B2, degree, degree)]
    vecs = []
    for k, m in enumerate(m1):
        vecs.append((("1", k), r1(mono_element(B1, m)).terms))
    for k, m in enumerate(m2):
        vecs.append((("2", k), (-r2(mono_element(B2, m))).terms))
    basis = []
    for combo in kernel(vecs):
        f1 = Element(B1, {m1[k]: v for (s, k), v in combo.items() if s == "1"})
        f2 = Element(B2, {m2[k]: v for (s, k), v in combo.items() if s == "2"})
        basis.append((f1, f2))
    return Equalizer(degree, basis)


# -- assembly -------------------------------------------------------------------------


@lru_cache(maxsize=1)
def build_p1_bundle(equalizer_degree: int = 6) -> Bundle:
    std = standard()
    opens = basic_opens(2)
    charts = {I: std.chart(CHART_OF[I.indices]) for I in opens}
    local = [I for I in opens if not I.is_whole]

    # F_G
    F_sections = {I: charts[I].alg for I in opens}
    F_restrict = {}
    for I in opens:
        for J in opens:
            if I != J and I.contains(J):
                F_restrict[(I, J)] = embedding(F_sections[I], F_sections[J])
    F_G = SheafAssignment("F_G", F_sections, F_restrict, lambda I: _sample_elements(F_sections[I]))

    # O_M on the basic opens, global sections as an equalizer
    B = {I: charts[I].base for I in local}
    U1, U2, U12 = OpenIndex.of(1), OpenIndex.of(2), OpenIndex.of(1, 2)
    B12 = B[U12]
    u12 = B12.gen("u")
    uinv12 = B12.gen("uinv")
    O_restrict = {
        (U1, U12): algebra_map(B[U1], B12, {(0, 1): u12}),
        (U2, U12): algebra_map(B[U2], B12, {(0, 1): uinv12}),
    }
    eq = equalizer(B[U1], B[U2], O_restrict[(U1, U12)], O_restrict[(U2, U12)], equalizer_degree)
    M = OpenIndex(())
    O_sections = dict(B)
    O_sections[M] = eq
    for J in local:
        # a global section is a constant
        O_restrict[(M, J)] = lambda c, J=J: B[J].one().scale(c)
    O_M = SheafAssignment(
        "O_M",
        O_sections,
        O_restrict,
        lambda I: [ONE, ONE + ONE] if I.is_whole else _sample_elements(B[I], 3, 1),
    )

    # Upsilon_G: the localized calculi, restricted componentwise
    G_sections = {I: charts[I].calc for I in opens}
    G_restrict = {}
    for (I, J) in F_restrict:
        G_restrict[(I, J)] = calculus_embedding(G_sections[I], G_sections[J])

    def g_samples(I):
        c = G_sections[I]
        out = [c.d(x) for x in _sample_elements(c.alg, 2, 1)]
        out += [c.form(i) for i in range(c.rank)]
        return out

    Upsilon_G = SheafAssignment("Upsilon_G", G_sections, G_restrict, g_samples)

    # Upsilon_M: pullbacks along the base inclusions; zero over M
    pbs: dict = {}
    for I in local:
        pbs[I] = pullback_calculus(charts[I].calc, B[I], charts[I].base_map, labels_prefix="e", name=f"Upsilon_M({I})")
    M_sections = {I: pbs[I].calculus for I in local}
    M_sections[M] = Calculus(presentation_free("C", []), [], {}, {}, name="Upsilon_M(M) = 0")
    M_restrict = {}
    for (I, J) in [(U1, U12), (U2, U12)]:
        M_restrict[(I, J)] = _restrict_pullback(pbs[I], pbs[J], charts[I], charts[J])
    for J in local:
        M_restrict[(M, J)] = lambda w, J=J: M_sections[J].zero()

    def m_samples(I):
        if I.is_whole:
            return []
        c = M_sections[I]
        return [c.d(x) for x in _sample_elements(c.alg, 3, 1)] + [c.form(i) for i in range(c.rank)]

    Upsilon_M = SheafAssignment("Upsilon_M", M_sections, M_restrict, m_samples)
    return Bundle(F_G, O_M, Upsilon_G, Upsilon_M, pbs, eq)


def _restrict_pullback(pb_I: PullbackData, pb_J: PullbackData, ch_I: Chart, ch_J: Chart) -> Callable:
    """f d_I g -> r(f) d_J r(g), computed through the ambient calculi."""
    to_J = calculus_embedding(ch_I.calc, ch_J.calc)

    def r(w: OneForm) -> OneForm:
        return pb_J.pull(to_J(realize(w, ch_I.calc, ch_I.base_map)))

    return r


# -- checks -------------------------------------------------------------------------------


@dataclass
class LawReport:
    sheaf: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_presheaf_laws(s: SheafAssignment, raise_on_failure: bool = False) -> LawReport:
    """Identity and composition laws on every chain of basic opens."""
    rep = LawReport(s.name)
    opens = s.opens
    for I in opens:
        r = s.r(I, I)
        for x in s.samples(I):
            rep.checked += 1
            if r(x) != x:
                rep.failures.append((f"R_{I}{I} = id", repr(x)))
    for I, J, K in chains(opens, 3):
        if len({I, J, K}) < 3:
            continue
        rKI, rKJ, rJI = s.r(I, K), s.r(J, K), s.r(I, J)
        for x in s.samples(I):
            rep.checked += 1
            if rKI(x) != rKJ(rJI(x)):
                rep.failures.append((f"R_{K}{I} = R_{K}{J} R_{J}{I}", repr(x)))
    if rep.failures and raise_on_failure:
        raise LawViolation(f"{s.name}: {rep.failures[0]}")
    return rep


def check_morphisms(bundle: Bundle) -> LawReport:
    """Restrictions are algebra maps, bimodule maps along them, and colinear."""
    std = standard()
    rep = LawReport("restrictions")
    F, G = bundle.total_functions, bundle.total_forms
    for (I, J), r in sorted(F.restrict.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
        chI, chJ = std.chart(CHART_OF[I.indices]), std.chart(CHART_OF[J.indices])
        xs = F.samples(I)[:12]
        rG = G.r(I, J)
        for x, y in itertools.product(xs, repeat=2):
            rep.checked += 1
            if r(x * y) != r(x) * r(y):
                rep.failures.append((f"R_{J}{I} multiplicative", f"{x} * {y}"))
        for x in xs:
            rep.checked += 1
            if chJ.coaction(r(x)) != chI.coaction(x).map_left(r):
                rep.failures.append((f"R_{J}{I} colinear", repr(x)))
            w = chI.calc.d(x)
            if rG(w) != chJ.calc.d(r(x)):
                rep.failures.append((f"R_{J}{I} intertwines d", repr(x)))
            for y in xs[:4]:
                rep.checked += 1
                lhs = rG(chI.calc.right_mul(chI.calc.left_mul(y, w), x))
                rhs = chJ.calc.right_mul(chJ.calc.left_mul(r(y), rG(w)), r(x))
                if lhs != rhs:
                    rep.failures.append((f"R_{J}{I} bimodule", f"{y} d({x}) {x}"))
        for i in range(chI.calc.rank):
            w = chI.calc.form(i)
            rep.checked += 1
            lhs = chJ.forms(rG(w))
            rhs = _map_form_tensor(chI.forms(w), rG, chJ.calc)
            if lhs != rhs:
                rep.failures.append((f"R_{J}{I} colinear on forms", chI.calc.labels[i]))
    return rep


def _map_form_tensor(t: FormTensor, r: Callable, target: Calculus) -> FormTensor:
    out = None
    src = t.calc
    for (i, am, hm), v in t.terms.items():
        w = r(OneForm(src, {i: mono_element(src.alg, am)})).scale(v)
        term = FormTensor.pure(w, mono_element(t.hopf, hm))
        out = term if out is None else out + term
    return out if out is not None else FormTensor(target, t.hopf, {})


@dataclass
class GluingReport:
    checks: dict = field(default_factory=dict)  # name -> (status, detail)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_gluing(bundle: Bundle, separation_degree: int = 4, gluing_degree: int = 2, raise_on_failure: bool = False) -> GluingReport:
    rep = GluingReport()
    F = bundle.total_functions
    M, U1, U2, U12 = OpenIndex(()), OpenIndex.of(1), OpenIndex.of(2), OpenIndex.of(1, 2)
    A = F.at(M)
    # separation: A_{<=D} -> A_1 (+) A_2 is injective
    monos = [m for d in range(separation_degree + 1) for m in enumerate_basis(A, d, 0)]
    r1, r2 = F.r(M, U1), F.r(M, U2)
    vecs = []
    for k, m in enumerate(monos):
        x = mono_element(A, m)
        v = {("1", mm): c for mm, c in r1(x).terms.items()}
        v.update({("2", mm): c for mm, c in r2(x).terms.items()})
        vecs.append((k, v))
    ker = kernel(vecs)
    rep.checks["F_G separation"] = (not ker, f"{len(monos)} monomials of degree <= {separation_degree}")
    if ker:
        rep.failures.append(("F_G separation", repr(ker[0])))
    # gluing: matching pairs over U_12 in the window come from A
    A1, A2 = F.at(U1), F.at(U2)
    w1 = monomials_up_to(A1, gluing_degree, 1)
    w2 = monomials_up_to(A2, gluing_degree, 1)
    s1, s2 = F.r(U1, U12), F.r(U2, U12)
    vecs = [(("1", k), s1(mono_element(A1, m)).terms) for k, m in enumerate(w1)]
    vecs += [(("2", k), (-s2(mono_element(A2, m))).terms) for k, m in enumerate(w2)]
    glue_bad = []
    pairs = kernel(vecs)
    pre = Preimage(A, r1, gluing_degree, 0, cap=gluing_degree + 2)
    for combo in pairs:
        x1 = Element(A1, {w1[k]: v for (s, k), v in combo.items() if s == "1"})
        x2 = Element(A2, {w2[k]: v for (s, k), v in combo.items() if s == "2"})
        g = pre(x1)
        if g is None or r2(g) != x2:
            glue_bad.append((x1, x2))
    rep.checks["F_G gluing"] = (not glue_bad, f"{len(pairs)} matching pairs at degree <= {gluing_degree}")
    if glue_bad:
        rep.failures.append(("F_G gluing", repr(glue_bad[0])))
    eq = bundle.global_sections
    rep.checks["O_M equalizer = constants"] = (eq.is_constants(), f"degree <= {eq.degree}, dim {len(eq.basis)}")
    if not eq.is_constants():
        rep.failures.append(("O_M equalizer", repr(eq.basis)))
    if rep.failures and raise_on_failure:
        raise GluingFailure(f"{rep.failures[0]}")
    return rep


def coinvariants_match_base(bundle: Bundle, degree: int = 4, bound: int = 2) -> dict:
    """F_G^coH(U_I) = O_M(U_I) inside the monomial window, for every basic open."""
    std = standard()
    out = {}
    for I in basic_opens(2):
        ch = std.chart(CHART_OF[I.indices])
        # the same window on both sides: degree 0..D, exponents on inverses <= bound
        window = {m for d in range(degree + 1) for m in enumerate_basis(ch.alg, d, bound)}
        co = coinvariant_basis(ch.coaction, range(degree + 1), bound)
        co_red = RowReducer(order=mono_key)
        for x in co:
            co_red.add(x.terms)
        base_red = RowReducer(order=mono_key)
        if I.is_whole:
            base_red.add(ch.alg.one().terms)
        else:
            for m in monomials_up_to(ch.base, 2 * degree + bound, 2 * degree + bound):
                y = ch.base_map(mono_element(ch.base, m))
                if all(k in window for k in y.terms):
                    base_red.add(y.terms)
        same = len(co_red) == len(base_red) and all(co_red.contains(v) for v in base_red.basis())
        out[str(I)] = (same, len(co_red), len(base_red))
    return out


@dataclass
class SubsheafReport:
    per_open: dict  # str(I) -> HorizontalReport

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.per_open.values())


def horizontal_subsheaf(bundle: Bundle, opens: Iterable[str] = ("U1", "U2"), degree: int = 2, raise_on_failure: bool = False) -> SubsheafReport:
    """Upsilon^hor and Upsilon^coH per open and the identity Upsilon_M = Upsilon^hor ∩ Upsilon^coH."""
    std = standard()
    per = {}
    for name in opens:
        ch = std.chart(name)
        coeff = [m for m in monomials_up_to(ch.alg, 4, 4) if len(m) <= 3]
        base = monomials_up_to(ch.base, degree, degree)
        big = monomials_up_to(ch.base, 3 * degree, 3 * degree)
        per[name] = horizontal_forms(ch.calc, ch.forms, ch.base, ch.base_map, coeff, base, big)
    rep = SubsheafReport(per)
    if not rep.ok and raise_on_failure:
        bad = next(k for k, r in per.items() if not r.ok)
        raise IdentityViolation(f"{bad}: {per[bad].witness}")
    return rep


coinvariant_subsheaf = horizontal_subsheaf


def quantum_section_check(s: Element) -> bool:
    """(id (x) pi) Delta(s) = s (x) pi(s)."""
    std = standard()
    quo = std.quotient
    lhs = std.hopf.coproduct(s).map_factor(1, quo.project, quo.target.alg)
    return lhs == TensorElement.pure(s, quo.project(s))


@dataclass
class ConstantCalculus:
    calculus: Calculus
    u1: Calculus
    u2: Calculus
    isomorphism: object
    matches_quotient: bool
    quotient_witness: str


def constant_structure_calculus(quotient=None) -> ConstantCalculus:
    """The calculi induced on O_q(P) by j_1 and j_2, and their comparison."""
    from .smash import cleaving_u1, cleaving_u2

    std = standard()
    j1, j2 = cleaving_u1(), cleaving_u2()
    c1 = pullback_calculus(std.chart("U1").calc, j1.hopf.alg, j1.j, labels_prefix="h", name="induced by j1").calculus
    c2 = pullback_calculus(std.chart("U2").calc, j2.hopf.alg, j2.j, labels_prefix="h", name="induced by j2").calculus
    iso = induced_calculi_isomorphic(c1, c2)
    matches, witness = False, ""
    if quotient is not None:
        try:
            induced_calculi_isomorphic(c1, quotient)
            matches = True
        except NotIsomorphic as exc:
            witness = str(exc)
    return ConstantCalculus(c1, c1, c2, iso, matches, witness)
