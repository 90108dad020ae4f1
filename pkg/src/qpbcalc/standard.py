"""The standard objects of the quantum P^1 bundle, built once and cached."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .fodc import Calculus, FormCoaction, build_4dplus, transport_expressions
from .hopf import (
    Coaction,
    HopfData,
    HopfQuotient,
    build_hopf_oq_p,
    build_hopf_oq_sl2,
    coaction_from_quotient,
)
from .ncalg import Element, Presentation, presentation_b1, presentation_b2, presentation_oq_sl2
from .ore import algebra_map, embedding, extend_calculus, extend_coaction, localize


@dataclass
class Chart:
    """Sections over one basic open: algebra, calculus, coaction, base algebra."""

    name: str
    alg: Presentation
    calc: Calculus
    coaction: Coaction
    forms: FormCoaction
    base: Presentation | None = None
    base_map: object = None  # Element of base -> Element of alg


@dataclass
class Standard:
    A: Presentation
    calc: Calculus
    hopf: HopfData
    quotient: HopfQuotient
    H: Presentation
    charts: dict

    def chart(self, name: str) -> Chart:
        return self.charts[name]


def _localized_chart(std_calc, std_coact, std_forms, root_alg, name, gens, base=None, base_images=None) -> Chart:
    alg = root_alg
    calc = std_calc
    coact = std_coact
    for g in gens:
        nxt = localize(alg, g)
        calc = extend_calculus(calc, g, nxt)
        coact = extend_coaction(coact, g, nxt)
        alg = nxt
    emb = embedding(root_alg, alg)
    exprs = tuple(transport_expressions(e, emb) for e in std_forms.expressions)
    forms = FormCoaction(calc, coact, expressions=exprs)
    base_map = algebra_map(base, alg, base_images(alg)) if base is not None else None
    return Chart(name, alg, calc, coact, forms, base, base_map)


@lru_cache(maxsize=1)
def standard() -> Standard:
    A = presentation_oq_sl2()
    calc = build_4dplus(A)
    hd = build_hopf_oq_sl2(A)
    quo = build_hopf_oq_p(hd)
    H = quo.target.alg
    coact = coaction_from_quotient(hd, quo)
    forms = FormCoaction(calc, coact)
    B1, B2 = presentation_b1(), presentation_b2()
    B12 = localize(B1, "u")
    charts = {
        "M": Chart("M", A, calc, coact, forms),
        "U1": _localized_chart(
            calc, coact, forms, A, "U1", ["alpha"], B1, lambda L: {(0, 1): L.gen("gamma") * L.gen("ainv")}
        ),
        "U2": _localized_chart(
            calc, coact, forms, A, "U2", ["gamma"], B2, lambda L: {(0, 1): L.gen("alpha") * L.gen("ginv")}
        ),
        "U12": _localized_chart(
            calc,
            coact,
            forms,
            A,
            "U12",
            ["alpha", "gamma"],
            B12,
            lambda L: {(0, 1): L.gen("gamma") * L.gen("ainv"), (0, -1): L.gen("alpha") * L.gen("ginv")},
        ),
    }
    return Standard(A, calc, hd, quo, H, charts)


def element(alg: Presentation, *names: str) -> Element:
    """Product of named generators (``ainv`` etc. allowed)."""
    out = alg.one()
    for n in names:
        out = out * alg.gen(n)
    return out
