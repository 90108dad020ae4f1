"""Ore localization of presented algebras, and extension of coactions and calculi.

A localization is rebuilt from the root presentation and the set of inverted
generators, so ``A[alpha^-1][gamma^-1]`` and ``A[gamma^-1][alpha^-1]`` come out
as the same rewriting system.  Inverting ``g`` adds

* the inverse letter with ``g g^-1 -> 1`` and ``g^-1 g -> 1``,
* commutation rules for ``g^-1`` derived from the scalar rules of ``g``,
* length-one elimination rules for partners of ``g`` that do not commute
  with it up to a scalar (``delta -> alpha^-1 (1 + q^-1 beta gamma)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import (
    InconsistentTable,
    NotInvertibleCoactionImage,
    OrderDependenceDetected,
    TableNotInvertible,
    UnsupportedOreElement,
)
from .ncalg import (
    Element,
    Generator,
    Presentation,
    Rule,
    derive_inverse_rules,
    monomial_to_word,
)


def _gen_index(p: Presentation, g: int | str) -> int:
    if isinstance(g, int):
        return g
    return p.by_name[g].index


def _inverse_name(name: str) -> str:
    short = {"alpha": "ainv", "gamma": "ginv", "beta": "binv", "delta": "dinv"}
    return short.get(name, name + "inv")


def localize(p: Presentation, g: int | str) -> Presentation:
    """The localization of ``p`` at the generator ``g`` (by index or name)."""
    root = p.root or p
    gi = _gen_index(root, g)
    inverted = set(p.inverted if p.root else ()) | {gi}
    return _build(root, frozenset(inverted))


def _build(root: Presentation, inverted: frozenset[int]) -> Presentation:
    for gi in sorted(inverted):
        _check_supported(root, gi)
    gens = [
        Generator(g.name, g.index, g.invertible or g.index in inverted, g.inverse_name or _inverse_name(g.name) if (g.invertible or g.index in inverted) else None, g.degree)
        for g in root.gens
    ]
    base = list(root.rules)
    extra = derive_inverse_rules(gens, base, inverted - root.inverted)
    unary: list[Rule] = []
    eliminated: set[int] = set()
    for gi in sorted(inverted):
        for partner, rhs in sorted(root.ore.get(gi, {}).items()):
            if partner in eliminated:
                continue
            eliminated.add(partner)
            unary.append(Rule(((partner, 1),), tuple(rhs)))
    rules = unary + [r for r in base + extra if not any(l[0] in eliminated for l in r.lhs)]
    names = "".join(sorted(root.gens[i].name[0] for i in inverted))
    return Presentation(
        f"{root.name}[{','.join(root.gens[i].name + '^-1' for i in sorted(inverted))}]",
        gens,
        rules,
        eliminations=[e for e in root.eliminations if not (set(e) & eliminated)],
        ore=root.ore,
        root=root,
        inverted=inverted,
        graded=root.graded,
        step_budget=root.step_budget,
        notes=f"localized at {names}",
    )


def _check_supported(root: Presentation, gi: int) -> None:
    """Every non-scalar rule touching g must have declared Ore data."""
    partners_ok = set(root.ore.get(gi, {}))
    for r in root.rules:
        if len(r.lhs) == 2 and gi in (r.lhs[0][0], r.lhs[1][0]):
            if r.scalar() is None:
                other = r.lhs[0][0] if r.lhs[1][0] == gi else r.lhs[1][0]
                if other not in partners_ok:
                    raise UnsupportedOreElement(
                        f"{root.gens[gi].name} has a non-scalar rule with {root.gens[other].name}"
                    )


def embedding(src: Presentation, dst: Presentation) -> Callable[[Element], Element]:
    """Algebra map sending each generator of ``src`` to the same-named generator of ``dst``."""
    images = {}
    for g in src.gens:
        d = dst.by_name[g.name].index
        images[(g.index, 1)] = dst.word_element(((d, 1),))
        if g.invertible:
            images[(g.index, -1)] = dst.word_element(((d, -1),))
    return algebra_map(src, dst, images)


def algebra_map(src: Presentation, dst: Presentation, images: dict) -> Callable[[Element], Element]:
    """Multiplicative extension of letter images; caches monomial images."""
    cache: dict = {}

    def mono(m):
        hit = cache.get(m)
        if hit is None:
            hit = dst.one()
            for l in monomial_to_word(m):
                hit = hit * images[l]
            cache[m] = hit
        return hit

    def f(x: Element) -> Element:
        out = dst.zero()
        for m, c in x.terms.items():
            out = out + mono(m).scale(c)
        return out

    f.images = images  # type: ignore[attr-defined]
    return f


def embed(x: Element, dst: Presentation) -> Element:
    return embedding(x.alg, dst)(x)


@dataclass
class IterationCertificate:
    first: Presentation
    second: Presentation
    samples: int
    same_rules: bool


def iterate(p: Presentation, gens: Sequence[int | str], samples: Iterable[Element] = ()) -> tuple[Presentation, IterationCertificate]:
    """Localize at each generator in turn, and also in reverse order; compare."""
    a = p
    for g in gens:
        a = localize(a, g)
    b = p
    for g in reversed(list(gens)):
        b = localize(b, g)
    same = a.signature() == b.signature()
    if not same:
        raise OrderDependenceDetected("rule sets differ")
    ea, eb = embedding(p, a), embedding(p, b)
    n = 0
    for x in samples:
        xa, xb = ea(x), eb(x)
        if xa.terms != xb.terms:
            raise OrderDependenceDetected(f"{x} embeds differently")
        n += 1
    return a, IterationCertificate(a, b, n, same)


# -- coactions ---------------------------------------------------------------


def extend_coaction(coact, g: int | str, target: Presentation | None = None):
    """Extend a coaction A -> A (x) H to the localization at g.

    delta_R(g) must be a single tensor ``c g (x) h`` with h invertible in H;
    then delta_R(g^-1) = c^-1 g^-1 (x) h^-1.
    """
    from .hopf import Coaction, TensorElement

    A = coact.source
    H = coact.hopf
    gi = _gen_index(A.root or A, g)
    L = target or localize(A, gi)
    img = coact.images[(gi, 1)]
    if len(img.terms) != 1:
        raise NotInvertibleCoactionImage(f"delta_R({A.gens[gi].name}) is not a single tensor")
    ((ma, mh), c), = img.terms.items()
    if ma != ((gi, 1),) or len(mh) != 1 or abs(mh[0][1]) != 1 or not H.gens[mh[0][0]].invertible:
        raise NotInvertibleCoactionImage(f"delta_R({A.gens[gi].name}) = {img} has no visible inverse")
    hinv = ((mh[0][0], -mh[0][1]),)
    to_L = embedding(A, L)
    live = set(live_letters(L))
    images = {l: t.map_left(to_L) for l, t in coact.images.items() if l in live}
    images[(gi, -1)] = TensorElement((L, H), {(((gi, -1),), hinv): c.inv()})
    return Coaction(L, H, images, coact.hopf_data)


# -- calculi -----------------------------------------------------------------


def extend_calculus(c, g: int | str, target: Presentation | None = None):
    """Extend a calculus to the localization at g.

    The table for g^-1 solves X T(g) = I by back-substitution (T(g) is
    triangular up to a permutation of the form labels for alpha and gamma in
    the 4D+ tables); d(g^-1) = -g^-1 d(g) g^-1.  Letters eliminated in the
    localization lose their tables.
    """
    from .fodc import Calculus, OneForm

    A = c.alg
    gi = _gen_index(A.root or A, g)
    L = target or localize(A, gi)
    to_L = embedding(A, L)
    n = c.rank
    live = set(live_letters(L))
    gl = (gi, 1)
    if gl not in c.table:
        raise TableNotInvertible(f"no table for {A.gens[gi].name}")
    M = [[to_L(c.table[gl][i].get(j, A.zero())) for j in range(n)] for i in range(n)]
    # omega^i g^-1 = sum_j X[i][j] omega^j and (omega^i g^-1) g = omega^i
    # give sum_j X[i][j] M[j][k] = delta_ik with entries multiplied in L
    X = _left_inverse(M, L)
    if X is None:
        raise TableNotInvertible(f"table of {A.gens[gi].name} is not triangular up to permutation")

    def lift(row):
        return {j: to_L(e) for j, e in row.items()}

    table = {l: [lift(r) for r in rows] for l, rows in c.table.items() if l in live}
    table[(gi, -1)] = [{j: e for j, e in enumerate(row) if not e.is_zero()} for row in X]
    dtable = {l: lift(r) for l, r in c.dtable.items() if l in live}
    newc = Calculus(L, c.labels, table, dtable, name=f"{c.name} on {L.name}")
    ginv = L.word_element(((gi, -1),))
    dg = OneForm(newc, dtable[gl])
    newc.dtable[(gi, -1)] = (-newc.left_mul(ginv, newc.right_mul(dg, ginv))).comps
    newc._reset()
    newc.check_inverse_tables()
    return newc


def calculus_embedding(c, target_calc) -> Callable:
    """Form map Gamma -> Gamma_loc induced by the algebra embedding (labels shared)."""
    from .fodc import OneForm

    to_L = embedding(c.alg, target_calc.alg)

    def f(w):
        return OneForm(target_calc, {i: to_L(e) for i, e in w.comps.items()})

    return f


def live_letters(L: Presentation) -> list:
    """Letters that are themselves in normal form (not eliminated)."""
    return [l for l in L.letters() if L.is_normal_word((l,))]


def _left_inverse(M: list[list[Element]], L: Presentation) -> list[list[Element]] | None:
    """Solve X M = I for a matrix M triangular up to row/column permutation.

    Pivots must be units of the form c * monomial in invertible letters.
    """
    n = len(M)
    # pivot order: repeatedly pick a row with exactly one nonzero entry among
    # the remaining columns
    rows_left = set(range(n))
    cols_left = set(range(n))
    order: list[tuple[int, int]] = []
    while rows_left:
        pick = None
        for r in sorted(rows_left):
            nz = [k for k in cols_left if not M[r][k].is_zero()]
            if len(nz) == 1:
                pick = (r, nz[0])
                break
        if pick is None:
            return None
        order.append(pick)
        rows_left.discard(pick[0])
        cols_left.discard(pick[1])
    inv_piv = {}
    for r, k in order:
        u = _unit_inverse(M[r][k], L)
        if u is None:
            return None
        inv_piv[(r, k)] = u
    X = []
    for i in range(n):
        # x M = e_i column by column: x[r] is fixed by column k once every
        # other row touching column k is known
        x = [L.zero() for _ in range(n)]
        target = [L.one() if k == i else L.zero() for k in range(n)]
        known: set[int] = set()
        remaining = list(order)
        progress = True
        while remaining and progress:
            progress = False
            for r, k in list(remaining):
                others = [j for j in range(n) if j != r and not M[j][k].is_zero()]
                if all(j in known for j in others):
                    acc = target[k]
                    for j in others:
                        acc = acc - x[j] * M[j][k]
                    x[r] = acc * inv_piv[(r, k)]
                    known.add(r)
                    remaining.remove((r, k))
                    progress = True
        if remaining:
            return None
        X.append(x)
    for i in range(n):
        for k in range(n):
            s = L.zero()
            for j in range(n):
                s = s + X[i][j] * M[j][k]
            if s != (L.one() if i == k else L.zero()):
                raise InconsistentTable("left inverse check failed")
    return X


def _unit_inverse(e: Element, L: Presentation) -> Element | None:
    if len(e.terms) != 1:
        return None
    (m, c), = e.terms.items()
    word = []
    for g, k in reversed(m):
        if not L.gens[g].invertible:
            return None
        word += [(g, -1 if k > 0 else 1)] * abs(k)
    return L.word_element(tuple(word)).scale(c.inv())


# -- calculi induced on the structure Hopf algebra -----------------------------


def induced_calculi_isomorphic(c1, c2):
    """Match two calculi on the same algebra by d1(g) -> d2(g).

    Returns the verified Isomorphism (bijective, bilinear, intertwining d);
    raises NotIsomorphic with the failing check otherwise.
    """
    from .errors import NotIsomorphic
    from .fodc import calculus_isomorphism

    if c1.alg.signature() != c2.alg.signature():
        raise NotIsomorphic(f"{c1.alg.name} and {c2.alg.name} differ")
    if c1.rank == 0 and c2.rank == 0:
        from .fodc import Isomorphism

        return Isomorphism(True, [], "both zero")
    iso = calculus_isomorphism(c1, c2)
    if not iso.ok:
        raise NotIsomorphic(iso.witness)
    return iso
