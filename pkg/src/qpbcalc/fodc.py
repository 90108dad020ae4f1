"""First order differential calculi as free left modules with commutation tables.

A calculus on a presentation A has form labels ``w1 .. wn``.  Its right
A-action is primitive data: ``table[letter][i]`` is ``omega^i * letter`` in
left normal form, a dict ``j -> Element``.  ``dtable[letter]`` is d(letter).
Everything else (d of monomials, right multiplication by monomials) follows
by the Leibniz rule and is cached per calculus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    AmbiguousSolution,
    IllDefinedCoaction,
    InconsistentTable,
    NoSolution,
    NotFreeInWindow,
    NotGenerated,
)
from .linalg import RowReducer, kernel, probe_affine, solve_affine
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
    mono_key,
    monomial_to_word,
    presentation_oq_sl2,
    render_terms,
    rule,
    word_to_monomial,
)
from .scalar import ONE, Coercible, RatQ, lambda_const, qconst

Row = dict  # label index -> Element


class OneForm:
    """sum_i comps[i] * omega^i, coefficients on the left."""

    __slots__ = ("calc", "comps")

    def __init__(self, calc: "Calculus", comps: Mapping[int, Element]):
        self.calc = calc
        self.comps = {i: e for i, e in comps.items() if not e.is_zero()}

    def __add__(self, other: "OneForm") -> "OneForm":
        c = dict(self.comps)
        for i, e in other.comps.items():
            c[i] = c[i] + e if i in c else e
        return OneForm(self.calc, c)

    def __neg__(self) -> "OneForm":
        return OneForm(self.calc, {i: -e for i, e in self.comps.items()})

    def __sub__(self, other: "OneForm") -> "OneForm":
        return self + (-other)

    def scale(self, c: Coercible) -> "OneForm":
        return OneForm(self.calc, {i: e.scale(c) for i, e in self.comps.items()})

    def __mul__(self, x: Element) -> "OneForm":
        return self.calc.right_mul(self, x)

    def __rmul__(self, x: Element) -> "OneForm":
        return self.calc.left_mul(x, self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.comps == other.comps

    def __hash__(self) -> int:
        return hash(frozenset(self.comps.items()))

    def is_zero(self) -> bool:
        return not self.comps

    def coeff(self, i: int | str) -> Element:
        if isinstance(i, str):
            i = self.calc.labels.index(i)
        return self.comps.get(i, self.calc.alg.zero())

    def vector(self) -> dict:
        """Flattened coordinates {(label, monomial): RatQ}."""
        out = {}
        for i, e in self.comps.items():
            for m, c in e.terms.items():
                out[(i, m)] = c
        return out

    def __repr__(self) -> str:
        return render_form(self)


def render_form(w: OneForm) -> str:
    pairs = []
    A = w.calc.alg
    for i in sorted(w.comps):
        lab = w.calc.labels[i]
        e = w.comps[i]
        for m in e.monomials():
            body = lab if not m else f"{A.render_monomial(m)} * {lab}"
            pairs.append((body, e.terms[m]))
    return render_terms(pairs)


class Calculus:
    """A FODC on ``alg`` given by commutation and differential tables."""

    def __init__(
        self,
        alg: Presentation,
        labels: Sequence[str],
        table: Mapping[tuple[int, int], Sequence[Row]],
        dtable: Mapping[tuple[int, int], Row],
        name: str = "",
        realization: Mapping[int, "OneForm"] | None = None,
    ):
        self.alg = alg
        self.labels = tuple(labels)
        self.table = {l: [dict(r) for r in rows] for l, rows in table.items()}
        self.dtable = {l: dict(r) for l, r in dtable.items()}
        self.name = name or f"calculus on {alg.name}"
        # label -> form of an ambient calculus (pullbacks), if any
        self.realization = dict(realization or {})
        self._reset()

    def _reset(self) -> None:
        self._rm: dict = {}
        self._d: dict = {}

    @property
    def rank(self) -> int:
        return len(self.labels)

    # -- construction helpers ------------------------------------------
    def form(self, i: int | str) -> OneForm:
        if isinstance(i, str):
            i = self.labels.index(i)
        return OneForm(self, {i: self.alg.one()})

    def zero(self) -> OneForm:
        return OneForm(self, {})

    def from_vector(self, v: Mapping) -> OneForm:
        comps: dict = {}
        for (i, m), c in v.items():
            comps.setdefault(i, {})[m] = c
        return OneForm(self, {i: Element(self.alg, t) for i, t in comps.items()})

    # -- bimodule structure --------------------------------------------
    def _row_times_letter(self, row: Row, l) -> Row:
        out: dict = {}
        T = self.table[l]
        for j, a in row.items():
            for k, b in T[j].items():
                v = a * b
                if k in out:
                    out[k] = out[k] + v
                else:
                    out[k] = v
        return {k: v for k, v in out.items() if not v.is_zero()}

    def right_mul_basis(self, i: int, m: Monomial) -> Row:
        """omega^i * m for a normal monomial m."""
        key = (i, m)
        hit = self._rm.get(key)
        if hit is not None:
            return hit
        if not m:
            hit = {i: self.alg.one()}
        else:
            w = monomial_to_word(m)
            prev = self.right_mul_basis(i, word_to_monomial(w[:-1]))
            hit = self._row_times_letter(prev, w[-1])
        self._rm[key] = hit
        return hit

    def right_mul(self, w: OneForm, x: Element) -> OneForm:
        out: dict = {}
        for i, a in w.comps.items():
            for m, c in x.terms.items():
                for k, b in self.right_mul_basis(i, m).items():
                    v = (a * b).scale(c)
                    out[k] = out[k] + v if k in out else v
        return OneForm(self, out)

    def right_mul_word(self, w: OneForm, word) -> OneForm:
        row = dict(w.comps)
        for l in word:
            row = self._row_times_letter(row, l)
        return OneForm(self, row)

    def left_mul(self, x: Element, w: OneForm) -> OneForm:
        return OneForm(self, {i: x * a for i, a in w.comps.items()})

    # -- differential --------------------------------------------------
    def d_mono(self, m: Monomial) -> OneForm:
        hit = self._d.get(m)
        if hit is not None:
            return hit
        if not m:
            hit = self.zero()
        else:
            w = monomial_to_word(m)
            head = word_to_monomial(w[:-1])
            l = w[-1]
            # d(head * l) = d(head) * l + head * d(l)
            part1 = self.right_mul_word(self.d_mono(head), (l,))
            part2 = self.left_mul(Element(self.alg, {head: ONE}), OneForm(self, self.dtable[l]))
            hit = part1 + part2
        self._d[m] = hit
        return hit

    def d(self, x: Element) -> OneForm:
        out = self.zero()
        for m, c in x.terms.items():
            out = out + self.d_mono(m).scale(c)
        return out

    def d_word(self, word) -> OneForm:
        """Leibniz along a raw (possibly non-normal) word."""
        out = self.zero()
        A = self.alg
        for k, l in enumerate(word):
            pre = A.word_element(tuple(word[:k]))
            piece = self.left_mul(pre, OneForm(self, self.dtable[l]))
            out = out + self.right_mul_word(piece, tuple(word[k + 1 :]))
        return out

    # -- checks --------------------------------------------------------
    def relations(self):
        """Defining relations whose letters all carry tables."""
        for lhs, rhs in self.alg.relations():
            if all(l in self.table for l in lhs) and all(l in self.table for w, _ in rhs for l in w):
                yield lhs, rhs

    def well_definedness_failures(self) -> list[str]:
        bad = []
        A = self.alg
        for lhs, rhs in self.relations():
            name = " ".join(A.letter_name(l) for l in lhs)
            dv = self.d_word(lhs)
            for w, c in rhs:
                dv = dv - self.d_word(w).scale(c)
            if not dv.is_zero():
                bad.append(f"d({name} - rhs) = {dv}")
            for i in range(self.rank):
                base = self.form(i)
                v = self.right_mul_word(base, lhs)
                for w, c in rhs:
                    v = v - self.right_mul_word(base, w).scale(c)
                if not v.is_zero():
                    bad.append(f"{self.labels[i]} * ({name} - rhs) = {v}")
        return bad

    def check_inverse_tables(self) -> None:
        """(omega^i g^-1) g = omega^i = (omega^i g) g^-1 for inverse letters."""
        for (g, s) in list(self.table):
            if s != -1 or (g, 1) not in self.table:
                continue
            for i in range(self.rank):
                a = self.right_mul_word(self.form(i), ((g, -1), (g, 1)))
                b = self.right_mul_word(self.form(i), ((g, 1), (g, -1)))
                if a != self.form(i) or b != self.form(i):
                    raise InconsistentTable(f"inverse table for {self.alg.gens[g].name} fails on {self.labels[i]}")

    def __repr__(self) -> str:
        return f"Calculus({self.name}, {list(self.labels)})"


# -- the 4D+ calculus --------------------------------------------------------


def _e(A: Presentation, *pairs) -> Element:
    out: dict = {}
    for c, m in pairs:
        _acc(out, m, RatQ.of(c))
    return Element(A, out)


LABELS_4D = ("w1", "w2", "w3", "w4")


def consistent_q_const() -> RatQ:
    """The w1-coefficient in d(beta), d(delta) compatible with delta alpha = 1 + q beta gamma.

    d(delta alpha - q beta gamma) has w1-component (q Q + (q-1)/lambda - lambda),
    so the relation forces Q = (lambda - (q-1)/lambda) / q.
    """
    lam = lambda_const()
    return (lam - (qconst(1) - 1) / lam) / qconst(1)


def reference_4dplus_data(A: Presentation, Q: RatQ | None = None):
    """d-table and the alpha/gamma columns of the right action.

    ``Q`` defaults to :func:`consistent_q_const`; pass :func:`big_q_const`
    to reproduce the literal constant (which violates d(r) = 0).
    Returns (dtable, partial table) with rows indexed 0..3 for w1..w4.
    """
    q, qi, lam = qconst(1), qconst(-1), lambda_const()
    c1 = (q - 1) / lam
    c4 = (qi - 1) / lam
    Q = consistent_q_const() if Q is None else Q
    a, b, c, d = ((AL, 1),), ((BE, 1),), ((GA, 1),), ((DE, 1),)
    dtable = {
        (AL, 1): {0: _e(A, (c1, a)), 3: _e(A, (c4, a)), 1: _e(A, (-1, b))},
        (GA, 1): {0: _e(A, (c1, c)), 3: _e(A, (c4, c)), 1: _e(A, (-1, d))},
        (BE, 1): {0: _e(A, (Q, b)), 3: _e(A, (c1, b)), 2: _e(A, (-1, a))},
        (DE, 1): {0: _e(A, (Q, d)), 3: _e(A, (c1, d)), 2: _e(A, (-1, c))},
    }

    def col(x, y):
        return [
            {0: _e(A, (q, x))},
            {1: _e(A, (1, x))},
            {2: _e(A, (1, x)), 0: _e(A, (-qi * lam, y))},
            {3: _e(A, (qi, x)), 1: _e(A, (-lam, y))},
        ]

    table = {(AL, 1): col(a, b), (GA, 1): col(c, d)}
    return dtable, table


def solve_tables(
    alg: Presentation,
    labels: Sequence[str],
    known_table: Mapping,
    dtable: Mapping,
    unknown: Sequence[tuple[int, int]],
    ansatz: Sequence[Monomial] | None = None,
    name: str = "",
    oracle: Mapping[tuple, Element] | None = None,
) -> tuple[Calculus, "TableSolveReport"]:
    """Find the unknown commutation tables by exact linear algebra.

    Each unknown entry is a combination of the ``ansatz`` monomials (default:
    the generators).  Constraints: d(r) = 0 for every relation r, and
    omega^i * r = 0 for every relation in which at most one unknown letter
    occurs per word (those are linear).  The remaining (quadratic) relations
    are verified on the solution.

    ``oracle`` maps (letter, i, j) to an independently known entry.  Oracle
    entries are consumed only while they cut down a remaining free
    direction; all others are compared against the solution afterwards.
    """
    n = len(labels)
    ansatz = list(ansatz or [((g.index, 1),) for g in alg.gens])
    index = {}
    for u in unknown:
        for i in range(n):
            for j in range(n):
                for k, m in enumerate(ansatz):
                    index[(u, i, j, k)] = len(index)
    N = len(index)
    keys = list(index)
    unknown_set = set(unknown)

    def build(cvec) -> Calculus:
        table = {l: [dict(r) for r in rows] for l, rows in known_table.items()}
        for u in unknown:
            table[u] = [dict() for _ in range(n)]
        for col, v in cvec.items():
            u, i, j, k = keys[col]
            e = Element(alg, {ansatz[k]: v})
            row = table[u][i]
            row[j] = row[j] + e if j in row else e
        return Calculus(alg, labels, table, dtable, name=name)

    def linear_relation(lhs, rhs) -> bool:
        words = [lhs] + [w for w, _ in rhs]
        return all(sum(1 for l in w if l in unknown_set) <= 1 for w in words)

    rels = list(alg.relations())
    skipped = [lhs for lhs, rhs in rels if not linear_relation(lhs, rhs)]

    def residual(cvec):
        c = build(cvec)
        out: dict = {}
        for r, (lhs, rhs) in enumerate(rels):
            if not all(l in c.table for l in lhs) or not all(l in c.table for w, _ in rhs for l in w):
                continue
            dv = c.d_word(lhs)
            for w, k in rhs:
                dv = dv - c.d_word(w).scale(k)
            for key, v in dv.vector().items():
                out[("d", r) + key] = v
            if not linear_relation(lhs, rhs):
                continue
            for i in range(n):
                base = c.form(i)
                v = c.right_mul_word(base, lhs)
                for w, k in rhs:
                    v = v - c.right_mul_word(base, w).scale(k)
                for key, x in v.vector().items():
                    out[("r", r, i) + key] = x
        return out

    rows = probe_affine(N, residual)
    sol, null, bad = solve_affine(rows, N)
    if sol is None:
        raise NoSolution(f"table system inconsistent; residual {bad[:1]}")
    free_before = len(null)
    pinned: list = []
    oracle = dict(oracle or {})

    def oracle_rows(key):
        u, i, j = key
        target = oracle[key]
        out = []
        for k, m in enumerate(ansatz):
            out.append(({index[(u, i, j, k)]: ONE}, target.coeff(m)))
        extra = [m for m in target.terms if m not in ansatz]
        if extra:
            raise NoSolution(f"oracle entry {key} leaves the ansatz")
        return out

    for key in sorted(oracle, key=repr):
        if not null:
            break
        trial = rows + [r for p in pinned for r in oracle_rows(p)] + oracle_rows(key)
        s2, n2, _ = solve_affine(trial, N)
        if s2 is not None and len(n2) < len(null):
            pinned.append(key)
            sol, null = s2, n2
    if null:
        raise AmbiguousSolution(f"table system has {len(null)} free parameters")
    calc = build(sol)
    fails = calc.well_definedness_failures()
    if fails:
        raise InconsistentTable("; ".join(fails[:3]))
    mismatches = []
    for key in sorted(oracle, key=repr):
        if key in pinned:
            continue
        u, i, j = key
        got = calc.table[u][i].get(j, alg.zero())
        if got != oracle[key]:
            mismatches.append((key, got, oracle[key]))
    report = TableSolveReport(
        N,
        len(rows),
        [tuple(alg.letter_name(l) for l in s) for s in skipped],
        free_before,
        pinned,
        len(oracle) - len(pinned),
        mismatches,
    )
    return calc, report


@dataclass
class TableSolveReport:
    unknowns: int
    equations: int
    quadratic_relations: list
    free_from_relations: int = 0
    pinned_by_oracle: list = field(default_factory=list)
    oracle_checked: int = 0
    oracle_mismatches: list = field(default_factory=list)


def fmatrix_oracle(calc_alg: Presentation, letters: Sequence[tuple[int, int]]) -> dict:
    """Entries omega^i g = sum_j (f^i_j * g) omega^j with f^i_j known in closed form."""
    from .hopf import Pairing, build_hopf_oq_sl2, build_hopf_uqsl2

    ohd = build_hopf_oq_sl2(calc_alg)
    uhd = build_hopf_uqsl2()
    P = Pairing(uhd, ohd)
    out = {}
    for (i, j), f in fmatrix_entries(P, uhd.alg).items():
        for l in letters:
            out[(l, i, j)] = P.convolve(f, calc_alg.word_element((l,)))
    return out


def build_4dplus(A: Presentation | None = None, Q: RatQ | None = None) -> Calculus:
    """The 4D+ calculus on O_q(SL_2); beta and delta columns solved for."""
    A = A or presentation_oq_sl2()
    dtable, table = reference_4dplus_data(A, Q)
    unknown = [(BE, 1), (DE, 1)]
    calc, _ = solve_tables(A, LABELS_4D, table, dtable, unknown, name="4D+", oracle=fmatrix_oracle(A, unknown))
    return calc


# -- f-matrix oracle ---------------------------------------------------------


def fmatrix_entries(pairing, U: Presentation) -> dict:
    """The functionals f^i_j known in closed form (chi_2, chi_3 omitted).

    Keys are (i, j) with 0-based indices; values are Elements of U.
    """
    q32 = RatQ.rpow(-3)  # q^(-3/2)
    lam = lambda_const()
    K, Ki, E, F = U.gen("K"), U.gen("Kinv"), U.gen("E"), U.gen("F")
    one = U.one()
    return {
        (0, 0): K * K,
        (0, 1): U.zero(),
        (0, 2): U.zero(),
        (0, 3): U.zero(),
        (1, 0): (K * F).scale(-q32 * lam),
        (1, 1): one,
        (1, 2): U.zero(),
        (1, 3): U.zero(),
        (2, 0): (E * K).scale(-q32 * lam),
        (2, 1): U.zero(),
        (2, 2): one,
        (2, 3): U.zero(),
        (3, 0): (E * F).scale(qconst(-1) * lam * lam),
        (3, 3): Ki * Ki,
    }


def convolution_row(pairing, U: Presentation, i: int, x: Element) -> dict:
    """Known entries of omega^i x = sum_j (f^i_j * x) omega^j, by convolution."""
    out = {}
    for (r, j), f in fmatrix_entries(pairing, U).items():
        if r == i:
            out[j] = pairing.convolve(f, x)
    return out


def implied_chi_values(calc: Calculus, ohd) -> dict:
    """chi_k(y) read off the w4 row: (lambda chi_k) * g = lambda sum g_1 chi_k(g_2).

    For each generator g with coproduct sum x (x) y, the coefficient of x
    in the w_k entry of w4 * g, divided by lambda, is chi_k(y).  Returns
    {(k, generator name): RatQ} for k = 2, 3; contradictory readings raise.
    """
    A = calc.alg
    lam = lambda_const()
    out: dict = {}
    for g in A.gens:
        l = (g.index, 1)
        if l not in calc.table:
            continue
        row = calc.table[l][3]
        for k in (1, 2):
            e = row.get(k, A.zero())
            for (x, y), c in ohd.coproduct_mono((l,)).terms.items():
                val = e.coeff(x) / (lam * c)
                key = (k + 1, A.render_monomial(y))
                if key in out and out[key] != val:
                    raise InconsistentTable(f"chi_{k + 1}({key[1]}) read twice: {out[key]} vs {val}")
                out[key] = val
    return out


# -- forms from differentials -----------------------------------------------


@dataclass
class FormExpression:
    """sum of a_k * d(b_k)."""

    pairs: list[tuple[Element, Element]]

    def evaluate(self, c: Calculus) -> OneForm:
        out = c.zero()
        for a, b in self.pairs:
            out = out + c.left_mul(a, c.d(b))
        return out

    def __repr__(self) -> str:
        parts = []
        for a, b in self.pairs:
            parts.append(f"({a}) d({b})")
        return " + ".join(parts) if parts else "0"


def coefficient_window(A: Presentation, max_len: int, bound: int = 1) -> list[Monomial]:
    from .hopf import monomials_up_to

    return monomials_up_to(A, max_len, bound)


def solve_forms_from_d(
    c: Calculus,
    window: int = 3,
    bound: int = 1,
    letters: Sequence | None = None,
    reverse: bool = False,
    args: Sequence[Monomial] | None = None,
) -> dict[str, FormExpression]:
    """Write every basis form as sum a_k d(b_k), b_k generators (or the monomials ``args``).

    ``reverse`` flips the pivot order, which yields a second, generally
    different, expression (used for the coaction well-definedness check).
    """
    A = c.alg
    if args is None:
        args = [(l,) for l in (letters or [l for l in A.letters() if l in c.dtable])]
    monos = coefficient_window(A, window, bound)
    red = RowReducer(order=(lambda k: _neg_key(k)) if reverse else (lambda k: (k[0], mono_key(k[1]))), track=True)
    dforms = {b: c.d_mono(b) for b in args}
    for m in monos:
        for b in args:
            v = c.left_mul(Element(A, {m: ONE}), dforms[b]).vector()
            red.add(v, (m, b))
    out = {}
    for i, lab in enumerate(c.labels):
        combo = red.express(c.form(i).vector())
        if combo is None:
            raise NotGenerated(f"{lab} not in A.dA within window {window}")
        by_arg: dict = {}
        for (m, b), v in combo.items():
            by_arg.setdefault(b, {})
            _acc(by_arg[b], m, v)
        pairs = [(Element(A, by_arg[b]), Element(A, {b: ONE})) for b in sorted(by_arg, key=mono_key) if by_arg[b]]
        expr = FormExpression(pairs)
        assert expr.evaluate(c) == c.form(i)
        out[lab] = expr
    return out


def basis_expressions(c: Calculus) -> dict[str, FormExpression]:
    """Basis forms as sums a d(b), widening the window (and then allowing words b) as needed."""
    if not c.rank:
        return {}
    for window, bound in ((3, 1), (3, 2), (4, 3)):
        try:
            return solve_forms_from_d(c, window, bound)
        except NotGenerated:
            continue
    words = [m for m in coefficient_window(c.alg, 2, 1) if m]
    try:
        return solve_forms_from_d(c, 3, 1, args=words)
    except NotGenerated:
        pass
    raise NotGenerated(f"{c.name}: basis not in A dA")


def _neg_key(k):
    i, m = k
    return (-i, tuple(-x for x in mono_key(m)[:1]), tuple((-g, -e) for g, e in m))


# -- coaction on forms --------------------------------------------------------


class FormTensor:
    """Element of Gamma (x) H: {(label, A-monomial, H-monomial): RatQ}."""

    __slots__ = ("calc", "hopf", "terms")

    def __init__(self, calc: Calculus, hopf: Presentation, terms: Mapping):
        self.calc = calc
        self.hopf = hopf
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    def __add__(self, other: "FormTensor") -> "FormTensor":
        t = dict(self.terms)
        for k, v in other.terms.items():
            _acc(t, k, v)
        return FormTensor(self.calc, self.hopf, t)

    def __sub__(self, other: "FormTensor") -> "FormTensor":
        t = dict(self.terms)
        for k, v in other.terms.items():
            _acc(t, k, -v)
        return FormTensor(self.calc, self.hopf, t)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormTensor):
            return NotImplemented
        return self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    @classmethod
    def pure(cls, w: OneForm, h: Element) -> "FormTensor":
        out: dict = {}
        for (i, m), c in w.vector().items():
            for hm, hc in h.terms.items():
                _acc(out, (i, m, hm), c * hc)
        return cls(w.calc, h.alg, out)

    def __repr__(self) -> str:
        A, H = self.calc.alg, self.hopf
        pairs = []
        for k in sorted(self.terms, key=lambda k: (k[0], mono_key(k[1]), mono_key(k[2]))):
            i, m, hm = k
            body = (f"{A.render_monomial(m)} * " if m else "") + self.calc.labels[i] + " (x) " + H.render_monomial(hm)
            pairs.append((body, self.terms[k]))
        return render_terms(pairs)


def coact_expression(c: Calculus, coaction, expr: FormExpression) -> FormTensor:
    """Delta_R(sum a d b) = sum a_0 d(b_0) (x) a_1 b_1."""
    H = coaction.hopf
    out = FormTensor(c, H, {})
    for a, b in expr.pairs:
        ta = coaction(a)
        tb = coaction(b)
        for (am, ah), ac in ta.terms.items():
            for (bm, bh), bc in tb.terms.items():
                form = c.left_mul(Element(c.alg, {am: ONE}), c.d_mono(bm))
                h = H.word_element(monomial_to_word(ah) + monomial_to_word(bh))
                out = out + FormTensor.pure(form, h).scale_all(ac * bc)
    return out


def _scale_all(self: FormTensor, c: RatQ) -> FormTensor:
    return FormTensor(self.calc, self.hopf, {k: v * c for k, v in self.terms.items()})


FormTensor.scale_all = _scale_all  # type: ignore[attr-defined]


class FormCoaction:
    """Right coaction on a calculus, fixed on the basis forms by two expressions."""

    def __init__(self, c: Calculus, coaction, window: int = 2, bound: int = 1, expressions: tuple | None = None):
        self.calc = c
        self.coaction = coaction
        if expressions is None:
            e1 = solve_forms_from_d(c, window, bound)
            e2 = solve_forms_from_d(c, window, bound, reverse=True)
        else:
            e1, e2 = expressions
            for e in (e1, e2):
                for i, lab in enumerate(c.labels):
                    if e[lab].evaluate(c) != c.form(i):
                        raise NotGenerated(f"supplied expression for {lab} does not evaluate to it")
        self.expressions = (e1, e2)
        self.basis_images: dict[int, FormTensor] = {}
        for i, lab in enumerate(c.labels):
            t1 = coact_expression(c, coaction, e1[lab])
            t2 = coact_expression(c, coaction, e2[lab])
            if t1 != t2:
                raise IllDefinedCoaction(f"Delta_R({lab}): {t1} vs {t2}")
            self.basis_images[i] = t1
        self._mcache: dict = {}

    def __call__(self, w: OneForm) -> FormTensor:
        c = self.calc
        H = self.coaction.hopf
        out = FormTensor(c, H, {})
        for (i, m), coef in w.vector().items():
            out = out + self._mono_basis(m, i).scale_all(coef)
        return out

    def _mono_basis(self, m: Monomial, i: int) -> FormTensor:
        key = (m, i)
        hit = self._mcache.get(key)
        if hit is not None:
            return hit
        c = self.calc
        H = self.coaction.hopf
        tm = self.coaction.apply_mono(m)
        out: dict = {}
        for (am, ah), ac in tm.terms.items():
            for (j, bm, bh), bc in self.basis_images[i].terms.items():
                for mm, v in c.alg.mul_monomials(am, bm).items():
                    for hm, hv in H.mul_monomials(ah, bh).items():
                        _acc(out, (j, mm, hm), ac * bc * v * hv)
        hit = FormTensor(c, H, out)
        self._mcache[key] = hit
        return hit

    def is_coinvariant(self, w: OneForm) -> bool:
        return self(w) == FormTensor.pure(w, self.coaction.hopf.one())


def transport_expressions(exprs: Mapping[str, FormExpression], f: Callable[[Element], Element]) -> dict:
    """Push a.d(b) expressions along an algebra map (e.g. into a localization)."""
    return {lab: FormExpression([(f(a), f(b)) for a, b in e.pairs]) for lab, e in exprs.items()}


def coact_right(w: OneForm, fc: FormCoaction) -> FormTensor:
    return fc(w)


# -- generic constructions -----------------------------------------------------


@dataclass
class PullbackData:
    calculus: Calculus
    basis_forms: list[OneForm]  # in the ambient calculus
    pivots: list[int]
    window: tuple[int, int]
    coords: Callable[[OneForm], Row] = field(repr=False, default=None)  # type: ignore[assignment]

    def pull(self, f: OneForm) -> OneForm:
        """The pullback form whose realization is f (f must lie in the span)."""
        return OneForm(self.calculus, self.coords(f))


class Preimage:
    """Inverse of an algebra map on its image, over a monomial window of the source.

    The window starts at (max_len, bound) and grows by one in both
    parameters, up to ``cap``, until the target is found.
    """

    def __init__(self, B: Presentation, iota: Callable[[Element], Element], max_len: int, bound: int, cap: int = 8):
        self.B = B
        self.iota = iota
        self.size = (max_len, bound)
        self.cap = cap
        self._build()

    def _build(self) -> None:
        from .hopf import monomials_up_to

        self.monos = monomials_up_to(self.B, *self.size)
        self.red = RowReducer(order=mono_key, track=True)
        for k, m in enumerate(self.monos):
            self.red.add(self.iota(Element(self.B, {m: ONE})).terms, k)

    def __call__(self, x: Element) -> Element | None:
        while True:
            combo = self.red.express(x.terms)
            if combo is not None:
                return Element(self.B, {self.monos[k]: v for k, v in combo.items()})
            if max(self.size) >= self.cap:
                return None
            self.size = (self.size[0] + 1, self.size[1] + 1)
            self._build()


def pullback_calculus(
    c: Calculus,
    B: Presentation,
    iota: Callable[[Element], Element],
    window: int = 3,
    bound: int = 3,
    max_rank: int = 8,
    labels_prefix: str = "e",
    name: str = "",
) -> PullbackData:
    """The calculus iota(B) d iota(B) inside c, as a free left B-module.

    The basis is built in echelon form: every basis form has a pivot label
    whose coefficient is a unit of the ambient algebra, and vanishes at the
    pivots of earlier basis forms.  A form is reduced by exact division at
    the pivots; each quotient must lie in iota(B) (preimages are looked up
    over the monomial window of B).  Such a basis is automatically free.
    Starting from d(iota g) for letters g, the basis is closed under right
    multiplication by the letters of B.
    """
    from .ore import _unit_inverse

    A = c.alg
    pre = Preimage(B, iota, window, bound)
    basis: list[OneForm] = []
    pivots: list[int] = []
    pivinv: list[Element] = []

    def reduce(f: OneForm) -> tuple[OneForm, dict]:
        coords: dict = {}
        for k, e in enumerate(basis):
            cf = f.comps.get(pivots[k])
            if cf is None:
                continue
            b = cf * pivinv[k]
            bb = pre(b)
            if bb is None:
                raise NotFreeInWindow(f"coefficient {b} of {c.labels[pivots[k]]} is not in the image of {B.name} within window {pre.size}")
            coords[k] = bb
            f = f - c.left_mul(b, e)
        return f, coords

    def adjoin(r: OneForm) -> None:
        for i in sorted(r.comps):
            if i in pivots:
                continue
            u = _unit_inverse(r.comps[i], A)
            if u is not None:
                basis.append(r)
                pivots.append(i)
                pivinv.append(u)
                if len(basis) > max_rank:
                    raise NotFreeInWindow(f"rank exceeds {max_rank}")
                return
        raise NotFreeInWindow(f"no unit pivot in {r}")

    letters = B.letters()
    for l in letters:
        r, _ = reduce(c.d(iota(B.word_element((l,)))))
        if not r.is_zero():
            adjoin(r)
    k = 0
    while k < len(basis):
        for l in letters:
            r, _ = reduce(c.right_mul(basis[k], iota(B.word_element((l,)))))
            if not r.is_zero():
                adjoin(r)
        k += 1

    def coords(f: OneForm) -> Row:
        r, co = reduce(f)
        if not r.is_zero():
            raise NotFreeInWindow(f"{f} not in the pullback")
        return co

    table = {l: [coords(c.right_mul(e, iota(B.word_element((l,))))) for e in basis] for l in letters}
    dtable = {l: coords(c.d(iota(B.word_element((l,))))) for l in letters}
    labels = [f"{labels_prefix}{k + 1}" for k in range(len(basis))]
    calc = Calculus(B, labels, table, dtable, name=name or f"pullback to {B.name}", realization=dict(enumerate(basis)))
    return PullbackData(calc, basis, pivots, pre.size, coords)


def realize(w: OneForm, ambient: Calculus, iota: Callable[[Element], Element]) -> OneForm:
    """Image of a pullback form in the ambient calculus."""
    out = ambient.zero()
    for i, e in w.comps.items():
        out = out + ambient.left_mul(iota(e), w.calc.realization[i])
    return out


@dataclass
class QuotientData:
    calculus: Calculus
    killed: list[str]
    surviving: list[str]
    substitution: dict


def quotient_calculus(c: Calculus, quo, label_map: Callable[[str], str] | None = None, name: str = "") -> QuotientData:
    """Gamma / (I dA + A dI) for I generated by the killed generators of ``quo``.

    Gamma/I.Gamma is the free module over the quotient on the same labels;
    the remaining part of Gamma_I is the sub-bimodule generated by the images
    of d(g) and omega^i g for killed g.  Labels are eliminated through seeds
    with a unit coefficient; a seed without one is reported.
    """
    A = c.alg
    H = quo.target.alg
    pi = quo.project
    n = c.rank
    label_map = label_map or (lambda s: s.replace("w", "wb"))

    def push(row: Mapping[int, Element]) -> dict:
        out = {}
        for i, e in row.items():
            v = pi(e)
            if not v.is_zero():
                out[i] = v
        return out

    # induced right action of H letters on the labels (before elimination)
    pre: dict = {}
    for l in A.letters():
        if l not in c.table:
            continue
        img = quo.images.get(l)
        if img is None or img.is_zero() or len(img.terms) != 1:
            continue
        (m, coef), = img.terms.items()
        if len(m) == 1 and abs(m[0][1]) == 1 and coef.is_one():
            pre.setdefault((m[0][0], m[0][1]), l)
    Ht = {hl: [push(c.table[al][i]) for i in range(n)] for hl, al in pre.items()}

    def times_letter(row: dict, hl) -> dict:
        out: dict = {}
        for j, a in row.items():
            for k, b in Ht[hl][j].items():
                v = a * b
                out[k] = out[k] + v if k in out else v
        return {k: v for k, v in out.items() if not v.is_zero()}

    subst: dict[int, dict] = {}  # eliminated label -> row in remaining labels

    def reduce(row: dict) -> dict:
        changed = True
        row = dict(row)
        while changed:
            changed = False
            for k in list(row):
                if k in subst:
                    a = row.pop(k)
                    for j, b in subst[k].items():
                        v = a * b
                        row[j] = row[j] + v if j in row else v
                    row = {j: v for j, v in row.items() if not v.is_zero()}
                    changed = True
                    break
        return row

    seeds: list[dict] = []
    for g in quo.killed:
        l = (g, 1)
        seeds.append(push(c.dtable[l]))
        for i in range(n):
            seeds.append(push(c.table[l][i]))
    from .ore import _unit_inverse

    pending = list(seeds)
    while pending:
        s = reduce(pending.pop(0))
        if not s:
            continue
        unit = None
        for k in sorted(s):
            u = _unit_inverse(s[k], H)
            if u is not None:
                unit = (k, u)
                break
        if unit is None:
            raise NotFreeInWindow(f"relation without unit coefficient: {s}")
        k, uinv = unit
        rest = {j: -(uinv * v) for j, v in s.items() if j != k}
        subst[k] = rest
        for j in list(subst):
            subst[j] = reduce(subst[j]) if j != k else subst[j]
        # closure: the relation omega^k = rest must hold after right multiplication
        for hl in Ht:
            lhs = times_letter({k: H.one()}, hl)
            rhs = times_letter(rest, hl) if rest else {}
            diff = dict(lhs)
            for j, v in rhs.items():
                diff[j] = diff[j] - v if j in diff else -v
            pending.append({j: v for j, v in diff.items() if not v.is_zero()})
    surviving = [i for i in range(n) if i not in subst]
    newidx = {i: k for k, i in enumerate(surviving)}

    def finish(row: dict) -> dict:
        r = reduce(row)
        return {newidx[i]: v for i, v in r.items()}

    table = {hl: [finish(Ht[hl][i]) for i in surviving] for hl in Ht}
    dtable = {hl: finish(push(c.dtable[al])) for hl, al in pre.items()}
    labels = [label_map(c.labels[i]) for i in surviving]
    calc = Calculus(H, labels, table, dtable, name=name or f"quotient of {c.name}")
    # consistency across all preimages of each H letter
    for al in c.table:
        img = quo.images.get(al)
        if img is None:
            continue
        d_img = calc.d(img)
        cls = finish(push(c.dtable[al]))
        if d_img != OneForm(calc, cls):
            raise InconsistentTable(f"d does not descend on {A.letter_name(al)}")
        for i in surviving:
            lhs = calc.right_mul(calc.form(newidx[i]), img)
            if lhs != OneForm(calc, finish(push(c.table[al][i]))):
                raise InconsistentTable(f"right action does not descend on {A.letter_name(al)}")
    return QuotientData(calc, [c.labels[i] for i in sorted(subst)], [c.labels[i] for i in surviving], subst)


def class_mod_ideal(w: OneForm, quo) -> dict:
    """Image of a form in Gamma / I.Gamma (coefficients projected, labels kept)."""
    out = {}
    for i, e in w.comps.items():
        v = quo.project(e)
        if not v.is_zero():
            out[w.calc.labels[i]] = v
    return out


# -- tensor calculus ---------------------------------------------------------


def tensor_presentation(A: Presentation, B: Presentation) -> tuple[Presentation, Callable, Callable]:
    """A (x) B with commuting factors; returns (presentation, embed_left, embed_right)."""
    off = len(A.gens)
    names = {g.name for g in A.gens} | {str(g.inverse_name) for g in A.gens if g.invertible}

    def nm(s):
        return s + "'" if s in names else s

    gens = list(A.gens) + [
        Generator(nm(g.name), g.index + off, g.invertible, nm(str(g.inverse_name)) if g.invertible else None, g.degree)
        for g in B.gens
    ]

    def shift(w):
        return tuple((g + off, s) for g, s in w)

    rules = list(A.rules)
    for r in B.rules:
        rules.append(Rule(shift(r.lhs), tuple((shift(w), c) for w, c in r.rhs)))
    for lb in B.letters():
        for la in A.letters():
            rules.append(rule((shift((lb,))[0], la), ((la, shift((lb,))[0]), 1)))
    T = Presentation(
        f"{A.name}(x){B.name}",
        gens,
        rules,
        eliminations=list(A.eliminations) + [(x + off, y + off) for x, y in B.eliminations],
        graded=A.graded and B.graded,
    )

    def left(x: Element) -> Element:
        return Element(T, dict(x.terms))

    def right(x: Element) -> Element:
        return Element(T, {tuple((g + off, e) for g, e in m): c for m, c in x.terms.items()})

    return T, left, right


def tensor_calculus(c1: Calculus, c2: Calculus) -> tuple[Calculus, Callable, Callable]:
    """Gamma (x) A' + A (x) Gamma' on A (x) A'."""
    T, el, er = tensor_presentation(c1.alg, c2.alg)
    n1, n2 = c1.rank, c2.rank
    labels = [f"L:{s}" for s in c1.labels] + [f"R:{s}" for s in c2.labels]
    table: dict = {}
    for l in c1.table:
        rows = [{j: el(e) for j, e in c1.table[l][i].items()} for i in range(n1)]
        g = el(c1.alg.word_element((l,)))
        rows += [{n1 + i: g} for i in range(n2)]
        table[l] = rows
    off = len(c1.alg.gens)
    for l in c2.table:
        tl = (l[0] + off, l[1])
        g = er(c2.alg.word_element((l,)))
        rows = [{i: g} for i in range(n1)]
        rows += [{n1 + j: er(e) for j, e in c2.table[l][i].items()} for i in range(n2)]
        table[tl] = rows
    dtable = {}
    for l, r in c1.dtable.items():
        dtable[l] = {j: el(e) for j, e in r.items()}
    for l, r in c2.dtable.items():
        dtable[(l[0] + off, l[1])] = {n1 + j: er(e) for j, e in r.items()}
    calc = Calculus(T, labels, table, dtable, name=f"{c1.name}(x){c2.name}")
    return calc, el, er


def basis_fingerprint(c: Calculus) -> tuple:
    """Labels with the side tags stripped; equal for (c(x)c')(x)c'' and c(x)(c'(x)c'')."""
    return tuple(s.split(":")[-1] for s in c.labels)


# -- universal calculus --------------------------------------------------------


class UniversalCalculus:
    """ker(mu) in A (x) A with d_u(a) = 1 (x) a - a (x) 1."""

    def __init__(self, A: Presentation):
        self.alg = A

    def d(self, x: Element):
        from .hopf import TensorElement

        one = self.alg.one()
        return TensorElement.pure(one, x) - TensorElement.pure(x, one)

    def mu(self, t) -> Element:
        A = self.alg
        return t.contract(lambda k: A.word_element(monomial_to_word(k[0]) + monomial_to_word(k[1])), A)

    def right_mul(self, t, y: Element):
        from .hopf import TensorElement

        return t * TensorElement.pure(self.alg.one(), y)

    def left_mul(self, y: Element, t):
        from .hopf import TensorElement

        return TensorElement.pure(y, self.alg.one()) * t

    def to_calculus(self, t, c: Calculus) -> OneForm:
        """The canonical surjection sum a (x) b -> sum a d b."""
        A = self.alg
        out = c.zero()
        for (a, b), v in t.terms.items():
            out = out + c.left_mul(Element(A, {a: v}), c.d_mono(b))
        return out


def check_universal_quotient(c: Calculus, monomials: Iterable[Monomial]) -> list[str]:
    """The surjection ker mu -> Gamma is a bimodule map sending d_u to d."""
    U = UniversalCalculus(c.alg)
    A = c.alg
    monos = list(monomials)
    bad = []
    for m in monos:
        x = Element(A, {m: ONE})
        du = U.d(x)
        if not U.mu(du).is_zero():
            bad.append(f"mu(d_u {x}) != 0")
        if U.to_calculus(du, c) != c.d(x):
            bad.append(f"d_u({x}) does not map to d({x})")
        for m2 in monos[:6]:
            y = Element(A, {m2: ONE})
            if U.to_calculus(U.right_mul(du, y), c) != c.right_mul(c.d(x), y):
                bad.append(f"right action at {x}, {y}")
            if U.to_calculus(U.left_mul(y, du), c) != c.left_mul(y, c.d(x)):
                bad.append(f"left action at {x}, {y}")
    return bad


# -- horizontal and coinvariant forms ------------------------------------------


@dataclass
class HorizontalReport:
    window: str
    dim_base: int
    dim_horizontal: int
    dim_coinvariant: int
    dim_intersection: int
    intersection_in_base: bool
    base_in_intersection: bool
    witness: str = ""

    @property
    def ok(self) -> bool:
        return self.intersection_in_base and self.base_in_intersection


def _span(vectors: Iterable[dict]) -> RowReducer:
    red = RowReducer(order=lambda k: (k[0], mono_key(k[1])))
    for v in vectors:
        red.add(v)
    return red


def horizontal_forms(
    c: Calculus,
    fc: FormCoaction,
    B: Presentation,
    iota: Callable[[Element], Element],
    coeff_monos: Sequence[Monomial],
    base_monos: Sequence[Monomial],
    big_base_monos: Sequence[Monomial] | None = None,
) -> HorizontalReport:
    """Gamma_B = Gamma^hor cap Gamma^coH inside the window span(coeff_monos . omega).

    Gamma^hor is generated by a d(iota b) with a in the coefficient window and
    b in the base window; Gamma^coH is the exact kernel of Delta_R - id (x) 1
    on the window; Gamma_B is spanned by iota(b) d(iota b').  The larger base
    window is used to test membership of intersection elements in Gamma_B.
    """
    A = c.alg
    n = c.rank
    big = list(big_base_monos or base_monos)
    bases = [iota(Element(B, {m: ONE})) for m in base_monos]
    bigs = [iota(Element(B, {m: ONE})) for m in big]
    window_keys = {(i, m) for i in range(n) for m in coeff_monos}

    def in_window(v: dict) -> bool:
        return all(k in window_keys for k in v)

    base_vecs = []
    for b in bases:
        for b2 in bases:
            v = c.left_mul(b, c.d(b2)).vector()
            if v and in_window(v):
                base_vecs.append(v)
    hor_vecs = []
    for m in coeff_monos:
        a = Element(A, {m: ONE})
        for b in bases:
            v = c.left_mul(a, c.d(b)).vector()
            if v:
                hor_vecs.append(v)
    hor = _span(hor_vecs)
    # coinvariant forms in the window
    one = fc.coaction.hopf.one()
    tagged = []
    for i in range(n):
        for m in coeff_monos:
            w = OneForm(c, {i: Element(A, {m: ONE})})
            diff = fc(w) - FormTensor.pure(w, one)
            tagged.append(((i, m), diff.terms))
    coinv = [dict(k) for k in kernel(tagged, order=repr)]
    coinv_red = _span(coinv)
    # intersection: coinvariant vectors lying in the horizontal span
    # solve sum x_k coinv_k in hor: reduce each coinv vector modulo hor and
    # take the kernel of the reduced vectors
    reduced = []
    for k, v in enumerate(coinv):
        r, _ = hor.reduce(v)
        reduced.append((k, r))
    inter = []
    for combo in kernel(reduced, order=repr):
        vec: dict = {}
        for k, x in combo.items():
            for key, y in coinv[k].items():
                _acc(vec, key, x * y)
        if vec:
            inter.append(vec)
    inter_red = _span(inter)
    base_red = _span(base_vecs)
    big_red = _span(
        c.left_mul(b, c.d(b2)).vector() for b in bigs for b2 in bigs if not c.left_mul(b, c.d(b2)).is_zero()
    )
    witness = ""
    inter_in_base = True
    for v in inter_red.basis():
        if not big_red.contains(v):
            inter_in_base = False
            witness = repr(c.from_vector(v))
            break
    base_in_inter = all(inter_red.contains(v) for v in base_red.basis())
    return HorizontalReport(
        window=f"{len(coeff_monos)} coefficient monomials, {len(base_monos)} base monomials",
        dim_base=len(base_red),
        dim_horizontal=len(hor),
        dim_coinvariant=len(coinv_red),
        dim_intersection=len(inter_red),
        intersection_in_base=inter_in_base,
        base_in_intersection=base_in_inter,
        witness=witness,
    )


# -- isomorphism of calculi -------------------------------------------------------


@dataclass
class Isomorphism:
    ok: bool
    matrix: list  # images of source labels as rows over the target
    witness: str = ""


def calculus_isomorphism(c1: Calculus, c2: Calculus, algebra_map: Callable[[Element], Element] | None = None) -> Isomorphism:
    """Try to match two calculi on the same algebra by the map d1 g -> d2 g.

    The source basis is written through a.d(b) expressions, mapped across,
    and the result is checked for d-compatibility, right-linearity on every
    letter and invertibility (by mapping back).
    """
    f = algebra_map or (lambda x: Element(c2.alg, dict(x.terms)))
    if c1.rank != c2.rank:
        return Isomorphism(False, [], f"rank {c1.rank} vs {c2.rank}")
    try:
        e1 = basis_expressions(c1)
        e2 = basis_expressions(c2)
    except NotGenerated as exc:
        return Isomorphism(False, [], str(exc))

    def phi(expr: FormExpression, tgt: Calculus) -> OneForm:
        out = tgt.zero()
        for a, b in expr.pairs:
            out = out + tgt.left_mul(f(a) if tgt is c2 else Element(tgt.alg, dict(a.terms)), tgt.d(f(b) if tgt is c2 else Element(tgt.alg, dict(b.terms))))
        return out

    images = [phi(e1[lab], c2) for lab in c1.labels]
    back = [phi(e2[lab], c1) for lab in c2.labels]

    def apply(images, src_form: OneForm, tgt: Calculus) -> OneForm:
        out = tgt.zero()
        for i, e in src_form.comps.items():
            out = out + tgt.left_mul(Element(tgt.alg, dict(e.terms)), images[i])
        return out

    for l in c1.alg.letters():
        if l not in c1.dtable or l not in c2.dtable:
            continue
        g = c1.alg.word_element((l,))
        if apply(images, c1.d(g), c2) != c2.d(f(g)):
            return Isomorphism(False, images, f"d not preserved on {c1.alg.letter_name(l)}")
        for i in range(c1.rank):
            lhs = apply(images, c1.right_mul(c1.form(i), g), c2)
            rhs = c2.right_mul(images[i], f(g))
            if lhs != rhs:
                return Isomorphism(False, images, f"right action on {c1.labels[i]} * {c1.alg.letter_name(l)}")
    for i in range(c1.rank):
        if apply(back, images[i], c1) != c1.form(i):
            return Isomorphism(False, images, f"not invertible at {c1.labels[i]}")
    return Isomorphism(True, images)
