"""Sparse exact linear algebra over RatQ.

Vectors are dicts ``key -> RatQ``; keys are any hashable, ordered by a caller
supplied key function (default ``repr``) so pivot choice is deterministic.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Mapping

from .scalar import ONE, ZERO, RatQ

Vec = dict


def vadd(acc: dict, v: Mapping, c: RatQ = ONE) -> None:
    for k, x in v.items():
        y = acc.get(k)
        s = x * c if y is None else y + x * c
        if s.is_zero():
            acc.pop(k, None)
        else:
            acc[k] = s


class RowReducer:
    """Incremental reduced row echelon form with optional combination tracking.

    ``add(v, tag)`` reduces v against the stored rows; if a nonzero remainder
    survives it becomes a new pivot row.  With tracking, every stored row
    remembers which added vectors (by tag) combine to it, so ``express``
    can write a target as a combination of the inputs.
    """

    def __init__(self, order: Callable[[Hashable], object] = repr, track: bool = False):
        self.order = order
        self.track = track
        self.rows: dict[Hashable, tuple[dict, dict]] = {}  # pivot -> (row, combo)
        self.last_dependency: dict | None = None

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Mapping, combo: Mapping | None = None) -> tuple[dict, dict]:
        v = dict(v)
        combo = dict(combo or {})
        # eliminate pivots present in v; rows are fully reduced so one pass suffices
        for piv in [k for k in v if k in self.rows]:
            c = v.get(piv)
            if c is None:
                continue
            row, rc = self.rows[piv]
            vadd(v, row, -c)
            if self.track:
                vadd(combo, rc, -c)
        return v, combo

    def add(self, v: Mapping, tag: Hashable | None = None) -> bool:
        """Insert v; True if it was independent of the stored rows."""
        combo = {tag: ONE} if self.track and tag is not None else {}
        r, combo = self.reduce(v, combo)
        if not r:
            self.last_dependency = combo
            return False
        piv = min(r, key=self.order)
        inv = r[piv].inv()
        r = {k: x * inv for k, x in r.items()}
        combo = {k: x * inv for k, x in combo.items()}
        # keep the echelon form fully reduced
        for p2, (row, rc) in list(self.rows.items()):
            c = row.get(piv)
            if c is not None:
                vadd(row, r, -c)
                if self.track:
                    vadd(rc, combo, -c)
        self.rows[piv] = (r, combo)
        return True

    def contains(self, v: Mapping) -> bool:
        r, _ = self.reduce(v)
        return not r

    def express(self, v: Mapping) -> dict | None:
        """Coefficients c_tag with sum c_tag * input_tag = v, or None."""
        r, _ = self.reduce(v)
        if r:
            return None
        # rows are fully reduced, so v = sum over pivots p of v[p] * row_p
        out: dict = {}
        rem = dict(v)
        for piv in sorted(self.rows, key=self.order):
            c = rem.get(piv)
            if c is None:
                continue
            row, rc = self.rows[piv]
            vadd(rem, row, -c)
            vadd(out, rc, c)
        assert not rem
        return out

    def basis(self) -> list[dict]:
        return [self.rows[p][0] for p in sorted(self.rows, key=self.order)]


def solve_affine(rows: Iterable[tuple[Mapping[int, RatQ], RatQ]], ncols: int) -> tuple[dict[int, RatQ] | None, list[dict[int, RatQ]], list]:
    """Solve sum_j a_j x_j = b for every (a, b).

    Returns (particular solution or None if inconsistent, nullspace basis,
    list of inconsistent residual rows).  Column -1 carries the right side.
    """
    red = RowReducer(order=lambda k: (k == -1, k))
    bad = []
    for a, b in rows:
        v = dict(a)
        if not b.is_zero():
            v[-1] = -b
        if not v:
            continue
        red.add(v)
    # a pivot at -1 means 0 = nonzero
    if -1 in red.rows:
        bad.append(red.rows[-1][0])
        return None, [], bad
    sol: dict[int, RatQ] = {}
    pivots = set(red.rows)
    for piv, (row, _) in red.rows.items():
        c = row.get(-1, ZERO)
        if not c.is_zero():
            sol[piv] = -c
    free = [j for j in range(ncols) if j not in pivots]
    null = []
    for f in free:
        v = {f: ONE}
        for piv, (row, _) in red.rows.items():
            c = row.get(f)
            if c is not None:
                v[piv] = -c
        null.append(v)
    return sol, null, bad


def kernel(vectors: list[tuple[Hashable, Mapping]], order: Callable = repr) -> list[dict]:
    """Basis of {c : sum c_tag v_tag = 0} for tagged vectors."""
    red = RowReducer(order=order, track=True)
    out = []
    for tag, v in vectors:
        if not red.add(v, tag):
            out.append(red.last_dependency)
    return out


def probe_affine(n: int, fn: Callable[[dict[int, RatQ]], Mapping]) -> list[tuple[dict[int, RatQ], RatQ]]:
    """Rows of the affine system fn(c) = 0, assuming fn is affine in c.

    fn takes a sparse coefficient vector and returns a dict of constraint
    values; it is called once at 0 and once per unit vector.
    """
    base = dict(fn({}))
    cols: dict = {}
    for k in range(n):
        v = dict(fn({k: ONE}))
        keys = set(v) | set(base)
        for key in keys:
            d = v.get(key, ZERO) - base.get(key, ZERO)
            if not d.is_zero():
                cols.setdefault(key, {})[k] = d
    rows = []
    for key in sorted(set(cols) | set(base), key=repr):
        rows.append((cols.get(key, {}), -base.get(key, ZERO)))
    return rows
