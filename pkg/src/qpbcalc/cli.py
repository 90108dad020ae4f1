"""The ``qpbcalc`` command: expression parser, commands and report output."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

from . import __version__
from .config import Config, ConfigError, load_config
from .errors import ParseError, PresentationMismatch, QpbError, UnknownSuite
from .fodc import Calculus, FormCoaction, OneForm, pullback_calculus, quotient_calculus, render_form
from .hopf import TensorElement, coinvariant_basis
from .ncalg import Element, Presentation, render_element
from .scalar import RatQ, lambda_const, render
from .suites import FAIL, FLAGGED, PASS, Report, run_verify

Value = Union[RatQ, Element, OneForm]

# -- parser -------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    pos: int


@dataclass(frozen=True)
class Name:
    ident: str
    pos: int


@dataclass(frozen=True)
class Neg:
    arg: object
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: int


@dataclass(frozen=True)
class Pow:
    base: object
    num: int
    den: int
    pos: int


@dataclass(frozen=True)
class D:
    arg: object
    pos: int


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """(kind, text, column) with 1-based columns; a final ('end', '', len+1)."""
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("num", text[i:j], i + 1))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("id", text[i:j], i + 1))
            i = j
        elif ch in "+-*/^()":
            out.append((ch, ch, i + 1))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i + 1)
    out.append(("end", "", n + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, kind: str | None = None) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op, _, pos = self.take()
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            node = BinOp(op, node, self.unary(), pos)
        return node

    def unary(self):
        if self.peek()[0] == "-":
            pos = self.take()[2]
            return Neg(self.unary(), pos)
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[0] == "^":
            pos = self.take()[2]
            num, den = self.exponent()
            node = Pow(node, num, den, pos)
        return node

    def signed_int(self) -> int:
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        return sign * int(self.take("num")[1])

    def exponent(self) -> tuple[int, int]:
        """``n``, ``-n``, ``(n)`` or ``(n/m)``."""
        if self.peek()[0] != "(":
            return self.signed_int(), 1
        self.take()
        num, den = self.signed_int(), 1
        if self.peek()[0] == "/":
            self.take()
            den = int(self.take("num")[1])
        self.take(")")
        return num, den

    def atom(self):
        kind, text, pos = self.peek()
        if kind == "num":
            self.take()
            return Num(int(text), pos)
        if kind == "id":
            self.take()
            if text == "d" and self.peek()[0] == "(":
                self.take()
                inner = self.expr()
                self.take(")")
                return D(inner, pos)
            return Name(text, pos)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {what}", pos)


def parse_expr(text: str):
    """Parse ``text`` into an expression tree; ParseError carries a 1-based column."""
    p = _Parser(text)
    node = p.expr()
    kind, tok, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {tok!r}", pos)
    return node


# -- spaces -----------------------------------------------------------------------------

SPACE_NAMES = ("sl2", "p", "a1", "a2", "a12", "b1", "b2", "b12", "u1", "u2", "u12", "M", "uq")


@dataclass
class Space:
    name: str
    alg: Presentation
    calc: Calculus | None
    names: dict  # identifier -> Element of alg
    coact: Callable[[Element], TensorElement] | None = None
    forms: FormCoaction | None = None
    coaction: object = None  # a hopf.Coaction, for coinvariant windows


def _gen_names(alg: Presentation) -> dict:
    out = {}
    for g in alg.gens:
        out[g.name] = alg.gen(g.name)
        if g.invertible:
            out[g.inverse_name] = alg.gen(g.inverse_name)
    return out


@lru_cache(maxsize=None)
def get_space(name: str) -> Space:
    """Resolve a selector to its algebra, calculus and coaction."""
    from .hopf import build_hopf_uqsl2
    from .standard import standard

    if name not in SPACE_NAMES:
        raise PresentationMismatch(f"unknown space {name!r}; choose from {', '.join(SPACE_NAMES)}")
    std = standard()
    if name in ("sl2", "M"):
        ch = std.chart("M")
        return Space(name, ch.alg, ch.calc, _gen_names(ch.alg), ch.coaction, ch.forms, ch.coaction)
    if name == "p":
        hd = std.quotient.target
        calc = quotient_calculus(std.calc, std.quotient).calculus
        return Space(name, hd.alg, calc, _gen_names(hd.alg), hd.coproduct)
    if name == "uq":
        hd = build_hopf_uqsl2()
        return Space(name, hd.alg, None, _gen_names(hd.alg), hd.coproduct)
    idx = name[1:]
    ch = std.chart("U" + idx)
    if name[0] == "b":
        B = ch.base
        calc = pullback_calculus(ch.calc, B, ch.base_map, labels_prefix="e", name=f"Gamma_B on U{idx}").calculus
        names = _gen_names(B)
        return Space(name, B, calc, names, lambda x: TensorElement.pure(x, std.H.one()))
    names = _gen_names(ch.alg)
    if name[0] == "u":
        for g, e in _gen_names(ch.base).items():
            names[g] = ch.base_map(e)
        if idx == "12":
            names["v"] = names["uinv"]
    return Space(name, ch.alg, ch.calc, names, ch.coaction, ch.forms, ch.coaction)


# -- evaluation ---------------------------------------------------------------------------


def _kind(x: Value) -> str:
    return "scalar" if isinstance(x, RatQ) else "element" if isinstance(x, Element) else "form"


def evaluate(node, space: Space) -> Value:
    if isinstance(node, Num):
        return RatQ.of(node.value)
    if isinstance(node, Name):
        if node.ident == "q":
            return RatQ.rpow(2)
        if node.ident == "lambda":
            return lambda_const()
        if node.ident in space.names:
            return space.names[node.ident]
        if space.calc is not None and node.ident in space.calc.labels:
            return space.calc.form(node.ident)
        raise PresentationMismatch(f"{node.ident!r} is not defined in space {space.name} (column {node.pos})")
    if isinstance(node, Neg):
        x = evaluate(node.arg, space)
        return -x
    if isinstance(node, D):
        x = evaluate(node.arg, space)
        if space.calc is None:
            raise PresentationMismatch(f"no calculus on space {space.name}")
        if isinstance(x, RatQ):
            return space.calc.zero()
        if isinstance(x, Element):
            return space.calc.d(x)
        raise ParseError("d applied to a one-form", node.pos)
    if isinstance(node, Pow):
        x = evaluate(node.base, space)
        if isinstance(x, RatQ):
            if node.den == 1:
                return x**node.num
            if node.den == 2 and x == RatQ.rpow(2):
                return RatQ.rpow(node.num)
            raise ParseError("fractional powers are only defined for q", node.pos)
        if node.den != 1 or isinstance(x, OneForm):
            raise ParseError(f"cannot raise a {_kind(x)} to this power", node.pos)
        if node.num < 0:
            x = _inverse_of(x, space, node.pos)
        out = space.alg.one()
        for _ in range(abs(node.num)):
            out = out * x
        return out
    if isinstance(node, BinOp):
        a, b = evaluate(node.left, space), evaluate(node.right, space)
        return _binop(node.op, a, b, space, node.pos)
    raise TypeError(node)


def _inverse_of(x: Element, space: Space, pos: int) -> Element:
    for g in space.alg.gens:
        if g.invertible:
            if x == space.alg.gen(g.name):
                return space.alg.gen(g.inverse_name)
            if x == space.alg.gen(g.inverse_name):
                return space.alg.gen(g.name)
    raise ParseError("negative powers are only defined for invertible generators", pos)


def _binop(op: str, a: Value, b: Value, space: Space, pos: int) -> Value:
    ka, kb = _kind(a), _kind(b)
    if op in "+-":
        if ka == "scalar" and kb == "element":
            a = space.alg.scalar(a)
        elif kb == "scalar" and ka == "element":
            b = space.alg.scalar(b)
        elif ka != kb:
            raise ParseError(f"cannot add a {ka} and a {kb}", pos)
        return a + b if op == "+" else a - b
    if op == "/":
        if kb != "scalar":
            raise ParseError("can only divide by a scalar", pos)
        return a / b if ka == "scalar" else a.scale(RatQ.of(1) / b)
    if ka == "scalar":
        return a * b if kb == "scalar" else b.scale(a)
    if kb == "scalar":
        return a.scale(b)
    if ka == "element" and kb == "element":
        return a * b
    if ka == "element" and kb == "form":
        return space.calc.left_mul(a, b)
    if ka == "form" and kb == "element":
        return space.calc.right_mul(a, b)
    raise ParseError("cannot multiply two one-forms", pos)


def render_value(x: Value) -> str:
    if isinstance(x, RatQ):
        return render(x)
    if isinstance(x, Element):
        return render_element(x)
    return render_form(x)


def evaluate_text(text: str, space: str | Space) -> Value:
    sp = get_space(space) if isinstance(space, str) else space
    return evaluate(parse_expr(text), sp)


# -- commands -------------------------------------------------------------------------------


def cmd_normalize(text: str, space: str) -> str:
    return render_value(evaluate_text(text, space))


def cmd_d(text: str, space: str) -> str:
    sp = get_space(space)
    x = evaluate_text(text, sp)
    if isinstance(x, OneForm):
        raise ParseError("d applied to a one-form", 1)
    if sp.calc is None:
        raise PresentationMismatch(f"no calculus on space {space}")
    if isinstance(x, RatQ):
        return render_form(sp.calc.zero())
    return render_form(sp.calc.d(x))


def cmd_coact(text: str, space: str) -> str:
    sp = get_space(space)
    x = evaluate_text(text, sp)
    if isinstance(x, RatQ):
        x = sp.alg.scalar(x)
    if isinstance(x, OneForm):
        if sp.forms is None:
            raise PresentationMismatch(f"no coaction on one-forms of space {space}")
        return repr(sp.forms(x))
    if sp.coact is None:
        raise PresentationMismatch(f"no coaction on space {space}")
    return repr(sp.coact(x))


def cmd_coinv(text: str | None, space: str, degree: int, bound: int) -> str:
    sp = get_space(space)
    if text:
        x = evaluate_text(text, sp)
        if isinstance(x, RatQ):
            return "true"
        if isinstance(x, OneForm):
            if sp.forms is None:
                raise PresentationMismatch(f"no coaction on one-forms of space {space}")
            return "true" if sp.forms.is_coinvariant(x) else "false"
        if sp.coact is None:
            raise PresentationMismatch(f"no coaction on space {space}")
        return "true" if sp.coact(x) == TensorElement.pure(x, _coacting_one(sp)) else "false"
    if sp.coaction is None:
        raise PresentationMismatch(f"no coinvariant window on space {space}")
    basis = coinvariant_basis(sp.coaction, range(degree + 1), bound)
    return "\n".join(render_element(b) for b in basis)


def _coacting_one(sp: Space) -> Element:
    t = sp.coact(sp.alg.one())
    (k,) = t.terms
    return Element(t.algs[1], {k[1]: RatQ.of(1)})


def cmd_tables(space: str) -> str:
    sp = get_space(space)
    c = sp.calc
    if c is None:
        raise PresentationMismatch(f"no calculus on space {space}")
    A = c.alg
    lines = []
    for l in A.letters():
        if l in c.dtable:
            lines.append(f"d {A.letter_name(l)} = {OneForm(c, c.dtable[l])}")
    for l in A.letters():
        if l in c.table:
            for i, row in enumerate(c.table[l]):
                lines.append(f"{c.labels[i]} {A.letter_name(l)} = {OneForm(c, row)}")
    return "\n".join(lines)


# -- reports ----------------------------------------------------------------------------------


def report_json(r: Report) -> str:
    body = {
        "suite": r.suite,
        "version": r.version,
        "checks": [{"anchor": c.anchor, "status": c.status, "witness": c.witness, "window": c.window} for c in r.checks],
    }
    return json.dumps(body, separators=(",", ":"), ensure_ascii=True) + "\n"


def report_text(r: Report) -> str:
    cfg = r.config or Config()
    lines = [f"qpbcalc {r.version}  suite: {r.suite}", f"config: {cfg.header()}"]
    wa = max([len(c.anchor) for c in r.checks] + [6])
    ww = max([len(c.window) for c in r.checks] + [6])
    lines.append(f"{'STATUS':<8}  {'ANCHOR':<{wa}}  {'WINDOW':<{ww}}  WITNESS")
    for c in r.checks:
        lines.append(f"{c.status:<8}  {c.anchor:<{wa}}  {c.window:<{ww}}  {c.witness}".rstrip())
    counts = {s: sum(1 for c in r.checks if c.status == s) for s in (PASS, FAIL, FLAGGED)}
    lines.append(f"{counts[PASS]} pass, {counts[FAIL]} fail, {counts[FLAGGED]} flagged")
    return "\n".join(lines) + "\n"


def emit_report(r: Report, fmt: str = "json", path: str | None = None) -> str:
    """Render ``r`` and write it to ``path`` (stdout when None); returns the text."""
    if fmt not in ("json", "text"):
        raise ValueError(f"unknown format {fmt!r}")
    text = report_json(r) if fmt == "json" else report_text(r)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
    return text


# -- entry point ----------------------------------------------------------------------------------

COMMANDS = ("normalize", "d", "coact", "coinv", "tables", "verify", "report")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qpbcalc", description="Exact calculus on the quantum SL_2 bundle over P^1.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("expr", nargs="?", help="expression, or suite name for verify/report")
    ap.add_argument("--space", default="sl2", help=f"one of {', '.join(SPACE_NAMES)}")
    ap.add_argument("--degree", type=int, help="degree window for coinv")
    ap.add_argument("--bound", type=int, help="exponent bound for coinv")
    ap.add_argument("--format", choices=("json", "text"), default=None)
    ap.add_argument("--config", help="key = value file (default: $QPBCALC_CONFIG)")
    ap.add_argument("--output", help="write the report here instead of stdout")
    ap.add_argument("--version", action="version", version=f"qpbcalc {__version__}")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, {"window_degree": args.degree, "exponent_bound": args.bound})
        cmd = args.command
        if cmd in ("verify", "report"):
            r = run_verify(args.expr or "all", cfg)
            emit_report(r, args.format or ("text" if cmd == "verify" else "json"), args.output)
            return 0 if r.ok else 1
        if cmd == "tables":
            print(cmd_tables(args.space))
            return 0
        if cmd == "coinv":
            print(cmd_coinv(args.expr, args.space, cfg.window_degree, cfg.exponent_bound))
            return 0
        if not args.expr:
            raise ParseError("missing expression", 1)
        fn = {"normalize": cmd_normalize, "d": cmd_d, "coact": cmd_coact}[cmd]
        print(fn(args.expr, args.space))
        return 0
    except (ParseError, PresentationMismatch, UnknownSuite, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QpbError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
