"""The module mini-language used by the CLI.

Grammar:
    EXPR := P[lo..hi] | CP[lo..hi] | susp(k, EXPR) | tensor(EXPR, EXPR)
          | dual(EXPR) | M10 | A2//A1 | A2//E2 | A2/Sq1 | A2/Sq2 | Z2

Either bound of a stunted space may be omitted (P[-3..], P[..8]) to stand
for a semi-infinite object; building such an expression needs a window,
normally supplied by the stability rule (resolution.stable_window).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .fdmodule import (
    FDModule,
    dualize,
    named_module,
    stunted_cp,
    stunted_rp,
    suspend,
    tensor,
    trivial_module,
)

__all__ = ["ModuleExpr", "parse_module_expr", "expr_bounds", "build_module"]

_NAMED = ("M10", "A2//A1", "A2//E2", "A2/Sq1", "A2/Sq2")


@dataclass(frozen=True)
class ModuleExpr:
    kind: str  # rp | cp | susp | tensor | dual | named | z2
    lo: Optional[int] = None
    hi: Optional[int] = None
    k: int = 0
    name: str = ""
    children: tuple = ()

    def __str__(self) -> str:
        if self.kind in ("rp", "cp"):
            lo = "" if self.lo is None else str(self.lo)
            hi = "" if self.hi is None else str(self.hi)
            return "%s[%s..%s]" % ("P" if self.kind == "rp" else "CP", lo, hi)
        if self.kind == "susp":
            return "susp(%d,%s)" % (self.k, self.children[0])
        if self.kind == "tensor":
            return "tensor(%s,%s)" % self.children
        if self.kind == "dual":
            return "dual(%s)" % self.children[0]
        if self.kind == "named":
            return self.name
        return "Z2"


class _Parser:
    def __init__(self, text: str):
        self.text = text.replace(" ", "")
        self.pos = 0

    def error(self, msg: str):
        raise ValueError("module expression %r: %s (at position %d)" % (self.text, msg, self.pos))

    def eat(self, tok: str) -> None:
        if not self.text.startswith(tok, self.pos):
            self.error("expected %r" % tok)
        self.pos += len(tok)

    def peek(self, tok: str) -> bool:
        return self.text.startswith(tok, self.pos)

    def int_(self) -> int:
        start = self.pos
        if self.peek("-") or self.peek("+"):
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected an integer")
        return int(self.text[start : self.pos])

    def opt_int(self) -> Optional[int]:
        if self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] in "+-"):
            return self.int_()
        return None

    def window(self) -> tuple[Optional[int], Optional[int]]:
        self.eat("[")
        lo = self.opt_int()
        self.eat("..")
        hi = self.opt_int()
        self.eat("]")
        return lo, hi

    def expr(self) -> ModuleExpr:
        for name in _NAMED:
            if self.peek(name):
                self.pos += len(name)
                return ModuleExpr("named", name=name)
        if self.peek("Z2"):
            self.pos += 2
            return ModuleExpr("z2")
        if self.peek("susp("):
            self.eat("susp(")
            k = self.int_()
            self.eat(",")
            sub = self.expr()
            self.eat(")")
            return ModuleExpr("susp", k=k, children=(sub,))
        if self.peek("tensor("):
            self.eat("tensor(")
            a = self.expr()
            self.eat(",")
            b = self.expr()
            self.eat(")")
            return ModuleExpr("tensor", children=(a, b))
        if self.peek("dual("):
            self.eat("dual(")
            sub = self.expr()
            self.eat(")")
            return ModuleExpr("dual", children=(sub,))
        if self.peek("CP"):
            self.eat("CP")
            lo, hi = self.window()
            return ModuleExpr("cp", lo=lo, hi=hi)
        if self.peek("P"):
            self.eat("P")
            lo, hi = self.window()
            return ModuleExpr("rp", lo=lo, hi=hi)
        self.error("unrecognized expression")


def parse_module_expr(text: str) -> ModuleExpr:
    p = _Parser(text)
    e = p.expr()
    if p.pos != len(p.text):
        p.error("trailing input")
    return e


def expr_bounds(e: ModuleExpr) -> tuple[Optional[int], Optional[int]]:
    """Degree bounds of the expression; None marks a semi-infinite end."""
    if e.kind in ("rp", "cp"):
        return e.lo, e.hi
    if e.kind == "susp":
        lo, hi = expr_bounds(e.children[0])
        return (None if lo is None else lo + e.k, None if hi is None else hi + e.k)
    if e.kind == "dual":
        lo, hi = expr_bounds(e.children[0])
        return (None if hi is None else -hi, None if lo is None else -lo)
    if e.kind == "tensor":
        la, ha = expr_bounds(e.children[0])
        lb, hb = expr_bounds(e.children[1])
        return (
            None if la is None or lb is None else la + lb,
            None if ha is None or hb is None else ha + hb,
        )
    if e.kind == "named":
        m = named_module(e.name)
        return m.min_degree, m.max_degree
    return 0, 0  # z2


def _even_up(x: int) -> int:
    return x if x % 2 == 0 else x + 1


def _even_down(x: int) -> int:
    return x if x % 2 == 0 else x - 1


def build_module(e: ModuleExpr, profile: int = 2, window: Optional[tuple[int, int]] = None) -> FDModule:
    """Realize an expression as a concrete module.

    A window is required when the expression has a semi-infinite end; for
    tensors the factor windows are derived from the other factor's known
    bound, and the tensor itself is truncated to the window. Modules cut
    off below are flagged so charts insist on a trusted stem range.
    """
    m = _build(e, profile, window)
    if expr_bounds(e)[0] is None:
        m.truncated_below = True
    return m


def _build(e: ModuleExpr, profile: int, window: Optional[tuple[int, int]]) -> FDModule:
    if e.kind == "z2":
        return trivial_module(profile)
    if e.kind == "named":
        if profile != 2:
            raise ValueError("named module %s lives over A(2)" % e.name)
        return named_module(e.name)
    if e.kind == "susp":
        inner = None if window is None else (window[0] - e.k, window[1] - e.k)
        return suspend(_build(e.children[0], profile, inner), e.k)
    if e.kind == "dual":
        inner = None if window is None else (-window[1], -window[0])
        return dualize(_build(e.children[0], profile, inner))
    if e.kind in ("rp", "cp"):
        lo, hi = e.lo, e.hi
        if lo is None:
            if window is None:
                raise ValueError("expression %s is unbounded below; a window is required" % e)
            lo = window[0]
        if hi is None:
            if window is None:
                raise ValueError("expression %s is unbounded above; a window is required" % e)
            hi = window[1]
        if window is not None:
            lo = max(lo, window[0])
            hi = min(hi, window[1])
        if e.kind == "cp":
            return stunted_cp(_even_up(lo), _even_down(hi), profile)
        return stunted_rp(lo, hi, profile)
    if e.kind == "tensor":
        ea, eb = e.children
        (la, ha), (lb, hb) = expr_bounds(ea), expr_bounds(eb)
        if window is None:
            if None in (la, ha, lb, hb):
                raise ValueError("tensor with semi-infinite factors needs a window")
            return tensor(_build(ea, profile, None), _build(eb, profile, None))
        lo, hi = window

        def factor_window(l_self, h_self, l_other, h_other):
            wl = l_self
            if wl is None:
                if h_other is None:
                    raise ValueError("cannot window %s: both factors unbounded the same way" % e)
                wl = lo - h_other
            wh = h_self
            if wh is None:
                if l_other is None:
                    raise ValueError("cannot window %s: both factors unbounded the same way" % e)
                wh = hi - l_other
            return wl, wh

        wa = factor_window(la, ha, lb, hb)
        wb = factor_window(lb, hb, la, ha)
        ma = _build(ea, profile, wa)
        mb = _build(eb, profile, wb)
        return tensor(ma, mb, lo=lo, hi=hi)
    raise ValueError("unknown expression kind %r" % e.kind)
