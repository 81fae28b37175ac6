"""Tiny model formula language: ``y ~ log(x, p=0.1) + log1p(z) + w``.

Grammar::

    model  := term "~" rhs
    rhs    := item ("+" item)* ["-" "1"]
    item   := term | "0" | "1"
    term   := NAME | FUNC "(" NAME ["," "p" "=" NUMBER] ")"
    FUNC   := log | log1p | asinh | identity

``log`` without ``p`` is the natural log; with ``p`` it is the base-(1+p)
log. ``log1p`` without ``p`` is ``ln(1+x)``. A ``0`` term or a trailing
``- 1`` drops the intercept.
"""

import re

from .logbase import NATURAL, DomainError, LogBase, TransformSpec
from .regress import ModelSpec

__all__ = ["ParseError", "parse_model", "parse_term"]

FUNCS = ("log", "log1p", "asinh", "identity")

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?(?![A-Za-z_]))"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_.]*)"
    r"|(?P<op>[~+\-(),=]))"
)


class ParseError(ValueError):
    def __init__(self, message, text, pos, token=None):
        self.text, self.pos, self.token = text, pos, token
        pointer = f"\n  {text}\n  {' ' * pos}^"
        found = "end of input" if token is None else repr(token)
        super().__init__(f"{message} at position {pos} (found {found}){pointer}")


def _tokenize(text):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character", text, pos, text[pos])
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def cur(self):
        return self.tokens[self.i]

    def fail(self, message):
        _, value, pos = self.cur
        raise ParseError(message, self.text, pos, value)

    def accept(self, kind, value=None):
        k, v, _ = self.cur
        if k == kind and (value is None or v == value):
            self.i += 1
            return v
        return None

    def expect(self, kind, value=None, what=None):
        v = self.accept(kind, value)
        if v is None:
            self.fail(f"expected {what or value or kind}")
        return v

    def term(self):
        _, _, start = self.cur
        name = self.expect("name", what="a column name or transform")
        paren = self.cur[2]
        if not self.accept("op", "("):
            return name, TransformSpec("identity")
        if name not in FUNCS:
            raise ParseError(f"unknown transform {name!r}; expected one of {', '.join(FUNCS)}",
                             self.text, start, name)
        col = self.expect("name", what="a column name")
        p = None
        if self.accept("op", ","):
            _, _, kpos = self.cur
            key = self.expect("name", what="'p'")
            if key != "p":
                raise ParseError("only the 'p' argument is supported", self.text, kpos, key)
            self.expect("op", "=")
            _, _, ppos = self.cur
            sign = -1.0 if self.accept("op", "-") else 1.0
            p = sign * float(self.expect("number", what="a number"))
            if name in ("asinh", "identity"):
                raise ParseError(f"{name}() does not take a base", self.text, kpos, key)
            try:
                LogBase(p)
            except DomainError as exc:
                raise ParseError(f"invalid base: {exc}", self.text, ppos, repr(p)) from None
        if self.cur[0] == "end":
            raise ParseError("unclosed '('", self.text, paren, "(")
        self.expect("op", ")", what="')' or ', p=<number>'")
        return col, _spec(name, p)

    def model(self):
        outcome = self.term()
        self.expect("op", "~")
        predictors, intercept = [], True
        while True:
            k, v, _ = self.cur
            if k == "number":
                if v not in ("0", "1"):
                    self.fail("only 0 or 1 may appear as a bare number")
                self.i += 1
                intercept = intercept and v == "1"
            else:
                predictors.append(self.term())
            if self.accept("op", "+"):
                continue
            if self.accept("op", "-"):
                if self.accept("number", "1") is None:
                    self.fail("only '- 1' (drop intercept) may follow '-'")
                intercept = False
            break
        if self.cur[0] != "end":
            self.fail("expected '+' or end of formula")
        for i, term in enumerate(predictors):
            if term in predictors[:i]:
                raise ParseError(f"term for {term[0]!r} repeated", self.text, 0, term[0])
        return ModelSpec(outcome, tuple(predictors), intercept)


def _spec(func, p):
    if func == "identity":
        return TransformSpec("identity")
    if func == "asinh":
        return TransformSpec("asinh")
    if func == "log":
        return TransformSpec("natural_log") if p is None else TransformSpec("rescaled_log", LogBase(p))
    return TransformSpec("rescaled_log1p", NATURAL if p is None else LogBase(p))


def parse_model(text: str) -> ModelSpec:
    return _Parser(text).model()


def parse_term(text: str):
    parser = _Parser(text)
    out = parser.term()
    if parser.cur[0] != "end":
        parser.fail("unexpected trailing input")
    return out

