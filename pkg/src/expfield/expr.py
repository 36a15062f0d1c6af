"""Tokenizer and recursive-descent parser for the small arithmetic language
shared by variety files, element notation and sample generators.

Grammar (``^`` binds tighter than unary minus, and is right associative)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | NAME | NAME '(' expr (',' expr)* ')' | '(' expr (',' expr)* ')'

Parenthesised lists with commas become tuples, which is how Hahn exponents
``t^(1,0)`` are written. ``#`` starts a comment running to the end of the line.
"""

import operator
from dataclasses import dataclass
from fractions import Fraction

from .errors import ExpFieldError, ParseError

_SINGLE = set("+-*/^(),;=")


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'name', 'op', 'end'
    text: str
    line: int
    column: int


def tokenize(text):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("num", text[i:j], line, start_col))
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], line, start_col))
        elif ch in _SINGLE:
            j = i + 1
            tokens.append(Token("op", ch, line, start_col))
        else:
            raise ParseError(f"unexpected character {ch!r}", line, start_col)
        col += j - i
        i = j
    tokens.append(Token("end", "", line, col))
    return tokens


# AST nodes are small tuples: (kind, payload..., token)
#   ('num', Fraction, tok)   ('name', str, tok)   ('call', str, [args], tok)
#   ('tuple', [items], tok)  ('bin', op, lhs, rhs, tok)  ('neg', operand, tok)


class Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at(self, text):
        return self.tok.kind == "op" and self.tok.text == text

    def expect(self, text):
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def error(self, message, tok=None):
        tok = tok or self.tok
        found = tok.text if tok.kind != "end" else "end of input"
        raise ParseError(f"{message}, found {found!r}", tok.line, tok.column)

    def at_end(self):
        return self.tok.kind == "end"

    def expression(self):
        node = self.term()
        while self.at("+") or self.at("-"):
            tok = self.advance()
            node = ("bin", tok.text, node, self.term(), tok)
        return node

    def term(self):
        node = self.unary()
        while self.at("*") or self.at("/"):
            tok = self.advance()
            node = ("bin", tok.text, node, self.unary(), tok)
        return node

    def unary(self):
        if self.at("-"):
            tok = self.advance()
            return ("neg", self.unary(), tok)
        if self.at("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.at("^"):
            tok = self.advance()
            node = ("bin", "^", node, self.unary(), tok)
        return node

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return ("num", Fraction(int(tok.text)), tok)
        if tok.kind == "name":
            self.advance()
            if self.at("("):
                self.advance()
                args = self.comma_list()
                self.expect(")")
                return ("call", tok.text, args, tok)
            return ("name", tok.text, tok)
        if self.at("("):
            self.advance()
            items = self.comma_list()
            self.expect(")")
            if len(items) == 1:
                return items[0]
            return ("tuple", items, tok)
        self.error("expected a number, name or '('")

    def comma_list(self):
        items = [self.expression()]
        while self.at(","):
            self.advance()
            items.append(self.expression())
        return items


def parse_expression(text):
    parser = Parser(text)
    node = parser.expression()
    if not parser.at_end():
        parser.error("unexpected trailing input")
    return node


def parse_expression_list(text):
    """Parse ``e1, e2, ...`` at top level."""
    parser = Parser(text)
    items = parser.comma_list()
    if not parser.at_end():
        parser.error("unexpected trailing input")
    return items


def node_token(node):
    return node[-1]


_BINOPS = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": operator.truediv,
    "^": operator.pow,
}


def evaluate(node, names, functions=None):
    """Evaluate an AST with the given name bindings and callables.

    Arithmetic is delegated to the values' own operators, so the same tree
    evaluates over rationals, polynomials, p-adic numbers or Hahn series.
    """
    functions = functions or {}
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "name":
        name, tok = node[1], node[2]
        if name not in names:
            raise ParseError(f"undeclared variable {name!r}", tok.line, tok.column)
        return names[name]
    if kind == "call":
        name, args, tok = node[1], node[2], node[3]
        if name not in functions:
            raise ParseError(f"unknown function {name!r}", tok.line, tok.column)
        values = [evaluate(a, names, functions) for a in args]
        try:
            return functions[name](*values)
        except ExpFieldError:
            raise
        except (TypeError, ValueError) as exc:
            raise ParseError(f"in {name}(...): {exc}", tok.line, tok.column) from exc
    if kind == "tuple":
        return tuple(evaluate(a, names, functions) for a in node[1])
    if kind == "neg":
        return -evaluate(node[1], names, functions)
    if kind == "bin":
        op, lhs, rhs, tok = node[1], node[2], node[3], node[4]
        a = evaluate(lhs, names, functions)
        b = evaluate(rhs, names, functions)
        if op == "^" and isinstance(a, Fraction) and isinstance(b, Fraction):
            if b.denominator != 1:
                raise ParseError("rational powers of numbers are not supported", tok.line, tok.column)
            b = int(b)
        try:
            return _BINOPS[op](a, b)
        except ExpFieldError:
            raise
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc) or type(exc).__name__, tok.line, tok.column) from exc
    raise AssertionError(kind)


def flatten_sum(node):
    """Split a top-level chain of + and - into signed terms [(sign, node)]."""
    if node[0] == "bin" and node[1] in "+-":
        left = flatten_sum(node[2])
        sign = 1 if node[1] == "+" else -1
        return left + [(sign * s, n) for s, n in flatten_sum(node[3])]
    if node[0] == "neg":
        return [(-s, n) for s, n in flatten_sum(node[1])]
    return [(1, node)]
