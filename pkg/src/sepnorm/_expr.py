"""Tiny recursive-descent parser for polynomial-style expressions.

Grammar (whitespace is ignored)::

    expr   := [+|-] term {(+|-) term}
    term   := power {(*|/) power}
    power  := atom [^ INT]
    atom   := INT | NAME | ( expr )

Values are built through an *algebra* object providing ``const(int)``,
``name(str)``, ``add``, ``sub``, ``mul``, ``div``, ``pow`` and ``neg``.
"""

import re

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ParseError(ValueError):
    """Syntax error; ``pos`` is a character offset into the parsed text."""

    def __init__(self, message, pos=0):
        super().__init__(message)
        self.pos = pos


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, algebra):
        self.tokens = _tokenize(text)
        self.i = 0
        self.alg = algebra

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, op):
        kind, val, _ = self.peek()
        if kind == "op" and val == op:
            self.i += 1
            return True
        return False

    def expr(self):
        neg = False
        if self.accept("-"):
            neg = True
        else:
            self.accept("+")
        value = self.term()
        if neg:
            value = self.alg.neg(value)
        while True:
            if self.accept("+"):
                value = self.alg.add(value, self.term())
            elif self.accept("-"):
                value = self.alg.sub(value, self.term())
            else:
                return value

    def term(self):
        value = self.power()
        while True:
            if self.accept("*"):
                value = self.alg.mul(value, self.power())
            elif self.accept("/"):
                pos = self.peek()[2]
                rhs = self.power()
                try:
                    value = self.alg.div(value, rhs)
                except ParseError:
                    raise
                except (ArithmeticError, ValueError, TypeError) as exc:
                    raise ParseError(str(exc), pos) from exc
            else:
                return value

    def power(self):
        base = self.atom()
        if self.accept("^"):
            kind, val, pos = self.take()
            if kind != "int":
                raise ParseError("expected integer exponent", pos)
            return self.alg.pow(base, val)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return self.alg.const(val)
        if kind == "name":
            try:
                return self.alg.name(val)
            except KeyError as exc:
                raise ParseError(f"unknown name {val!r}", pos) from exc
        if kind == "op" and val == "(":
            value = self.expr()
            if not self.accept(")"):
                raise ParseError("expected ')'", self.peek()[2])
            return value
        if kind == "end":
            raise ParseError("unexpected end of expression", pos)
        raise ParseError(f"unexpected {val!r}", pos)


def parse_expression(text, algebra):
    parser = _Parser(text, algebra)
    value = parser.expr()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos)
    return value
