"""LALR grammar for the formula text format, built with ply.

The concrete syntax::

    spec     := ('let' NAME '=' formula ';')* formula
    formula  := 'G' interval formula | 'F' interval formula | '!' formula
              | formula '&&' formula | formula '||' formula | formula '=>' formula
              | '(' formula ')' | NAME | atom
    atom     := expr cmp number
              | 'I' interval '(' expr ')' cmp number
              | ('D+' | 'D-') '(' expr ')' cmp number
    expr     := signed sum of [number '*'] (NAME | 'abs(' NAME ')') and constants
    cmp      := '>=' | '<='

Negation and the temporal operators bind tightest, then '&&', '||' and the
right-associative '=>'. A temporal prefix therefore covers only the operand
right after it: ``G[0,2] a || b`` reads as ``(G[0,2] a) || b``, and
``G[0,2] (a || b)`` needs the parentheses. Any term of an expression may
carry its own unary minus, so ``x - -1 >= 0`` is ``x + 1 >= 0``. A '<='
atom is stored as the mirrored '>=' atom.
"""

from __future__ import annotations

import logging
import threading
from functools import cache
from typing import Mapping

import ply.lex as lex
import ply.yacc as yacc

from aware_stl.exceptions import ParseError
from aware_stl.formula.ast import (
    And,
    DerivativePredicate,
    Eventually,
    Formula,
    Globally,
    Implies,
    IntegralPredicate,
    Interval,
    LinearExpr,
    Not,
    Or,
    Predicate,
    Side,
    SourceSpan,
    Term,
)

logger = logging.getLogger(__name__)

TOKEN_TEXT = {
    "LET": "'let'",
    "IDENT": "identifier",
    "NUMBER": "number",
    "GLOBALLY": "'G['",
    "EVENTUALLY": "'F['",
    "INTEGRAL": "'I['",
    "DPLUS": "'D+('",
    "DMINUS": "'D-('",
    "ABS": "'abs('",
    "AND": "'&&'",
    "OR": "'||'",
    "IMPLIES": "'=>'",
    "NOT": "'!'",
    "GE": "'>='",
    "LE": "'<='",
    "EQUALS": "'='",
    "SEMI": "';'",
    "LPAREN": "'('",
    "RPAREN": "')'",
    "LBRACKET": "'['",
    "RBRACKET": "']'",
    "COMMA": "','",
    "PLUS": "'+'",
    "MINUS": "'-'",
    "TIMES": "'*'",
    "$end": "end of input",
}


class FormulaParser:
    tokens = tuple(name for name in TOKEN_TEXT if name != "$end")

    precedence = (
        ("right", "IMPLIES"),
        ("left", "OR"),
        ("left", "AND"),
        ("right", "NOT", "GLOBALLY", "EVENTUALLY"),
    )

    t_ignore = " \t\r\n"
    t_ignore_COMMENT = r"\#[^\n]*"

    t_AND = r"&&"
    t_OR = r"\|\|"
    t_IMPLIES = r"=>"
    t_GE = r">="
    t_LE = r"<="
    t_EQUALS = r"="
    t_NOT = r"!"
    t_SEMI = r";"
    t_LPAREN = r"\("
    t_RPAREN = r"\)"
    t_LBRACKET = r"\["
    t_RBRACKET = r"\]"
    t_COMMA = r","
    t_PLUS = r"\+"
    t_MINUS = r"-"
    t_TIMES = r"\*"

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._text = ""
        self._definitions: dict[str, Formula] = {}
        self._grouped: dict[int, Formula] = {}
        self._ends: dict[int, int] = {}
        self._lexer = lex.lex(module=self, errorlog=lex.NullLogger())
        self._parser = yacc.yacc(
            module=self,
            start="spec",
            debug=False,
            write_tables=False,
            errorlog=yacc.NullLogger(),
        )
        logger.debug("Built formula parser tables")

    def parse(self, text: str, definitions: Mapping[str, Formula] | None = None) -> Formula:
        with self._lock:
            self._text = text
            self._definitions = dict(definitions or {})
            self._grouped = {}
            self._ends = {}
            try:
                return self._parser.parse(
                    text,
                    lexer=self._lexer,
                    tracking=True,
                    tokenfunc=self._next_token,
                )
            finally:
                self._grouped = {}
                self._ends = {}

    # lexer

    def t_LET(self, t):
        r"let(?![A-Za-z0-9_])"
        return t

    def t_GLOBALLY(self, t):
        r"G(?=\s*\[)"
        return t

    def t_EVENTUALLY(self, t):
        r"F(?=\s*\[)"
        return t

    def t_INTEGRAL(self, t):
        r"I(?=\s*\[)"
        return t

    def t_DPLUS(self, t):
        r"D\+(?=\s*\()"
        return t

    def t_DMINUS(self, t):
        r"D-(?=\s*\()"
        return t

    def t_ABS(self, t):
        r"abs(?=\s*\()"
        return t

    def t_NUMBER(self, t):
        r"(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?"
        t.value = float(t.value)
        return t

    def t_IDENT(self, t):
        r"[A-Za-z_][A-Za-z0-9_]*"
        return t

    def t_error(self, t):
        raise ParseError(
            f"illegal character {t.value[0]!r}",
            SourceSpan(t.lexpos, t.lexpos + 1),
        )

    def _next_token(self):
        tok = self._lexer.token()
        if tok is not None:
            self._ends[tok.lexpos] = self._lexer.lexpos
        return tok

    def _span(self, p, first: int, last: int) -> SourceSpan:
        start = p.lexspan(first)[0]
        last_token = p.lexspan(last)[1]
        return SourceSpan(start, self._ends.get(last_token, last_token))

    # grammar

    def p_spec(self, p):
        """spec : definitions formula
        | formula"""
        p[0] = p[len(p) - 1]

    def p_definitions(self, p):
        """definitions : definitions definition
        | definition"""

    def p_definition(self, p):
        "definition : LET IDENT EQUALS formula SEMI"
        name = p[2]
        if name in self._definitions:
            raise ParseError(f"'{name}' is already defined", self._span(p, 2, 2))
        self._definitions[name] = p[4]
        self._grouped[id(p[4])] = p[4]

    def p_formula_reference(self, p):
        "formula : IDENT"
        name = p[1]
        if name not in self._definitions:
            raise ParseError(f"undefined formula '{name}'", self._span(p, 1, 1))
        p[0] = self._definitions[name]
        self._grouped[id(p[0])] = p[0]

    def p_formula_group(self, p):
        "formula : LPAREN formula RPAREN"
        p[0] = p[2]
        self._grouped[id(p[0])] = p[0]

    def p_formula_binary(self, p):
        """formula : formula AND formula
        | formula OR formula
        | formula IMPLIES formula"""
        span = self._span(p, 1, 3)
        op = p.slice[2].type
        if op == "IMPLIES":
            p[0] = Implies(p[1], p[3], span=span)
            return
        cls = And if op == "AND" else Or
        operands: list[Formula] = []
        for side in (p[1], p[3]):
            if type(side) is cls and id(side) not in self._grouped:
                operands.extend(side.operands)
            else:
                operands.append(side)
        p[0] = cls(tuple(operands), span=span)

    def p_formula_not(self, p):
        "formula : NOT formula"
        p[0] = Not(p[2], span=self._span(p, 1, 2))

    def p_formula_temporal(self, p):
        """formula : GLOBALLY interval formula
        | EVENTUALLY interval formula"""
        cls = Globally if p.slice[1].type == "GLOBALLY" else Eventually
        p[0] = cls(p[2], p[3], span=self._span(p, 1, 3))

    def p_formula_predicate(self, p):
        """formula : expr GE number
        | expr LE number"""
        expr, threshold = self._oriented(p[1], p.slice[2].type, p[3])
        p[0] = Predicate(expr, threshold, span=self._span(p, 1, 3))

    def p_formula_integral(self, p):
        """formula : INTEGRAL interval LPAREN expr RPAREN GE number
        | INTEGRAL interval LPAREN expr RPAREN LE number"""
        expr, threshold = self._oriented(p[4], p.slice[6].type, p[7])
        p[0] = IntegralPredicate(expr, p[2], threshold, span=self._span(p, 1, 7))

    def p_formula_derivative(self, p):
        """formula : DPLUS LPAREN expr RPAREN GE number
        | DPLUS LPAREN expr RPAREN LE number
        | DMINUS LPAREN expr RPAREN GE number
        | DMINUS LPAREN expr RPAREN LE number"""
        side = Side.RIGHT if p.slice[1].type == "DPLUS" else Side.LEFT
        expr, threshold = self._oriented(p[3], p.slice[5].type, p[6])
        p[0] = DerivativePredicate(expr, side, threshold, span=self._span(p, 1, 6))

    def p_interval(self, p):
        "interval : LBRACKET number COMMA number RBRACKET"
        lo, hi = p[2], p[4]
        if hi < lo:
            raise ParseError(
                f"interval upper bound {hi:g} is below lower bound {lo:g}",
                self._span(p, 1, 5),
            )
        p[0] = Interval(lo, hi)

    def p_number(self, p):
        """number : NUMBER
        | MINUS NUMBER
        | PLUS NUMBER"""
        p[0] = -p[2] if p[1] == "-" else p[len(p) - 1]

    def p_expr_first(self, p):
        """expr : term
        | PLUS term"""
        term, constant = p[len(p) - 1]
        p[0] = self._extend(LinearExpr(), 1.0, term, constant)

    def p_expr_sum(self, p):
        """expr : expr PLUS term
        | expr MINUS term"""
        sign = -1.0 if p[2] == "-" else 1.0
        term, constant = p[3]
        p[0] = self._extend(p[1], sign, term, constant)

    def p_term_scaled(self, p):
        "term : NUMBER TIMES factor"
        name, absolute = p[3]
        p[0] = (Term(name, p[1], absolute), 0.0)

    def p_term_factor(self, p):
        "term : factor"
        name, absolute = p[1]
        p[0] = (Term(name, 1.0, absolute), 0.0)

    def p_term_constant(self, p):
        "term : NUMBER"
        p[0] = (None, p[1])

    def p_term_negated(self, p):
        "term : MINUS term"
        term, constant = p[2]
        if term is not None:
            term = Term(term.name, -term.coef, term.absolute)
        p[0] = (term, -constant)

    def p_factor(self, p):
        """factor : IDENT
        | ABS LPAREN IDENT RPAREN"""
        p[0] = (p[1], False) if len(p) == 2 else (p[3], True)

    def p_error(self, tok):
        expected = self._expected()
        if tok is None:
            end = len(self._text)
            raise ParseError("unexpected end of input", SourceSpan(end, end), expected)
        end = self._ends.get(tok.lexpos, tok.lexpos + 1)
        raise ParseError(
            f"unexpected {TOKEN_TEXT.get(tok.type, tok.type)}",
            SourceSpan(tok.lexpos, end),
            expected,
        )

    def _expected(self) -> list[str]:
        state = getattr(self._parser, "state", None)
        actions = self._parser.action.get(state, {}) if state is not None else {}
        return sorted(TOKEN_TEXT.get(name, name) for name in actions)

    @staticmethod
    def _extend(expr: LinearExpr, sign: float, term: Term | None, constant: float) -> LinearExpr:
        if term is None:
            return LinearExpr(expr.terms, expr.constant + sign * constant)
        signed = Term(term.name, sign * term.coef, term.absolute)
        return LinearExpr(expr.terms + (signed,), expr.constant)

    @staticmethod
    def _oriented(expr: LinearExpr, cmp: str, threshold: float) -> tuple[LinearExpr, float]:
        if cmp == "LE":
            return expr.negated(), -threshold
        return expr, threshold


@cache
def default_parser() -> FormulaParser:
    return FormulaParser()


def parse(text: str, definitions: Mapping[str, Formula] | None = None) -> Formula:
    """Parse formula text, raising ``ParseError`` with a span on bad input."""
    return default_parser().parse(text, definitions)
