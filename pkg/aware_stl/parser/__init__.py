"""Text format for formulas."""

from aware_stl.exceptions import ParseError
from aware_stl.formula.ast import SourceSpan
from aware_stl.parser.grammar import FormulaParser, parse
from aware_stl.parser.printer import to_text as print_formula

__all__ = ["FormulaParser", "ParseError", "SourceSpan", "parse", "print_formula"]
