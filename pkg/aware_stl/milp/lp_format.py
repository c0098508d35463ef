"""CPLEX LP text export and a reader for the same subset.

The writer emits ``Minimize``, ``Subject To``, ``Bounds``, ``Binary`` and
``End`` with numbers at 17 significant digits, so ``read_lp(export_lp(m))``
reproduces every coefficient exactly. Leading comment lines carry the model
name and then its notes. A binary gets a ``Bounds`` line only when its
bounds are narrower than [0, 1].
"""

from __future__ import annotations

import math
import re
from typing import Iterable

from aware_stl.exceptions import ModelError
from aware_stl.milp.model import MilpModel, Sense, VarKind, VarRef

LINE_WIDTH = 200

_SECTION = re.compile(
    r"^\s*(?P<key>minimi[sz]e|min|maximi[sz]e|max|subject\s+to|such\s+that|s\.t\.|st|bounds?|"
    r"binary|binaries|bin|generals?|gen|end)\s*$",
    re.IGNORECASE,
)
_TOKEN = re.compile(
    r"\s*(?:(?P<op><=|>=|=<|=>|=|<|>)"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<sign>[+-])"
    r"|(?P<label>[A-Za-z_][\w.\[\]]*)\s*:"
    r"|(?P<name>[A-Za-z_][\w.\[\]]*))"
)
_OPS = {"<=": Sense.LE, "=<": Sense.LE, "<": Sense.LE, ">=": Sense.GE, "=>": Sense.GE, ">": Sense.GE, "=": Sense.EQ}


def fmt(value: float) -> str:
    if math.isinf(value):
        return "+inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _terms(terms: Iterable[tuple[VarRef, float]], names: list[str]) -> list[str]:
    parts: list[str] = []
    for var, coef in terms:
        sign = "-" if coef < 0 else "+"
        parts.append(f"{sign} {fmt(abs(coef))} {names[var.index]}")
    return parts


def _wrap(head: str, parts: list[str]) -> list[str]:
    lines: list[str] = []
    current = head
    for part in parts:
        if len(current) + len(part) + 1 > LINE_WIDTH and current.strip():
            lines.append(current)
            current = "   "
        current = f"{current} {part}"
    lines.append(current)
    return lines


def export_lp(model: MilpModel) -> str:
    names = [var.name for var in model.variables]
    lines = [f"\\ {model.name}"] + [f"\\ {note}" for note in model.notes] + ["Minimize"]
    objective = _terms(model.objective.items(), names)
    if model.objective_constant:
        sign = "-" if model.objective_constant < 0 else "+"
        objective.append(f"{sign} {fmt(abs(model.objective_constant))}")
    lines += _wrap(" obj:", objective or ["0"])

    lines.append("Subject To")
    for row in model.constraints:
        parts = _terms(row.terms, names) or ["0"]
        parts.append(f"{row.sense.value} {fmt(row.rhs)}")
        lines += _wrap(f" {row.name}:", parts)

    lines.append("Bounds")
    for var in model.variables:
        if var.is_binary and (var.lo, var.hi) == (0.0, 1.0):
            continue
        if math.isinf(var.lo) and math.isinf(var.hi):
            lines.append(f" {var.name} free")
        elif var.lo == var.hi:
            lines.append(f" {var.name} = {fmt(var.lo)}")
        else:
            lines.append(f" {fmt(var.lo)} <= {var.name} <= {fmt(var.hi)}")

    binaries = [var.name for var in model.binaries]
    if binaries:
        lines.append("Binary")
        for i in range(0, len(binaries), 8):
            lines.append(" " + " ".join(binaries[i : i + 8]))
    lines.append("End")
    return "\n".join(lines) + "\n"


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            raise ModelError(f"cannot read LP text near {text[pos:pos + 20]!r}")
        kind = match.lastgroup
        tokens.append((kind, match.group(kind)))
        pos = match.end()
    return tokens


def _linear(tokens: list[tuple[str, str]]) -> tuple[list[tuple[str, float]], float]:
    """Parse ``[+-] [num] name ...`` into named terms and a constant."""
    terms: list[tuple[str, float]] = []
    constant = 0.0
    sign, coef = 1.0, None
    for kind, value in tokens:
        if kind == "sign":
            sign = -sign if value == "-" else sign
        elif kind == "num":
            if coef is not None:
                constant += sign * coef
                sign = 1.0
            coef = float(value)
        elif kind == "name":
            terms.append((value, sign * (1.0 if coef is None else coef)))
            sign, coef = 1.0, None
        else:
            raise ModelError(f"unexpected {value!r} in linear expression")
    if coef is not None:
        constant += sign * coef
    return terms, constant


def _number(token: tuple[str, str], sign: float = 1.0) -> float:
    kind, value = token
    if kind == "num":
        return sign * float(value)
    if kind == "name" and value.lower() in ("inf", "infinity"):
        return sign * math.inf
    raise ModelError(f"expected a number, got {value!r}")


def _signed_number(tokens: list[tuple[str, str]]) -> float:
    sign = 1.0
    while tokens and tokens[0][0] == "sign":
        if tokens.pop(0)[1] == "-":
            sign = -sign
    if not tokens:
        raise ModelError("missing number")
    return _number(tokens.pop(0), sign)


def read_lp(text: str, name: str | None = None) -> MilpModel:
    """Read the LP subset written by ``export_lp`` back into a model."""
    sections: dict[str, list[str]] = {"objective": [], "rows": [], "bounds": [], "binary": []}
    title = name
    heading: list[str] = []
    current: str | None = None
    for raw in text.splitlines():
        comment = raw.find("\\")
        if comment == 0 and current is None and raw[1:].strip():
            heading.append(raw[1:].strip())
        line = raw if comment < 0 else raw[:comment]
        if not line.strip():
            continue
        header = _SECTION.match(line)
        if header:
            key = header.group("key").lower()
            if key.startswith("max"):
                raise ModelError("only minimisation models are supported")
            if key.startswith("gen"):
                raise ModelError("general integer variables are not supported")
            if key == "end":
                current = None
                break
            if key.startswith("min"):
                current = "objective"
            elif key.startswith(("subject", "such", "s.t.")) or key == "st":
                current = "rows"
            elif key.startswith("bound"):
                current = "bounds"
            else:
                current = "binary"
            continue
        if current is None:
            raise ModelError(f"text outside any section: {line.strip()!r}")
        sections[current].append(line)

    # the first leading comment is the model name, the rest are notes
    model = MilpModel(title or (heading[0] if heading else "model"))
    model.notes = heading[1:]
    declared: dict[str, VarRef] = {}
    binary_names = {token for line in sections["binary"] for token in line.split()}

    def var(var_name: str) -> VarRef:
        if var_name not in declared:
            kind = VarKind.BINARY if var_name in binary_names else VarKind.CONTINUOUS
            declared[var_name] = model.add_var(var_name, kind)
        return declared[var_name]

    objective_tokens = _tokenize(" ".join(sections["objective"]))
    if objective_tokens and objective_tokens[0][0] == "label":
        objective_tokens = objective_tokens[1:]
    obj_terms, obj_constant = _linear(objective_tokens)

    rows: list[tuple[str | None, list[tuple[str, float]], Sense, float]] = []
    pending: list[tuple[str, str]] = []
    label: str | None = None
    tokens = _tokenize(" ".join(sections["rows"]))
    i = 0
    while i < len(tokens):
        kind, value = tokens[i]
        if kind == "label" and not pending:
            label = value
        elif kind == "op":
            rest = tokens[i + 1 :]
            before = len(rest)
            rhs = _signed_number(rest)
            i += before - len(rest)
            terms, constant = _linear(pending)
            rows.append((label, terms, _OPS[value], rhs - constant))
            pending, label = [], None
        else:
            pending.append((kind, value))
        i += 1
    if pending:
        raise ModelError("constraint without a sense")

    # declare in order of first appearance: bounds, then objective and rows
    bounds: list[tuple[str, float | None, float | None]] = []
    for line in sections["bounds"]:
        bounds.append(_read_bound(line))
    for var_name, *_ in bounds:
        var(var_name)
    for var_name, _ in obj_terms:
        var(var_name)
    for _, terms, _, _ in rows:
        for var_name, _ in terms:
            var(var_name)
    for var_name in sorted(binary_names - declared.keys()):
        var(var_name)

    for var_name, lo, hi in bounds:
        ref = declared[var_name]
        new_lo = ref.lo if lo is None else lo
        new_hi = ref.hi if hi is None else hi
        model.set_bounds(ref, new_lo, new_hi)
    model.minimize([(declared[n], c) for n, c in obj_terms], obj_constant)
    for label, terms, sense, rhs in rows:
        model.add_constraint([(declared[n], c) for n, c in terms], sense, rhs, name=label)
    return model


def _read_bound(line: str) -> tuple[str, float | None, float | None]:
    """One bound statement as (name, lo, hi); None leaves the default side."""
    stripped = line.strip()
    parts = stripped.split()
    if len(parts) == 2 and parts[1].lower() == "free":
        return parts[0], -math.inf, math.inf
    tokens = _tokenize(stripped)
    if tokens and tokens[0][0] == "name" and tokens[0][1].lower() not in ("inf", "infinity"):
        name = tokens[0][1]
        rest = tokens[1:]
        if not rest or rest[0][0] != "op":
            raise ModelError(f"cannot read bound {stripped!r}")
        op = _OPS[rest[0][1]]
        value = _signed_number(rest[1:])
        if op == Sense.EQ:
            return name, value, value
        return (name, value, None) if op == Sense.GE else (name, None, value)
    rest = list(tokens)
    lo = _signed_number(rest)
    if not rest or rest[0][0] != "op":
        raise ModelError(f"cannot read bound {stripped!r}")
    first = _OPS[rest.pop(0)[1]]
    if not rest or rest[0][0] != "name":
        raise ModelError(f"cannot read bound {stripped!r}")
    name = rest.pop(0)[1]
    if first != Sense.LE:
        raise ModelError(f"unsupported bound form {stripped!r}")
    if not rest:
        return name, lo, None
    second = _OPS[rest.pop(0)[1]]
    hi = _signed_number(rest)
    if second != Sense.LE:
        raise ModelError(f"unsupported bound form {stripped!r}")
    return name, lo, hi
