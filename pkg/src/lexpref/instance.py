"""Line-oriented instance file format.

One declaration per line, ``#`` starts a comment::

    var NAME: v1, v2[, v3]
    outcome NAME: VAR=val, VAR=val, ...        # must assign every variable
    stmt NAME: [VAR=val, ...] OP [VAR=val, ...] || {VAR, ...}
    stmt NAME: not ([VAR=val, ...] >= [VAR=val, ...] || {VAR, ...})
    stmt NAME: OUTNAME OP OUTNAME              # outcome comparison shorthand
    alts: NAME, NAME, ...

``OP`` is ``>=`` (non-strict), ``>>`` (fully strict) or ``>`` (weakly
strict).  The ``|| {...}`` held-variable clause may be omitted when empty.
Variable declarations must precede everything else.  Parsing reports
positioned errors; re-serialising a parsed file is lossless up to
canonicalisation of the statements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import Outcome, PartialAssignment, VariableSpace
from .errors import ParseError
from .optimality import AlternativeSet
from .statements import (PrefStatement, StatementKind, canonicalize,
                         negate_non_strict)

_NAME = r"[A-Za-z0-9_.+-]+"
_NAME_RE = re.compile(rf"^{_NAME}$")
_OPS = {">=": StatementKind.NON_STRICT,
        ">>": StatementKind.FULLY_STRICT,
        ">": StatementKind.WEAKLY_STRICT}


@dataclass
class Instance:
    """A parsed problem: space, named outcomes, statements, alternatives."""

    space: VariableSpace
    outcomes: dict[str, Outcome]
    statements: tuple[PrefStatement, ...]
    alt_names: tuple[str, ...]

    @property
    def alternatives(self) -> AlternativeSet | None:
        if not self.alt_names:
            return None
        return AlternativeSet(self.space,
                              [self.outcomes[n] for n in self.alt_names])


class _Reader:
    def __init__(self, text: str, line: int):
        self.text = text
        self.pos = 0
        self.line = line

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos:self.pos + 1]

    def expect(self, token: str) -> None:
        self.skip_ws()
        if not self.text.startswith(token, self.pos):
            raise self.error(f"expected {token!r} at column {self.pos + 1}")
        self.pos += len(token)

    def try_token(self, token: str) -> bool:
        self.skip_ws()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def try_keyword(self, word: str) -> bool:
        """Match a whole word (not a prefix of a longer name)."""
        self.skip_ws()
        end = self.pos + len(word)
        if self.text.startswith(word, self.pos) \
                and not re.match(_NAME, self.text[end:end + 1]):
            self.pos = end
            return True
        return False

    def name(self) -> str:
        self.skip_ws()
        match = re.match(_NAME, self.text[self.pos:])
        if not match:
            raise self.error(f"expected a name at column {self.pos + 1}")
        self.pos += match.end()
        return match.group(0)

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_side(reader: _Reader, space: VariableSpace,
                stmt_name: str) -> PartialAssignment:
    reader.expect("[")
    vals: dict[int, int] = {}
    if not reader.try_token("]"):
        while True:
            var = reader.name()
            reader.expect("=")
            val = reader.name()
            try:
                i = space.var_index(var)
                v = space.value_index(i, val)
            except ValueError as exc:
                raise reader.error(f"statement {stmt_name}: {exc}") from None
            if i in vals:
                raise reader.error(
                    f"statement {stmt_name}: variable {var!r} assigned twice "
                    f"on one side")
            vals[i] = v
            if reader.try_token("]"):
                break
            reader.expect(",")
    return PartialAssignment(space, vals)


def _parse_held(reader: _Reader, space: VariableSpace, stmt_name: str) -> int:
    if not reader.try_token("||"):
        return 0
    reader.expect("{")
    mask = 0
    if not reader.try_token("}"):
        while True:
            var = reader.name()
            try:
                mask |= 1 << space.var_index(var)
            except ValueError as exc:
                raise reader.error(f"statement {stmt_name}: {exc}") from None
            if reader.try_token("}"):
                break
            reader.expect(",")
    return mask


def _parse_op(reader: _Reader) -> StatementKind:
    for token in (">=", ">>", ">"):
        if reader.try_token(token):
            return _OPS[token]
    raise reader.error("expected one of '>=', '>>', '>'")


def parse_statement_expr(reader: _Reader, space: VariableSpace,
                         outcomes: dict[str, Outcome],
                         stmt_name: str) -> PrefStatement:
    if reader.try_keyword("not"):
        reader.expect("(")
        p = _parse_side(reader, space, stmt_name)
        if not reader.try_token(">="):
            raise reader.error(
                f"statement {stmt_name}: only non-strict statements can be "
                f"negated")
        q = _parse_side(reader, space, stmt_name)
        t_mask = _parse_held(reader, space, stmt_name)
        reader.expect(")")
        try:
            inner = canonicalize(space, p, q, t_mask,
                                 StatementKind.NON_STRICT, label=stmt_name)
            return negate_non_strict(inner, label=stmt_name)
        except ValueError as exc:
            raise reader.error(f"statement {stmt_name}: {exc}") from None
    if reader.peek() == "[":
        p = _parse_side(reader, space, stmt_name)
        kind = _parse_op(reader)
        q = _parse_side(reader, space, stmt_name)
        t_mask = _parse_held(reader, space, stmt_name)
        try:
            return canonicalize(space, p, q, t_mask, kind, label=stmt_name)
        except ValueError as exc:
            raise reader.error(f"statement {stmt_name}: {exc}") from None
    left_name = reader.name()
    kind = _parse_op(reader)
    right_name = reader.name()
    for name in (left_name, right_name):
        if name not in outcomes:
            raise reader.error(
                f"statement {stmt_name}: unknown outcome {name!r}")
    left, right = outcomes[left_name], outcomes[right_name]
    p = PartialAssignment(space, dict(enumerate(left.values)))
    q = PartialAssignment(space, dict(enumerate(right.values)))
    try:
        return canonicalize(space, p, q, 0, kind, label=stmt_name)
    except ValueError as exc:
        raise reader.error(f"statement {stmt_name}: {exc}") from None


def parse_instance(text: str) -> Instance:
    var_names: list[str] = []
    var_domains: dict[str, list[str]] = {}
    space: VariableSpace | None = None
    outcomes: dict[str, Outcome] = {}
    statements: list[PrefStatement] = []
    stmt_names: set[str] = set()
    alt_names: list[str] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ParseError("expected 'KEYWORD ...:' declaration", lineno)
        head_parts = head.split()
        keyword = head_parts[0] if head_parts else ""

        if keyword == "var":
            if space is not None:
                raise ParseError(
                    "variable declarations must precede outcomes and "
                    "statements", lineno)
            if len(head_parts) != 2 or not _NAME_RE.match(head_parts[1]):
                raise ParseError("expected 'var NAME: v1, v2, ...'", lineno)
            name = head_parts[1]
            if name in var_domains:
                raise ParseError(f"variable {name!r} declared twice", lineno)
            values = [v.strip() for v in rest.split(",")]
            if not values or any(not _NAME_RE.match(v) for v in values):
                raise ParseError(f"bad value list for variable {name!r}",
                                 lineno)
            var_names.append(name)
            var_domains[name] = values
            continue

        if space is None:
            if not var_names:
                raise ParseError("no variables declared yet", lineno)
            try:
                space = VariableSpace(var_names, var_domains)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None

        if keyword == "outcome":
            if len(head_parts) != 2 or not _NAME_RE.match(head_parts[1]):
                raise ParseError("expected 'outcome NAME: VAR=val, ...'",
                                 lineno)
            name = head_parts[1]
            if name in outcomes:
                raise ParseError(f"outcome {name!r} declared twice", lineno)
            assignment: dict[str, str] = {}
            for item in rest.split(","):
                var, sep2, val = item.partition("=")
                if not sep2:
                    raise ParseError(
                        f"outcome {name}: expected VAR=val, got {item.strip()!r}",
                        lineno)
                var, val = var.strip(), val.strip()
                if var in assignment:
                    raise ParseError(
                        f"outcome {name}: variable {var!r} assigned twice",
                        lineno)
                assignment[var] = val
            try:
                outcomes[name] = space.outcome(assignment)
            except ValueError as exc:
                raise ParseError(f"outcome {name}: {exc}", lineno) from None
            continue

        if keyword == "stmt":
            if len(head_parts) != 2 or not _NAME_RE.match(head_parts[1]):
                raise ParseError("expected 'stmt NAME: ...'", lineno)
            name = head_parts[1]
            if name in stmt_names:
                raise ParseError(f"statement {name!r} declared twice", lineno)
            reader = _Reader(rest, lineno)
            st = parse_statement_expr(reader, space, outcomes, name)
            if not reader.at_end():
                raise ParseError(
                    f"statement {name}: trailing input at column "
                    f"{reader.pos + 1}", lineno)
            stmt_names.add(name)
            statements.append(st)
            continue

        if keyword == "alts" and len(head_parts) == 1:
            for item in rest.split(","):
                name = item.strip()
                if name not in outcomes:
                    raise ParseError(f"alternatives: unknown outcome {name!r}",
                                     lineno)
                if name in alt_names:
                    raise ParseError(
                        f"alternatives: outcome {name!r} listed twice", lineno)
                alt_names.append(name)
            continue

        raise ParseError(f"unknown declaration {keyword!r}", lineno)

    if space is None:
        if not var_names:
            raise ParseError("instance declares no variables", None)
        try:
            space = VariableSpace(var_names, var_domains)
        except ValueError as exc:
            raise ParseError(str(exc), None) from None
    return Instance(space=space, outcomes=outcomes,
                    statements=tuple(statements), alt_names=tuple(alt_names))


def parse_query(instance: Instance, text: str):
    """An inference query: outcome comparison or statement expression.

    Returns ``("cmp", op, left, right)`` for ``NAME >=|>|== NAME`` or
    ``("stmt", statement)`` for anything in statement syntax.
    """
    probe = _Reader(text, 1)
    if probe.peek() == "[" or probe.try_keyword("not"):
        reader = _Reader(text, 1)
        st = parse_statement_expr(reader, instance.space, instance.outcomes,
                                  "query")
        if not reader.at_end():
            raise ParseError("query: trailing input", None)
        return ("stmt", st)
    reader = _Reader(text, 1)
    left = reader.name()
    op = None
    for token in (">=", ">>", "==", ">"):
        if reader.try_token(token):
            op = token
            break
    if op is None:
        raise ParseError("query: expected one of '>=', '>', '>>', '=='", None)
    right = reader.name()
    if not reader.at_end():
        raise ParseError("query: trailing input", None)
    for name in (left, right):
        if name not in instance.outcomes:
            raise ParseError(f"query: unknown outcome {name!r}", None)
    if op == ">>":
        op = ">"
    return ("cmp", op, instance.outcomes[left], instance.outcomes[right])


def _format_side(assignment: PartialAssignment) -> str:
    parts = ", ".join(f"{var}={val}"
                      for var, val in assignment.as_dict().items())
    return f"[{parts}]"


def format_statement(st: PrefStatement) -> str:
    space = st.space
    merged_left = dict(st.u.vals)
    merged_left.update(st.r.vals)
    merged_right = dict(st.u.vals)
    merged_right.update(st.s.vals)
    left = _format_side(PartialAssignment(space, merged_left))
    right = _format_side(PartialAssignment(space, merged_right))
    held = ", ".join(sorted(st.t_vars, key=space.var_index))
    if st.kind is StatementKind.NEGATED_NON_STRICT:
        return f"not ({left} >= {right} || {{{held}}})"
    op = {StatementKind.NON_STRICT: ">=",
          StatementKind.FULLY_STRICT: ">>",
          StatementKind.WEAKLY_STRICT: ">"}[st.kind]
    return f"{left} {op} {right} || {{{held}}}"


def format_instance(instance: Instance, header: str | None = None) -> str:
    lines: list[str] = []
    if header:
        for h in header.splitlines():
            lines.append(f"# {h}")
    space = instance.space
    for i, var in enumerate(space.variables):
        lines.append(f"var {var}: " + ", ".join(space.domains[i]))
    for name, outcome in instance.outcomes.items():
        assign = ", ".join(f"{v}={outcome.value_name(v)}"
                           for v in space.variables)
        lines.append(f"outcome {name}: {assign}")
    for i, st in enumerate(instance.statements):
        name = st.label or f"s{i}"
        lines.append(f"stmt {name}: {format_statement(st)}")
    if instance.alt_names:
        lines.append("alts: " + ", ".join(instance.alt_names))
    return "\n".join(lines) + "\n"
