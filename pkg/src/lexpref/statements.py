"""Comparative preference statements and their satisfaction relations.

A statement compares two partial assignments while holding a set of
variables fixed: any outcome extending the left side is preferred to any
outcome that extends the right side and agrees with it on the held set.
Three strictness flavours exist, plus the negation of a non-strict
statement whose two sides mention the same difference variables.

Statements are kept in a canonical block form.  Writing the left side as
``u . r`` and the right side as ``u . s``:

* ``U``  variables where both sides agree (value ``u``),
* ``R``  variables assigned only on the left, or differently (value ``r``),
* ``S``  variables assigned only on the right, or differently (value ``s``),
* ``T``  the held-constant set, disjoint from the above,
* ``W``  everything else; implicitly less important than ``R`` and ``S``.

Variables with a one-value domain always sit in ``T``; this makes the
representation unique.  Satisfaction of a statement by a model is decided
by a single walk down the model's stages (never by enumerating the
statement's outcome pairs), and the derived relation ``satisfies_star``
asks whether some extension of the model satisfies the statement.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable, NamedTuple

from .core import (LexModel, Outcome, PartialAssignment, VariableSpace,
                   iter_bits)
from .errors import CapExceededError

PAIRS_CAP_DEFAULT = 10_000


class StatementKind(Enum):
    NON_STRICT = "non-strict"            # >=
    FULLY_STRICT = "fully-strict"        # >>
    WEAKLY_STRICT = "weakly-strict"      # >
    NEGATED_NON_STRICT = "negated-non-strict"


class OutcomePair(NamedTuple):
    left: Outcome
    right: Outcome


class PrefStatement:
    """A statement in canonical block form.

    For the negated kind, the stored blocks are those of the inner
    non-strict statement (which must have identical R and S variable sets).
    Instances are immutable; build them through :func:`canonicalize` or
    :func:`outcome_comparison`.
    """

    __slots__ = ("space", "kind", "u", "r", "s", "t_mask",
                 "u_mask", "r_mask", "s_mask", "rs_mask", "w_mask", "label")

    def __init__(self, space: VariableSpace, kind: StatementKind,
                 u: PartialAssignment, r: PartialAssignment,
                 s: PartialAssignment, t_mask: int, label: str | None = None):
        u_mask, r_mask, s_mask = u.mask, r.mask, s.mask
        rs_union = r_mask | s_mask
        if (u_mask & t_mask) or (u_mask & rs_union) or (t_mask & rs_union):
            raise ValueError("blocks U, T and R|S must be pairwise disjoint")
        if t_mask & ~space.full_mask:
            raise ValueError("held-constant set mentions unknown variables")
        if space.singleton_mask & (u_mask | rs_union):
            raise ValueError("one-value variables belong in the held set")
        if space.singleton_mask & ~t_mask:
            raise ValueError("one-value variables belong in the held set")
        for i in iter_bits(r_mask & s_mask):
            if r.vals[i] == s.vals[i]:
                raise ValueError(
                    f"sides agree on {space.variables[i]!r}; that variable "
                    f"belongs in the agreement block")
        if kind is StatementKind.NEGATED_NON_STRICT and r_mask != s_mask:
            raise ValueError(
                "only non-strict statements with matching difference "
                "variable sets can be negated")
        self.space = space
        self.kind = kind
        self.u = u
        self.r = r
        self.s = s
        self.t_mask = t_mask
        self.u_mask = u_mask
        self.r_mask = r_mask
        self.s_mask = s_mask
        self.rs_mask = r_mask & s_mask
        self.w_mask = space.full_mask & ~(u_mask | t_mask | rs_union)
        self.label = label

    @property
    def u_vars(self) -> frozenset[str]:
        return self.space.names_of(self.u_mask)

    @property
    def r_vars(self) -> frozenset[str]:
        return self.space.names_of(self.r_mask)

    @property
    def s_vars(self) -> frozenset[str]:
        return self.space.names_of(self.s_mask)

    @property
    def t_vars(self) -> frozenset[str]:
        return self.space.names_of(self.t_mask)

    @property
    def w_vars(self) -> frozenset[str]:
        return self.space.names_of(self.w_mask)

    def __repr__(self) -> str:
        name = f" {self.label}" if self.label else ""
        return (f"PrefStatement({self.kind.value}{name}: "
                f"u={self.u.as_dict()}, r={self.r.as_dict()}, "
                f"s={self.s.as_dict()}, T={sorted(self.t_vars)})")


def canonicalize(space: VariableSpace, p: PartialAssignment,
                 q: PartialAssignment, t_vars: Iterable[str] | int,
                 kind: StatementKind, label: str | None = None) -> PrefStatement:
    """Bring a raw two-sided statement into canonical block form.

    Variables assigned the same value on both sides move to the agreement
    block; one-value variables are silently moved into the held set.  The
    held set must not overlap either side.
    """
    t_mask = t_vars if isinstance(t_vars, int) else space.mask_of(t_vars)
    if t_mask & (p.mask | q.mask):
        overlap = space.names_of(t_mask & (p.mask | q.mask))
        raise ValueError(f"held-constant set overlaps the sides: {sorted(overlap)}")
    agree = 0
    for i in iter_bits(p.mask & q.mask):
        if p.vals[i] == q.vals[i]:
            agree |= 1 << i
    sing = space.singleton_mask
    u_mask = agree & ~sing
    r_mask = p.mask & ~agree & ~sing
    s_mask = q.mask & ~agree & ~sing
    t_mask = (t_mask | sing) & space.full_mask
    return PrefStatement(space, kind,
                         u=p.restrict(u_mask),
                         r=p.restrict(r_mask),
                         s=q.restrict(s_mask),
                         t_mask=t_mask, label=label)


def outcome_comparison(space: VariableSpace, left: Outcome, right: Outcome,
                       strict: bool, label: str | None = None) -> PrefStatement:
    """The comparison of two complete outcomes as a canonical statement."""
    p = PartialAssignment(space, dict(enumerate(left.values)))
    q = PartialAssignment(space, dict(enumerate(right.values)))
    kind = StatementKind.WEAKLY_STRICT if strict else StatementKind.NON_STRICT
    return canonicalize(space, p, q, 0, kind, label=label)


def negate_non_strict(statement: PrefStatement,
                      label: str | None = None) -> PrefStatement:
    """Negation of a non-strict statement with matching difference sets."""
    if statement.kind is not StatementKind.NON_STRICT:
        raise ValueError("only non-strict statements can be negated")
    return PrefStatement(statement.space, StatementKind.NEGATED_NON_STRICT,
                         statement.u, statement.r, statement.s,
                         statement.t_mask, label=label)


def inner_statement(statement: PrefStatement) -> PrefStatement:
    """The non-strict statement a negated statement denies."""
    if statement.kind is not StatementKind.NEGATED_NON_STRICT:
        raise ValueError("statement is not a negation")
    return PrefStatement(statement.space, StatementKind.NON_STRICT,
                         statement.u, statement.r, statement.s,
                         statement.t_mask, label=statement.label)


def statement_consistent(statement: PrefStatement) -> bool:
    """Whether some model satisfies the statement on its own."""
    kind = statement.kind
    if kind is StatementKind.NON_STRICT:
        return True
    if kind is StatementKind.FULLY_STRICT:
        return statement.rs_mask != 0
    if kind is StatementKind.WEAKLY_STRICT:
        return (statement.r_mask | statement.s_mask) != 0
    return (statement.r_mask | statement.w_mask) != 0


def _nonstrict_holds(model: LexModel, st: PrefStatement) -> bool:
    """Stage-walk satisfaction test for the non-strict reading of ``st``.

    Walk the stages in order, skipping held/agreement variables.  The walk
    ends at the first variable that decides the statement outright: a
    residual (W) variable falsifies it, a variable in both difference sets
    settles it by the required value order.  Variables met before that
    point must put the left value on top (R only) or the right value at
    the bottom (S only).
    """
    skip = st.t_mask | st.u_mask
    rs = st.rs_mask
    r_mask = st.r_mask
    s_mask = st.s_mask
    w_mask = st.w_mask
    rvals = st.r.vals
    svals = st.s.vals
    for stage in model.stages:
        bit = 1 << stage.var
        if bit & skip:
            continue
        if bit & w_mask:
            return False
        if bit & rs:
            rank = stage.rank_of
            return rank[rvals[stage.var]] < rank[svals[stage.var]]
        if bit & r_mask:
            if stage.ranking[0] != rvals[stage.var]:
                return False
        elif bit & s_mask:
            if stage.ranking[-1] != svals[stage.var]:
                return False
    return True


def satisfies(model: LexModel, statement: PrefStatement) -> bool:
    """Whether the model satisfies the statement.

    Runs in O(model length) per statement after O(1) bitmask
    classification per variable.
    """
    kind = statement.kind
    if kind is StatementKind.NON_STRICT:
        return _nonstrict_holds(model, statement)
    if kind is StatementKind.FULLY_STRICT:
        return (statement.rs_mask & model.vmask) != 0 \
            and _nonstrict_holds(model, statement)
    if kind is StatementKind.WEAKLY_STRICT:
        return ((statement.r_mask | statement.s_mask) & model.vmask) != 0 \
            and _nonstrict_holds(model, statement)
    return not _nonstrict_holds(model, statement)


def satisfies_star(model: LexModel, statement: PrefStatement) -> bool:
    """Whether some extension of the model (or the model itself) satisfies it.

    Only defined for individually consistent statements; callers must
    screen inconsistent ones out first.
    """
    if not statement_consistent(statement):
        raise ValueError("statement is not individually consistent")
    if statement.kind is StatementKind.NEGATED_NON_STRICT:
        if (model.vmask & statement.s_mask) == 0:
            return True
        return not _nonstrict_holds(model, statement)
    return _nonstrict_holds(model, statement)


def pairs(statement: PrefStatement,
          cap: int = PAIRS_CAP_DEFAULT) -> set[OutcomePair]:
    """The statement's defining set of outcome pairs, by direct enumeration.

    Exists for oracle-scale cross-checking only; guarded by a cap on the
    outcome count of the space.
    """
    space = statement.space
    if space.outcome_count() > cap:
        raise CapExceededError(
            f"space has {space.outcome_count()} outcomes, cap is {cap}")
    st = statement
    left_fixed = dict(st.u.vals)
    left_fixed.update(st.r.vals)
    right_fixed = dict(st.u.vals)
    right_fixed.update(st.s.vals)
    left_free = sorted(iter_bits(space.full_mask & ~(st.u_mask | st.r_mask)))
    right_free = sorted(iter_bits(
        space.full_mask & ~(st.u_mask | st.s_mask | st.t_mask)))
    t_vars = sorted(iter_bits(st.t_mask))
    out: set[OutcomePair] = set()
    for left_vals in _assignments(space, left_free):
        alpha_vals = list(left_fixed.items()) + list(zip(left_free, left_vals))
        alpha = _build_outcome(space, alpha_vals)
        base = dict(right_fixed)
        for t in t_vars:
            base[t] = alpha.values[t]
        for right_vals in _assignments(space, right_free):
            beta_vals = list(base.items()) + list(zip(right_free, right_vals))
            beta = _build_outcome(space, beta_vals)
            out.add(OutcomePair(alpha, beta))
    return out


def _assignments(space: VariableSpace, variables: list[int]):
    if not variables:
        yield ()
        return
    sizes = [space.domain_size(v) for v in variables]
    values = [0] * len(variables)
    while True:
        yield tuple(values)
        i = len(variables) - 1
        while i >= 0:
            values[i] += 1
            if values[i] < sizes[i]:
                break
            values[i] = 0
            i -= 1
        if i < 0:
            return


def _build_outcome(space: VariableSpace, items) -> Outcome:
    values = [0] * space.n
    for i, v in items:
        values[i] = v
    return Outcome(space, tuple(values))


def projection(statement: PrefStatement, agree_on: Iterable[str] | int,
               variable: str) -> set[tuple[str, str]]:
    """Value pairs the statement forces at one variable, among outcome pairs
    that agree on ``agree_on``.

    Empty when the agreement set cuts through both difference blocks at
    once (no defining pair survives).
    """
    space = statement.space
    a_mask = agree_on if isinstance(agree_on, int) else space.mask_of(agree_on)
    y = space.var_index(variable)
    if a_mask & (1 << y):
        raise ValueError(f"{variable!r} must not be in the agreement set")
    if statement.rs_mask & a_mask:
        return set()
    dom = space.domains[y]
    bit = 1 << y
    if bit & statement.t_mask:
        return {(v, v) for v in dom}
    if bit & statement.u_mask:
        v = dom[statement.u.vals[y]]
        return {(v, v)}
    if bit & statement.rs_mask:
        return {(dom[statement.r.vals[y]], dom[statement.s.vals[y]])}
    if bit & statement.r_mask:
        rv = dom[statement.r.vals[y]]
        return {(rv, v) for v in dom}
    if bit & statement.s_mask:
        sv = dom[statement.s.vals[y]]
        return {(v, sv) for v in dom}
    return {(a, b) for a in dom for b in dom}
