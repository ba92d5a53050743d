"""Consistency checking and preference inference.

The engine grows a maximal star-model greedily: starting from the empty
model it repeatedly appends the lowest-index variable that still admits a
valid extension, where a valid extension is a value order containing every
required pair, with any pinned best value on top and any pinned worst value
at the bottom.  The statement set is consistent exactly when the resulting
model satisfies it, which reduces to three cheap per-statement conditions
on the variables that made it into the model.

Inference queries reduce to consistency: a comparison is entailed when the
statement set together with the opposite comparison has no model.

Hot paths run through the array kernel in :mod:`lexpref.kernel`; the
object-level operations (:func:`extension_constraint`,
:func:`valid_extension`) mirror the same rules for inspection and testing.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .core import LexModel, Outcome, TotalValueOrder, VariableSpace, iter_bits
from .errors import InconsistentError, UnsupportedQueryError
from .kernel import get_kernel
from .statements import (PrefStatement, StatementKind, inner_statement,
                         negate_non_strict, satisfies, statement_consistent)

_KIND_CODE = {
    StatementKind.NON_STRICT: 0,
    StatementKind.FULLY_STRICT: 1,
    StatementKind.WEAKLY_STRICT: 2,
    StatementKind.NEGATED_NON_STRICT: 3,
}


class FailureReason(Enum):
    """Why a statement rules out the constructed maximal model."""

    STATEMENT_UNSATISFIABLE = "statement-unsatisfiable"
    NEEDS_SHARED_DIFFERENCE_STAGE = "needs-shared-difference-stage"
    NEEDS_DIFFERENCE_STAGE = "needs-difference-stage"
    NEGATION_UNWITNESSED = "negation-unwitnessed"


_REASON_BY_CODE = {
    2: FailureReason.NEEDS_SHARED_DIFFERENCE_STAGE,
    3: FailureReason.NEEDS_DIFFERENCE_STAGE,
    4: FailureReason.NEGATION_UNWITNESSED,
}


@dataclass(frozen=True)
class StatementFailure:
    index: int
    statement: PrefStatement
    reason: FailureReason

    @property
    def label(self) -> str:
        return self.statement.label or f"#{self.index}"


@dataclass(frozen=True)
class ConsistencyResult:
    """Verdict plus the witness maximal star-model and per-statement report."""

    consistent: bool
    witness: LexModel
    failures: tuple[StatementFailure, ...]
    v_gamma: frozenset[str] | None
    test_count: int

    def __post_init__(self):
        if self.consistent != (not self.failures):
            raise ValueError("verdict must match the failure list")


@dataclass(frozen=True)
class ExtensionConstraint:
    """What a next stage on one variable must respect.

    ``best``/``worst`` are values pinned to the top/bottom of the new value
    order; ``pairs`` are required orderings (first value above second).
    """

    variable: str
    best: frozenset[str]
    worst: frozenset[str]
    pairs: frozenset[tuple[str, str]]


class EncodedGamma:
    """Flat array encoding of a statement set, reusable across kernel runs.

    Builds the per-variable CSR constraint tables once; membership queries
    then pass extra outcome comparisons as small arrays instead of
    re-encoding the whole set.
    """

    def __init__(self, space: VariableSpace,
                 statements: Sequence[PrefStatement],
                 kernel: str | None = None):
        self.space = space
        self.statements = tuple(statements)
        self._kernel = get_kernel(kernel)
        n = space.n
        g = len(self.statements)
        self.inconsistent_indices = tuple(
            j for j, st in enumerate(self.statements)
            if not statement_consistent(st))

        kind = np.zeros(g, np.int8)
        rs: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
        bo: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        wo: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        wb: list[list[int]] = [[] for _ in range(n)]
        sw: list[list[int]] = [[] for _ in range(g)]
        nr: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
        nt: list[list[int]] = [[] for _ in range(n)]
        for j, st in enumerate(self.statements):
            if st.space is not space and st.space != space:
                raise ValueError("statement built over a different space")
            kind[j] = _KIND_CODE[st.kind]
            if st.kind is StatementKind.NEGATED_NON_STRICT:
                for x in iter_bits(st.r_mask):
                    nr[x].append((j, st.r.vals[x], st.s.vals[x]))
                for x in iter_bits(st.r_mask | st.w_mask):
                    nt[x].append(j)
            else:
                for x in iter_bits(st.rs_mask):
                    rs[x].append((j, st.r.vals[x], st.s.vals[x]))
                for x in iter_bits(st.r_mask & ~st.s_mask):
                    bo[x].append((j, st.r.vals[x]))
                for x in iter_bits(st.s_mask & ~st.r_mask):
                    wo[x].append((j, st.s.vals[x]))
                for x in iter_bits(st.w_mask):
                    wb[x].append(j)
                    sw[j].append(x)

        self._args = (
            n, space.dmax,
            np.array([space.domain_size(i) for i in range(n)], np.int32),
            kind,
            *_csr3(rs), *_csr2(bo), *_csr2(wo), *_csr1(wb), *_csr1(sw),
            *_csr3(nr), *_csr1(nt),
        )
        self._default_order = np.arange(n, dtype=np.int32)
        self._no_extras = (np.zeros((0, n), np.int16),
                           np.zeros((0, n), np.int16),
                           np.zeros(0, np.bool_))

    def run(self, xleft: np.ndarray | None = None,
            xright: np.ndarray | None = None,
            xstrict: np.ndarray | None = None,
            try_order: np.ndarray | None = None):
        if xleft is None:
            xleft, xright, xstrict = self._no_extras
        if try_order is None:
            try_order = self._default_order
        return self._kernel(*self._args, xleft, xright, xstrict, try_order)


def _csr3(buckets):
    ptr = np.zeros(len(buckets) + 1, np.int32)
    stmt, first, second = [], [], []
    for i, bucket in enumerate(buckets):
        for j, a, b in bucket:
            stmt.append(j)
            first.append(a)
            second.append(b)
        ptr[i + 1] = len(stmt)
    return (ptr, np.array(stmt, np.int32),
            np.array(first, np.int16), np.array(second, np.int16))


def _csr2(buckets):
    ptr = np.zeros(len(buckets) + 1, np.int32)
    stmt, val = [], []
    for i, bucket in enumerate(buckets):
        for j, v in bucket:
            stmt.append(j)
            val.append(v)
        ptr[i + 1] = len(stmt)
    return ptr, np.array(stmt, np.int32), np.array(val, np.int16)


def _csr1(buckets):
    ptr = np.zeros(len(buckets) + 1, np.int32)
    items = []
    for i, bucket in enumerate(buckets):
        items.extend(bucket)
        ptr[i + 1] = len(items)
    return ptr, np.array(items, np.int32)


def _model_from_arrays(space: VariableSpace, nstages, stage_vars,
                       orders) -> LexModel:
    stages = []
    for i in range(nstages):
        x = int(stage_vars[i])
        d = space.domain_size(x)
        ranking = tuple(int(v) for v in orders[x, :d])
        stages.append(TotalValueOrder(space, x, ranking))
    return LexModel(space, tuple(stages))


def _order_array(space: VariableSpace,
                 variable_priority: Sequence[str] | None) -> np.ndarray | None:
    if variable_priority is None:
        return None
    idx = [space.var_index(v) for v in variable_priority]
    if sorted(idx) != list(range(space.n)):
        raise ValueError("variable priority must be a permutation of the variables")
    return np.array(idx, np.int32)


def consistent(space: VariableSpace, gamma: Sequence[PrefStatement],
               kernel: str | None = None, verify: bool = True,
               variable_priority: Sequence[str] | None = None,
               ) -> ConsistencyResult:
    """Decide consistency of a statement set.

    With ``verify`` on (the default for one-shot calls), the witness model
    is re-checked against every statement through the independent
    stage-walk test; a mismatch would be an engine bug and raises.
    """
    enc = EncodedGamma(space, gamma, kernel=kernel)
    return consistent_from_encoding(enc, verify=verify,
                                    try_order=_order_array(space, variable_priority))


def consistent_from_encoding(enc: EncodedGamma, verify: bool = False,
                             try_order: np.ndarray | None = None,
                             ) -> ConsistencyResult:
    space = enc.space
    g = len(enc.statements)
    if enc.inconsistent_indices:
        failures = tuple(
            StatementFailure(j, enc.statements[j],
                             FailureReason.STATEMENT_UNSATISFIABLE)
            for j in enc.inconsistent_indices)
        return ConsistencyResult(False, LexModel(space), failures, None, g)
    ok, nstages, stage_vars, orders, fail, _, tests = enc.run(try_order=try_order)
    witness = _model_from_arrays(space, nstages, stage_vars, orders)
    failures = tuple(
        StatementFailure(j, enc.statements[j], _REASON_BY_CODE[int(fail[j])])
        for j in range(g) if fail[j])
    tests = int(tests) + g
    if verify:
        for j, st in enumerate(enc.statements):
            if satisfies(witness, st) != (fail[j] == 0):
                raise RuntimeError(
                    f"internal error: witness disagrees with stage-walk test "
                    f"on statement {st.label or j}")
        tests += g
    is_consistent = ok == 1
    return ConsistencyResult(
        consistent=is_consistent,
        witness=witness,
        failures=failures,
        v_gamma=witness.variables if is_consistent else None,
        test_count=tests)


def build_maximal_star_model(space: VariableSpace,
                             gamma: Sequence[PrefStatement],
                             kernel: str | None = None,
                             variable_priority: Sequence[str] | None = None,
                             ) -> LexModel:
    """Grow a maximal star-model of an individually consistent statement set.

    Deterministic: at each step the first variable (in priority order,
    default declaration order) admitting a valid extension is appended.
    """
    enc = EncodedGamma(space, gamma, kernel=kernel)
    if enc.inconsistent_indices:
        bad = enc.statements[enc.inconsistent_indices[0]]
        raise ValueError(
            f"statement {bad.label or enc.inconsistent_indices[0]} is "
            f"individually unsatisfiable")
    _, nstages, stage_vars, orders, _, _, _ = enc.run(
        try_order=_order_array(space, variable_priority))
    return _model_from_arrays(space, nstages, stage_vars, orders)


def extension_constraint(space: VariableSpace, gamma: Sequence[PrefStatement],
                         model: LexModel, variable: str) -> ExtensionConstraint:
    """Collect the best/worst/pair requirements for appending ``variable``."""
    x = space.var_index(variable)
    bit = 1 << x
    if model.vmask & bit:
        raise ValueError(f"{variable!r} is already in the model")
    vmask = model.vmask
    dom = space.domains[x]
    best: set[str] = set()
    worst: set[str] = set()
    pair_set: set[tuple[str, str]] = set()
    for st in gamma:
        if st.kind is StatementKind.NEGATED_NON_STRICT:
            if vmask & ~(st.t_mask | st.u_mask):
                continue
            if st.r_mask & bit:
                pair_set.add((dom[st.s.vals[x]], dom[st.r.vals[x]]))
        else:
            if st.rs_mask & vmask:
                continue
            if st.rs_mask & bit:
                pair_set.add((dom[st.r.vals[x]], dom[st.s.vals[x]]))
            elif st.r_mask & bit:
                best.add(dom[st.r.vals[x]])
            elif st.s_mask & bit:
                worst.add(dom[st.s.vals[x]])
    return ExtensionConstraint(variable=variable, best=frozenset(best),
                               worst=frozenset(worst), pairs=frozenset(pair_set))


def _complete_order(d: int, pair_list: list[tuple[int, int]],
                    best: int | None, worst: int | None) -> list[int] | None:
    """Deterministic topological completion shared with the kernel's rules."""
    edge = [[False] * d for _ in range(d)]
    indeg = [0] * d
    for a, b in pair_list:
        if not edge[a][b]:
            edge[a][b] = True
            indeg[b] += 1
    if best is not None and worst is not None and best == worst and d >= 2:
        return None
    if best is not None and indeg[best] > 0:
        return None
    if worst is not None and any(edge[worst][b] for b in range(d)):
        return None
    placed = [False] * d
    out: list[int] = []
    if best is not None:
        placed[best] = True
        out.append(best)
        for b in range(d):
            if edge[best][b]:
                indeg[b] -= 1
    nmid = d - len(out) - (0 if worst is None else 1)
    for _ in range(nmid):
        pick = -1
        for a in range(d):
            if placed[a] or a == worst:
                continue
            if indeg[a] == 0:
                pick = a
                break
        if pick == -1:
            return None
        placed[pick] = True
        out.append(pick)
        for b in range(d):
            if edge[pick][b]:
                indeg[b] -= 1
    if worst is not None:
        out.append(worst)
    return out


def valid_extension(space: VariableSpace, gamma: Sequence[PrefStatement],
                    model: LexModel, variable: str) -> TotalValueOrder | None:
    """A value order making ``model`` extendable by ``variable``, or None.

    Returns the deterministic completion: pinned best first, pinned worst
    last, remaining values by smallest-index topological order over the
    required pairs.
    """
    x = space.var_index(variable)
    bit = 1 << x
    if model.vmask & bit:
        raise ValueError(f"{variable!r} is already in the model")
    vmask = model.vmask
    best: int | None = None
    worst: int | None = None
    pair_list: list[tuple[int, int]] = []
    for st in gamma:
        if st.kind is StatementKind.NEGATED_NON_STRICT:
            if vmask & ~(st.t_mask | st.u_mask):
                continue
            if st.r_mask & bit:
                pair_list.append((st.s.vals[x], st.r.vals[x]))
        else:
            if st.rs_mask & vmask:
                continue
            if st.w_mask & bit:
                return None
            if st.rs_mask & bit:
                pair_list.append((st.r.vals[x], st.s.vals[x]))
            elif st.r_mask & bit:
                v = st.r.vals[x]
                if best is None:
                    best = v
                elif best != v:
                    return None
            elif st.s_mask & bit:
                v = st.s.vals[x]
                if worst is None:
                    worst = v
                elif worst != v:
                    return None
    order = _complete_order(space.domain_size(x), pair_list, best, worst)
    if order is None:
        return None
    return TotalValueOrder(space, x, tuple(order))


def _comparison_arrays(space: VariableSpace,
                       rows: Sequence[tuple[Outcome, Outcome, bool]]):
    k = len(rows)
    n = space.n
    xleft = np.empty((k, n), np.int16)
    xright = np.empty((k, n), np.int16)
    xstrict = np.empty(k, np.bool_)
    for i, (left, right, strict) in enumerate(rows):
        xleft[i] = left.values
        xright[i] = right.values
        xstrict[i] = strict
    return xleft, xright, xstrict


def consistent_with_comparisons(enc: EncodedGamma,
                                rows: Sequence[tuple[Outcome, Outcome, bool]],
                                ) -> bool:
    """Consistency of the encoded set plus extra outcome comparisons.

    The fast path behind inference and optimality membership: the base
    encoding is reused, only the comparison rows change per query.
    """
    if enc.inconsistent_indices:
        return False
    for left, right, strict in rows:
        if strict and left.values == right.values:
            return False
    ok, *_ = enc.run(*_comparison_arrays(enc.space, rows))
    return ok == 1


def entails(space: VariableSpace, gamma: Sequence[PrefStatement], op: str,
            left: Outcome, right: Outcome, kernel: str | None = None) -> bool:
    """Outcome-comparison inference by reduction to consistency.

    ``op`` is one of ``>=``, ``>``, ``==``.  The first two hold exactly
    when adding the opposite comparison makes the set inconsistent; the
    equivalence query projects both outcomes onto the variables of the
    maximal model.
    """
    enc = EncodedGamma(space, gamma, kernel=kernel)
    if op == ">=":
        return not consistent_with_comparisons(enc, [(right, left, True)])
    if op == ">":
        return not consistent_with_comparisons(enc, [(right, left, False)])
    if op == "==":
        res = consistent_from_encoding(enc)
        if not res.consistent:
            return True
        vmask = res.witness.vmask
        return all(left.values[i] == right.values[i] for i in iter_bits(vmask))
    raise ValueError(f"unknown comparison operator {op!r}")


def negation_of(statement: PrefStatement) -> PrefStatement:
    """The negation of a statement, when it stays inside the language.

    Supported: non-strict statements with matching difference sets, negated
    statements (whose negation is the inner statement), and strict complete
    comparisons (negated by swapping the sides non-strictly).
    """
    st = statement
    if st.kind is StatementKind.NON_STRICT and st.r_mask == st.s_mask:
        return negate_non_strict(st)
    if st.kind is StatementKind.NEGATED_NON_STRICT:
        return inner_statement(st)
    if (st.kind in (StatementKind.FULLY_STRICT, StatementKind.WEAKLY_STRICT)
            and st.r_mask == st.s_mask and st.w_mask == 0
            and st.t_mask & ~st.space.singleton_mask == 0):
        return PrefStatement(st.space, StatementKind.NON_STRICT,
                             st.u, st.s, st.r, st.t_mask)
    raise UnsupportedQueryError(
        "the negation of this statement leaves the language")


def entails_general(space: VariableSpace, gamma: Sequence[PrefStatement],
                    statement: PrefStatement, kernel: str | None = None) -> bool:
    """Statement inference by reduction to consistency, where expressible."""
    neg = negation_of(statement)
    res = consistent(space, tuple(gamma) + (neg,), kernel=kernel, verify=False)
    return not res.consistent


def v_gamma(space: VariableSpace, gamma: Sequence[PrefStatement],
            kernel: str | None = None) -> frozenset[str]:
    """Variables of any maximal model of a consistent statement set."""
    res = consistent(space, gamma, kernel=kernel, verify=False)
    if not res.consistent:
        raise InconsistentError("statement set has no model")
    return res.v_gamma


def entails_max(space: VariableSpace, gamma: Sequence[PrefStatement],
                statement: PrefStatement, kernel: str | None = None) -> bool:
    """Inference over maximal models only.

    Holds when the statement is entailed outright, and otherwise exactly
    when adding the negation shrinks the maximal-model variable set.
    """
    neg = negation_of(statement)
    base = consistent(space, gamma, kernel=kernel, verify=False)
    if not base.consistent:
        raise InconsistentError("statement set has no model")
    aug = consistent(space, tuple(gamma) + (neg,), kernel=kernel, verify=False)
    if not aug.consistent:
        return True
    return aug.v_gamma != base.v_gamma
