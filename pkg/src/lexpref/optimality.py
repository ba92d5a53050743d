"""Optimality classes of a finite alternative set.

Four classes are computed directly; the remaining three coincide with one
of them once every statement composes (which all statements here do):

* ``PO``  optimal in some model (possibly optimal)
* ``PSO`` optimal in some model with every co-optimal alternative
  equivalent (possibly strictly optimal); equals the
  maximal-possibility, optimal-in-some-maximal-model and
  iterated-maximisation classes, exposed as ``mpo``/``pom``/``ext``
* ``CSD`` undominated under the entailed strict relation
* ``NO``  optimal in every model (necessarily optimal)

Membership reduces to consistency: one engine run per alternative for PO
and PSO, one per ordered pair for CSD and NO.  Alternatives agreeing on
the maximal model's variables are interchangeable in every model, so all
computations run on one representative per equivalence class and expand
afterwards.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from time import perf_counter
from typing import Iterable, Sequence

import numpy as np

from .core import LexModel, Outcome, VariableSpace, iter_bits
from .engine import (EncodedGamma, consistent_from_encoding,
                     consistent_with_comparisons)
from .errors import InconsistentError
from .statements import PrefStatement

THREADS_ENV_VAR = "LEXPREF_THREADS"


class AlternativeSet:
    """An ordered set of distinct outcomes to choose among."""

    __slots__ = ("space", "outcomes", "_matrix", "_index")

    def __init__(self, space: VariableSpace, outcomes: Iterable[Outcome]):
        outcomes = tuple(outcomes)
        if not outcomes:
            raise ValueError("alternative set must be non-empty")
        seen = {}
        for i, o in enumerate(outcomes):
            if o.space is not space and o.space != space:
                raise ValueError("alternative built over a different space")
            if o.values in seen:
                raise ValueError(f"duplicate alternative at positions "
                                 f"{seen[o.values]} and {i}")
            seen[o.values] = i
        self.space = space
        self.outcomes = outcomes
        self._matrix = None
        self._index = seen

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    def __getitem__(self, i: int) -> Outcome:
        return self.outcomes[i]

    def index_of(self, outcome: Outcome) -> int:
        try:
            return self._index[outcome.values]
        except KeyError:
            raise ValueError("outcome is not one of the alternatives") from None

    def matrix(self) -> np.ndarray:
        """(m, n) int16 value matrix, cached."""
        if self._matrix is None:
            self._matrix = np.array([o.values for o in self.outcomes], np.int16)
        return self._matrix


@dataclass(frozen=True)
class OptimalSets:
    """The four computed classes plus the equivalence partition.

    All sets hold alternative indices.  Constructor enforces the inclusion
    structure these classes provably satisfy; a violation would mean an
    engine bug.
    """

    po: frozenset[int]
    pso: frozenset[int]
    csd: frozenset[int]
    no: frozenset[int]
    eq_classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not (self.no <= self.pso <= self.po and self.pso <= self.csd):
            raise ValueError("optimality classes violate their inclusion chain")
        if self.no and not (self.no == self.pso == self.csd):
            raise ValueError("non-empty necessary set must equal the strict "
                             "and undominated sets")

    @property
    def mpo(self) -> frozenset[int]:
        return self.pso

    @property
    def pom(self) -> frozenset[int]:
        return self.pso

    @property
    def ext(self) -> frozenset[int]:
        return self.pso


def optimal_in_model(model: LexModel, alternatives: AlternativeSet,
                     ) -> frozenset[int]:
    """Indices of the alternatives no other alternative beats under the model."""
    keys = [model.key(o) for o in alternatives]
    best = min(keys)
    return frozenset(i for i, k in enumerate(keys) if k == best)


def _class_partition(vmask: int, alternatives: AlternativeSet,
                     ) -> tuple[tuple[int, ...], ...]:
    groups: dict[tuple[int, ...], list[int]] = {}
    vars_idx = list(iter_bits(vmask))
    for i, o in enumerate(alternatives.outcomes):
        key = tuple(o.values[x] for x in vars_idx)
        groups.setdefault(key, []).append(i)
    return tuple(tuple(g) for g in groups.values())


def equivalence_classes(space: VariableSpace, gamma: Sequence[PrefStatement],
                        alternatives: AlternativeSet,
                        kernel: str | None = None,
                        ) -> tuple[tuple[int, ...], ...]:
    """Partition alternatives by agreement on the maximal model's variables.

    Alternatives in one class compare as equivalent under every model of the
    statement set.
    """
    res = consistent_from_encoding(EncodedGamma(space, gamma, kernel=kernel))
    if not res.consistent:
        raise InconsistentError("statement set has no model")
    return _class_partition(res.witness.vmask, alternatives)


class _MembershipRun:
    """Shared state for membership tests over one instance."""

    def __init__(self, space: VariableSpace, gamma: Sequence[PrefStatement],
                 alternatives: AlternativeSet, kernel: str | None = None):
        self.space = space
        self.alternatives = alternatives
        self.enc = EncodedGamma(space, gamma, kernel=kernel)
        res = consistent_from_encoding(self.enc)
        if not res.consistent:
            raise InconsistentError("statement set has no model")
        self.eq_classes = _class_partition(res.witness.vmask, alternatives)
        self.reps = [cls[0] for cls in self.eq_classes]
        self.rep_outcomes = [alternatives[i] for i in self.reps]
        self.matrix = alternatives.matrix()

    def _one_vs_rest(self, rep_pos: int, strict: bool) -> bool:
        others = [p for p in range(len(self.reps)) if p != rep_pos]
        if not others:
            return True
        n = self.space.n
        k = len(others)
        xleft = np.empty((k, n), np.int16)
        xleft[:] = self.matrix[self.reps[rep_pos]]
        xright = np.ascontiguousarray(
            self.matrix[[self.reps[p] for p in others]])
        xstrict = np.full(k, strict, np.bool_)
        ok, *_ = self.enc.run(xleft, xright, xstrict)
        return ok == 1

    def po_rep(self, rep_pos: int) -> bool:
        return self._one_vs_rest(rep_pos, strict=False)

    def pso_rep(self, rep_pos: int) -> bool:
        return self._one_vs_rest(rep_pos, strict=True)

    def _pair(self, left_rep: int, right_rep: int) -> bool:
        left = self.rep_outcomes[left_rep]
        right = self.rep_outcomes[right_rep]
        return consistent_with_comparisons(self.enc, [(left, right, True)])

    def csd_rep(self, rep_pos: int) -> bool:
        # undominated: the alternative can strictly beat every
        # non-equivalent competitor in some model
        return all(self._pair(rep_pos, p)
                   for p in range(len(self.reps)) if p != rep_pos)

    def no_rep(self, rep_pos: int) -> bool:
        # necessarily optimal: no competitor can ever strictly beat it
        return not any(self._pair(p, rep_pos)
                       for p in range(len(self.reps)) if p != rep_pos)

    def expand(self, rep_flags: Sequence[bool]) -> frozenset[int]:
        out: set[int] = set()
        for flag, cls in zip(rep_flags, self.eq_classes):
            if flag:
                out.update(cls)
        return frozenset(out)


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    raw = os.environ.get(THREADS_ENV_VAR, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map(fn, items, threads: int):
    if threads <= 1:
        return [fn(i) for i in items]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def po_membership(space: VariableSpace, gamma: Sequence[PrefStatement],
                  alternatives: AlternativeSet, alpha: Outcome,
                  kernel: str | None = None) -> bool:
    """Is there a model of the statement set making ``alpha`` optimal?"""
    run = _MembershipRun(space, gamma, alternatives, kernel)
    return run.po_rep(_rep_pos_of(run, alpha))


def pso_membership(space: VariableSpace, gamma: Sequence[PrefStatement],
                   alternatives: AlternativeSet, alpha: Outcome,
                   kernel: str | None = None) -> bool:
    """Is ``alpha`` optimal in some model with only equivalents beside it?"""
    run = _MembershipRun(space, gamma, alternatives, kernel)
    return run.pso_rep(_rep_pos_of(run, alpha))


def csd_membership(space: VariableSpace, gamma: Sequence[PrefStatement],
                   alternatives: AlternativeSet, alpha: Outcome,
                   kernel: str | None = None) -> bool:
    """Is ``alpha`` undominated under the entailed strict relation?"""
    run = _MembershipRun(space, gamma, alternatives, kernel)
    return run.csd_rep(_rep_pos_of(run, alpha))


def no_membership(space: VariableSpace, gamma: Sequence[PrefStatement],
                  alternatives: AlternativeSet, alpha: Outcome,
                  kernel: str | None = None) -> bool:
    """Is ``alpha`` optimal in every model of the statement set?"""
    run = _MembershipRun(space, gamma, alternatives, kernel)
    return run.no_rep(_rep_pos_of(run, alpha))


def _rep_pos_of(run: _MembershipRun, alpha: Outcome) -> int:
    idx = run.alternatives.index_of(alpha)
    for pos, cls in enumerate(run.eq_classes):
        if idx in cls:
            return pos
    raise AssertionError("alternative missing from its own partition")


def compute_sets(space: VariableSpace, gamma: Sequence[PrefStatement],
                 alternatives: AlternativeSet, kernel: str | None = None,
                 threads: int | None = None) -> OptimalSets:
    """All four optimality classes of the alternative set."""
    sets, _ = compute_sets_timed(space, gamma, alternatives,
                                 kernel=kernel, threads=threads)
    return sets


def compute_sets_timed(space: VariableSpace, gamma: Sequence[PrefStatement],
                       alternatives: AlternativeSet,
                       kernel: str | None = None,
                       threads: int | None = None,
                       ) -> tuple[OptimalSets, dict[str, float]]:
    """Compute the classes and report per-class wall time in milliseconds."""
    workers = _thread_count(threads)
    run = _MembershipRun(space, gamma, alternatives, kernel)
    positions = range(len(run.reps))
    timings: dict[str, float] = {}

    def timed(name: str, fn):
        start = perf_counter()
        flags = _map(fn, positions, workers)
        timings[name] = (perf_counter() - start) * 1000.0
        return run.expand(flags)

    po = timed("po", run.po_rep)
    pso = timed("pso", run.pso_rep)
    csd = timed("csd", run.csd_rep)
    no = timed("no", run.no_rep)
    sets = OptimalSets(po=po, pso=pso, csd=csd, no=no,
                       eq_classes=run.eq_classes)
    return sets, timings
