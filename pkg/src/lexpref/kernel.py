"""Greedy maximal-model construction kernel.

This is the package's hot loop: it grows a maximal star-model of a
statement set one stage at a time and then checks the strictness /
negation conditions on the result.  Benchmarks run it tens of thousands of
times per instance (one call per optimality membership test), so it
operates on a flat array encoding and is JIT-compiled with numba when
available.

The same source is also executed as plain Python over numpy arrays; select
with the ``LEXPREF_KERNEL`` environment variable:

* ``auto``  (default) numba when importable, numpy otherwise
* ``numba`` require the JIT-compiled kernel
* ``numpy`` force the pure-Python/numpy path

Per-variable constraint data arrives in CSR layout (``*_ptr`` of length
n+1 indexing flat entry arrays).  Entry arrays:

* ``rs_*``   statements with the variable in both difference blocks
  (required pair: left value above right value)
* ``bo_*``   statements pinning a best value (left-only block)
* ``wo_*``   statements pinning a worst value (right-only block)
* ``wb_*``   non-negated statements with the variable in the residual
  block (blocks the variable while the statement is live)
* ``sw_*``   per-statement residual variable lists (reverse of ``wb``)
* ``nr_*``   negated statements with the variable in the difference block
  (required pair: right value above left value, while still eligible)
* ``nt_*``   negated statements for which the variable falsifies the
  inner statement outright (kills eligibility when appended)

``xleft``/``xright``/``xstrict`` carry extra complete-outcome comparisons
appended to the base statement set; membership tests use them to avoid
re-encoding per query.

Returns ``(ok, stage_count, stage_vars, orders, fail, xfail, tests)``
where ``fail`` codes are 0 ok, 2 strictness never witnessed (both
difference blocks), 3 strictness never witnessed (either block), 4
negation never witnessed, and ``tests`` counts elementary per-statement
constraint evaluations.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - environment without numba
    njit = None
    HAS_NUMBA = False


def _greedy_impl(
    n, dmax, dom_sizes,
    kind,
    rs_ptr, rs_stmt, rs_r, rs_s,
    bo_ptr, bo_stmt, bo_val,
    wo_ptr, wo_stmt, wo_val,
    wb_ptr, wb_stmt,
    sw_ptr, sw_var,
    nr_ptr, nr_stmt, nr_r, nr_s,
    nt_ptr, nt_stmt,
    xleft, xright, xstrict,
    try_order,
):
    g = kind.shape[0]
    xk = xstrict.shape[0]

    active = np.ones(g, np.bool_)      # both-difference block untouched so far
    eligible = np.ones(g, np.bool_)    # negated rows: stages so far all held/agreed
    touched = np.zeros(g, np.bool_)    # some difference variable entered the model
    xactive = np.ones(xk, np.bool_)
    in_model = np.zeros(n, np.bool_)
    wcount = np.zeros(n, np.int64)
    for x in range(n):
        wcount[x] = wb_ptr[x + 1] - wb_ptr[x]

    orders = np.full((n, dmax), -1, np.int16)
    stage_vars = np.full(n, -1, np.int32)
    nstages = 0
    tests = 0

    edge = np.zeros((dmax, dmax), np.bool_)
    indeg = np.zeros(dmax, np.int64)
    placed = np.zeros(dmax, np.bool_)
    result = np.zeros(dmax, np.int16)

    while True:
        appended = False
        for oi in range(n):
            x = try_order[oi]
            if in_model[x]:
                continue
            tests += 1
            if wcount[x] > 0:
                continue
            d = dom_sizes[x]
            for a in range(d):
                indeg[a] = 0
                placed[a] = False
                for b in range(d):
                    edge[a, b] = False
            ok = True
            best = -1
            worst = -1
            for e in range(rs_ptr[x], rs_ptr[x + 1]):
                tests += 1
                j = rs_stmt[e]
                if not active[j]:
                    continue
                a = rs_r[e]
                b = rs_s[e]
                if not edge[a, b]:
                    edge[a, b] = True
                    indeg[b] += 1
            for e in range(nr_ptr[x], nr_ptr[x + 1]):
                tests += 1
                j = nr_stmt[e]
                if not eligible[j]:
                    continue
                a = nr_s[e]       # reversed: deny left-above-right
                b = nr_r[e]
                if not edge[a, b]:
                    edge[a, b] = True
                    indeg[b] += 1
            for kx in range(xk):
                tests += 1
                if not xactive[kx]:
                    continue
                a = xleft[kx, x]
                b = xright[kx, x]
                if a != b and not edge[a, b]:
                    edge[a, b] = True
                    indeg[b] += 1
            for e in range(bo_ptr[x], bo_ptr[x + 1]):
                tests += 1
                j = bo_stmt[e]
                if not active[j]:
                    continue
                v = bo_val[e]
                if best == -1:
                    best = v
                elif best != v:
                    ok = False
                    break
            if ok:
                for e in range(wo_ptr[x], wo_ptr[x + 1]):
                    tests += 1
                    j = wo_stmt[e]
                    if not active[j]:
                        continue
                    v = wo_val[e]
                    if worst == -1:
                        worst = v
                    elif worst != v:
                        ok = False
                        break
            if ok and best != -1 and worst != -1 and best == worst and d >= 2:
                ok = False
            if ok and best != -1 and indeg[best] > 0:
                ok = False
            if ok and worst != -1:
                for b in range(d):
                    if edge[worst, b]:
                        ok = False
                        break
            if ok:
                # Deterministic completion: pinned best first, pinned worst
                # last, the rest by smallest-index topological selection.
                pos = 0
                if best != -1:
                    placed[best] = True
                    result[pos] = best
                    pos += 1
                    for b in range(d):
                        if edge[best, b]:
                            indeg[b] -= 1
                nmid = d - pos
                if worst != -1:
                    nmid -= 1
                filled = 0
                while filled < nmid:
                    pick = -1
                    for a in range(d):
                        if placed[a] or a == worst:
                            continue
                        if indeg[a] == 0:
                            pick = a
                            break
                    if pick == -1:
                        ok = False
                        break
                    placed[pick] = True
                    result[pos] = pick
                    pos += 1
                    filled += 1
                    for b in range(d):
                        if edge[pick, b]:
                            indeg[b] -= 1
                if ok and worst != -1:
                    result[pos] = worst
                    pos += 1
            if not ok:
                continue

            in_model[x] = True
            stage_vars[nstages] = x
            nstages += 1
            for a in range(d):
                orders[x, a] = result[a]
            for e in range(rs_ptr[x], rs_ptr[x + 1]):
                j = rs_stmt[e]
                touched[j] = True
                if active[j]:
                    active[j] = False
                    for e2 in range(sw_ptr[j], sw_ptr[j + 1]):
                        wcount[sw_var[e2]] -= 1
            for e in range(bo_ptr[x], bo_ptr[x + 1]):
                touched[bo_stmt[e]] = True
            for e in range(wo_ptr[x], wo_ptr[x + 1]):
                touched[wo_stmt[e]] = True
            for e in range(nt_ptr[x], nt_ptr[x + 1]):
                eligible[nt_stmt[e]] = False
            for kx in range(xk):
                if xactive[kx] and xleft[kx, x] != xright[kx, x]:
                    xactive[kx] = False
            appended = True
            break
        if not appended:
            break

    ok_all = True
    fail = np.zeros(g, np.uint8)
    for j in range(g):
        tests += 1
        k = kind[j]
        if k == 1:
            if active[j]:
                fail[j] = 2
                ok_all = False
        elif k == 2:
            if not touched[j]:
                fail[j] = 3
                ok_all = False
        elif k == 3:
            if eligible[j]:
                fail[j] = 4
                ok_all = False
    xfail = np.zeros(xk, np.uint8)
    for kx in range(xk):
        tests += 1
        if xstrict[kx] and xactive[kx]:
            xfail[kx] = 2
            ok_all = False

    return (1 if ok_all else 0), nstages, stage_vars, orders, fail, xfail, tests


if HAS_NUMBA:
    _greedy_numba = njit(cache=True, nogil=True)(_greedy_impl)
else:  # pragma: no cover - environment without numba
    _greedy_numba = None

_greedy_numpy = _greedy_impl

ENV_VAR = "LEXPREF_KERNEL"


def backend_name(name: str | None = None) -> str:
    """Resolve the requested backend ('numba' or 'numpy')."""
    if name is None:
        name = os.environ.get(ENV_VAR, "auto")
    name = name.lower()
    if name == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if name == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        return "numba"
    if name == "numpy":
        return "numpy"
    raise ValueError(f"unknown kernel backend {name!r}")


def get_kernel(name: str | None = None):
    resolved = backend_name(name)
    return _greedy_numba if resolved == "numba" else _greedy_numpy


def warm_up() -> None:
    """Force JIT compilation outside timed sections."""
    if not HAS_NUMBA:
        return
    empty32 = np.zeros(0, np.int32)
    empty16 = np.zeros(0, np.int16)
    _greedy_numba(
        1, 1, np.ones(1, np.int32),
        np.zeros(0, np.int8),
        np.zeros(2, np.int32), empty32, empty16, empty16,
        np.zeros(2, np.int32), empty32, empty16,
        np.zeros(2, np.int32), empty32, empty16,
        np.zeros(2, np.int32), empty32,
        np.zeros(1, np.int32), empty32,
        np.zeros(2, np.int32), empty32, empty16, empty16,
        np.zeros(2, np.int32), empty32,
        np.zeros((0, 1), np.int16), np.zeros((0, 1), np.int16),
        np.zeros(0, np.bool_),
        np.zeros(1, np.int32),
    )
