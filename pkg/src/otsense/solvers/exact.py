"""Exact discrete optimal transport via the transportation simplex.

The network-simplex specialization for bipartite transportation problems:
a north-west-corner starting basis, potentials maintained on a spanning
tree, block (partial) pricing for speed, and a strict Bland's-rule fallback
that engages after a run of degenerate pivots so termination is guaranteed
even on heavily degenerate instances.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from ..data import TransportPlan
from ..errors import NumericalError
from .common import validate_problem
from .outcome import SolveOutcome


@njit(cache=True)
def _refresh_tree(parent, pot, depth, child_cnt, child_start, child_list, stack, C, n):
    """Recompute potentials and depths from the parent array (O(n + m))."""
    nn = parent.shape[0]
    for v in range(nn):
        child_cnt[v] = 0
    for v in range(1, nn):
        child_cnt[parent[v]] += 1
    child_start[0] = 0
    for v in range(nn):
        child_start[v + 1] = child_start[v] + child_cnt[v]
        child_cnt[v] = child_start[v]
    for v in range(1, nn):
        p = parent[v]
        child_list[child_cnt[p]] = v
        child_cnt[p] += 1

    pot[0] = 0.0
    depth[0] = 0
    stack[0] = 0
    top = 1
    while top > 0:
        top -= 1
        v = stack[top]
        for t in range(child_start[v], child_start[v + 1]):
            c = child_list[t]
            depth[c] = depth[v] + 1
            if c < n:
                pot[c] = C[c, v - n] - pot[v]
            else:
                pot[c] = C[v, c - n] - pot[v]
            stack[top] = c
            top += 1


@njit(cache=True)
def _simplex(C, a, b, max_pivots, tol):
    """Returns (status, cost, pivots, parent, pflow).

    status: 0 optimal, 1 pivot budget exhausted.
    parent[v] is the tree parent of node v (rows are nodes 0..n-1, columns
    n..n+m-1, row 0 is the root); pflow[v] the flow on the arc to the parent.
    """
    n, m = C.shape
    nn = n + m
    nb = nn - 1

    # --- north-west corner staircase ---------------------------------
    arc_i = np.empty(nb, np.int64)
    arc_j = np.empty(nb, np.int64)
    arc_f = np.empty(nb, np.float64)
    rem_a = a.copy()
    rem_b = b.copy()
    i = 0
    j = 0
    for k in range(nb):
        f = rem_a[i] if rem_a[i] < rem_b[j] else rem_b[j]
        arc_i[k] = i
        arc_j[k] = j
        arc_f[k] = f
        rem_a[i] -= f
        rem_b[j] -= f
        if i == n - 1:
            j += 1
        elif j == m - 1:
            i += 1
        elif rem_a[i] == 0.0:
            i += 1
        else:
            j += 1

    # --- spanning tree from the staircase -----------------------------
    deg = np.zeros(nn, np.int64)
    for k in range(nb):
        deg[arc_i[k]] += 1
        deg[n + arc_j[k]] += 1
    adj_start = np.zeros(nn + 1, np.int64)
    for v in range(nn):
        adj_start[v + 1] = adj_start[v] + deg[v]
    fill = adj_start[:nn].copy()
    adj_arc = np.empty(2 * nb, np.int64)
    for k in range(nb):
        u = arc_i[k]
        w = n + arc_j[k]
        adj_arc[fill[u]] = k
        fill[u] += 1
        adj_arc[fill[w]] = k
        fill[w] += 1

    parent = np.full(nn, -1, np.int64)
    pflow = np.zeros(nn, np.float64)
    pot = np.zeros(nn, np.float64)
    depth = np.zeros(nn, np.int64)
    visited = np.zeros(nn, np.uint8)
    stack = np.empty(nn, np.int64)
    stack[0] = 0
    visited[0] = 1
    top = 1
    while top > 0:
        top -= 1
        v = stack[top]
        for t in range(adj_start[v], adj_start[v + 1]):
            k = adj_arc[t]
            u = arc_i[k]
            w = n + arc_j[k]
            other = w if v == u else u
            if visited[other] == 0:
                visited[other] = 1
                parent[other] = v
                pflow[other] = arc_f[k]
                depth[other] = depth[v] + 1
                pot[other] = C[arc_i[k], arc_j[k]] - pot[v]
                stack[top] = other
                top += 1

    child_cnt = np.empty(nn, np.int64)
    child_start = np.empty(nn + 1, np.int64)
    child_list = np.empty(nn, np.int64)

    # --- pivoting ------------------------------------------------------
    total_arcs = n * m
    block = 8192 if total_arcs > 8192 else total_arcs
    scan_pos = 0
    degen_run = 0
    bland = False
    pivots = 0
    status = 1

    while pivots < max_pivots:
        # pricing: entering arc with negative reduced cost
        enter_i = -1
        enter_j = -1
        if bland:
            # lowest-index eligible arc (Bland's rule)
            done = False
            for ii in range(n):
                pi = pot[ii]
                for jj in range(m):
                    if C[ii, jj] - pi - pot[n + jj] < -tol:
                        enter_i = ii
                        enter_j = jj
                        done = True
                        break
                if done:
                    break
        else:
            scanned = 0
            best = -tol
            while scanned < total_arcs:
                hi = scan_pos + block
                if hi > total_arcs:
                    hi = total_arcs
                ii = scan_pos // m
                jj = scan_pos - ii * m
                for f in range(scan_pos, hi):
                    r = C[ii, jj] - pot[ii] - pot[n + jj]
                    if r < best:
                        best = r
                        enter_i = ii
                        enter_j = jj
                    jj += 1
                    if jj == m:
                        jj = 0
                        ii += 1
                scanned += hi - scan_pos
                scan_pos = hi if hi < total_arcs else 0
                if enter_i >= 0:
                    break
        if enter_i < 0:
            status = 0
            break

        # ratio test along the unique tree cycle through the entering arc.
        # Walking up from either endpoint toward the apex, arcs at even
        # positions receive -delta (the cell signs alternate around the
        # bipartite cycle, and the closed walk has even length).
        ve = enter_i
        we = n + enter_j
        # lowest common ancestor by depth
        x = ve
        y = we
        dx = depth[x]
        dy = depth[y]
        while dx > dy:
            x = parent[x]
            dx -= 1
        while dy > dx:
            y = parent[y]
            dy -= 1
        while x != y:
            x = parent[x]
            y = parent[y]
        apex = x

        delta = np.inf
        leave_child = -1
        leave_on_col_side = False
        v = we
        minus = True
        while v != apex:
            if minus:
                fv = pflow[v]
                better = fv < delta
                if fv == delta and leave_child >= 0:
                    # deterministic tie-break: smaller cell flat index
                    if v < n:
                        cell = v * m + (parent[v] - n)
                    else:
                        cell = parent[v] * m + (v - n)
                    if leave_child < n:
                        lcell = leave_child * m + (parent[leave_child] - n)
                    else:
                        lcell = parent[leave_child] * m + (leave_child - n)
                    better = cell < lcell
                if better:
                    delta = fv
                    leave_child = v
                    leave_on_col_side = True
            v = parent[v]
            minus = not minus
        v = ve
        minus = True
        while v != apex:
            if minus:
                fv = pflow[v]
                better = fv < delta
                if fv == delta and leave_child >= 0:
                    if v < n:
                        cell = v * m + (parent[v] - n)
                    else:
                        cell = parent[v] * m + (v - n)
                    if leave_child < n:
                        lcell = leave_child * m + (parent[leave_child] - n)
                    else:
                        lcell = parent[leave_child] * m + (leave_child - n)
                    better = cell < lcell
                if better:
                    delta = fv
                    leave_child = v
                    leave_on_col_side = False
            v = parent[v]
            minus = not minus

        # apply the flow change around the cycle
        v = we
        sgn = -1.0
        while v != apex:
            pflow[v] += sgn * delta
            v = parent[v]
            sgn = -sgn
        v = ve
        sgn = -1.0
        while v != apex:
            pflow[v] += sgn * delta
            v = parent[v]
            sgn = -sgn

        # swap basis: reverse parent pointers from the entering endpoint in
        # the detached subtree down to the leaving arc
        if leave_on_col_side:
            e_sub = we
            e_anchor = ve
        else:
            e_sub = ve
            e_anchor = we
        v = e_sub
        prev_parent = e_anchor
        prev_flow = delta
        while True:
            nxt = parent[v]
            nxt_flow = pflow[v]
            parent[v] = prev_parent
            pflow[v] = prev_flow
            if v == leave_child:
                break
            prev_parent = v
            prev_flow = nxt_flow
            v = nxt

        _refresh_tree(parent, pot, depth, child_cnt, child_start, child_list,
                      stack, C, n)
        pivots += 1

        # anti-cycling bookkeeping
        if delta > 1e-16:
            degen_run = 0
            bland = False
        else:
            degen_run += 1
            if degen_run > nn:
                bland = True

    cost = 0.0
    for v in range(1, nn):
        if v < n:
            cost += pflow[v] * C[v, parent[v] - n]
        else:
            cost += pflow[v] * C[parent[v], v - n]
    return status, cost, pivots, parent, pflow


def solve_exact(C, a, b, want_plan: bool = True) -> SolveOutcome:
    """Minimize ``<P, C>`` over couplings of the discrete measures (a, b).

    Parameters
    ----------
    C : array_like, shape (n, m)
        Non-negative finite cost matrix.
    a, b : array_like
        Marginal weight vectors, each non-negative and summing to 1
        within 1e-12.
    want_plan : bool
        Skip materializing the dense coupling when False (the basis is
        sparse; the cost is available either way).

    Returns
    -------
    SolveOutcome
        With the optimal cost, the plan (optional), and the pivot count
        in ``iterations``.
    """
    C, a, b = validate_problem(C, a, b)
    n, m = C.shape
    tol = 1e-12 * (1.0 + float(C.max()))
    max_pivots = 1000 + 200 * (n + m)
    status, cost, pivots, parent, pflow = _simplex(C, a, b, max_pivots, tol)
    if status != 0:
        raise NumericalError(f"transportation simplex exhausted its pivot "
                             f"budget ({max_pivots} pivots)")

    rows = np.arange(1, n + m)
    is_row = rows < n
    ci = np.where(is_row, rows, parent[1:])
    cj = np.where(is_row, parent[1:] - n, rows - n)
    row_sum = np.bincount(ci, weights=pflow[1:], minlength=n)
    col_sum = np.bincount(cj, weights=pflow[1:], minlength=m)
    marginal_err = float(abs(row_sum - a).sum() + abs(col_sum - b).sum())

    plan = None
    if want_plan:
        P = np.zeros((n, m))
        P[ci, cj] = pflow[1:]
        plan = TransportPlan(P, a, b, tol=max(1e-9, 2.0 * marginal_err))
    return SolveOutcome(cost=float(cost), plan=plan, iterations=int(pivots),
                        marginal_err=marginal_err, converged=True)
