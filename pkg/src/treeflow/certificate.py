"""Optimality certificates: cut-systems, odd sets, path decompositions.

A certificate for a flow ``f`` is a family of disjoint connected vertex
sets ``X_t``, one per terminal, whose crossing capacity ``gamma`` minus
the number ``kappa`` of odd-capacity components left over equals twice the
flow value.  Integral flows never exceed ``(gamma - kappa) / 2``, so
equality proves optimality.

Connectivity is taken in the support graph (positive-capacity edges);
a zero-capacity edge joining two odd components must not merge them.
"""

from __future__ import annotations

import json
from itertools import chain
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from treeflow.instance import Instance, RootedTree
from treeflow.solver import EdgeLabels, FlowAssignment, FlowInvariantError, Solution, check_conservation


class DecompositionError(ValueError):
    pass


# --------------------------------------------------------------------------
# canonical level


@dataclass
class TreeCutSystem:
    """Cut-system ``{V_f(t)}`` on a canonical forest.

    ``owner[v]`` is the terminal vertex whose set contains ``v`` (-1 if
    none).  Every other vertex belongs to a remainder component named by
    its topmost vertex ``top[v]``; ``odd_tops`` lists the odd ones.
    """

    owner: list[int]
    top: list[int]
    odd_tops: list[int]
    gamma: int
    kappa: int
    cut_cap: dict[int, int]
    odd_count: dict[int, int]


def extract_cut_system(tree: RootedTree, flow: FlowAssignment) -> TreeCutSystem:
    """Grow ``V_f(t)`` from every terminal: up along edges with residual >= 1,
    down along edges with residual >= 2."""
    size = tree.size
    parent, cap, left, right = tree.parent, tree.cap, tree.left, tree.right
    f = flow.f
    owner = [-1] * size
    for t in tree.terminals():
        if owner[t] >= 0:
            raise FlowInvariantError(f"terminal {t} lies in the set of terminal {owner[t]}")
        owner[t] = t
        todo = [t]
        while todo:
            w = todo.pop()
            nbrs = []
            if parent[w] >= 0 and cap[w] - f[w] >= 1:
                nbrs.append(parent[w])
            for c in (left[w], right[w]):
                if c >= 0 and cap[c] - f[c] >= 2:
                    nbrs.append(c)
            for z in nbrs:
                o = owner[z]
                if o == t:
                    continue
                if o >= 0:
                    raise FlowInvariantError(f"sets of terminals {o} and {t} overlap at {z}")
                owner[z] = t
                todo.append(z)

    top = [-1] * size
    wcap: dict[int, int] = {}
    cut_cap = dict.fromkeys(tree.terminals(), 0)
    gamma = 0
    for v in range(size):
        p = parent[v]
        if p < 0:
            continue
        op, ov = owner[p], owner[v]
        if ov < 0:
            top[v] = top[p] if op < 0 else v
        if op == ov and op >= 0:
            continue
        c = cap[v]
        if op < 0 and ov < 0:
            continue
        if op >= 0:
            cut_cap[op] += c
            gamma += c
        else:
            wcap[top[p]] = wcap.get(top[p], 0) + c
        if ov >= 0:
            cut_cap[ov] += c
            gamma += c
        else:
            wcap[v] = wcap.get(v, 0) + c
    odd_tops = [w for w, c in wcap.items() if c & 1]
    odd_count = dict.fromkeys(tree.terminals(), 0)
    for w in odd_tops:
        odd_count[owner[parent[w]]] += 1
    return TreeCutSystem(owner, top, odd_tops, gamma, len(odd_tops), cut_cap, odd_count)


def structural_violations(
    tree: RootedTree, labels: EdgeLabels, flow: FlowAssignment, cuts: TreeCutSystem
) -> list[str]:
    """Every invariant the construction promises, as a list of failures."""
    out: list[str] = []
    cap, parent, left = tree.cap, tree.parent, tree.left
    a, b, x, f = labels.a, labels.b, flow.x, flow.f
    edges = [v for v in range(tree.size) if parent[v] >= 0]
    for v in edges:
        if not a[v] <= b[v] <= cap[v]:
            out.append(f"edge {v}: a={a[v]} b={b[v]} c={cap[v]} out of order")
        if (b[v] - a[v]) & 1:
            out.append(f"edge {v}: psi endpoints differ in parity")
        if not (a[v] <= x[v] <= b[v] and (x[v] - a[v]) % 2 == 0):
            out.append(f"edge {v}: x={x[v]} not in <{a[v]},{b[v]}>")
        if f[v] == cap[v] and not (a[v] <= cap[v] <= b[v] and (cap[v] - a[v]) % 2 == 0):
            out.append(f"edge {v}: saturated but c not in psi")
    try:
        check_conservation(tree, f)
    except FlowInvariantError as exc:
        out.append(str(exc))
    owner = cuts.owner
    odd_top = set(cuts.odd_tops)
    for t in tree.terminals():
        if owner[t] != t:
            out.append(f"terminal {t} not in its own set")
    for v in edges:
        p = parent[v]
        op, ov = owner[p], owner[v]
        if ov >= 0 and op != ov and parent[ov] >= 0 and f[v] != cap[v]:
            out.append(f"parent edge {v} of the set of {ov} not saturated")
        if op >= 0 and ov != op:
            want = cap[v] - 1 if v in odd_top else cap[v]
            if f[v] != want:
                out.append(f"child edge {v} of the set of {op}: f={f[v]}, expected {want}")
    for t in tree.terminals():
        et = left[t] if parent[t] < 0 else t
        blocked = cuts.cut_cap[t] - cuts.odd_count[t]
        if f[et] != blocked:
            out.append(f"terminal {t} not blocked: f={f[et]}, c(X)-|odd(X)|={blocked}")
    return out


@dataclass
class PathDecomposition:
    """Units of flow per unordered terminal pair ``(t, t')`` with ``t < t'``."""

    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def add(self, s: int, t: int, units: int) -> None:
        key = (s, t) if s < t else (t, s)
        self.entries[key] = self.entries.get(key, 0) + units

    def total(self) -> int:
        return sum(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)


def decompose_flow(
    tree: RootedTree, flow: FlowAssignment, out: Optional[PathDecomposition] = None
) -> PathDecomposition:
    """Bottom-up strand matching; pairs are keyed by the terminals' original ids.

    Each edge carries a linked list of ``(terminal, units)`` strands heading
    up.  At a vertex, ``y = (f1 + f2 - f0) / 2`` units are paired across the
    two child lists front-first and the rest continue upward; whatever
    reaches a root edge ends at that root's terminal.
    """
    out = PathDecomposition() if out is None else out
    size = tree.size
    f, parent, left, right, label = flow.f, tree.parent, tree.left, tree.right, tree.label
    st_term: list[int] = []
    st_cnt: list[int] = []
    st_next: list[int] = []
    head = [-1] * size
    tail = [-1] * size
    for v in range(size - 1, -1, -1):
        if parent[v] < 0:
            continue
        w1 = left[v]
        if w1 < 0:
            if f[v]:
                head[v] = tail[v] = len(st_term)
                st_term.append(label[v])
                st_cnt.append(f[v])
                st_next.append(-1)
            continue
        w2 = right[v]
        f0, f1, f2 = f[v], f[w1], f[w2]
        twice = f1 + f2 - f0
        if twice < 0 or twice & 1 or twice > 2 * min(f1, f2):
            raise DecompositionError(
                f"flows {f0}, {f1}, {f2} do not pair up at the lower end of edge {v}"
            )
        y = twice // 2
        h1, h2 = head[w1], head[w2]
        while y:
            k = min(y, st_cnt[h1], st_cnt[h2])
            out.add(st_term[h1], st_term[h2], k)
            y -= k
            st_cnt[h1] -= k
            st_cnt[h2] -= k
            if not st_cnt[h1]:
                h1 = st_next[h1]
            if not st_cnt[h2]:
                h2 = st_next[h2]
        if h1 < 0:
            head[v], tail[v] = h2, (tail[w2] if h2 >= 0 else -1)
        elif h2 < 0:
            head[v], tail[v] = h1, tail[w1]
        else:
            st_next[tail[w1]] = h2
            head[v], tail[v] = h1, tail[w2]
    for r in tree.roots:
        h = head[left[r]]
        while h >= 0:
            out.add(label[r], st_term[h], st_cnt[h])
            h = st_next[h]
    return out


# --------------------------------------------------------------------------
# original instance level


@dataclass
class CutCertificate:
    cuts: dict[int, tuple[int, ...]]
    odd_sets: list[tuple[tuple[int, ...], int]]  # (vertices, owner terminal)
    gamma: Optional[int]  # None when a file lists cuts without claiming gamma
    kappa: int


def decompose_solution(solution: Solution) -> PathDecomposition:
    return decompose_flow(solution.forest, solution.assignment)


def certify(solution: Solution) -> CutCertificate:
    """Cut-system for the original instance, mapped back from the canonical forest.

    Cut labels and remainder components travel the same way: copies and
    expansion vertices to their original node, chain interiors to the
    endpoint on their side of the chain's minimum edge, pruned vertices to
    their anchor.  Remainder vertices of terminal-free parts get no
    component; their crossing capacity is 0, so they are never odd.
    """
    inst, nmap = solution.instance, solution.nmap
    n = inst.n
    total = n + 1 + len(nmap.copy_of)
    node_label = [0] * total
    node_comp = [-1] * total
    for i, t in enumerate(nmap.copy_of):
        node_label[n + 1 + i] = t
    tree = solution.forest
    cs = extract_cut_system(tree, solution.assignment)
    owner, top, node, label = cs.owner, cs.top, tree.node, tree.label
    for v in range(tree.size):
        o = owner[v]
        if o >= 0:
            node_label[node[v]] = label[o]
        else:
            node_comp[node[v]] = top[v]
    super_a, super_b, side = nmap.super_a, nmap.super_b, nmap.chain_side
    for z, s in enumerate(nmap.chain_super):
        if s >= 0:
            end = super_a[s] if side[z] == 0 else super_b[s]
            node_label[z] = node_label[end]
            node_comp[z] = node_comp[end]
    anchor = nmap.anchor
    for x in reversed(nmap.prune_order):
        a = anchor[x]
        if a >= 0:
            node_label[x] = node_label[a]
            node_comp[x] = node_comp[a]
    lab = np.array(node_label[: n + 1], dtype=np.int64)
    terms = inst.terminals
    lab[terms] = terms

    order = np.argsort(lab, kind="stable")
    sorted_lab = lab[order]
    cuts: dict[int, tuple[int, ...]] = {}
    for t in sorted(terms.tolist()):
        lo, hi = np.searchsorted(sorted_lab, [t, t + 1])
        cuts[t] = tuple(order[lo:hi].tolist())
    members: dict[int, list[int]] = {w: [] for w in cs.odd_tops}
    for x in range(1, n + 1):
        w = node_comp[x]
        if w in members and node_label[x] == 0:
            members[w].append(x)
    odd_sets = sorted((tuple(members[w]), label[owner[tree.parent[w]]]) for w in cs.odd_tops)
    cert = CutCertificate(cuts, odd_sets, _gamma(inst, lab), len(odd_sets))
    if cert.gamma - cert.kappa != solution.value2:
        raise FlowInvariantError(
            f"certificate gives {cert.gamma} - {cert.kappa}, flow gives {solution.value2}"
        )
    return cert


def _group(comp: np.ndarray, mask: np.ndarray, wanted: Sequence[int]) -> dict[int, tuple[int, ...]]:
    wanted_set = np.zeros(int(comp.max()) + 2 if len(comp) else 1, dtype=bool)
    wanted_set[list(wanted)] = True
    verts = np.nonzero(mask & wanted_set[comp])[0]
    verts = verts[verts >= 1]
    out: dict[int, list[int]] = {c: [] for c in wanted}
    for v, c in zip(verts.tolist(), comp[verts].tolist()):
        out[c].append(v)
    return {c: tuple(vs) for c, vs in out.items()}


def _remainder_components(inst: Instance, lab: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Components of the support graph on vertices with ``lab == 0`` and their cut capacities."""
    n = inst.n
    u, v, c = inst.u, inst.v, inst.cap
    free_u, free_v = lab[u] == 0, lab[v] == 0
    inner = free_u & free_v & (c > 0)
    graph = coo_matrix(
        (np.ones(int(inner.sum()), dtype=np.int8), (u[inner], v[inner])), shape=(n + 1, n + 1)
    )
    _, comp = connected_components(graph, directed=False)
    comp = comp.astype(np.int64)
    ncomp = int(comp.max()) + 1
    w = np.zeros(ncomp, dtype=np.int64)
    cross_u = free_u & ~free_v
    cross_v = free_v & ~free_u
    np.add.at(w, comp[u[cross_u]], c[cross_u])
    np.add.at(w, comp[v[cross_v]], c[cross_v])
    isfree = np.zeros(ncomp, dtype=bool)
    isfree[comp[1:][lab[1:] == 0]] = True
    w[~isfree] = 0
    return comp, w.tolist()


def _gamma(inst: Instance, lab: np.ndarray) -> int:
    lu, lv = lab[inst.u], lab[inst.v]
    cross = lu != lv
    c = inst.cap
    return int(c[cross & (lu > 0)].sum() + c[cross & (lv > 0)].sum())


# --------------------------------------------------------------------------
# independent verification


@dataclass
class ClaimedSolution:
    value2: int
    edge_flows: list[tuple[int, int, int]]
    decomposition: Optional[PathDecomposition] = None
    certificate: Optional[CutCertificate] = None


@dataclass
class VerificationReport:
    checks: list[tuple[str, bool, str]]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failed(self) -> list[str]:
        return [name for name, ok, _ in self.checks if not ok]

    def summary(self) -> str:
        good = sum(ok for _, ok, _ in self.checks)
        return f"{'PASS' if self.passed else 'FAIL'} ({good}/{len(self.checks)} checks)"

    def __str__(self) -> str:
        lines = [
            f"{'ok  ' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else "")
            for name, ok, detail in self.checks
        ]
        return "\n".join(lines + [self.summary()])


CHECK_NAMES = (
    "feasibility",
    "decomposition",
    "flow value",
    "cut-system",
    "odd sets",
    "duality",
)


def verify_solution(
    inst: Instance, solution, certificate: Optional[CutCertificate] = None
) -> VerificationReport:
    """Recheck a claimed flow and certificate using only the raw instance.

    ``solution`` needs ``value2`` and ``edge_flows``; a ``decomposition``
    attribute, if present and not None, is checked edge by edge.
    """
    checks: dict[str, tuple[bool, str]] = {}
    n = inst.n
    u, v = inst.u, inst.v
    terms = inst.terminals
    is_term = np.zeros(n + 1, dtype=bool)
    is_term[terms] = True

    # 1. feasibility, after aligning the claimed flows to the instance edges
    f, problem = _align_flows(inst, list(solution.edge_flows))
    checks["feasibility"] = (not problem, problem)

    # 2. decomposability (local pairing at non-terminals) and claimed g
    if f is None:
        checks["decomposition"] = (False, "no usable flow")
    else:
        checks["decomposition"] = _check_decomposition(inst, f, is_term, getattr(solution, "decomposition", None))

    # 3. value
    if f is None:
        checks["flow value"] = (False, "no usable flow")
        value2 = None
    else:
        value2 = int(f[is_term[u]].sum() + f[is_term[v]].sum())
        ok = value2 == solution.value2
        checks["flow value"] = (ok, "" if ok else f"claimed {solution.value2}, edges give {value2}")

    # 4-6. certificate
    cert = certificate if certificate is not None else getattr(solution, "certificate", None)
    if cert is None:
        for name in CHECK_NAMES[3:]:
            checks[name] = (False, "no certificate")
    else:
        lab, problem = _check_cuts(inst, cert, is_term)
        checks["cut-system"] = (not problem, problem)
        if lab is None:
            checks["odd sets"] = (False, "invalid cut-system")
            checks["duality"] = (False, "invalid cut-system")
        else:
            gamma = _gamma(inst, lab)
            comp, wcap = _remainder_components(inst, lab)
            odd_ids = [c for c, w in enumerate(wcap) if w & 1]
            kappa = len(odd_ids)
            notes = []
            if kappa != cert.kappa:
                notes.append(f"kappa claimed {cert.kappa}, recount {kappa}")
            if cert.gamma is not None and gamma != cert.gamma:
                notes.append(f"gamma claimed {cert.gamma}, recount {gamma}")
            if cert.odd_sets:
                members = _group(comp, lab == 0, odd_ids)
                mine = {frozenset(vs) for vs in members.values()}
                theirs = {frozenset(vs) for vs, _ in cert.odd_sets}
                if mine != theirs:
                    notes.append("listed odd sets differ from the recount")
            checks["odd sets"] = (not notes, "; ".join(notes))
            notes = []
            if value2 is None or value2 != gamma - kappa:
                notes.append(f"2*alpha={value2} but gamma-kappa={gamma - kappa}")
            claimed_gamma = gamma if cert.gamma is None else cert.gamma
            if solution.value2 != claimed_gamma - cert.kappa:
                notes.append(
                    f"claimed 2*alpha={solution.value2} but claimed gamma-kappa={claimed_gamma - cert.kappa}"
                )
            checks["duality"] = (not notes, "; ".join(notes))
    return VerificationReport([(name, *checks[name]) for name in CHECK_NAMES])


def _align_flows(
    inst: Instance, claimed: list[tuple[int, int, int]]
) -> tuple[Optional[np.ndarray], str]:
    """Claimed per-edge flows in instance edge order, or None and the problem."""
    n, u, v, cap = inst.n, inst.u, inst.v, inst.cap
    m = len(u)
    if len(claimed) != m:
        return None, f"{len(claimed)} flow entries for {m} edges"
    if not m:
        return np.zeros(0, dtype=np.int64), ""
    arr = np.array(claimed, dtype=np.int64).reshape(-1, 3)
    ca, cb, val = arr[:, 0], arr[:, 1], arr[:, 2]
    key = np.minimum(u, v) * (n + 1) + np.maximum(u, v)
    ckey = np.minimum(ca, cb) * (n + 1) + np.maximum(ca, cb)
    sorter = np.argsort(key)
    at = np.minimum(np.searchsorted(key, ckey, sorter=sorter), m - 1)
    idx = sorter[at]
    unknown = (key[idx] != ckey) | (np.minimum(ca, cb) < 1) | (np.maximum(ca, cb) > n)
    if unknown.any():
        i = int(np.argmax(unknown))
        return None, f"edge {ca[i]}-{cb[i]} not in the instance"
    first = np.zeros(m, dtype=bool)
    _, where = np.unique(idx, return_index=True)
    first[where] = True
    if not first.all():
        i = int(np.argmax(~first))
        return None, f"edge {ca[i]}-{cb[i]} listed twice"
    if (val < 0).any():
        i = int(np.argmax(val < 0))
        return None, f"negative flow on {ca[i]}-{cb[i]}"
    fl = np.zeros(m, dtype=np.int64)
    fl[idx] = val
    over = np.nonzero(fl > cap)[0]
    if len(over):
        i = int(over[0])
        return None, f"flow {fl[i]} exceeds capacity {cap[i]} on {u[i]}-{v[i]}"
    return fl, ""


def _check_decomposition(inst: Instance, f: np.ndarray, is_term: np.ndarray, dec) -> tuple[bool, str]:
    n = inst.n
    u, v = inst.u, inst.v
    total = np.zeros(n + 1, dtype=np.int64)
    peak = np.zeros(n + 1, dtype=np.int64)
    np.add.at(total, u, f)
    np.add.at(total, v, f)
    np.maximum.at(peak, u, f)
    np.maximum.at(peak, v, f)
    bad = (~is_term) & ((total % 2 == 1) | (2 * peak > total))
    bad[0] = False
    if bad.any():
        w = int(np.nonzero(bad)[0][0])
        return False, f"flow at non-terminal {w} cannot be paired into paths"
    if dec is None:
        return True, ""
    entries = dec.entries if isinstance(dec, PathDecomposition) else dict(dec)
    for (s, t), units in entries.items():
        if s == t or not (1 <= s <= n and 1 <= t <= n) or not (is_term[s] and is_term[t]):
            return False, f"pair {s}-{t} is not a pair of distinct terminals"
        if units <= 0:
            return False, f"pair {s}-{t} has non-positive units"
    load = _path_loads(inst, entries)
    diff = np.nonzero(load != f)[0]
    if len(diff):
        i = int(diff[0])
        return False, f"paths put {load[i]} on {u[i]}-{v[i]}, flow says {f[i]}"
    return True, ""


def _path_loads(inst: Instance, entries: dict[tuple[int, int], int]) -> np.ndarray:
    """Per-edge load of the given pair units: binary-lifting LCA, then subtree sums."""
    n = inst.n
    u, v = inst.u, inst.v
    load = np.zeros(len(u), dtype=np.int64)
    if not entries or not len(u):
        return load
    graph = coo_matrix((np.ones(len(u), dtype=np.int8), (u, v)), shape=(n + 1, n + 1))
    order, pred = breadth_first_order(graph, 1, directed=False)
    par = np.where(pred < 0, 0, pred).astype(np.int64)
    par[1] = 1
    order_l, par_l = order.tolist(), par.tolist()
    depth_l = [0] * (n + 1)
    for x in order_l[1:]:
        depth_l[x] = depth_l[par_l[x]] + 1
    depth = np.array(depth_l, dtype=np.int64)

    pairs = np.array([(s, t, k) for (s, t), k in entries.items()], dtype=np.int64)
    a, b, units = pairs[:, 0].copy(), pairs[:, 1].copy(), pairs[:, 2]
    swap = depth[a] < depth[b]
    a[swap], b[swap] = b[swap], a[swap].copy()
    up = [par]
    for _ in range(1, max(1, int(depth.max()).bit_length())):
        up.append(up[-1][up[-1]])
    diff = depth[a] - depth[b]
    for j, anc in enumerate(up):
        sel = (diff >> j) & 1 == 1
        a[sel] = anc[a[sel]]
    for anc in reversed(up):
        ne = anc[a] != anc[b]
        a[ne] = anc[a[ne]]
        b[ne] = anc[b[ne]]
    lca = np.where(a == b, a, par[a])

    delta = np.zeros(n + 1, dtype=np.int64)
    np.add.at(delta, pairs[:, 0], units)
    np.add.at(delta, pairs[:, 1], units)
    np.add.at(delta, lca, -2 * units)
    sub = delta.tolist()
    for x in reversed(order_l[1:]):
        sub[par_l[x]] += sub[x]
    child = np.where(par[v] == u, v, u)
    return np.array(sub, dtype=np.int64)[child]


def _check_cuts(inst: Instance, cert: CutCertificate, is_term: np.ndarray) -> tuple[Optional[np.ndarray], str]:
    n = inst.n
    terms = inst.terminals
    if set(cert.cuts) != set(terms.tolist()):
        return None, "cut-system does not have exactly one set per terminal"
    keys = sorted(cert.cuts)
    sizes = np.array([len(cert.cuts[t]) for t in keys], dtype=np.int64)
    owner = np.repeat(np.array(keys, dtype=np.int64), sizes)
    verts = np.fromiter(chain.from_iterable(cert.cuts[t] for t in keys), dtype=np.int64, count=int(sizes.sum()))
    bad = (verts < 1) | (verts > n)
    if (sizes == 0).any() or bad.any():
        t = keys[int(np.argmax(sizes == 0))] if (sizes == 0).any() else int(owner[bad][0])
        return None, f"set of {t} is empty or out of range"
    hits = np.bincount(verts, minlength=n + 1)
    if (hits > 1).any():
        x = int(np.argmax(hits > 1))
        whose = owner[verts == x]
        t = int(whose[0])
        if (whose == t).all():
            return None, f"set of {t} repeats a vertex"
        return None, f"set of {t} overlaps another set"
    lab = np.zeros(n + 1, dtype=np.int64)
    lab[verts] = owner
    missing = lab[keys] != keys
    if missing.any():
        t = keys[int(np.argmax(missing))]
        return None, f"set of {t} does not contain {t}"
    term_count = np.bincount(lab[is_term], minlength=n + 1)
    crowded = term_count[keys] != 1
    if crowded.any():
        return None, f"set of {keys[int(np.argmax(crowded))]} contains another terminal"
    # a vertex set of a forest is connected iff it spans |X| - 1 edges
    lu, lv = lab[inst.u], lab[inst.v]
    inner = (lu == lv) & (lu > 0) & (inst.cap > 0)
    edges_in = np.bincount(lu[inner], minlength=n + 1)
    split = edges_in[keys] != sizes - 1
    if split.any():
        return None, f"set of {keys[int(np.argmax(split))]} is not connected"
    return lab, ""


# --------------------------------------------------------------------------
# text and JSON formats


def format_solution(
    solution,
    certificate: Optional[CutCertificate] = None,
    decomposition: Optional[PathDecomposition] = None,
) -> str:
    lines = [f"value {solution.value2}"]
    lines += [f"f {a} {b} {val}" for a, b, val in solution.edge_flows]
    if decomposition is not None:
        lines += [f"g {s} {t} {k}" for (s, t), k in sorted(decomposition.entries.items())]
    if certificate is not None:
        lines += ["X " + " ".join(map(str, (t,) + tuple(x for x in vs if x != t)))
                  for t, vs in sorted(certificate.cuts.items())]
        lines += ["W " + " ".join(map(str, vs)) for vs, _ in certificate.odd_sets]
        if certificate.gamma is not None:
            lines.append(f"gamma {certificate.gamma}")
        lines.append(f"kappa {certificate.kappa}")
    return "\n".join(lines) + "\n"


def solution_to_json(
    solution,
    certificate: Optional[CutCertificate] = None,
    decomposition: Optional[PathDecomposition] = None,
) -> str:
    doc: dict = {
        "value": solution.value2,
        "alpha": solution.value2 // 2,
        "edges": [[a, b, val] for a, b, val in solution.edge_flows],
    }
    if decomposition is not None:
        doc["pairs"] = [[s, t, k] for (s, t), k in sorted(decomposition.entries.items())]
    if certificate is not None:
        doc["cuts"] = {str(t): list(vs) for t, vs in sorted(certificate.cuts.items())}
        doc["odd_sets"] = [{"vertices": list(vs), "owner": o} for vs, o in certificate.odd_sets]
        doc["gamma"] = certificate.gamma
        doc["kappa"] = certificate.kappa
    return json.dumps(doc)


def parse_solution(text: str) -> ClaimedSolution:
    """Read a solution in the text format, or the JSON mirror if it starts with ``{``."""
    if text.lstrip().startswith("{"):
        return _parse_json(json.loads(text))
    value2 = None
    flows: list[tuple[int, int, int]] = []
    pairs: Optional[PathDecomposition] = None
    cuts: dict[int, tuple[int, ...]] = {}
    odd: list[tuple[tuple[int, ...], int]] = []
    gamma = kappa = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        try:
            nums = [int(x) for x in tok[1:]]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer field") from None
        kind = tok[0]
        if kind == "value" and len(nums) == 1:
            value2 = nums[0]
        elif kind == "f" and len(nums) == 3:
            flows.append((nums[0], nums[1], nums[2]))
        elif kind == "g" and len(nums) == 3:
            if pairs is None:
                pairs = PathDecomposition()
            pairs.add(*nums)
        elif kind == "X" and nums:
            if nums[0] in cuts:
                raise ValueError(f"line {lineno}: second set for terminal {nums[0]}")
            cuts[nums[0]] = tuple(nums)
        elif kind == "W" and nums:
            odd.append((tuple(nums), 0))
        elif kind == "gamma" and len(nums) == 1:
            gamma = nums[0]
        elif kind == "kappa" and len(nums) == 1:
            kappa = nums[0]
        else:
            raise ValueError(f"line {lineno}: malformed {kind!r} line")
    if value2 is None:
        raise ValueError("missing 'value' line")
    cert = None
    if cuts:
        cert = CutCertificate(cuts, odd, gamma, kappa if kappa is not None else len(odd))
    return ClaimedSolution(value2, flows, pairs, cert)


def _parse_json(doc: dict) -> ClaimedSolution:
    flows = [tuple(e) for e in doc["edges"]]
    pairs = None
    if "pairs" in doc:
        pairs = PathDecomposition()
        for s, t, k in doc["pairs"]:
            pairs.add(s, t, k)
    cert = None
    if "cuts" in doc:
        cert = CutCertificate(
            {int(t): tuple(vs) for t, vs in doc["cuts"].items()},
            [(tuple(w["vertices"]), w.get("owner", 0)) for w in doc.get("odd_sets", [])],
            doc["gamma"], doc["kappa"],
        )
    return ClaimedSolution(doc["value"], flows, pairs, cert)
