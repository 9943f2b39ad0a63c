"""Tree instances, the text format, and reduction to canonical rooted trees.

Canonical form: every leaf is a terminal and every terminal a leaf, every
internal vertex has degree 3, every capacity is at least 1.  Each
canonical component is rooted at a terminal leaf and its vertices are
numbered in BFS order inside one contiguous block, so ascending ids visit
edges parents-first and descending ids visit them bottom-up.  The edge
into vertex ``v`` is named by ``v`` itself.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence, TextIO, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

MAX_CAPACITY = 2**32 - 1


class InstanceError(ValueError):
    pass


class ParseError(InstanceError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _frozen(values, dtype=np.int64) -> np.ndarray:
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """Undirected capacitated tree on vertices ``1..n`` with a terminal set.

    Edges are kept as three parallel read-only int64 arrays so that
    instances with millions of vertices stay compact.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    cap: np.ndarray
    terminals: np.ndarray

    def __post_init__(self) -> None:
        n = self.n
        if n < 1:
            raise InstanceError("vertex count must be positive")
        m = len(self.u)
        if not (len(self.v) == len(self.cap) == m):
            raise InstanceError("edge arrays differ in length")
        if m != n - 1:
            raise InstanceError(f"edge count mismatch: expected {n - 1}, got {m}")
        if m:
            if min(self.u.min(), self.v.min()) < 1 or max(self.u.max(), self.v.max()) > n:
                raise InstanceError("edge endpoint out of range")
            if self.cap.min() < 0 or self.cap.max() > MAX_CAPACITY:
                raise InstanceError("capacity out of range")
            if np.any(self.u == self.v):
                raise InstanceError("self-loop")
            graph = coo_matrix(
                (np.ones(m, dtype=np.int8), (self.u - 1, self.v - 1)), shape=(n, n)
            )
            ncomp, _ = connected_components(graph, directed=False)
            if ncomp != 1:
                raise InstanceError("edge set is not a tree")
        t = self.terminals
        if len(t) and (t.min() < 1 or t.max() > n):
            raise InstanceError("terminal out of range")
        if len(np.unique(t)) != len(t):
            raise InstanceError("duplicate terminal")

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[Sequence[int]], terminals: Iterable[int]
    ) -> "Instance":
        edges = list(edges)
        arr = np.array(edges, dtype=np.int64).reshape(-1, 3)
        return cls(n, _frozen(arr[:, 0]), _frozen(arr[:, 1]), _frozen(arr[:, 2]),
                   _frozen(list(terminals)))

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return list(zip(self.u.tolist(), self.v.tolist(), self.cap.tolist()))

    @property
    def edge_count(self) -> int:
        return len(self.u)

    def terminal_set(self) -> frozenset[int]:
        return frozenset(self.terminals.tolist())

    def same_as(self, other: "Instance") -> bool:
        return (
            self.n == other.n
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.cap, other.cap)
            and np.array_equal(self.terminals, other.terminals)
        )

    def to_text(self) -> str:
        lines = [f"p tree {self.n} {len(self.terminals)}"]
        lines += [f"e {a} {b} {c}" for a, b, c in self.edges]
        lines += [f"t {t}" for t in self.terminals.tolist()]
        return "\n".join(lines) + "\n"


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", lineno) from None


def parse_instance(text: Union[str, TextIO, Iterable[str]]) -> Instance:
    """Parse the line format::

        p tree <n> <k>
        e <u> <v> <c>      (n - 1 lines)
        t <v>              (k lines)

    ``#`` starts a comment.  Cycles are reported at the edge closing them.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    n = k = None
    header_line = 0
    us: list[int] = []
    vs: list[int] = []
    cs: list[int] = []
    terms: list[int] = []
    seen_terms: set[int] = set()
    uf: list[int] = []

    def find(x: int) -> int:
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    lineno = 0
    for lineno, raw in enumerate(lines, 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        kind = tokens[0]
        if n is None:
            if kind != "p" or len(tokens) != 4 or tokens[1] != "tree":
                raise ParseError("expected header 'p tree <n> <k>'", lineno)
            n, k = _int(tokens[2], lineno), _int(tokens[3], lineno)
            if n < 1 or k < 0:
                raise ParseError("bad header counts", lineno)
            header_line = lineno
            uf = list(range(n + 1))
            continue
        if kind == "e":
            if len(tokens) != 4:
                raise ParseError("edge line needs 'e <u> <v> <c>'", lineno)
            a, b, c = (_int(tok, lineno) for tok in tokens[1:])
            if not (1 <= a <= n and 1 <= b <= n):
                raise ParseError("vertex id out of range", lineno)
            if c < 0:
                raise ParseError("negative capacity", lineno)
            if c > MAX_CAPACITY:
                raise ParseError("capacity exceeds 2^32-1", lineno)
            if len(us) == n - 1:
                raise ParseError("edge count mismatch: too many edges", lineno)
            ra, rb = find(a), find(b)
            if ra == rb:
                raise ParseError("edge set is not a tree (cycle or self-loop)", lineno)
            uf[ra] = rb
            us.append(a)
            vs.append(b)
            cs.append(c)
        elif kind == "t":
            if len(tokens) != 2:
                raise ParseError("terminal line needs 't <v>'", lineno)
            t = _int(tokens[1], lineno)
            if not 1 <= t <= n:
                raise ParseError("terminal id out of range", lineno)
            if t in seen_terms:
                raise ParseError(f"duplicate terminal {t}", lineno)
            if len(terms) == k:
                raise ParseError("terminal count mismatch: too many terminals", lineno)
            seen_terms.add(t)
            terms.append(t)
        elif kind == "p":
            raise ParseError("duplicate header", lineno)
        else:
            raise ParseError(f"unknown line type {kind!r}", lineno)
    if n is None:
        raise ParseError("missing header", lineno or None)
    if len(us) != n - 1:
        raise ParseError(
            f"edge count mismatch: expected {n - 1}, got {len(us)}", header_line
        )
    if len(terms) != k:
        raise ParseError(
            f"terminal count mismatch: expected {k}, got {len(terms)}", header_line
        )
    return Instance(n, _frozen(us), _frozen(vs), _frozen(cs), _frozen(terms))


def read_instance(path) -> Instance:
    with open(path) as fh:
        return parse_instance(fh)


# --------------------------------------------------------------------------
# Canonical form


@dataclass
class RootedTree:
    """Canonical components stored side by side as one rooted forest.

    Component ``i`` is the vertex block starting at ``roots[i]``, numbered
    in BFS order from that root.  A root is a terminal leaf whose only
    child is the next vertex.  ``left``/``right`` are the two children of an
    internal vertex (-1 for a leaf; a root has only ``left``) and
    ``parent`` is -1 at roots.  ``cap[v]`` is the capacity of the edge
    ``(parent[v], v)``.  ``node[v]`` and ``sedge[v]`` tie vertices and edges
    back to the reduction record (``sedge`` is -1 for synthetic edges
    created when a high-degree vertex is expanded).
    """

    parent: list[int]
    cap: list[int]
    left: list[int]
    right: list[int]
    node: list[int]
    sedge: list[int]
    label: list[int]  # original terminal id for leaves/roots, 0 otherwise
    roots: list[int] = field(default_factory=lambda: [0])

    @property
    def size(self) -> int:
        return len(self.parent)

    def is_leaf(self, v: int) -> bool:
        return self.left[v] < 0

    def leaves(self) -> list[int]:
        """Terminal vertices other than the roots."""
        left = self.left
        return [v for v in range(len(left)) if left[v] < 0]

    def terminals(self) -> list[int]:
        left, parent = self.left, self.parent
        return [v for v in range(len(left)) if left[v] < 0 or parent[v] < 0]

    def root_edges(self) -> list[int]:
        return [self.left[r] for r in self.roots]

    def children(self, v: int) -> tuple[int, ...]:
        a, b = self.left[v], self.right[v]
        return tuple(c for c in (a, b) if c >= 0)

    def depth(self) -> list[int]:
        depth = [0] * self.size
        parent = self.parent
        for v in range(self.size):
            p = parent[v]
            if p >= 0:
                depth[v] = depth[p] + 1
        return depth

    def block(self, i: int) -> range:
        end = self.roots[i + 1] if i + 1 < len(self.roots) else self.size
        return range(self.roots[i], end)

    def component(self, i: int) -> "RootedTree":
        """Component ``i`` as a stand-alone tree rooted at 0."""
        blk = self.block(i)
        lo, hi = blk.start, blk.stop

        def shift(xs: list[int]) -> list[int]:
            return [x - lo if x >= 0 else -1 for x in xs[lo:hi]]

        return RootedTree(
            shift(self.parent), self.cap[lo:hi], shift(self.left), shift(self.right),
            self.node[lo:hi], self.sedge[lo:hi], self.label[lo:hi], [0],
        )

    def to_instance(self) -> Instance:
        """A single component as an instance on ids ``1..size``."""
        if len(self.roots) != 1:
            raise ValueError("only a single component converts to an instance")
        edges = [(self.parent[v] + 1, v + 1, self.cap[v]) for v in range(1, self.size)]
        return Instance.from_edges(self.size, edges, [t + 1 for t in self.terminals()])


@dataclass
class NormalizationMap:
    """Everything needed to carry canonical results back to the input tree.

    Nodes ``1..n`` are the original vertices; every (terminal, incident
    positive edge) pair gets a fresh copy node ``> n`` so that terminals
    become leaves.  A super-edge is a maximal chain of original edges
    through degree-2 non-terminals; its capacity is the chain minimum.
    """

    n: int
    copy_of: list[int]  # copy node n+1+i -> original terminal
    edge_super: list[int]  # original edge -> super-edge, -1 if dropped
    super_a: list[int]
    super_b: list[int]
    super_cap: list[int]
    chain_super: list[int]  # vertex -> super-edge it is interior to, or -1
    chain_side: list[int]  # 0: follows super_a, 1: follows super_b
    prune_order: list[int]
    anchor: list[int]
    dropped: list[int] = field(default_factory=list)

    def origin(self, node: int) -> int:
        """Original vertex a node stands for."""
        return node if node <= self.n else self.copy_of[node - self.n - 1]

    def edge_origin(self, tree: RootedTree, v: int) -> list[int]:
        """Original edges behind canonical edge ``v`` (empty if synthetic)."""
        s = tree.sedge[v]
        if s < 0:
            return []
        return [e for e, t in enumerate(self.edge_super) if t == s]


@dataclass
class NormalizedInstance:
    forest: RootedTree

    @cached_property
    def components(self) -> list[RootedTree]:
        return [self.forest.component(i) for i in range(len(self.forest.roots))]

    def __iter__(self) -> Iterator[RootedTree]:
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.forest.roots)


def _csr(ends: np.ndarray, ids: np.ndarray, count: int) -> tuple[list[int], list[int]]:
    order = np.argsort(ends, kind="stable")
    off = np.zeros(count + 1, dtype=np.int64)
    np.cumsum(np.bincount(ends, minlength=count), out=off[1:])
    return ids[order].tolist(), off.tolist()


def normalize(inst: Instance) -> tuple[NormalizedInstance, NormalizationMap]:
    """Reduce ``inst`` to canonical rooted trees.

    Order: drop zero-capacity edges; split terminals into one leaf copy per
    incident edge; prune non-terminal leaves; contract degree-2
    non-terminals into min-capacity super-edges; expand degree >= 4
    non-terminals into a chain of degree-3 vertices (internal capacity =
    sum of incident capacities, which never binds); root each component at
    the copy of its lowest-numbered terminal.
    """
    n = inst.n
    u, v, c = inst.u, inst.v, inst.cap
    m = len(u)
    is_term = np.zeros(n + 1, dtype=bool)
    is_term[inst.terminals] = True

    # rewire terminal endpoints of positive edges to fresh copies, in edge order
    pos = c > 0
    need_a = is_term[u] & pos
    need_b = is_term[v] & pos
    before = np.cumsum(need_a.astype(np.int64) + need_b) - need_a - need_b
    id_a = n + 1 + before
    id_b = id_a + need_a
    total = n + 1 + int(need_a.sum() + need_b.sum())
    copy_np = np.zeros(total - n - 1, dtype=np.int64)
    copy_np[before[need_a]] = u[need_a]
    copy_np[(before + need_a)[need_b]] = v[need_b]
    ea_np = np.where(need_a, id_a, u)
    eb_np = np.where(need_b, id_b, v)
    ea_np[~pos] = -1
    eb_np[~pos] = -1
    copy_of = copy_np.tolist()
    live = np.nonzero(pos)[0]
    ends = np.concatenate([ea_np[live], eb_np[live]])
    adj, off = _csr(ends, np.concatenate([live, live]), total)
    ea, eb, cs = ea_np.tolist(), eb_np.tolist(), c.tolist()
    dropped: list[int] = np.nonzero(~pos)[0].tolist()

    # prune non-terminal leaves
    alive_edge = bytearray(pos.tobytes())
    deg = np.diff(off).tolist()
    anchor = [-1] * (n + 1)
    prune_order: list[int] = []
    stack = (np.nonzero(~is_term[1:] & (np.diff(off[: n + 2]) <= 1)[1:])[0] + 1).tolist()
    while stack:
        x = stack.pop()
        prune_order.append(x)
        for k in range(off[x], off[x + 1]):
            e = adj[k]
            if alive_edge[e]:
                alive_edge[e] = 0
                dropped.append(e)
                y = eb[e] if ea[e] == x else ea[e]
                anchor[x] = y
                deg[y] -= 1
                if deg[y] == 1 and y <= n:
                    stack.append(y)
        deg[x] = 0

    # contract chains through degree-2 non-terminals.  Edges with no interior
    # endpoint are their own super-edge; only real chains are walked.  A
    # super-edge is numbered by the adjacency slot of its first edge at its
    # lower-numbered end, which fixes child order downstream.
    deg_np = np.array(deg, dtype=np.int64)
    inner_np = np.zeros(total, dtype=bool)
    inner_np[: n + 1] = deg_np[: n + 1] == 2
    inner = bytearray(inner_np.tobytes())
    slot = np.empty(2 * len(live), dtype=np.int64)
    slot[np.argsort(ends, kind="stable")] = np.arange(2 * len(live))
    slot_a = np.full(m, -1, dtype=np.int64)
    slot_b = np.full(m, -1, dtype=np.int64)
    slot_a[live] = slot[: len(live)]
    slot_b[live] = slot[len(live):]

    alive_np = np.frombuffer(bytes(alive_edge), dtype=np.uint8).astype(bool)
    direct = np.nonzero(alive_np & ~inner_np[ea_np] & ~inner_np[eb_np])[0]
    da, db = ea_np[direct], eb_np[direct]
    lo_first = da < db
    keys = [np.where(lo_first, slot_a[direct], slot_b[direct])]
    s_a = [np.minimum(da, db)]
    s_b = [np.maximum(da, db)]
    s_cap = [c[direct]]

    chain_super = [-1] * (n + 1)
    c_key: list[int] = []
    c_a: list[int] = []
    c_b: list[int] = []
    c_cap: list[int] = []
    flat_edges: list[int] = []
    flat_edge_chain: list[int] = []
    flat_inner: list[int] = []
    flat_inner_chain: list[int] = []
    flat_side: list[int] = []

    def walk(y: int, e: int) -> tuple[list[int], list[int], int]:
        es, vs = [e], []
        y = eb[e] if ea[e] == y else ea[e]
        while inner[y]:
            vs.append(y)
            for k in range(off[y], off[y + 1]):
                e2 = adj[k]
                if e2 != e and alive_edge[e2]:
                    break
            e = e2
            es.append(e)
            y = eb[e] if ea[e] == y else ea[e]
        return es, vs, y

    for z in np.nonzero(inner_np)[0].tolist():
        if chain_super[z] >= 0:
            continue
        e1, e2 = [adj[k] for k in range(off[z], off[z + 1]) if alive_edge[adj[k]]]
        es1, vs1, x = walk(z, e1)
        es2, vs2, y = walk(z, e2)
        es1.reverse()
        vs1.reverse()
        es, vs = es1 + es2, vs1 + [z] + vs2
        if y < x:
            x, y = y, x
            es.reverse()
            vs.reverse()
        i = len(c_key)
        for w in vs:
            chain_super[w] = i
        caps = [cs[e] for e in es]
        best = min(caps)
        best_at = caps.index(best)
        c_key.append(int(slot_a[es[0]] if ea[es[0]] == x else slot_b[es[0]]))
        c_a.append(x)
        c_b.append(y)
        c_cap.append(best)
        flat_edges += es
        flat_edge_chain += [i] * len(es)
        flat_inner += vs
        flat_inner_chain += [i] * len(vs)
        flat_side += [0 if j < best_at else 1 for j in range(len(vs))]

    key_np = np.concatenate(keys + [np.array(c_key, dtype=np.int64)])
    order = np.argsort(key_np, kind="stable")
    rank = np.empty(len(order), dtype=np.int64)
    rank[order] = np.arange(len(order))
    super_a = np.concatenate(s_a + [np.array(c_a, dtype=np.int64)])[order].tolist()
    super_b = np.concatenate(s_b + [np.array(c_b, dtype=np.int64)])[order].tolist()
    super_cap = np.concatenate(s_cap + [np.array(c_cap, dtype=np.int64)])[order].tolist()
    nd = len(direct)
    es_np = np.full(m, -1, dtype=np.int64)
    es_np[direct] = rank[:nd]
    es_np[np.array(flat_edges, dtype=np.int64)] = rank[nd + np.array(flat_edge_chain, dtype=np.int64)]
    edge_super = es_np.tolist()
    cs_np = np.full(n + 1, -1, dtype=np.int64)
    side_np = np.full(n + 1, -1, dtype=np.int64)
    inner_ids = np.array(flat_inner, dtype=np.int64)
    cs_np[inner_ids] = rank[nd + np.array(flat_inner_chain, dtype=np.int64)]
    side_np[inner_ids] = flat_side
    chain_super = cs_np.tolist()
    chain_side = side_np.tolist()

    nmap = NormalizationMap(
        n=n, copy_of=copy_of, edge_super=edge_super, super_a=super_a,
        super_b=super_b, super_cap=super_cap, chain_super=chain_super,
        chain_side=chain_side, prune_order=prune_order, anchor=anchor,
        dropped=sorted(dropped),
    )
    return NormalizedInstance(_build_forest(nmap, total)), nmap


def _build_forest(nmap: NormalizationMap, total: int) -> RootedTree:
    n = nmap.n
    super_a, super_b, super_cap = nmap.super_a, nmap.super_b, nmap.super_cap
    count = len(super_a)
    ends = np.concatenate([np.array(super_a, dtype=np.int64), np.array(super_b, dtype=np.int64)])
    sadj, soff = _csr(ends, np.tile(np.arange(count, dtype=np.int64), 2), total)

    # a canonical tree on k leaf copies has at most 2k - 2 vertices
    size = 2 * (total - n - 1)
    parent = [-1] * size
    cap = [0] * size
    left = [-1] * size
    right = [-1] * size
    node = [0] * size
    sedge = [-1] * size
    roots: list[int] = []
    seen = bytearray(total)
    cnt = 0
    # pending vertices in creation order: (parent, slot, vertex, super-edge,
    # outgoing super-edges, start offset, expansion cap); super-edge -1 marks
    # an expansion vertex standing for out[start:]
    queue: deque = deque()
    pop, push = queue.popleft, queue.append

    # visiting copies by label makes the first unseen copy of each
    # component its lowest-labelled one; copies cut off by pruning are skipped
    by_label = np.argsort(np.array(nmap.copy_of, dtype=np.int64), kind="stable") + n + 1
    for r in by_label.tolist():
        if seen[r] or soff[r] == soff[r + 1]:
            continue
        seen[r] = 1
        node[cnt] = r
        roots.append(cnt)
        s = sadj[soff[r]]
        push((cnt, left, super_b[s] if super_a[s] == r else super_a[s], s, None, 0, 0))
        cnt += 1
        while queue:
            p, slot, y, s, out, start, big = pop()
            v = cnt
            cnt += 1
            parent[v] = p
            slot[p] = v
            node[v] = y
            if s >= 0:
                sedge[v] = s
                cap[v] = super_cap[s]
                seen[y] = 1
                lo, hi = soff[y], soff[y + 1]
                if hi - lo < 2:
                    continue
                out = [t for t in sadj[lo:hi] if t != s]
            else:
                cap[v] = big
            t = out[start]
            push((v, left, super_b[t] if super_a[t] == y else super_a[t], t, None, 0, 0))
            if len(out) - start == 2:
                t = out[start + 1]
                push((v, right, super_b[t] if super_a[t] == y else super_a[t], t, None, 0, 0))
            else:
                if not big:
                    big = sum(super_cap[t] for t in sadj[soff[y]:soff[y + 1]])
                push((v, right, y, -1, out, start + 1, big))
    for a in (parent, cap, left, right, node, sedge):
        del a[cnt:]
    nodes = np.array(node, dtype=np.int64)
    copies = np.array(nmap.copy_of + [0], dtype=np.int64)
    label = np.where(nodes > n, copies[np.where(nodes > n, nodes - n - 1, -1)], 0).tolist()
    return RootedTree(parent, cap, left, right, node, sedge, label, roots)


def project_flow_back(f: Sequence[int], forest: RootedTree, nmap: NormalizationMap) -> list[int]:
    """Map a canonical flow onto the original edge list.

    Every edge of a contracted chain carries the merged edge's flow,
    synthetic expansion edges are discarded and dropped edges carry 0.
    """
    if len(f) != forest.size:
        raise ValueError("flow length does not match the forest")
    sedge = np.array(forest.sedge, dtype=np.int64)
    fa = np.array(f, dtype=np.int64)
    mask = sedge >= 0
    # one spare zero at the end, picked up by the -1 of dropped edges
    f_super = np.zeros(len(nmap.super_a) + 1, dtype=np.int64)
    f_super[sedge[mask]] = fa[mask]
    return f_super[np.array(nmap.edge_super, dtype=np.int64)].tolist()
