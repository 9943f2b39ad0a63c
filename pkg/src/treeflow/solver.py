"""Linear-time maximum integral multiterminal flow on trees.

Two passes over the canonical forest:

* bottom-up, every edge ``e`` gets the parity interval ``psi(e) = <a, b>`` of
  flow values that a blocking flow of the subtree below ``e`` can put on
  ``e``, together with the unclipped product ``<tilde_a, tilde_b>`` of its
  children and the "dominating" flag of each child;
* top-down, each edge receives a target value ``x(e)`` in ``psi(e)``, split
  over its two children.  When the children's minimum product exceeds
  ``c(e)`` the excess ``tilde_a - c(e)`` is taken off the dominating path
  lazily through ``sigma``, and the final flow is ``x(e) - sigma(e)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from treeflow.instance import (
    Instance,
    NormalizationMap,
    NormalizedInstance,
    RootedTree,
    normalize,
    project_flow_back,
)
from treeflow.interval import ParityInterval, otimes_bounds, split_bounds


class FlowInvariantError(AssertionError):
    """A bound or conservation check failed: an implementation bug, never bad input."""


@dataclass
class EdgeLabels:
    tilde_a: list[int]
    tilde_b: list[int]
    a: list[int]
    b: list[int]
    dominating: bytearray

    def psi(self, v: int) -> ParityInterval:
        return ParityInterval(self.a[v], self.b[v])


@dataclass
class FlowAssignment:
    x: list[int]
    sigma: list[int]
    f: list[int]

    def value2(self, tree: RootedTree) -> int:
        """Twice the flow value: root-edge flows plus every other terminal's edge."""
        f = self.f
        return sum(f[e] for e in tree.root_edges()) + sum(f[v] for v in tree.leaves())


def compute_labels(tree: RootedTree) -> EdgeLabels:
    size = tree.size
    parent, cap, left, right = tree.parent, tree.cap, tree.left, tree.right
    ta = [0] * size
    tb = [0] * size
    a = [0] * size
    b = [0] * size
    dom = bytearray(size)
    for v in range(size - 1, -1, -1):
        if parent[v] < 0:
            continue
        c = cap[v]
        w1 = left[v]
        if w1 < 0:
            a[v] = b[v] = c
            continue
        w2 = right[v]
        a1, b1, a2, b2 = a[w1], b[w1], a[w2], b[w2]
        lo, hi = otimes_bounds(a1, b1, a2, b2)
        ta[v] = lo
        tb[v] = hi
        if b2 + 2 <= a1:
            dom[w1] = 1
        elif b1 + 2 <= a2:
            dom[w2] = 1
        if hi <= c:
            a[v], b[v] = lo, hi
        elif lo <= c:
            a[v] = lo
            b[v] = c if (lo + c) % 2 == 0 else c - 1
        else:
            a[v] = b[v] = c
    return EdgeLabels(ta, tb, a, b, dom)


def run_block_flow(tree: RootedTree, labels: EdgeLabels) -> FlowAssignment:
    size = tree.size
    parent, cap, left, right = tree.parent, tree.cap, tree.left, tree.right
    ta, a, b, dom = labels.tilde_a, labels.a, labels.b, labels.dominating
    x = [0] * size
    sigma = [0] * size
    f = [0] * size
    for e in tree.root_edges():
        x[e] = b[e]
    for v in range(size):
        if parent[v] < 0:
            continue
        fv = x[v] - sigma[v]
        if fv < 0 or fv > cap[v]:
            raise FlowInvariantError(f"flow {fv} on edge {v} outside [0, {cap[v]}]")
        f[v] = fv
        w1 = left[v]
        if w1 < 0:
            continue
        w2 = right[v]
        if ta[v] <= cap[v]:
            x1, x2, _ = split_bounds(a[w1], b[w1], a[w2], b[w2], x[v])
            x[w1] = x1
            x[w2] = x2
            if dom[w1]:
                sigma[w1] = sigma[v]
            elif dom[w2]:
                sigma[w2] = sigma[v]
            elif sigma[v]:
                raise FlowInvariantError(f"pending decrement at {v} with no dominating child")
        else:
            if dom[w1]:
                wi, wj = w1, w2
            elif dom[w2]:
                wi, wj = w2, w1
            else:
                raise FlowInvariantError(f"edge {v} over capacity with no dominating child")
            x[wi] = a[wi]
            x[wj] = b[wj]
            sigma[wi] = sigma[v] + ta[v] - cap[v]
    check_conservation(tree, f)
    return FlowAssignment(x, sigma, f)


def check_conservation(tree: RootedTree, f: list[int]) -> None:
    """At each internal vertex the three incident flows must pair up integrally."""
    parent, left, right = tree.parent, tree.left, tree.right
    for v in range(tree.size):
        w1 = left[v]
        if w1 < 0 or parent[v] < 0:
            continue
        f0, f1, f2 = f[v], f[w1], f[right[v]]
        if (f0 + f1 + f2) & 1 or f0 > f1 + f2 or f1 > f0 + f2 or f2 > f0 + f1:
            raise FlowInvariantError(
                f"conservation fails at the lower end of edge {v}: {f0}, {f1}, {f2}"
            )


@dataclass
class Solution:
    instance: Instance
    flow: list[int]
    value2: int
    normalized: NormalizedInstance
    nmap: NormalizationMap
    labels: EdgeLabels
    assignment: FlowAssignment

    @property
    def forest(self) -> RootedTree:
        return self.normalized.forest

    @property
    def alpha(self) -> int:
        return self.value2 // 2

    @property
    def edge_flows(self) -> list[tuple[int, int, int]]:
        inst = self.instance
        return list(zip(inst.u.tolist(), inst.v.tolist(), self.flow))


def solve(inst: Instance) -> Solution:
    normalized, nmap = normalize(inst)
    forest = normalized.forest
    labels = compute_labels(forest)
    fa = run_block_flow(forest, labels)
    flow = project_flow_back(fa.f, forest, nmap)
    return Solution(inst, flow, fa.value2(forest), normalized, nmap, labels, fa)
