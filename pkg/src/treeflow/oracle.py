"""Exhaustive ground truth and a reproducible random instance generator.

The oracle knows nothing about the dynamic program: it maximises the sum
of integral path values over all terminal pairs directly, by depth-first
enumeration with capacity pruning and a terminal-degree upper bound.

The generator draws from SplitMix64 (Steele, Lea & Flood 2014) used as a
counter-based stream: draw ``i`` (0-based) of seed ``s`` is
``mix(s + (i + 1) * 0x9E3779B97F4A7C15 mod 2**64)``.  A uniform integer
below ``m`` is ``floor(u * m)`` with ``u = (z >> 11) * 2**-53``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from treeflow.instance import Instance, _frozen

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)

DEFAULT_BUDGET = 20_000_000


class OracleTooLarge(RuntimeError):
    pass


def splitmix64(seed: int, start: int, count: int) -> np.ndarray:
    """Draws ``start .. start + count - 1`` of the SplitMix64 stream for ``seed``."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed % 2**64) + idx * _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _uniform_below(draws: np.ndarray, bound: Union[int, np.ndarray]) -> np.ndarray:
    u = (draws >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return np.floor(u * bound).astype(np.int64)


@dataclass(frozen=True)
class GenParams:
    n: int
    terminal_fraction: Union[float, Fraction] = 0.5
    max_cap: int = 4
    seed: int = 0
    terminals: Optional[int] = None  # exact count; overrides the fraction

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.max_cap < 0:
            raise ValueError("max_cap must be nonnegative")
        if not 0 < self.terminal_fraction <= 1:
            raise ValueError("terminal_fraction must lie in (0, 1]")

    def terminal_count(self) -> int:
        k = self.terminals if self.terminals is not None else round(self.terminal_fraction * self.n)
        return max(2, min(self.n, int(k)))


def random_instance(params: GenParams) -> Instance:
    """Uniform random recursive tree with uniform capacities in ``[0, max_cap]``.

    Stream layout for ``n`` vertices: draws ``0 .. n-2`` pick the parent of
    vertex ``2 .. n`` among the lower ids, draws ``n-1 .. 2n-3`` the edge
    capacities, draws ``2n-2 .. 3n-3`` sort keys for vertices ``1 .. n``;
    the ``k`` smallest keys (ties to the lower id) become terminals.
    """
    n, seed = params.n, params.seed
    m = n - 1
    child = np.arange(2, n + 1, dtype=np.int64)
    parent = _uniform_below(splitmix64(seed, 0, m), child - 1) + 1
    caps = _uniform_below(splitmix64(seed, m, m), params.max_cap + 1)
    keys = splitmix64(seed, 2 * m, n)
    order = np.argsort(keys, kind="stable")
    terms = np.sort(order[: params.terminal_count()] + 1)
    return Instance(n, _frozen(parent), _frozen(child), _frozen(caps), _frozen(terms))


def random_path_instance(n: int, max_cap: int, seed: int) -> Instance:
    """Path ``1 - 2 - ... - n`` with capacities in ``[0, max_cap]``, endpoints as terminals."""
    caps = _uniform_below(splitmix64(seed, 0, n - 1), max_cap + 1)
    u = np.arange(1, n, dtype=np.int64)
    return Instance(n, _frozen(u), _frozen(u + 1), _frozen(caps), _frozen([1, n]))


def brute_force_value(
    inst: Instance, budget: int = DEFAULT_BUDGET
) -> tuple[int, dict[tuple[int, int], int]]:
    """Exact maximum ``alpha`` and one optimal assignment ``g`` of units to pairs.

    Raises :class:`OracleTooLarge` once the search visits more than
    ``budget`` nodes.
    """
    n = inst.n
    edges = inst.edges
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n + 1)]
    for i, (a, b, _) in enumerate(edges):
        adj[a].append((b, i))
        adj[b].append((a, i))
    par = [0] * (n + 1)
    par_edge = [-1] * (n + 1)
    depth = [0] * (n + 1)
    stack = [1]
    seen = [False] * (n + 1)
    seen[1] = True
    while stack:
        x = stack.pop()
        for y, i in adj[x]:
            if not seen[y]:
                seen[y] = True
                par[y], par_edge[y], depth[y] = x, i, depth[x] + 1
                stack.append(y)

    def path(s: int, t: int) -> list[int]:
        out = []
        while s != t:
            if depth[s] < depth[t]:
                s, t = t, s
            out.append(par_edge[s])
            s = par[s]
        return out

    res = [c for _, _, c in edges]
    terms = sorted(inst.terminals.tolist())
    pairs = []
    for i, s in enumerate(terms):
        for t in terms[i + 1:]:
            p = path(s, t)
            if min(res[e] for e in p) > 0:
                pairs.append((s, t, p))
    # long paths first: they are the most constrained
    pairs.sort(key=lambda st: -len(st[2]))
    count = len(pairs)
    incident = {t: [i for _, i in adj[t]] for t in terms}
    pair_terms = [(s, t) for s, t, _ in pairs]
    paths = [p for _, _, p in pairs]

    best = [0]
    best_g = [0] * count
    g = [0] * count
    nodes = [0]

    def upper(i: int) -> int:
        per_term = dict.fromkeys(terms, 0)
        total = 0
        for j in range(i, count):
            bn = min(res[e] for e in paths[j])
            total += bn
            s, t = pair_terms[j]
            per_term[s] += bn
            per_term[t] += bn
        cap_sum = 0
        for t, want in per_term.items():
            if want:
                cap_sum += min(want, sum(res[e] for e in incident[t]))
        return min(total, cap_sum // 2)

    def rec(i: int, acc: int) -> None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise OracleTooLarge(f"search exceeded {budget} nodes")
        if i == count:
            if acc > best[0]:
                best[0] = acc
                best_g[:] = g
            return
        if acc + upper(i) <= best[0]:
            return
        p = paths[i]
        bn = min(res[e] for e in p)
        lowest = bn if i == count - 1 else 0
        for val in range(bn, lowest - 1, -1):
            for e in p:
                res[e] -= val
            g[i] = val
            rec(i + 1, acc + val)
            for e in p:
                res[e] += val
        g[i] = 0

    rec(0, 0)
    witness = {pair_terms[j]: best_g[j] for j in range(count) if best_g[j]}
    return best[0], witness
