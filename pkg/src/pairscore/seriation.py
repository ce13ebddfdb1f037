"""Variable and pair orderings for the matrix and linear displays."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.cluster.hierarchy import linkage
from scipy.spatial.distance import squareform

from .table import PairwiseTable, pair_stats

MODES = ("max_abs", "max_diff")
ORDER_NAMES = {"seriate_max_abs": "max_abs", "seriate_max_diff": "max_diff"}
EXACT_LIMIT = 12


def order_mode(name: str) -> str:
    """Accept either an order name (``seriate_max_diff``) or a bare mode."""
    if name in ORDER_NAMES:
        return ORDER_NAMES[name]
    if name in MODES:
        return name
    raise ValueError(f"unknown order {name!r}; expected one of {sorted(ORDER_NAMES)}")


def pair_summary(t: PairwiseTable, mode: str = "max_abs") -> dict[tuple[str, str], float]:
    """One number per pair: max |value| or max - min over its non-missing rows."""
    mode = order_mode(mode)
    out = {}
    for pair, rows in t.by_pair().items():
        st = pair_stats(rows)
        if st is None:
            out[pair] = 0.0
        else:
            out[pair] = st[0] if mode == "max_abs" else st[1]
    return out


@dataclass(frozen=True)
class Dendrogram:
    """Binary merge tree. Leaves are ints indexing ``labels``."""

    labels: tuple
    left: object = None
    right: object = None
    height: float = 0.0
    leaf: int | None = None

    def leaves(self) -> list[int]:
        if self.leaf is not None:
            return [self.leaf]
        return self.left.leaves() + self.right.leaves()


def dissimilarity(t: PairwiseTable, mode: str, variables: Sequence[str]) -> np.ndarray:
    """d(u, v) = 1 - s(u, v) / max s; unscored pairs sit at distance 1."""
    summ = pair_summary(t, mode)
    top = max(summ.values(), default=0.0)
    k = len(variables)
    d = np.ones((k, k))
    np.fill_diagonal(d, 0.0)
    if top > 0:
        pos = {v: i for i, v in enumerate(variables)}
        for (x, y), s in summ.items():
            i, j = pos[x], pos[y]
            d[i, j] = d[j, i] = 1.0 - s / top
    return d


def lazy_path_length(order: Sequence[int], d: np.ndarray) -> float:
    """sum_{i=1}^{k-1} (k - i) d(o_i, o_{i+1}); early steps weigh most."""
    k = len(order)
    return float(sum((k - 1 - i) * d[order[i], order[i + 1]] for i in range(k - 1)))


def build_dendrogram(d: np.ndarray, labels: Sequence[str], method: str = "average") -> Dendrogram:
    k = len(labels)
    nodes = [Dendrogram(tuple(labels), leaf=i) for i in range(k)]
    if k < 2:
        return nodes[0]
    z = linkage(squareform(d, checks=False), method=method)
    for a, b, h, _ in z:
        nodes.append(Dendrogram(tuple(labels), nodes[int(a)], nodes[int(b)], float(h)))
    return nodes[-1]


def consistent_orders(node: Dendrogram) -> list[tuple[int, ...]]:
    """Every leaf order reachable by swapping children at internal nodes."""
    if node.leaf is not None:
        return [(node.leaf,)]
    out = []
    for lo in consistent_orders(node.left):
        for ro in consistent_orders(node.right):
            out.append(lo + ro)
            out.append(ro + lo)
    return out


def _pick(cands, d, labels):
    # smallest LPL, then lexicographic by names so ties resolve the same way every run
    return min(cands, key=lambda o: (round(lazy_path_length(o, d), 12), [labels[i] for i in o]))


def _greedy(node: Dendrogram, d, labels) -> tuple[int, ...]:
    if node.leaf is not None:
        return (node.leaf,)
    lo = _greedy(node.left, d, labels)
    ro = _greedy(node.right, d, labels)
    cands = []
    for a in (lo, lo[::-1]):
        for b in (ro, ro[::-1]):
            cands += [a + b, b + a]
    return _pick(cands, d, labels)


def seriate_variables(t: PairwiseTable, mode: str = "max_abs",
                      method: str = "average") -> list[str]:
    """Order variables so strongly related ones sit together, strongest first."""
    labels = sorted(t.variables())
    if len(labels) <= 1:
        return labels
    d = dissimilarity(t, mode, labels)
    root = build_dendrogram(d, labels, method)
    if len(labels) <= EXACT_LIMIT:
        best = _pick(consistent_orders(root), d, labels)
    else:
        best = _greedy(root, d, labels)
    return [labels[i] for i in best]


def order_pairs_linear(t: PairwiseTable, mode: str = "max_abs") -> list[tuple[str, str]]:
    summ = pair_summary(t, mode)
    return sorted(summ, key=lambda p: (-summ[p], p))

