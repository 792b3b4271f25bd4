"""Single-linkage agglomerative clustering and dendrogram leaf ordering.

Leaves are numbered 0..N-1 in input order; internal nodes get ids
N..2N-2 in merge order. Ties between equally distant cluster pairs are
broken lexicographically by (smaller member's minimal leaf index, larger
member's minimal leaf index), and the left child of every merge is the
member with the smaller minimal leaf index, so the tree - and therefore
every downstream weight - is reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .estimation import CorrelationMatrix, CovarianceEstimate, DistanceMatrix

Merge = tuple[int, int, float, int]  # (left, right, distance, new_id)


@dataclass(frozen=True)
class LinkageTree:
    n_leaves: int
    merges: tuple[Merge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "merges",
            tuple((int(l), int(r), float(d), int(i)) for l, r, d, i in self.merges),
        )
        n = self.n_leaves
        if n < 2:
            raise ValueError("linkage tree needs at least 2 leaves")
        if len(self.merges) != n - 1:
            raise ValueError(f"expected {n - 1} merges, got {len(self.merges)}")
        seen_children: set[int] = set()
        prev = 0.0
        for k, (left, right, dist, new_id) in enumerate(self.merges):
            if new_id != n + k:
                raise ValueError(f"merge {k}: new node id must be {n + k}, got {new_id}")
            for child in (left, right):
                if not 0 <= child < new_id:
                    raise ValueError(f"merge {k}: invalid child id {child}")
                if child in seen_children:
                    raise ValueError(f"merge {k}: node {child} used as child twice")
                seen_children.add(child)
            if left == right:
                raise ValueError(f"merge {k}: children must differ")
            if dist < 0:
                raise ValueError(f"merge {k}: negative merge distance")
            if dist < prev:
                raise ValueError(f"merge {k}: merge distances must be non-decreasing")
            prev = dist
        if len(seen_children) != 2 * n - 2:
            raise ValueError("every non-root node must appear exactly once as a child")

    @property
    def root(self) -> int:
        return 2 * self.n_leaves - 2


@dataclass(frozen=True)
class Seriation:
    """Dendrogram leaf order, left to right."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(int(i) for i in self.order))
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("seriation must be a permutation of 0..N-1")


def single_linkage(dist: DistanceMatrix) -> LinkageTree:
    """Agglomerate by minimum pairwise distance: D(A+B, C) = min(D(A,C), D(B,C))."""
    n = len(dist.assets)
    if n < 2:
        raise ValueError("single_linkage: at least 2 assets required")
    size = 2 * n - 1
    d = np.full((size, size), np.inf)
    d[:n, :n] = dist.matrix
    np.fill_diagonal(d, np.inf)
    min_leaf = np.arange(size)
    alive = np.zeros(size, dtype=bool)
    alive[:n] = True

    merges: list[Merge] = []
    for step in range(n - 1):
        ids = np.flatnonzero(alive)
        sub = d[np.ix_(ids, ids)]
        dmin = sub.min()
        best_key: tuple[int, int] | None = None
        best_pair = (0, 0)
        for a, b in zip(*np.nonzero(sub == dmin)):
            if a >= b:
                continue
            na, nb = int(ids[a]), int(ids[b])
            la, lb = int(min_leaf[na]), int(min_leaf[nb])
            key = (min(la, lb), max(la, lb))
            if best_key is None or key < best_key:
                best_key, best_pair = key, (na, nb)
        na, nb = best_pair
        if min_leaf[na] > min_leaf[nb]:
            na, nb = nb, na
        new = n + step
        merges.append((na, nb, float(dmin), new))

        others = ids[(ids != na) & (ids != nb)]
        if others.size:
            merged = np.minimum(d[na, others], d[nb, others])
            d[new, others] = merged
            d[others, new] = merged
        min_leaf[new] = min(min_leaf[na], min_leaf[nb])
        alive[na] = alive[nb] = False
        alive[new] = True
    return LinkageTree(n_leaves=n, merges=tuple(merges))


def quasi_diagonalize(tree: LinkageTree) -> Seriation:
    """Depth-first leaf order of the dendrogram (left child first)."""
    children = {new_id: (left, right) for left, right, _, new_id in tree.merges}
    order: list[int] = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        if node < tree.n_leaves:
            order.append(node)
        else:
            left, right = children[node]
            stack.append(right)
            stack.append(left)
    return Seriation(order=tuple(order))


def leaf_sets(tree: LinkageTree) -> list[frozenset[int]]:
    """Leaf membership of each internal node, in merge order."""
    members: dict[int, frozenset[int]] = {i: frozenset([i]) for i in range(tree.n_leaves)}
    out: list[frozenset[int]] = []
    for left, right, _, new_id in tree.merges:
        members[new_id] = members[left] | members[right]
        out.append(members[new_id])
    return out


_MatrixT = CovarianceEstimate | CorrelationMatrix | DistanceMatrix


def reorder(matrix: _MatrixT, s: Seriation) -> _MatrixT:
    """Apply the seriation to rows, columns and asset labels simultaneously."""
    if len(s.order) != len(matrix.assets):
        raise ValueError(
            f"seriation length {len(s.order)} does not match matrix dimension {len(matrix.assets)}"
        )
    perm = np.array(s.order)
    assets = tuple(matrix.assets[i] for i in s.order)
    values = matrix.matrix[np.ix_(perm, perm)]
    if isinstance(matrix, CovarianceEstimate):
        return CovarianceEstimate(assets=assets, matrix=values, lookback_months=matrix.lookback_months)
    if isinstance(matrix, CorrelationMatrix):
        return CorrelationMatrix(assets=assets, matrix=values)
    if isinstance(matrix, DistanceMatrix):
        return DistanceMatrix(assets=assets, matrix=values)
    raise TypeError(f"cannot reorder {type(matrix).__name__}")


def tree_to_json(tree: LinkageTree, labels: tuple[str, ...] | list[str]) -> str:
    """Export as ``{n_leaves, labels, merges: [[left, right, distance], ...]}``."""
    if len(labels) != tree.n_leaves:
        raise ValueError("labels length must equal n_leaves")
    doc = {
        "n_leaves": tree.n_leaves,
        "labels": list(labels),
        "merges": [[left, right, dist] for left, right, dist, _ in tree.merges],
    }
    return json.dumps(doc, indent=2)
