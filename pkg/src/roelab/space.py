"""Finite metric spaces: graph metrics, coarse disjoint unions, growth profiles.

Points are 0-based contiguous integers; labels are cosmetic. Distances are
stored dense (double precision) so non-graph metrics are admissible.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.csgraph import shortest_path


@dataclass(frozen=True)
class FiniteSpace:
    """A finite discrete metric space with a full distance matrix."""

    dist: np.ndarray
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
            raise ValueError("dist must be a nonempty square matrix")
        if not np.all(np.isfinite(d)):
            raise ValueError("dist must be finite everywhere")
        if not np.array_equal(d, d.T):
            raise ValueError("dist must be symmetric")
        if np.any(np.diag(d) != 0.0):
            raise ValueError("dist must have zero diagonal")
        n = d.shape[0]
        off = d[~np.eye(n, dtype=bool)]
        if off.size and np.min(off) <= 0.0:
            raise ValueError("distinct points must be at positive distance")
        tol = 1e-9 * (1.0 + float(d.max(initial=0.0)))
        # d[i,j] <= d[i,k] + d[k,j] for all triples
        if np.any(d[:, None, :] > d[:, :, None] + d[None, :, :] + tol):
            raise ValueError("triangle inequality violated")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels length must equal n_points")
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)

    @property
    def n_points(self) -> int:
        return self.dist.shape[0]

    @property
    def diameter(self) -> float:
        return float(self.dist.max())

    def distance_set(self) -> np.ndarray:
        """Sorted distinct values occurring in the distance matrix (incl. 0)."""
        return np.unique(self.dist)


def from_edge_list(edges: Sequence[Tuple[int, int]], n_points: int) -> FiniteSpace:
    """Shortest-path hop-count metric of a connected simple graph."""
    if n_points < 1:
        raise ValueError("n_points must be positive")
    adj = np.zeros((n_points, n_points), dtype=np.float64)
    for u, v in edges:
        if not (0 <= u < n_points and 0 <= v < n_points):
            raise ValueError(f"edge ({u},{v}) out of range")
        if u == v:
            raise ValueError(f"self-loop at point {u}")
        adj[u, v] = adj[v, u] = 1.0
    dist = shortest_path(adj, method="D", unweighted=True, directed=False)
    if not np.all(np.isfinite(dist)):
        raise ValueError("graph is disconnected; a finite metric must be total")
    return FiniteSpace(dist)


def coarse_union(blocks: Sequence[FiniteSpace]) -> FiniteSpace:
    """Coarse disjoint union: intra-block distances kept, blocks pushed apart.

    Block k+1 (1-based) is placed at offset
    c_{k+1} = c_k + diam(X_k) + diam(X_{k+1}) + (k + 1), with c_1 = 0; the
    distance between points of distinct blocks is the offset gap. The gaps
    dominate the block diameters, which keeps the triangle inequality safe.
    """
    if not blocks:
        raise ValueError("coarse_union requires at least one block")
    if len(blocks) == 1:
        return blocks[0]
    offsets = [0.0]
    for k in range(1, len(blocks)):
        offsets.append(
            offsets[-1] + blocks[k - 1].diameter + blocks[k].diameter + (k + 1)
        )
    sizes = [b.n_points for b in blocks]
    n = sum(sizes)
    dist = np.zeros((n, n), dtype=np.float64)
    starts = np.concatenate([[0], np.cumsum(sizes)])
    for i, bi in enumerate(blocks):
        si = starts[i]
        dist[si : si + sizes[i], si : si + sizes[i]] = bi.dist
        for j in range(i + 1, len(blocks)):
            sj = starts[j]
            gap = abs(offsets[j] - offsets[i])
            dist[si : si + sizes[i], sj : sj + sizes[j]] = gap
            dist[sj : sj + sizes[j], si : si + sizes[i]] = gap
    return FiniteSpace(dist)


def growth_profile(s: FiniteSpace, r: float) -> int:
    """beta(r): largest number of points in any closed ball of radius r."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    tol = 1e-12 * (1.0 + abs(r))
    return int(np.max(np.sum(s.dist <= r + tol, axis=1)))


def path_graph(n: int) -> FiniteSpace:
    return from_edge_list([(i, i + 1) for i in range(n - 1)], n)


def cycle_graph(n: int) -> FiniteSpace:
    if n < 3:
        raise ValueError("a cycle needs at least 3 points")
    return from_edge_list([(i, (i + 1) % n) for i in range(n)], n)


def complete_graph(n: int) -> FiniteSpace:
    return from_edge_list(
        [(i, j) for i in range(n) for j in range(i + 1, n)], n
    )


def load_edge_list(path) -> FiniteSpace:
    """Read the edge-list text format: header "n <n_points>", then "u v" lines."""
    edges = []
    n_points = None
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "n":
                n_points = int(parts[1])
            else:
                edges.append((int(parts[0]), int(parts[1])))
    if n_points is None:
        raise ValueError(f"{path}: missing 'n <n_points>' header")
    return from_edge_list(edges, n_points)


def dump_edge_list(s: FiniteSpace, path) -> None:
    """Write the hop-1 edges of a graph metric in the edge-list text format."""
    with open(path, "w") as fh:
        fh.write(f"n {s.n_points}\n")
        for u in range(s.n_points):
            for v in range(u + 1, s.n_points):
                if s.dist[u, v] == 1.0:
                    fh.write(f"{u} {v}\n")
