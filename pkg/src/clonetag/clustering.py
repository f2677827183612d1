"""K-means clustering of fragment vectors with silhouette-driven model choice.

Lloyd's algorithm with k-means++ seeding, best of several restarts by
within-cluster sum of squared Euclidean distances.  The number of clusters
for a clone class is whichever k in 2..n-1 maximizes the mean silhouette;
when even the best silhouette is below a threshold the class stays a single
cluster.

Determinism rules: points are put into a canonical (lexicographic) order
before seeding, nearest-centroid ties pick the lowest centroid index, and
silhouette ties pick the smallest k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass
class Clustering:
    """A partition of a clone class's fragments into k clusters."""

    class_id: int
    assignment: dict[int, int]  # fragment index -> cluster index (dense 0..k-1)
    k: int
    silhouette: float | None  # undefined for k == 1

    def clusters(self) -> list[set[int]]:
        out: list[set[int]] = [set() for _ in range(self.k)]
        for fragment, cluster in self.assignment.items():
            out[cluster].add(fragment)
        return out

    def as_partition(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(c) for c in self.clusters())


def _kmeans_plusplus(points: np.ndarray, k: int, rng: np.random.RandomState) -> np.ndarray:
    n = len(points)
    centroids = np.empty((k, points.shape[1]), dtype=points.dtype)
    first = int(rng.randint(n))
    centroids[0] = points[first]
    dist_sq = ((points - centroids[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = float(dist_sq.sum())
        if total <= 0.0:
            idx = int(rng.randint(n))
        else:
            r = rng.random_sample() * total
            idx = int(np.searchsorted(np.cumsum(dist_sq), r))
            idx = min(idx, n - 1)
        centroids[c] = points[idx]
        dist_sq = np.minimum(dist_sq, ((points - centroids[c]) ** 2).sum(axis=1))
    return centroids


def _assign(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # argmin picks the lowest index on ties, which is the tie-break we want.
    dists = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return dists.argmin(axis=1)


def _lloyd(
    points: np.ndarray, k: int, rng: np.random.RandomState, max_iters: int
) -> tuple[np.ndarray, float]:
    centroids = _kmeans_plusplus(points, k, rng)
    assignment = _assign(points, centroids)
    for _ in range(max_iters):
        for c in range(k):
            members = points[assignment == c]
            if len(members):
                centroids[c] = members.mean(axis=0)
            else:
                # Re-seed an emptied cluster with the point farthest from its centroid.
                far = int(((points - centroids[assignment]) ** 2).sum(axis=1).argmax())
                centroids[c] = points[far]
        new_assignment = _assign(points, centroids)
        if np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
    assignment = _fill_empty_clusters(points, assignment, k)
    centroids = np.stack([points[assignment == c].mean(axis=0) for c in range(k)])
    sse = float(((points - centroids[assignment]) ** 2).sum())
    return assignment, sse


def _fill_empty_clusters(points: np.ndarray, assignment: np.ndarray, k: int) -> np.ndarray:
    """Move points out of the biggest clusters so that all k are nonempty.

    Only reachable with duplicate points, where k-means++ can seed the same
    coordinates twice; the partition invariant (dense, nonempty clusters)
    still has to hold.
    """
    counts = np.bincount(assignment, minlength=k)
    for c in range(k):
        if counts[c] == 0:
            donor = int(counts.argmax())
            victim = int(np.flatnonzero(assignment == donor)[-1])
            assignment = assignment.copy()
            assignment[victim] = c
            counts[donor] -= 1
            counts[c] += 1
    return assignment


def _canonical_order(points: np.ndarray) -> np.ndarray:
    return np.array(sorted(range(len(points)), key=lambda i: tuple(points[i])), dtype=int)


def kmeans(
    vectors: Sequence[np.ndarray] | np.ndarray,
    k: int,
    seed: int = 1,
    restarts: int = 10,
    max_iters: int = 100,
    class_id: int = -1,
) -> Clustering:
    """Best-of-restarts k-means; deterministic for a fixed seed.

    The returned assignment is independent of input order (up to the identity
    of equal vectors) because seeding happens on canonically sorted points.
    """
    points = np.asarray(vectors, dtype=np.float64)
    n = len(points)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    order = _canonical_order(points)
    sorted_points = points[order]

    rng = np.random.RandomState(seed)
    best: tuple[float, np.ndarray] | None = None
    for _ in range(max(1, restarts)):
        assignment, sse = _lloyd(sorted_points, k, rng, max_iters)
        if best is None or sse < best[0] - 1e-12:
            best = (sse, assignment)
    assert best is not None

    raw = np.empty(n, dtype=int)
    raw[order] = best[1]
    # Relabel clusters by first appearance in original fragment order.
    relabel: dict[int, int] = {}
    assignment_map: dict[int, int] = {}
    for i in range(n):
        label = int(raw[i])
        assignment_map[i] = relabel.setdefault(label, len(relabel))
    return Clustering(class_id=class_id, assignment=assignment_map, k=k, silhouette=None)


def silhouette(vectors: Sequence[np.ndarray] | np.ndarray, clustering: Clustering) -> float:
    """Mean silhouette s(i) = (b - a) / max(a, b); singleton points score 0."""
    if clustering.k < 2:
        raise ValueError("silhouette is undefined for fewer than 2 clusters")
    points = np.asarray(vectors, dtype=np.float64)
    n = len(points)
    labels = np.array([clustering.assignment[i] for i in range(n)])
    dists = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2))

    scores = np.zeros(n)
    for i in range(n):
        own = labels == labels[i]
        own_size = int(own.sum())
        if own_size == 1:
            continue  # singleton convention: s(i) = 0
        a = dists[i][own].sum() / (own_size - 1)
        b = min(
            float(dists[i][labels == other].mean())
            for other in range(clustering.k)
            if other != labels[i]
        )
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0.0 else (b - a) / denom
    return float(scores.mean())


def cluster_clone_class(
    fragment_vectors: Sequence[np.ndarray] | np.ndarray,
    seed: int = 1,
    min_silhouette: float = 0.05,
    restarts: int = 10,
    max_iters: int = 100,
    class_id: int = -1,
) -> Clustering:
    """Pick k in 2..n-1 by maximal silhouette (ties favor smaller k).

    A best silhouette below min_silhouette collapses the class to the
    trivial single cluster, mirroring clone classes that have no usable
    topic structure.
    """
    points = np.asarray(fragment_vectors, dtype=np.float64)
    n = len(points)
    if n < 2:
        raise ValueError("a clone class always has at least 2 fragments")

    candidates = [2] if n == 2 else list(range(2, n))
    best: tuple[float, int, Clustering] | None = None
    for k in candidates:
        clustering = kmeans(points, k, seed=seed, restarts=restarts, max_iters=max_iters, class_id=class_id)
        score = silhouette(points, clustering)
        clustering.silhouette = score
        if best is None or score > best[0] + 1e-12:
            best = (score, k, clustering)
    assert best is not None
    score, _, clustering = best
    if score < min_silhouette:
        return Clustering(
            class_id=class_id,
            assignment={i: 0 for i in range(n)},
            k=1,
            silhouette=None,
        )
    return clustering
