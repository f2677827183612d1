"""The worked five-fragment clone class used across tagging and evaluation tests.

Fragments f1..f5 (indices 0..4) fall into reference clusters
c1 = {f1, f2}, c2 = {f3, f4}, c3 = {f5} with filenames F.c, F.c, G.c, H.c,
G.c.  The injected ObF rankings are built so that:

* b is top-3 in exactly f1, f2 and absent elsewhere        -> tags c1
* c is top-3 in f1, f2 but also top-6 (rank 4) in f5       -> blocked via c3
* t is top-3 in exactly f3, f4                             -> tags c2
* u is top-3 in f3, f4, f5                                 -> blocked for c2,
                                                              usable as {f3,f4,f5}
* d is top-3 only in f5 and top-6 in f1, f2                -> blocked via c1
* g is top-3 in f3 and f5, top-6 in f4                     -> never usable
* every filler (x, y, m, n, h, w, o, q, z, v) fails usability

so the only usable word groups are b -> {f1,f2}, t -> {f3,f4},
u -> {f3,f4,f5}, and the filename groups are F.c -> {f1,f2},
G.c -> {f3,f5}, H.c -> {f4}.
"""

from clonetag.clustering import Clustering
from clonetag.tagging import ObFList

# Rank-ordered (1..6) word lists per fragment.
RANKINGS = {
    0: ["b", "c", "x", "d", "y", "m"],  # f1, F.c
    1: ["b", "c", "y", "d", "x", "n"],  # f2, F.c
    2: ["t", "u", "g", "h", "w", "o"],  # f3, G.c
    3: ["t", "u", "h", "g", "w", "q"],  # f4, H.c
    4: ["d", "u", "g", "c", "z", "v"],  # f5, G.c
}

BASENAMES = {0: "F.c", 1: "F.c", 2: "G.c", 3: "H.c", 4: "G.c"}

FRAGMENTS = [0, 1, 2, 3, 4]

# Reference clusterings from the worked example.
C0 = [{0, 1}, {2, 3}, {4}]  # the embedding-based clustering
C1 = [{0, 1}, {2, 4}, {3}]  # filenames only: F.c / G.c / H.c
C2 = [{0, 1}, {2, 3, 4}]    # F.c / u


def obf_lists() -> dict[int, ObFList]:
    return {
        idx: ObFList.from_scores({w: float(60 - 10 * pos) for pos, w in enumerate(ranking)})
        for idx, ranking in RANKINGS.items()
    }


def ranks() -> dict[int, dict[str, int]]:
    return {idx: {w: pos + 1 for pos, w in enumerate(r)} for idx, r in RANKINGS.items()}


def c0_clustering(class_id: int = 0) -> Clustering:
    assignment = {}
    for cluster_index, members in enumerate(C0):
        for fragment in members:
            assignment[fragment] = cluster_index
    return Clustering(class_id=class_id, assignment=assignment, k=len(C0), silhouette=0.5)
