"""Reachability by breadth-first search, and by boolean matrix powers as a second opinion."""
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet

import numpy as np

from armkit.programs.instances import GraphInstance


@dataclass(frozen=True)
class GraphAnswer:
    reachable: FrozenSet[int]
    distances: Dict[int, int]


def oracle_graph(g: GraphInstance) -> GraphAnswer:
    """Multi-source BFS; distances count edges from the nearest source."""
    succ = {v: sorted(j for i, j in g.edges if i == v) for v in range(1, g.n + 1)}
    distances = {s: 0 for s in sorted(g.sources)}
    queue = deque(sorted(g.sources))
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w not in distances:
                distances[w] = distances[v] + 1
                queue.append(w)
    return GraphAnswer(reachable=frozenset(distances), distances=distances)


def matrix_reachable(g: GraphInstance) -> FrozenSet[int]:
    """Sources times (I + A)^n, squaring the boolean matrix log n times."""
    n = g.n
    step = np.eye(n, dtype=bool)
    for i, j in g.edges:
        step[i - 1, j - 1] = True
    closure = step
    span = 1
    while span < n:
        closure = (closure.astype(np.int64) @ closure.astype(np.int64)) > 0
        span *= 2
    start = np.zeros(n, dtype=bool)
    for s in g.sources:
        start[s - 1] = True
    reached = (start.astype(np.int64) @ closure.astype(np.int64)) > 0
    return frozenset(int(v) + 1 for v in np.flatnonzero(reached))
