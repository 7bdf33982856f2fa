"""Integer maximum flow by shortest augmenting paths (Edmonds-Karp).

Arcs are scanned in insertion order, so for a fixed construction order the
resulting flow is deterministic.
"""

from __future__ import annotations

from collections import deque


class FlowNetwork:
    def __init__(self, n_nodes: int) -> None:
        self.n = n_nodes
        self.adj: list[list[int]] = [[] for _ in range(n_nodes)]
        # parallel arrays indexed by arc id; arc ^ 1 is the reverse arc
        self.head: list[int] = []
        self.cap: list[int] = []

    def add_arc(self, u: int, v: int, capacity: int) -> int:
        arc = len(self.head)
        self.head += [v, u]
        self.cap += [capacity, 0]
        self.adj[u].append(arc)
        self.adj[v].append(arc + 1)
        return arc

    def flow_on(self, arc: int) -> int:
        return self.cap[arc ^ 1]

    def max_flow(self, source: int, sink: int) -> int:
        total = 0
        while True:
            parent_arc = [-1] * self.n
            parent_arc[source] = -2
            queue = deque([source])
            while queue and parent_arc[sink] == -1:
                x = queue.popleft()
                for arc in self.adj[x]:
                    y = self.head[arc]
                    if self.cap[arc] > 0 and parent_arc[y] == -1:
                        parent_arc[y] = arc
                        queue.append(y)
            if parent_arc[sink] == -1:
                return total
            push = None
            y = sink
            while y != source:
                arc = parent_arc[y]
                push = self.cap[arc] if push is None else min(push, self.cap[arc])
                y = self.head[arc ^ 1]
            y = sink
            while y != source:
                arc = parent_arc[y]
                self.cap[arc] -= push
                self.cap[arc ^ 1] += push
                y = self.head[arc ^ 1]
            total += push
