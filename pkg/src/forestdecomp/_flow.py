"""Small integer max-flow engine (Dinic) used by every min-cut computation.

Networks here are tiny (tens of nodes), so the implementation favours
plain lists over anything clever.  Capacities are Python ints; callers pass
an explicit "infinite" capacity larger than any finite cut.
"""

from collections import deque


class FlowNetwork:
    def __init__(self, n):
        self.n = n
        self.adj = [[] for _ in range(n)]
        self.to = []
        self.cap = []

    def add_arc(self, u, v, c):
        """Add arc u->v with capacity c (and its zero-capacity reverse)."""
        if c <= 0:
            return
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def add_edge(self, u, v, c):
        """Undirected edge: capacity c in both directions."""
        if c <= 0:
            return
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(c)

    def _levels(self, s, t):
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        to, cap, adj = self.to, self.cap, self.adj
        while queue:
            u = queue.popleft()
            for a in adj[u]:
                if cap[a] > 0 and level[to[a]] < 0:
                    level[to[a]] = level[u] + 1
                    queue.append(to[a])
        return level if level[t] >= 0 else None

    def max_flow(self, s, t):
        to, cap, adj = self.to, self.cap, self.adj
        total = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return total
            ptr = [0] * self.n
            while True:
                # iterative DFS for one augmenting path in the level graph
                path = []
                u = s
                while u != t:
                    arcs = adj[u]
                    i = ptr[u]
                    while i < len(arcs):
                        a = arcs[i]
                        if cap[a] > 0 and level[to[a]] == level[u] + 1:
                            break
                        i += 1
                    ptr[u] = i
                    if i == len(arcs):
                        if not path:
                            break
                        # dead end: retreat and skip the arc that led here
                        level[u] = -1
                        a = path.pop()
                        u = to[a ^ 1]
                        ptr[u] += 1
                        continue
                    a = arcs[i]
                    path.append(a)
                    u = to[a]
                if u != t:
                    break
                push = min(cap[a] for a in path)
                for a in path:
                    cap[a] -= push
                    cap[a ^ 1] += push
                total += push

    def reachable(self, s):
        """Nodes reachable from s in the residual network (call after max_flow)."""
        seen = [False] * self.n
        seen[s] = True
        stack = [s]
        to, cap, adj = self.to, self.cap, self.adj
        while stack:
            u = stack.pop()
            for a in adj[u]:
                if cap[a] > 0 and not seen[to[a]]:
                    seen[to[a]] = True
                    stack.append(to[a])
        return seen
