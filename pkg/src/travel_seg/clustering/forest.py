"""
Disjoint-set forest over issued cluster labels.
"""


class LabelForest:
    """
    Union-find with union by rank and path compression.

    Labels are issued densely from 0 by `make_label`. `find` returns the
    canonical label of a set; after `union(a, b)`, `find(a) == find(b)`.
    """

    def __init__(self):
        self._parent: list[int] = []
        self._rank: list[int] = []
        self.unions = 0

    def __len__(self) -> int:
        return len(self._parent)

    def __repr__(self):
        return f"LabelForest: {len(self)} labels, {self.unions} unions"

    def make_label(self) -> int:
        label = len(self._parent)
        self._parent.append(label)
        self._rank.append(0)
        return label

    def find(self, label: int) -> int:
        root = label
        parent = self._parent
        while parent[root] != root:
            root = parent[root]
        while parent[label] != root:
            parent[label], label = root, parent[label]
        return root

    def union(self, a: int, b: int) -> int:
        """Merge the sets of `a` and `b`; returns the surviving root."""
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return root_a
        if self._rank[root_a] < self._rank[root_b]:
            root_a, root_b = root_b, root_a
        self._parent[root_b] = root_a
        if self._rank[root_a] == self._rank[root_b]:
            self._rank[root_a] += 1
        self.unions += 1
        return root_a

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def num_sets(self) -> int:
        return sum(1 for label in range(len(self._parent)) if self.find(label) == label)
