"""Disjoint-set forest over the integers 0..size-1 (path halving, union by size)."""

from __future__ import annotations


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.size[x] < self.size[y]:
            x, y = y, x
        self.parent[y] = x
        self.size[x] += self.size[y]
        return True

    def blocks(self, elements=None) -> list[tuple[int, ...]]:
        """Blocks as sorted tuples, ordered by least element"""
        elements = range(len(self.parent)) if elements is None else sorted(elements)
        groups: dict[int, list[int]] = {}
        for x in elements:
            groups.setdefault(self.find(x), []).append(x)
        return sorted(tuple(block) for block in groups.values())
