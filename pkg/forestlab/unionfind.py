"""
unionfind.py - Disjoint-set forest with path halving and union by rank
"""

from __future__ import annotations


class DisjointSet:
    def __init__(self, num_vertices: int):
        self.parents = list(range(num_vertices))
        self.ranks = [0] * num_vertices

    def find(self, index: int) -> int:
        parents = self.parents
        while parents[index] != index:
            parents[index] = parents[parents[index]]
            index = parents[index]
        return index

    def merge(self, a: int, b: int) -> bool:
        """Join the sets of a and b; False if they were already joined."""
        a = self.find(a)
        b = self.find(b)
        if a == b:
            return False
        ranks = self.ranks
        if ranks[a] < ranks[b]:
            a, b = b, a
        self.parents[b] = a
        if ranks[a] == ranks[b]:
            ranks[a] += 1
        return True

    def copy(self) -> DisjointSet:
        clone = DisjointSet.__new__(DisjointSet)
        clone.parents = list(self.parents)
        clone.ranks = list(self.ranks)
        return clone
