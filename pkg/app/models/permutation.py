"""
Permutations of {0, ..., n-1} and finite group closure.

Every map the toolkit manipulates (lambda_x, rho_y, sigma_z, elements of the
generated groups) is a ``Permutation``. Composition follows function notation:
``(f * g)(x) == f(g(x))``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Sequence

from app.exceptions import MalformedTable


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise MalformedTable(f"not a permutation: {list(self.images)}", images=tuple(self.images))

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int], one_based: bool = False) -> Permutation:
        """Build from disjoint cycles, e.g. ``from_cycles(3, (1, 2), one_based=True)``"""
        images = list(range(n))
        shift = 1 if one_based else 0
        for cycle in cycles:
            points = [c - shift for c in cycle]
            for i, point in enumerate(points):
                images[point] = points[(i + 1) % len(points)]
        return cls(tuple(images))

    @classmethod
    def try_from(cls, images: Iterable[int]) -> Permutation | None:
        """Return a Permutation, or None when ``images`` is not a bijection"""
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            return None
        return cls(images)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Permutation) -> Permutation:
        return Permutation(tuple(self.images[y] for y in other.images))

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse ** (-k)
        result = Permutation.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    @cached_property
    def inverse(self) -> Permutation:
        images = [0] * self.n
        for x, y in enumerate(self.images):
            images[y] = x
        return Permutation(tuple(images))

    @cached_property
    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Non-trivial cycles, each starting at its least point"""
        seen = set()
        result = []
        for start in range(self.n):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cycle.append(x)
                seen.add(x)
                x = self.images[x]
            if len(cycle) > 1:
                result.append(tuple(cycle))
        return tuple(result)

    @cached_property
    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles), 1)

    def image(self, subset: Iterable[int]) -> frozenset[int]:
        return frozenset(self.images[x] for x in subset)

    def label(self) -> str:
        """1-based cycle notation, 'id' for the identity"""
        if self.is_identity:
            return 'id'
        return ''.join('(' + ','.join(str(x + 1) for x in c) + ')' for c in self.cycles)

    def __repr__(self):
        return f"Permutation({self.label()})"


def generate_group(generators: Iterable[Permutation], n: int) -> frozenset[Permutation]:
    """Closure of the generators under composition (the generated finite group)"""
    identity = Permutation.identity(n)
    gens = sorted(set(generators))
    seen = {identity}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g * s
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return frozenset(seen)


def exponent(group: Iterable[Permutation]) -> int:
    """Least common multiple of the element orders"""
    return reduce(math.lcm, (g.order for g in group), 1)
