"""
Homogeneous quadratic presentations and their per-degree class data.

A presentation on letters 0..n-1 is given by a bijective rewrite ``step`` on
pairs of letters: the factor ``ax`` may be replaced by ``step(a, x)`` (and back).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from app.exceptions import MalformedTable

KIND_A = 'A'
KIND_M = 'M'


@dataclass(frozen=True)
class Presentation:
    kind: str
    n: int
    step: tuple[tuple[int, int], ...]
    letters: tuple[int, ...] = ()
    label: str = field(default='', compare=False)

    def __post_init__(self):
        if self.kind not in (KIND_A, KIND_M):
            raise MalformedTable(f"unknown presentation kind {self.kind!r}")
        if len(self.step) != self.n * self.n:
            raise MalformedTable("rewrite table has the wrong size", n=self.n)
        if len(set(self.step)) != len(self.step):
            raise MalformedTable("rewrite table is not a bijection on pairs", kind=self.kind)
        if not self.letters:
            object.__setattr__(self, 'letters', tuple(range(self.n)))

    @classmethod
    def from_rewrite(cls, kind: str, n: int, rewrite: Callable[[int, int], tuple[int, int]],
                     letters: Iterable[int] = (), label: str = '') -> Presentation:
        step = tuple(rewrite(a, x) for a in range(n) for x in range(n))
        return cls(kind, n, step, tuple(letters), label)

    def rewrite(self, a: int, x: int) -> tuple[int, int]:
        return self.step[a * self.n + x]

    def inverse_step(self) -> dict[tuple[int, int], tuple[int, int]]:
        return {image: divmod(index, self.n) for index, image in enumerate(self.step)}

    def relations(self) -> frozenset[frozenset[tuple[int, int]]]:
        """Non-trivial defining relations as unordered pairs of 2-letter words (original letters)"""
        result = set()
        for index, (b, y) in enumerate(self.step):
            a, x = divmod(index, self.n)
            if (a, x) != (b, y):
                lhs = (self.letters[a], self.letters[x])
                rhs = (self.letters[b], self.letters[y])
                result.add(frozenset((lhs, rhs)))
        return frozenset(result)


@dataclass(frozen=True)
class DegreeClasses:
    """Congruence classes of one degree; class ids follow the order of their representatives"""
    degree: int
    representatives: tuple[tuple[int, ...], ...]
    first_letters: tuple[frozenset[int], ...]

    @property
    def count(self) -> int:
        return len(self.representatives)

    def canon(self, class_id: int) -> tuple[int, ...]:
        return self.representatives[class_id]
