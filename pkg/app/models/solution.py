"""
Finite set-theoretic solutions r(x, y) = (lambda_x(y), rho_y(x)) on X = {0..n-1}.

Indices are 0-based everywhere in code and on disk; ``name(x)`` renders the
1-based generator label used in reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from app.exceptions import MalformedTable, NotLeftNonDegenerate
from app.models.permutation import Permutation

Table = tuple[tuple[tuple[int, int], ...], ...]


def name(x: int) -> str:
    return f"x{x + 1}"


def word_label(word: Sequence[int]) -> str:
    return ''.join(name(x) for x in word) or '1'


def subset_label(subset: Iterable[int]) -> list[str]:
    return [name(x) for x in sorted(subset)]


@dataclass(frozen=True)
class PropertyFlags:
    is_ybe: bool
    left_nd: bool
    right_nd: bool
    bijective: bool
    involutive: bool
    square_free: bool

    def to_dict(self):
        return {
            'is_ybe': self.is_ybe,
            'left_nd': self.left_nd,
            'right_nd': self.right_nd,
            'bijective': self.bijective,
            'involutive': self.involutive,
            'square_free': self.square_free,
        }


@dataclass(frozen=True)
class Solution:
    n: int
    table: Table
    label: str = field(default='', compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise MalformedTable("a solution needs at least one generator", n=self.n)
        if len(self.table) != self.n:
            raise MalformedTable(f"expected {self.n} rows, got {len(self.table)}", n=self.n)
        for x, row in enumerate(self.table):
            if len(row) != self.n:
                raise MalformedTable(f"row {x} has {len(row)} entries, expected {self.n}", row=x)
            for y, pair in enumerate(row):
                if len(pair) != 2 or not all(isinstance(v, int) and 0 <= v < self.n for v in pair):
                    raise MalformedTable(f"entry r({x},{y}) = {pair!r} out of range", row=x, column=y)

    # -- construction -------------------------------------------------
    @classmethod
    def from_rows(cls, rows, label=''):
        """Build from nested sequences ``rows[x][y] == (u, v)``"""
        table = tuple(tuple((int(u), int(v)) for u, v in row) for row in rows)
        return cls(len(table), table, label)

    @classmethod
    def from_maps(cls, lambdas: Sequence[Sequence[int]], rhos: Sequence[Sequence[int]], label=''):
        """r(x, y) = (lambdas[x][y], rhos[y][x])"""
        n = len(lambdas)
        table = tuple(tuple((lambdas[x][y], rhos[y][x]) for y in range(n)) for x in range(n))
        return cls(n, table, label)

    @classmethod
    def from_json(cls, payload, label=''):
        return cls.from_rows(payload['r'], label=label)

    def to_json(self):
        return {'n': self.n, 'r': [[list(pair) for pair in row] for row in self.table]}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    # -- component maps -----------------------------------------------
    def __call__(self, x: int, y: int) -> tuple[int, int]:
        return self.table[x][y]

    def lambda_images(self, x: int) -> tuple[int, ...]:
        return tuple(self.table[x][y][0] for y in range(self.n))

    def rho_images(self, y: int) -> tuple[int, ...]:
        return tuple(self.table[x][y][1] for x in range(self.n))

    @cached_property
    def left_nd(self) -> bool:
        return all(Permutation.try_from(self.lambda_images(x)) is not None for x in range(self.n))

    @cached_property
    def right_nd(self) -> bool:
        return all(Permutation.try_from(self.rho_images(y)) is not None for y in range(self.n))

    @cached_property
    def lambdas(self) -> tuple[Permutation, ...]:
        if not self.left_nd:
            raise NotLeftNonDegenerate("some lambda_x is not a bijection", solution=self.label)
        return tuple(Permutation(self.lambda_images(x)) for x in range(self.n))

    @cached_property
    def rhos(self) -> tuple[Permutation, ...] | None:
        """The rho family, or None when the solution is not right non-degenerate"""
        if not self.right_nd:
            return None
        return tuple(Permutation(self.rho_images(y)) for y in range(self.n))

    @cached_property
    def bijective(self) -> bool:
        images = {pair for row in self.table for pair in row}
        return len(images) == self.n * self.n

    @cached_property
    def involutive(self) -> bool:
        return all(self.table[u][v] == (x, y) for x, row in enumerate(self.table) for y, (u, v) in enumerate(row))

    # -- relabelling --------------------------------------------------
    def relabel(self, g: Permutation) -> Solution:
        """The solution (g x g) o r o (g x g)^-1"""
        rows = [[(0, 0)] * self.n for _ in range(self.n)]
        for x, row in enumerate(self.table):
            for y, (u, v) in enumerate(row):
                rows[g(x)][g(y)] = (g(u), g(v))
        return Solution.from_rows(rows, label=self.label)

    @cached_property
    def key(self) -> tuple[int, ...]:
        """Flattened table, the total order used for canonical forms"""
        return tuple(v for row in self.table for pair in row for v in pair)

    def __repr__(self):
        return f"Solution(n={self.n}, label={self.label!r})"


@dataclass(frozen=True)
class InverseSolution:
    """The table of r^-1 with its families lambda_hat and rho_hat"""
    n: int
    table: Table
    lambda_hat: tuple[tuple[int, ...], ...]
    rho_hat: tuple[tuple[int, ...], ...]

    @property
    def left_nd(self) -> bool:
        return all(Permutation.try_from(row) is not None for row in self.lambda_hat)

    def as_solution(self, label='') -> Solution:
        return Solution(self.n, self.table, label)


@dataclass(frozen=True)
class SigmaSystem:
    sigma: tuple[Permutation, ...]
    sigma_group: frozenset[Permutation]
    lambda_group: frozenset[Permutation]
    d: int
    m: int

    @property
    def n(self) -> int:
        return len(self.sigma)

    def to_dict(self):
        return {
            'sigma': [s.label() for s in self.sigma],
            'sigma_images': [list(s.images) for s in self.sigma],
            'sigma_group_order': len(self.sigma_group),
            'd': self.d,
            'm': self.m,
        }
