"""Built-in solutions used by tests, reports and the identity suite."""

from __future__ import annotations

from typing import Sequence

from app.models.permutation import Permutation
from app.models.solution import Solution


def _sigma(n: int, *cycles: Sequence[int]) -> Permutation:
    return Permutation.from_cycles(n, *cycles, one_based=True)


def flip(n: int) -> Solution:
    """r(x, y) = (y, x)"""
    return Solution.from_rows([[(y, x) for y in range(n)] for x in range(n)], label=f'flip-{n}')


def rack_from_sigmas(sigmas: Sequence[Permutation], label: str = '') -> Solution:
    """r(x_i, x_j) = (x_j, x_{sigma_j(i)})"""
    n = len(sigmas)
    return Solution.from_rows([[(y, sigmas[y](x)) for y in range(n)] for x in range(n)], label=label)


def example1_sigmas() -> list[Permutation]:
    return [_sigma(3, (2, 3)), _sigma(3, (1, 3)), _sigma(3, (1, 2))]


def example1_r() -> Solution:
    return rack_from_sigmas(example1_sigmas(), label='example1-r')


def example1_s() -> Solution:
    """s(x_i, x_j) = (x_{sigma_i(j)}, x_i)"""
    sigmas = example1_sigmas()
    return Solution.from_rows([[(sigmas[x](y), x) for y in range(3)] for x in range(3)], label='example1-s')


def constant_sigma(sigma: Permutation, label: str = '') -> Solution:
    """r(x, y) = (y, sigma(x))"""
    n = sigma.n
    return Solution.from_rows([[(y, sigma(x)) for y in range(n)] for x in range(n)],
                              label=label or f'constant-sigma-{sigma.label()}')


def example2(n: int, *cycles: Sequence[int]) -> Solution:
    """Constant-sigma family; cycles are 1-based"""
    return constant_sigma(_sigma(n, *cycles), label=f'example2-n{n}-{_sigma(n, *cycles).label()}')


def example4() -> Solution:
    sigmas = [_sigma(5, (1, 2)), _sigma(5, (1, 2)), _sigma(5), _sigma(5, (3, 5)), _sigma(5)]
    return rack_from_sigmas(sigmas, label='example4')


def example5() -> Solution:
    swap = _sigma(4, (1, 2), (3, 4))
    return rack_from_sigmas([_sigma(4), _sigma(4), swap, swap], label='example5')


BUILTIN = {
    'flip-2': lambda: flip(2),
    'flip-3': lambda: flip(3),
    'example1-r': example1_r,
    'example1-s': example1_s,
    'example2-n2': lambda: example2(2, (1, 2)),
    'example2-n3': lambda: example2(3, (1, 2, 3)),
    'example4': example4,
    'example5': example5,
}
