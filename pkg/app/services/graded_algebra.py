"""
Exact arithmetic in the graded structure algebras K[A] and K[M] at bounded
degree, over the rationals or GF(p), with the dense Gaussian elimination used
for annihilator and quotient dimension counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from app.exceptions import BudgetExceeded, DimensionMismatch, YBEError
from app.models import catalog
from app.models.presentation import KIND_A, KIND_M
from app.models.solution import Solution, subset_label, word_label
from app.services.cocycle import central_elements, central_word, eta_test
from app.services.logger import algebra_logger as logger
from app.services.solution_core import a_presentation
from app.services.spectrum import s_of_Z
from app.services.word_engine import WordEngine, a_engine, engine_for, m_engine, restricted_presentation

Word = tuple[int, ...]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class ScalarField:
    """The rationals (characteristic 0) or GF(p) for a prime p < 2**31"""
    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and (not _is_prime(p) or p >= 2 ** 31):
            raise YBEError(f"characteristic must be 0 or a prime below 2**31, got {p}", characteristic=p)

    @property
    def label(self) -> str:
        return 'Q' if self.characteristic == 0 else f'GF({self.characteristic})'

    def coerce(self, value):
        p = self.characteristic
        if p == 0:
            return Fraction(value)
        value = Fraction(value)
        return value.numerator * pow(value.denominator, -1, p) % p

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def add(self, a, b):
        return a + b if self.characteristic == 0 else (a + b) % self.characteristic

    def sub(self, a, b):
        return a - b if self.characteristic == 0 else (a - b) % self.characteristic

    def mul(self, a, b):
        return a * b if self.characteristic == 0 else (a * b) % self.characteristic

    def neg(self, a):
        return -a if self.characteristic == 0 else (-a) % self.characteristic

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.characteristic == 0 else pow(a, self.characteristic - 2, self.characteristic)

    @staticmethod
    def is_zero(a) -> bool:
        return a == 0


QQ = ScalarField(0)


# ---------------------------------------------------------------------------
# Linear algebra
# ---------------------------------------------------------------------------

def row_reduce(rows: Sequence[Sequence], field: ScalarField) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of the nonzero rows, with pivot columns"""
    matrix = [list(row) for row in rows]
    if not matrix:
        return [], []
    ncols = len(matrix[0])
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(matrix)) if not field.is_zero(matrix[i][col])), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        scale = field.inv(matrix[r][col])
        matrix[r] = [field.mul(v, scale) for v in matrix[r]]
        for i in range(len(matrix)):
            if i != r and not field.is_zero(matrix[i][col]):
                factor = matrix[i][col]
                matrix[i] = [field.sub(a, field.mul(factor, b)) for a, b in zip(matrix[i], matrix[r])]
        pivots.append(col)
        r += 1
        if r == len(matrix):
            break
    return matrix[:r], pivots


def rank(rows: Sequence[Sequence], field: ScalarField) -> int:
    return len(row_reduce(rows, field)[0])


def nullspace(rows: Sequence[Sequence], ncols: int, field: ScalarField) -> list[list]:
    """Basis of {v : rows . v = 0}, one vector per free column"""
    reduced, pivots = row_reduce(rows, field)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        vector = [field.zero] * ncols
        vector[f] = field.one
        for row, pc in zip(reduced, pivots):
            vector[pc] = field.neg(row[f])
        basis.append(vector)
    return basis


# ---------------------------------------------------------------------------
# Algebra elements
# ---------------------------------------------------------------------------

class AlgebraElement:
    """Finite linear combination of canonical words; zero coefficients are never stored"""

    __slots__ = ('algebra', 'terms')

    def __init__(self, algebra: GradedAlgebra, terms: Mapping[Word, object]):
        self.algebra = algebra
        self.terms = dict(terms)

    def _wrap(self, other) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            if other.algebra is not self.algebra:
                raise YBEError("elements belong to different algebras")
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        other = self._wrap(other)
        return self.algebra.collect([*self.terms.items(), *other.terms.items()])

    __radd__ = __add__

    def __neg__(self):
        field = self.algebra.field
        return AlgebraElement(self.algebra, {w: field.neg(c) for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        other = self._wrap(other)
        return self.algebra.multiply(self, other)

    def __rmul__(self, other):
        return self._wrap(other) * self

    def __pow__(self, k: int):
        if k < 0:
            raise YBEError("negative powers are not defined")
        result = self.algebra.one()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            other = self._wrap(other)
        return self.algebra is other.algebra and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def homogeneous_components(self) -> dict[int, AlgebraElement]:
        parts: dict[int, dict] = {}
        for w, c in self.terms.items():
            parts.setdefault(len(w), {})[w] = c
        return {degree: AlgebraElement(self.algebra, terms) for degree, terms in sorted(parts.items())}

    def __repr__(self):
        if not self.terms:
            return '0'
        return ' + '.join(f'{c}*{word_label(w)}' for w, c in sorted(self.terms.items()))


class GradedAlgebra:
    """K[A] or K[M] for one presentation and one scalar field"""

    def __init__(self, engine: WordEngine, field: ScalarField = QQ):
        self.engine = engine
        self.field = field

    def collect(self, pairs) -> AlgebraElement:
        field = self.field
        terms: dict[Word, object] = {}
        for word, coefficient in pairs:
            key = self.engine.canonical(word)
            terms[key] = field.add(terms.get(key, field.zero), coefficient)
        return AlgebraElement(self, {w: c for w, c in terms.items() if not field.is_zero(c)})

    def element(self, terms: Mapping[Sequence[int], object]) -> AlgebraElement:
        return self.collect((tuple(w), self.field.coerce(c)) for w, c in terms.items())

    def scalar(self, value) -> AlgebraElement:
        return self.element({(): value})

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def one(self) -> AlgebraElement:
        return self.scalar(1)

    def gen(self, x: int) -> AlgebraElement:
        return self.element({(x,): 1})

    def word(self, word: Sequence[int]) -> AlgebraElement:
        return self.element({tuple(word): 1})

    def multiply(self, e1: AlgebraElement, e2: AlgebraElement) -> AlgebraElement:
        field = self.field
        return self.collect((u + v, field.mul(a, b)) for u, a in e1.terms.items() for v, b in e2.terms.items())


def mul(e1: AlgebraElement, e2: AlgebraElement) -> AlgebraElement:
    return e1 * e2


def is_zero(e: AlgebraElement) -> bool:
    return e.is_zero()


def nilpotency_index(e: AlgebraElement, k_max: int) -> int | None:
    """Least k <= k_max with e^k = 0, else None (a bounded statement)"""
    power = e
    for k in range(1, k_max + 1):
        if power.is_zero():
            return k
        if k < k_max:
            power = power * e
    return None


# ---------------------------------------------------------------------------
# Annihilators and quotient dimensions
# ---------------------------------------------------------------------------

def annihilator_compare(sol: Solution, kind: str, degree: int, i_max: int, field: ScalarField = QQ) -> dict:
    """Nullspace of right multiplication by z^i (w^i for M) against the span of eta-related differences"""
    if kind == KIND_A:
        engine, central = a_engine(sol), central_word(sol)
    else:
        engine, central = m_engine(sol), central_elements(sol).w
    count = engine.count(degree)
    representatives = [engine.representative(degree, c) for c in range(count)]

    related_at = {}
    for c1 in range(count):
        for c2 in range(c1 + 1, count):
            result = eta_test(sol, kind, representatives[c1], representatives[c2], i_max)
            if result.related:
                related_at[(c1, c2)] = result.index

    images = list(range(count))
    image_degree = degree
    stages = []
    for i in range(1, i_max + 1):
        images = [engine.extend_class(image_degree, c, central) for c in images]
        image_degree += len(central)
        targets = sorted(set(images))
        row_of = {t: r for r, t in enumerate(targets)}
        matrix = [[field.zero] * count for _ in targets]
        for c, image in enumerate(images):
            matrix[row_of[image]][c] = field.one
        kernel = nullspace(matrix, count, field) if count else []

        span = []
        for (c1, c2), index in sorted(related_at.items()):
            if index <= i:
                vector = [field.zero] * count
                vector[c1], vector[c2] = field.one, field.neg(field.one)
                span.append(vector)
        span_dim = rank(span, field) if span else 0
        contained = rank(kernel + span, field) == len(kernel) if span else True
        stages.append({'i': i, 'nullspace_dim': len(kernel), 'eta_span_dim': span_dim, 'contained': contained})

    stabilized_at = next(
        (stages[j]['i'] for j in range(1, len(stages))
         if stages[j]['nullspace_dim'] == stages[j - 1]['nullspace_dim']
         and stages[j]['eta_span_dim'] == stages[j]['nullspace_dim']
         and stages[j - 1]['eta_span_dim'] == stages[j - 1]['nullspace_dim']),
        None,
    )
    return {
        'kind': kind,
        'degree': degree,
        'i_max': i_max,
        'field': field.label,
        'classes': count,
        'stages': stages,
        'all_contained': all(s['contained'] for s in stages),
        'stabilized_at': stabilized_at,
        'equality_certified': stabilized_at is not None,
    }


def orbit_quotient_dimension(sol: Solution, Z=(), max_degree: int = 6, field: ScalarField = QQ) -> list[int]:
    """Dimensions of K[A(Z)] modulo (x - y), x and y in one Sigma_Z-orbit, degree by degree"""
    Z = frozenset(Z)
    orbit_data = s_of_Z(sol, Z)
    s = orbit_data.s
    presentation = a_presentation(sol) if not Z else restricted_presentation(sol, Z)
    engine = engine_for(presentation)
    local = {x: i for i, x in enumerate(presentation.letters)}
    pairs = [(local[x], local[orbit[0]]) for orbit in orbit_data.orbits for x in orbit[1:]]
    n = presentation.n

    dimensions = [1]
    basis: list[list] = []
    for degree in range(1, max_degree + 1):
        below = engine.count(degree - 1)
        count = engine.count(degree)
        rows = []
        for vector in basis:
            for x in range(n):
                row = [field.zero] * count
                for c in range(below):
                    if not field.is_zero(vector[c]):
                        target = engine.extend_class(degree - 1, c, (x,))
                        row[target] = field.add(row[target], vector[c])
                rows.append(row)
        for c in range(below):
            for x, y in pairs:
                row = [field.zero] * count
                cx = engine.extend_class(degree - 1, c, (x,))
                cy = engine.extend_class(degree - 1, c, (y,))
                row[cx] = field.add(row[cx], field.one)
                row[cy] = field.sub(row[cy], field.one)
                rows.append(row)
        basis, _ = row_reduce(rows, field)
        dimension = count - len(basis)
        expected = comb(degree + s - 1, s - 1)
        if dimension != expected:
            logger.error("orbit quotient dimension mismatch",
                         context={'solution': sol.label, 'Z': subset_label(Z), 'degree': degree,
                                  'dimension': dimension, 'expected': expected})
            raise DimensionMismatch(f"degree {degree}: dimension {dimension}, expected {expected}",
                                    degree=degree, dimension=dimension, expected=expected)
        dimensions.append(dimension)
    return dimensions


# ---------------------------------------------------------------------------
# Identity suite
# ---------------------------------------------------------------------------

def _identity_entry(example, identity, field, holds):
    return {'example': example, 'identity': identity, 'characteristic': field.characteristic,
            'status': 'pass' if holds else 'fail'}


def builtin_example_checks(characteristic: int, k_max: int = 8) -> list[dict]:
    field = ScalarField(characteristic)
    results = []

    algebra = GradedAlgebra(a_engine(catalog.example4()), field)
    x = [algebra.gen(i) for i in range(5)]
    for label, element in (('x4(x3-x5)=0', x[3] * (x[2] - x[4])),
                           ('x1(x1-x2)=0', x[0] * (x[0] - x[1])),
                           ('x2(x1-x2)=0', x[1] * (x[0] - x[1]))):
        results.append(_identity_entry('example4', label, field, element.is_zero()))

    algebra = GradedAlgebra(a_engine(catalog.example5()), field)
    x = [algebra.gen(i) for i in range(4)]
    for label, element in (('x3(x3-x4)=0', x[2] * (x[2] - x[3])),
                           ('x4(x3-x4)=0', x[3] * (x[2] - x[3])),
                           ('x3(x1-x2)=0', x[2] * (x[0] - x[1])),
                           ('x4(x1-x2)=0', x[3] * (x[0] - x[1]))):
        results.append(_identity_entry('example5', label, field, element.is_zero()))

    for sol, order in ((catalog.example2(2, (1, 2)), 2), (catalog.example2(3, (1, 2, 3)), 3)):
        algebra = GradedAlgebra(a_engine(sol), field)
        difference = algebra.gen(0) - algebra.gen(1)
        results.append(_identity_entry(sol.label, f'(x1-x2)^{order}=0', field, (difference ** order).is_zero()))

    algebra = GradedAlgebra(a_engine(catalog.example1_r()), field)
    witness = algebra.gen(0) * (algebra.gen(1) - algebra.gen(2))
    try:
        index = nilpotency_index(witness, k_max)
    except BudgetExceeded as e:
        logger.warning("example 3 witness truncated", context={'bound': e.bound})
        results.append({'example': 'example3', 'identity': 'x1(x2-x3) nilpotent iff char 3',
                        'characteristic': characteristic, 'status': 'budget', 'k_max': k_max})
        return results
    expected_nilpotent = characteristic == 3
    holds = not witness.is_zero() and ((index is not None) == expected_nilpotent)
    entry = _identity_entry('example3', 'x1(x2-x3) nilpotent iff char 3', field, holds)
    entry.update({'nilpotency_index': index, 'k_max': k_max})
    results.append(entry)
    return results
