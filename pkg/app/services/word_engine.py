"""
Word problem for the graded presentations of A(X, r) and M(X, r).

Classes are built degree by degree. A class of degree l+1 is a connected
component of the states (C, x), C a class of degree l and x a letter: every
word u.x with u in C is in the same class, and the only rewrites not already
absorbed by C act on the last two letters. For each class D of degree l-1 and
each pair (a, x) the states (D.a, x) and (D.a', x') are glued, where
(a', x') = step(a, x). The work per degree is (#classes) * n states instead of
n ** degree words.

Class ids at each degree follow the lexicographic order of their least
members, so the least member of a new class is read off its smallest state.
"""

from __future__ import annotations

import itertools
import threading
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from app.config import Config
from app.exceptions import (
    BudgetExceeded, LemmaViolation, MalformedTable, NoOrderedForm, YBEError, ZNotInvariant,
)
from app.models.presentation import KIND_A, KIND_M, DegreeClasses, Presentation
from app.models.solution import Solution, subset_label, word_label
from app.models.union_find import UnionFind
from app.services.logger import word_logger as logger
from app.services.solution_core import a_presentation, m_presentation, sigma_system

Word = tuple[int, ...]


@dataclass
class _Level:
    count: int
    rep_prev: list[int]
    rep_letter: list[int]
    first: list[int]
    nodes: list[list[int]]
    ext: list[int] | None = field(default=None)


def _mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


class WordEngine:
    """Class automaton for one presentation; levels are memoized and extended under a lock"""

    def __init__(self, presentation: Presentation, budget: int | None = None):
        self.presentation = presentation
        self.n = presentation.n
        self._budget = budget
        self._lock = threading.Lock()
        self._levels = [_Level(count=1, rep_prev=[-1], rep_letter=[-1], first=[0], nodes=[[]])]
        self._prefix_memo: dict[tuple[int, int, int], frozenset[int]] = {}

    @property
    def budget(self) -> int:
        return self._budget if self._budget is not None else Config.word_budget()

    # -- level construction -------------------------------------------
    def _ensure(self, degree: int) -> None:
        if degree < 0:
            raise MalformedTable("degree must be non-negative", degree=degree)
        if degree < len(self._levels):
            return
        with self._lock:
            while len(self._levels) <= degree:
                self._extend()

    def _extend(self) -> None:
        n = self.n
        step = self.presentation.step
        top = len(self._levels) - 1
        current = self._levels[top]
        states = current.count * n
        if states > self.budget:
            logger.warning("degree budget exceeded",
                           context={'presentation': self.presentation.label, 'degree': top + 1, 'states': states})
            raise BudgetExceeded(
                f"degree {top + 1} needs {states} states, budget is {self.budget}",
                bound=self.budget, required=states, degree=top + 1,
            )

        uf = UnionFind(states)
        if top >= 1:
            below = self._levels[top - 1]
            for d in range(below.count):
                base = d * n
                for a in range(n):
                    left = below.ext[base + a] * n
                    for x in range(n):
                        b, y = step[a * n + x]
                        uf.union(left + x, below.ext[base + b] * n + y)

        ext = [0] * states
        root_ids: dict[int, int] = {}
        level = _Level(count=0, rep_prev=[], rep_letter=[], first=[], nodes=[])
        for state in range(states):
            root = uf.find(state)
            class_id = root_ids.get(root)
            if class_id is None:
                class_id = root_ids[root] = level.count
                level.count += 1
                level.rep_prev.append(state // n)
                level.rep_letter.append(state % n)
                level.first.append(0)
                level.nodes.append([])
            ext[state] = class_id
            prefix = state // n
            level.first[class_id] |= current.first[prefix] if top >= 1 else 1 << (state % n)
            level.nodes[class_id].append(state)
        current.ext = ext
        self._levels.append(level)
        logger.debug("built degree", context={'presentation': self.presentation.label,
                                              'degree': top + 1, 'classes': level.count})

    # -- queries ------------------------------------------------------
    def _check_word(self, word: Sequence[int]) -> Word:
        word = tuple(word)
        if any(not isinstance(x, int) or not 0 <= x < self.n for x in word):
            raise MalformedTable(f"word {list(word)} has letters outside 0..{self.n - 1}")
        return word

    def class_id(self, word: Sequence[int]) -> int:
        word = self._check_word(word)
        self._ensure(len(word))
        cid = 0
        n = self.n
        for i, x in enumerate(word):
            cid = self._levels[i].ext[cid * n + x]
        return cid

    def extend_class(self, degree: int, class_id: int, word: Sequence[int]) -> int:
        """Class of (member of class_id) . word, without re-reading the prefix"""
        word = self._check_word(word)
        self._ensure(degree + len(word))
        cid = class_id
        for i, x in enumerate(word):
            cid = self._levels[degree + i].ext[cid * self.n + x]
        return cid

    def count(self, degree: int) -> int:
        self._ensure(degree)
        return self._levels[degree].count

    def representative(self, degree: int, class_id: int) -> Word:
        self._ensure(degree)
        letters = []
        cid = class_id
        for level in range(degree, 0, -1):
            data = self._levels[level]
            letters.append(data.rep_letter[cid])
            cid = data.rep_prev[cid]
        return tuple(reversed(letters))

    def canonical(self, word: Sequence[int]) -> Word:
        word = self._check_word(word)
        return self.representative(len(word), self.class_id(word))

    def equal(self, w1: Sequence[int], w2: Sequence[int]) -> bool:
        if len(w1) != len(w2):
            return False
        return self.class_id(w1) == self.class_id(w2)

    def classes(self, degree: int) -> DegreeClasses:
        self._ensure(degree)
        data = self._levels[degree]
        return DegreeClasses(
            degree=degree,
            representatives=tuple(self.representative(degree, c) for c in range(data.count)),
            first_letters=tuple(_mask_to_set(mask) for mask in data.first),
        )

    def growth(self, max_degree: int) -> list[int]:
        return [self.count(degree) for degree in range(max_degree + 1)]

    def first_letters(self, degree: int, class_id: int) -> frozenset[int]:
        self._ensure(degree)
        return _mask_to_set(self._levels[degree].first[class_id])

    def left_divisor_set(self, word: Sequence[int]) -> frozenset[int]:
        """Letters that begin some member of the class of word"""
        return self.first_letters(len(word), self.class_id(word))

    def prefix_classes(self, degree: int, class_id: int, k: int) -> frozenset[int]:
        """Classes of length-k prefixes of the members of a class"""
        if k == degree:
            return frozenset((class_id,))
        key = (degree, class_id, k)
        cached = self._prefix_memo.get(key)
        if cached is None:
            result = set()
            for state in self._levels[degree].nodes[class_id]:
                result |= self.prefix_classes(degree - 1, state // self.n, k)
            cached = self._prefix_memo[key] = frozenset(result)
        return cached

    def left_divisible_by(self, word: Sequence[int], prefix: Sequence[int]) -> bool:
        if len(prefix) > len(word):
            return False
        return self.class_id(prefix) in self.prefix_classes(len(word), self.class_id(word), len(prefix))

    def divisibility_strata(self, degree: int) -> dict[frozenset[int], tuple[Word, ...]]:
        """Degree classes grouped by their exact left-divisor set Y (the strata D_Y)"""
        self._ensure(degree)
        strata: dict[frozenset[int], list[Word]] = {}
        data = self._levels[degree]
        for cid in range(data.count):
            strata.setdefault(_mask_to_set(data.first[cid]), []).append(self.representative(degree, cid))
        return {key: tuple(value) for key, value in strata.items()}

    def members(self, degree: int, class_id: int) -> Iterator[Word]:
        self._require_words(degree)
        if degree == 0:
            yield ()
            return
        for state in self._levels[degree].nodes[class_id]:
            prefix, x = divmod(state, self.n)
            for u in self.members(degree - 1, prefix):
                yield u + (x,)

    def ordered_representative(self, word: Sequence[int]) -> tuple[int, ...]:
        """Least exponent vector k with x1^k1 ... xn^kn in the class of word"""
        if self.presentation.kind != KIND_A:
            raise YBEError("ordered representatives are defined for A-kind presentations")
        word = self._check_word(word)
        target = self.class_id(word)
        degree = len(word)
        for exponents in _compositions(degree, self.n):
            ordered = tuple(x for x, k in enumerate(exponents) for _ in range(k))
            if self.class_id(ordered) == target:
                return exponents
        raise NoOrderedForm(f"class of {word_label(word)} has no ordered member", word=word)

    def _require_words(self, degree: int) -> None:
        required = self.n ** degree
        if required > self.budget:
            raise BudgetExceeded(f"{required} words of degree {degree} exceed the budget {self.budget}",
                                 bound=self.budget, required=required, degree=degree)
        self._ensure(degree)

    def brute_force_classes(self, degree: int, directions: str = 'both') -> list[frozenset[Word]]:
        """Set-based closure over all n ** degree words, sorted by least member"""
        self._require_words(degree)
        n = self.n
        forward = {divmod(i, n): pair for i, pair in enumerate(self.presentation.step)}
        backward = self.presentation.inverse_step()
        rules = [forward] if directions == 'forward' else [forward, backward]
        seen: set[Word] = set()
        partition = []
        for start in itertools.product(range(n), repeat=degree):
            if start in seen:
                continue
            block = {start}
            queue = deque([start])
            while queue:
                word = queue.popleft()
                for i in range(degree - 1):
                    for rule in rules:
                        a, x = rule[(word[i], word[i + 1])]
                        other = word[:i] + (a, x) + word[i + 2:]
                        if other not in block:
                            block.add(other)
                            queue.append(other)
            seen |= block
            partition.append(frozenset(block))
        return sorted(partition, key=min)

    def cancellation_witness(self, max_degree: int) -> dict | None:
        """First u != v with x.u = x.v or u.x = v.x, |u| < max_degree, else None"""
        for degree in range(max_degree):
            count = self.count(degree)
            representatives = [self.representative(degree, c) for c in range(count)]
            for x in range(self.n):
                left: dict[int, int] = {}
                right: dict[int, int] = {}
                for c in range(count):
                    for side, seen, image in (
                        ('left', left, self.class_id((x,) + representatives[c])),
                        ('right', right, self.extend_class(degree, c, (x,))),
                    ):
                        other = seen.setdefault(image, c)
                        if other != c:
                            return {'side': side, 'letter': x, 'degree': degree + 1,
                                    'words': [representatives[other], representatives[c]]}
        return None


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Exponent vectors summing to total, in increasing lexicographic order"""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=256)
def engine_for(presentation: Presentation) -> WordEngine:
    return WordEngine(presentation)


def a_engine(sol: Solution) -> WordEngine:
    return engine_for(a_presentation(sol))


def m_engine(sol: Solution) -> WordEngine:
    return engine_for(m_presentation(sol))


def restricted_presentation(sol: Solution, Z: Iterable[int]) -> Presentation:
    """A(Z): generators X\\Z with the relations xz = z sigma_z(x) among them"""
    Z = frozenset(Z)
    sigma = sigma_system(sol).sigma
    letters = tuple(x for x in range(sol.n) if x not in Z)
    if not letters:
        raise ZNotInvariant("the complement of Z is empty", Z=Z)
    index = {x: i for i, x in enumerate(letters)}
    for y in letters:
        if any(sigma[y](x) not in index for x in letters):
            raise ZNotInvariant(f"sigma_{y + 1} does not preserve the complement of Z", Z=Z, x=y)
    return Presentation.from_rewrite(
        KIND_A, len(letters),
        lambda i, j: (j, index[sigma[letters[j]](letters[i])]),
        letters=letters, label=f'{sol.label}|X\\{"".join(subset_label(Z))}',
    )


# ---------------------------------------------------------------------------
# Operation-level API
# ---------------------------------------------------------------------------

def degree_classes(presentation: Presentation, degree: int) -> DegreeClasses:
    return engine_for(presentation).classes(degree)


def canonical(presentation: Presentation, word: Sequence[int]) -> Word:
    return engine_for(presentation).canonical(word)


def equal(presentation: Presentation, w1: Sequence[int], w2: Sequence[int]) -> bool:
    return engine_for(presentation).equal(w1, w2)


def growth(presentation: Presentation, max_degree: int) -> list[int]:
    return engine_for(presentation).growth(max_degree)


def ordered_representative(presentation: Presentation, word: Sequence[int]) -> tuple[int, ...]:
    return engine_for(presentation).ordered_representative(word)


def left_divisor_set(presentation: Presentation, word: Sequence[int]) -> frozenset[int]:
    return engine_for(presentation).left_divisor_set(word)


def left_divisible_by(presentation: Presentation, word: Sequence[int], prefix: Sequence[int]) -> bool:
    return engine_for(presentation).left_divisible_by(word, prefix)


def divisibility_strata(presentation: Presentation, degree: int) -> dict[frozenset[int], tuple[Word, ...]]:
    return engine_for(presentation).divisibility_strata(degree)


def is_z_invariant(sol: Solution, Z: Iterable[int]) -> bool:
    """sigma_x(Z) = Z for every x outside Z"""
    Z = frozenset(Z)
    sigma = sigma_system(sol).sigma
    return all(sigma[x].image(Z) == Z for x in range(sol.n) if x not in Z)


def member_pz(sol: Solution, word: Sequence[int], Z: Iterable[int]) -> bool:
    """Membership of an A-word in P(Z) = union of A z (z in Z) by a letter scan"""
    Z = frozenset(Z)
    if not Z:
        return False
    if len(Z) < sol.n and not is_z_invariant(sol, Z):
        raise ZNotInvariant(f"{subset_label(Z)} is not sigma-invariant; the letter scan is unsound", Z=Z)
    return any(x in Z for x in word)


def strata_claim_report(sol: Solution, max_degree: int) -> dict:
    """Compare the ideals M_1 and M_2 (left divisible by >= 1, >= 2 generators) degree by degree"""
    engine = m_engine(sol)
    degrees = []
    # degree 1 is excluded: a single letter has exactly one left divisor
    for degree in range(2, max_degree + 1):
        data = engine.classes(degree)
        m1 = [c for c, first in enumerate(data.first_letters) if len(first) >= 1]
        m2 = [c for c, first in enumerate(data.first_letters) if len(first) >= 2]
        in_m2 = set(m2)
        only_m1 = [word_label(data.canon(c)) for c in m1 if c not in in_m2]
        degrees.append({
            'degree': degree,
            'm1': len(m1),
            'm2': len(m2),
            'agree': len(m1) == len(m2),
            'm1_not_m2': only_m1[:10],
        })
    agrees = all(entry['agree'] for entry in degrees)
    if not agrees:
        logger.warning("M_1 = M_2 fails at bounded degree",
                       context={'solution': sol.label, 'degrees': [e['degree'] for e in degrees if not e['agree']]})
    return {'claim': 'M_1 = M_2', 'solution': sol.label, 'max_degree': max_degree,
            'agrees_with_claim': agrees, 'degrees': degrees}


# ---------------------------------------------------------------------------
# Bounded invariant checks
# ---------------------------------------------------------------------------

def check_central_powers(sol: Solution, max_degree: int) -> dict:
    """a.x^d = x^d.a in A for every generator x and every class a of degree <= max_degree"""
    engine = a_engine(sol)
    d = sigma_system(sol).d
    checked = 0
    for degree in range(max_degree + 1):
        for cid in range(engine.count(degree)):
            a = engine.representative(degree, cid)
            for x in range(sol.n):
                power = (x,) * d
                checked += 1
                if not engine.equal(a + power, power + a):
                    raise LemmaViolation(f"{word_label(power)} does not commute with {word_label(a)}",
                                         generator=x, word=a)
    return {'d': d, 'max_degree': max_degree, 'checked': checked}


def check_ordered_forms(sol: Solution, max_degree: int) -> dict:
    """Every A-class up to max_degree holds a word x1^k1 ... xn^kn"""
    engine = a_engine(sol)
    classes = 0
    for degree in range(max_degree + 1):
        for cid in range(engine.count(degree)):
            engine.ordered_representative(engine.representative(degree, cid))
            classes += 1
    return {'max_degree': max_degree, 'classes': classes}


def check_divisor_products(sol: Solution, max_degree: int) -> dict:
    """
    For s in D_Z with |s| = k and Z inside Y, |Y| = i: every product of k classes
    of M_i (total degree <= max_degree) that lands in D_Y is left divisible by s.
    """
    engine = m_engine(sol)
    first = {degree: engine.classes(degree).first_letters for degree in range(max_degree + 1)}
    products = checked = 0
    for i in range(1, sol.n + 1):
        factors = [(degree, engine.representative(degree, c))
                   for degree in range(1, max_degree + 1)
                   for c, letters in enumerate(first[degree]) if len(letters) >= i]
        for k in range(1, max_degree + 1):
            divisors = list(enumerate(first[k]))
            frontier = [((), 0)]
            for _ in range(k):
                frontier = [(word + factor, degree + size)
                            for word, degree in frontier
                            for size, factor in factors if degree + size <= max_degree]
            for word, degree in frontier:
                cid = engine.class_id(word)
                Y = first[degree][cid]
                if len(Y) != i:
                    continue
                products += 1
                prefixes = engine.prefix_classes(degree, cid, k)
                for s_class, Z in divisors:
                    if Z <= Y:
                        checked += 1
                        if s_class not in prefixes:
                            raise LemmaViolation(
                                f"{word_label(word)} lies in D_Y but is not left divisible by "
                                f"{word_label(engine.representative(k, s_class))}",
                                Y=sorted(Y), word=word,
                            )
    return {'max_degree': max_degree, 'products': products, 'checked': checked}
