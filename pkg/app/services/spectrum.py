"""
Prime spectra of A(X, r) and M(X, r) through the sigma-invariant family Z(X, r),
orbit counts s(Z) and the classical Krull / Gelfand-Kirillov dimension.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from app.config import Config
from app.exceptions import ClosureLeavesZ, InternalInconsistency, NotInZFamily, StrataViolation, TooLarge
from app.models.permutation import Permutation, generate_group
from app.models.solution import Solution, subset_label, word_label
from app.models.union_find import UnionFind
from app.services.cocycle import psi_theta
from app.services.logger import spectrum_logger as logger
from app.services.solution_core import sigma_system
from app.services.word_engine import is_z_invariant, m_engine, member_pz

MINIMAL_PRIMES_NOTE = ("Z in the family need not be X meet Q for a minimal prime Q of K[A]; "
                       "no claim is made about which sets are hit by minimal primes of the algebra")


@dataclass(frozen=True)
class PrimeA:
    Z: frozenset[int]
    height: int

    def to_dict(self):
        return {'Z': subset_label(self.Z), 'height': self.height}


@dataclass(frozen=True)
class PrimeM:
    zs: tuple[frozenset[int], ...]
    height: int

    def to_dict(self):
        return {'family': [subset_label(Z) for Z in self.zs], 'height': self.height}


@dataclass(frozen=True)
class OrbitData:
    Z: frozenset[int]
    sigma_Z_group: frozenset[Permutation]
    orbits: tuple[tuple[int, ...], ...]

    @property
    def s(self) -> int:
        return len(self.orbits)

    def to_dict(self):
        return {
            'Z': subset_label(self.Z),
            's': self.s,
            'orbits': [subset_label(orbit) for orbit in self.orbits],
            'sigma_Z_order': len(self.sigma_Z_group),
        }


def _subset_key(Z: Iterable[int]):
    Z = sorted(Z)
    return (len(Z), Z)


def z_family(sol: Solution) -> tuple[PrimeA, ...]:
    """Nonempty proper Z with sigma_x(Z) = Z for x outside Z, with chain heights"""
    if sol.n > Config.YBE_SUBSET_LIMIT:
        raise TooLarge(f"{2 ** sol.n} subsets exceed the subset limit", n=sol.n, limit=Config.YBE_SUBSET_LIMIT)
    sigma_system(sol)
    family = []
    for size in range(1, sol.n):
        for combo in itertools.combinations(range(sol.n), size):
            Z = frozenset(combo)
            if is_z_invariant(sol, Z):
                family.append(Z)
    heights: dict[frozenset[int], int] = {}
    for Z in family:
        below = [heights[W] for W in heights if W < Z]
        heights[Z] = 1 + max(below) if below else 0
    return tuple(PrimeA(Z, heights[Z]) for Z in sorted(family, key=_subset_key))


def _check_z0(sol: Solution, Z: frozenset[int]) -> None:
    if Z and (len(Z) >= sol.n or not is_z_invariant(sol, Z)):
        raise NotInZFamily(f"{subset_label(Z)} is not in Z(X,r) and is not empty", Z=Z)


def s_of_Z(sol: Solution, Z: Iterable[int] = ()) -> OrbitData:
    Z = frozenset(Z)
    _check_z0(sol, Z)
    sigma = sigma_system(sol).sigma
    outside = [x for x in range(sol.n) if x not in Z]
    uf = UnionFind(sol.n)
    for y in outside:
        for x in outside:
            uf.union(x, sigma[y](x))
    group = generate_group((sigma[y] for y in outside), sol.n)
    return OrbitData(Z, group, tuple(uf.blocks(outside)))


def gk_dimension(sol: Solution) -> int:
    """max s(Z) over Z(X,r) and the empty set"""
    candidates = [frozenset()] + [prime.Z for prime in z_family(sol)]
    return max(s_of_Z(sol, Z).s for Z in candidates)


def phi_closure(sol: Solution, Z: Iterable[int] = ()) -> frozenset[Permutation]:
    """{phi(a) : a a word over X\\Z}, the closure of id under g -> g o lambda_{g^-1(y)}"""
    Z = frozenset(Z)
    _check_z0(sol, Z)
    lambdas = sol.lambdas
    outside = [y for y in range(sol.n) if y not in Z]
    identity = Permutation.identity(sol.n)
    seen = {identity}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for y in outside:
            h = g * lambdas[g.inverse(y)]
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return frozenset(seen)


def prime_closure(sol: Solution, prime: PrimeA) -> PrimeM:
    """Least family containing Z_Q and closed under Z' -> g^-1(Z') for g in phi_closure(Z')"""
    heights = {q.Z: q.height for q in z_family(sol)}
    family = {prime.Z}
    queue = deque([prime.Z])
    while queue:
        current = queue.popleft()
        for g in phi_closure(sol, current):
            moved = g.inverse.image(current)
            if moved in family:
                continue
            if moved not in heights or heights[moved] != prime.height:
                logger.error("closure leaves the invariant family",
                             context={'solution': sol.label, 'start': subset_label(prime.Z), 'witness': subset_label(moved)})
                raise ClosureLeavesZ(f"closure of {subset_label(prime.Z)} reaches {subset_label(moved)}", witness=moved)
            family.add(moved)
            queue.append(moved)
    return PrimeM(tuple(sorted(family, key=_subset_key)), prime.height)


def spec_M(sol: Solution) -> tuple[PrimeM, ...]:
    primes = {}
    for prime in z_family(sol):
        closed = prime_closure(sol, prime)
        primes.setdefault(closed.zs, closed)
    return tuple(sorted(primes.values(), key=lambda p: (p.height, [_subset_key(Z) for Z in p.zs])))


def prime_m_includes(P: PrimeM, other: PrimeM) -> bool:
    """P is contained in other iff each Z' of other contains some Z of P"""
    return all(any(Z <= Z_other for Z in P.zs) for Z_other in other.zs)


def prime_m_membership(sol: Solution, P: PrimeM, word: Sequence[int]) -> bool:
    a = psi_theta(sol, word).a_word
    return all(member_pz(sol, a, Z) for Z in P.zs)


def check_prime_bijection(sol: Solution) -> dict:
    """Z -> P(Z) -> X meet P(Z) returns Z"""
    failures = []
    family = z_family(sol)
    for prime in family:
        recovered = frozenset(x for x in range(sol.n) if member_pz(sol, (x,), prime.Z))
        if recovered != prime.Z:
            failures.append({'Z': subset_label(prime.Z), 'recovered': subset_label(recovered)})
    return {'checked': len(family), 'failures': failures}


def check_inclusion_rule(sol: Solution, max_degree: int) -> dict:
    """The combinatorial inclusion rule agrees with word-level inclusion"""
    primes = spec_M(sol)
    mismatches = []
    for P, Q in itertools.permutations(primes, 2):
        rule = prime_m_includes(P, Q)
        for degree in range(len(P.zs), max_degree + 1):
            witness = next((a for a in itertools.product(range(sol.n), repeat=degree)
                            if all(member_pz(sol, a, Z) for Z in P.zs)
                            and not all(member_pz(sol, a, Z) for Z in Q.zs)), None)
            if rule != (witness is None):
                mismatches.append({'P': P.to_dict(), 'Q': Q.to_dict(), 'degree': degree, 'rule': rule,
                                   'witness': word_label(witness) if witness else None})
                break
    if mismatches:
        raise InternalInconsistency("inclusion rule disagrees with word membership", mismatches=mismatches)
    return {'pairs': len(primes) * max(len(primes) - 1, 0), 'max_degree': max_degree, 'mismatches': 0}


def check_union_of_strata(sol: Solution, P: PrimeM, degree: int) -> dict:
    """Membership in P is constant on each D_Y and upward closed in Y"""
    strata = m_engine(sol).divisibility_strata(degree)
    membership = {}
    for Y, classes in strata.items():
        values = {word: prime_m_membership(sol, P, word) for word in classes}
        if len(set(values.values())) > 1:
            inside = next(w for w, v in values.items() if v)
            outside = next(w for w, v in values.items() if not v)
            raise StrataViolation(f"membership is not constant on D_{subset_label(Y)}",
                                  witness=(inside, outside))
        membership[Y] = next(iter(values.values()))
    for Y, Y_other in itertools.permutations(membership, 2):
        if Y < Y_other and membership[Y] and not membership[Y_other]:
            raise StrataViolation(f"membership is not upward closed from {subset_label(Y)} to {subset_label(Y_other)}",
                                  witness=(strata[Y][0], strata[Y_other][0]))
    return {
        'prime': P.to_dict(),
        'degree': degree,
        'strata': len(membership),
        'inside': sorted((subset_label(Y) for Y, inside in membership.items() if inside), key=lambda y: (len(y), y)),
    }
