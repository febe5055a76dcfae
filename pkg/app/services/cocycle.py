"""
The bijective 1-cocycle psi: M(X, r) -> A(X, r), the action theta and the map
phi = theta o psi^-1, plus the constants and central elements built from them.

phi is evaluated with the head recursion phi(z1 c) = lambda_z1 o phi(lambda_z1^-1 c)
unrolled into a left-to-right pass: keep g = phi(prefix); the next M-letter is
y = g^-1(a_i) and g becomes g o lambda_y. The same pass yields psi^-1, and the
dual pass (a_i = g(y_i)) yields psi. From phi(a y) = phi(a) o lambda_{phi(a)^-1(y)}
the set {phi(a) : a over letters Y} is the closure of id under
g -> g o lambda_{g^-1(y)}, y in Y (used by the spectrum module).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence

from app.config import Config
from app.exceptions import (
    BudgetExceeded, CocycleViolation, FactorizationViolation, MalformedTable, PhiIllDefined,
)
from app.models.permutation import Permutation
from app.models.presentation import KIND_A, KIND_M
from app.models.solution import Solution, name, word_label
from app.services.logger import cocycle_logger as logger
from app.services.solution_core import sigma_system
from app.services.word_engine import a_engine, m_engine

Word = tuple[int, ...]


@dataclass(frozen=True)
class CocyclePair:
    a_word: Word
    theta: Permutation


@dataclass(frozen=True)
class TauData:
    tau: tuple[int, ...]
    p: int


@dataclass(frozen=True)
class PhiExponent:
    t: int
    generator_periods: tuple[int, ...]
    sampled_words: int
    sample_degree: int

    @property
    def status(self) -> str:
        return f"Exhaustive(generators)+Sampled({self.sampled_words} words up to degree {self.sample_degree})"

    def to_dict(self):
        return {'t': self.t, 'status': self.status, 'generator_periods': list(self.generator_periods)}


@dataclass(frozen=True)
class StructureConstants:
    d: int
    m: int
    p: int
    q: int
    t_bounded: PhiExponent | None
    t_cap: int

    def to_dict(self):
        return {
            'd': self.d, 'm': self.m, 'p': self.p, 'q': self.q,
            't': self.t_bounded.to_dict() if self.t_bounded else {'t': None, 'status': f'not found up to {self.t_cap}'},
        }


@dataclass(frozen=True)
class CentralElements:
    z: Word
    k: int
    w: Word
    z_central: bool | None
    checked_degree: int

    def to_dict(self):
        return {
            'z': word_label(self.z), 'k': self.k, 'w_degree': len(self.w),
            'z_central': self.z_central, 'checked_degree': self.checked_degree,
        }


@dataclass(frozen=True)
class EtaResult:
    related: bool
    index: int | None
    bound: int
    conclusive: bool

    def label(self) -> str:
        if self.related:
            return f"Related({self.index})"
        return "NotRelated" if self.conclusive else f"NotRelatedUpTo({self.bound})"


# ---------------------------------------------------------------------------
# psi, theta, phi
# ---------------------------------------------------------------------------

def _phi_state(lambdas: Sequence[Permutation], g: Permutation, a_word: Sequence[int]) -> Permutation:
    for a in a_word:
        g = g * lambdas[g.inverse(a)]
    return g


def psi_theta(sol: Solution, word: Sequence[int]) -> CocyclePair:
    """psi(y1..yk)_i = (lambda_y1 o ... o lambda_y(i-1))(y_i), theta = lambda_y1 o ... o lambda_yk"""
    lambdas = sol.lambdas
    g = Permutation.identity(sol.n)
    letters = []
    for y in word:
        letters.append(g(y))
        g = g * lambdas[y]
    return CocyclePair(tuple(letters), g)


def psi_inverse(sol: Solution, a_word: Sequence[int]) -> Word:
    lambdas = sol.lambdas
    g = Permutation.identity(sol.n)
    letters = []
    for a in a_word:
        y = g.inverse(a)
        letters.append(y)
        g = g * lambdas[y]
    return tuple(letters)


def phi(sol: Solution, a_word: Sequence[int]) -> Permutation:
    return _phi_state(sol.lambdas, Permutation.identity(sol.n), a_word)


def semidirect_pair(sol: Solution, word: Sequence[int]) -> tuple[Word, Permutation]:
    """Image of an M-word in A x| G; the second entry is phi of the first"""
    pair = psi_theta(sol, word)
    if phi(sol, pair.a_word) != pair.theta:
        raise CocycleViolation("phi(psi(w)) differs from theta(w)", word=tuple(word))
    return pair.a_word, pair.theta


def check_cocycle_well_defined(sol: Solution, max_degree: int) -> dict:
    """Equal M-words have A-equal psi images and equal theta images"""
    engine_m, engine_a = m_engine(sol), a_engine(sol)
    checked = 0
    for degree in range(1, max_degree + 1):
        for cid in range(engine_m.count(degree)):
            reference = None
            for word in engine_m.members(degree, cid):
                pair = psi_theta(sol, word)
                image = (engine_a.class_id(pair.a_word), pair.theta)
                checked += 1
                if reference is None:
                    reference = (word, image)
                elif image != reference[1]:
                    logger.error("cocycle is not well defined", context={'solution': sol.label})
                    raise CocycleViolation(
                        f"{word_label(reference[0])} = {word_label(word)} in M but their images differ",
                        witness=(reference[0], word),
                    )
    return {'max_degree': max_degree, 'words_checked': checked, 'violations': 0}


def check_phi_well_defined(sol: Solution, max_degree: int) -> dict:
    """phi is constant on A-classes"""
    engine_a = a_engine(sol)
    checked = 0
    for degree in range(1, max_degree + 1):
        for cid in range(engine_a.count(degree)):
            reference = None
            for word in engine_a.members(degree, cid):
                value = phi(sol, word)
                checked += 1
                if reference is None:
                    reference = (word, value)
                elif value != reference[1]:
                    raise PhiIllDefined(
                        f"phi differs on {word_label(reference[0])} and {word_label(word)}",
                        witness=(reference[0], word),
                    )
    return {'max_degree': max_degree, 'words_checked': checked, 'violations': 0}


# ---------------------------------------------------------------------------
# tau and the power factorization
# ---------------------------------------------------------------------------

def tau_data(sol: Solution) -> TauData:
    """tau(x) = lambda_x^-1(x) and the least p >= 1 with tau^(2p) = tau^p"""
    lambdas = sol.lambdas
    tau = tuple(lambdas[x].inverse(x) for x in range(sol.n))
    power = tau
    for p in itertools.count(1):
        if tuple(power[power[x]] for x in range(sol.n)) == power:
            return TauData(tau, p)
        power = tuple(tau[power[x]] for x in range(sol.n))


def check_power_factorization(sol: Solution, x: int, nmax: int) -> dict:
    """psi(x tau(x) ... tau^(k-1)(x)) = x^k in A with theta equal to phi(x^k), for k <= nmax"""
    tau = tau_data(sol).tau
    engine = a_engine(sol)
    orbit = [x]
    for k in range(1, nmax + 1):
        pair = psi_theta(sol, orbit)
        power = (x,) * k
        if not engine.equal(pair.a_word, power):
            raise FactorizationViolation(f"tau-factorization fails for {name(x)}^{k}", generator=x, k=k)
        if pair.theta != phi(sol, power):
            raise FactorizationViolation(f"theta of the tau-word differs from phi({name(x)}^{k})", generator=x, k=k)
        orbit.append(tau[orbit[-1]])
    return {'generator': name(x), 'nmax': nmax, 'verified': True}


# ---------------------------------------------------------------------------
# Central elements and the socle
# ---------------------------------------------------------------------------

def central_word(sol: Solution) -> Word:
    """z = x1^d ... xn^d"""
    d = sigma_system(sol).d
    return tuple(x for x in range(sol.n) for _ in range(d))


@lru_cache(maxsize=256)
def central_elements(sol: Solution, max_degree: int | None = None) -> CentralElements:
    system = sigma_system(sol)
    lambdas = sol.lambdas
    z = central_word(sol)
    identity = Permutation.identity(sol.n)

    g, k = identity, 0
    while True:
        g = _phi_state(lambdas, g, z)
        k += 1
        if g.is_identity:
            break
        if k >= system.m:
            raise BudgetExceeded("no power of z with trivial phi within |G| steps", bound=system.m, required=k + 1)
    w = psi_inverse(sol, z * k)
    if not psi_theta(sol, w).theta.is_identity:
        raise CocycleViolation("theta of the central element is not the identity", k=k)

    limit = Config.YBE_CENTRAL_MAX_DEGREE if max_degree is None else max_degree
    z_central = None
    if len(z) + 1 <= limit:
        engine = a_engine(sol)
        try:
            z_central = all(engine.equal(z + (x,), (x,) + z) for x in range(sol.n))
        except BudgetExceeded as e:
            logger.warning("centrality of z left unverified", context={'solution': sol.label, 'bound': e.bound})
    return CentralElements(z, k, w, z_central, limit)


def socle_test(sol: Solution, word: Sequence[int]) -> bool:
    """theta(w) = id and psi(w) commutes with every generator in A"""
    pair = psi_theta(sol, word)
    if not pair.theta.is_identity:
        return False
    engine = a_engine(sol)
    a = pair.a_word
    return all(engine.equal(a + (x,), (x,) + a) for x in range(sol.n))


def socle_exponent_check(sol: Solution, max_degree: int | None = None) -> dict:
    """x^(pq) lies in the socle for every generator; w T = T w on generators"""
    system = sigma_system(sol)
    p = tau_data(sol).p
    exponent = p * system.m * system.d
    limit = Config.YBE_CENTRAL_MAX_DEGREE if max_degree is None else max_degree
    if exponent + 1 > limit:
        raise BudgetExceeded(f"socle check needs degree {exponent + 1}", bound=limit, required=exponent + 1, verified=[])

    socle_words = {x: psi_inverse(sol, (x,) * exponent) for x in range(sol.n)}
    verified = []
    results = []
    try:
        for x in range(sol.n):
            in_socle = socle_test(sol, socle_words[x])
            results.append({'generator': name(x), 'in_socle': in_socle})
            verified.append(x)
    except BudgetExceeded as e:
        raise BudgetExceeded(e.message, bound=e.bound, required=e.required, verified=verified) from e

    engine = m_engine(sol)
    lambdas = sol.lambdas
    failures = []
    for y, x in itertools.product(range(sol.n), repeat=2):
        moved = lambdas[y](x)
        if not engine.equal((y,) + socle_words[x], socle_words[moved] + (y,)):
            failures.append([name(y), name(x)])
    return {
        'pq': exponent,
        'generators': results,
        'all_in_socle': all(r['in_socle'] for r in results),
        'normality_failures': failures,
    }


# ---------------------------------------------------------------------------
# Exponents
# ---------------------------------------------------------------------------

def _phi_period(lambdas, identity, word, cap) -> int | None:
    g = identity
    for t in range(1, cap + 1):
        g = _phi_state(lambdas, g, word)
        if g.is_identity:
            return t
    return None


def phi_exponent_bounded(sol: Solution, cap: int, sample_degree: int = 2) -> PhiExponent | None:
    """Least t <= cap with phi(a^t) = id on all generators and all words up to sample_degree"""
    lambdas = sol.lambdas
    identity = Permutation.identity(sol.n)
    generator_periods = []
    for x in range(sol.n):
        period = _phi_period(lambdas, identity, (x,), cap)
        if period is None:
            return None
        generator_periods.append(period)
    t = reduce(math.lcm, generator_periods, 1)
    sampled = 0
    for degree in range(2, sample_degree + 1):
        for word in itertools.product(range(sol.n), repeat=degree):
            period = _phi_period(lambdas, identity, word, cap)
            sampled += 1
            if period is None:
                return None
            t = math.lcm(t, period)
    if t > cap:
        return None
    return PhiExponent(t, tuple(generator_periods), sampled, sample_degree)


def structure_constants(sol: Solution, cap: int = 1000) -> StructureConstants:
    system = sigma_system(sol)
    p = tau_data(sol).p
    return StructureConstants(system.d, system.m, p, system.m * system.d, phi_exponent_bounded(sol, cap), cap)


# ---------------------------------------------------------------------------
# Cancellative congruences
# ---------------------------------------------------------------------------

def eta_test(sol: Solution, kind: str, w1: Sequence[int], w2: Sequence[int], i_max: int) -> EtaResult:
    """Bounded test of (w1, w2) in eta_A (multiply by z^i) or eta_M (theta, then w^i)"""
    w1, w2 = tuple(w1), tuple(w2)
    if len(w1) != len(w2):
        raise MalformedTable("eta tests compare words of the same degree", degrees=(len(w1), len(w2)))
    if kind == KIND_A:
        engine, central = a_engine(sol), central_word(sol)
    elif kind == KIND_M:
        if psi_theta(sol, w1).theta != psi_theta(sol, w2).theta:
            return EtaResult(False, None, i_max, True)
        engine, central = m_engine(sol), central_elements(sol).w
    else:
        raise MalformedTable(f"unknown presentation kind {kind!r}")

    degree = len(w1)
    c1, c2 = engine.class_id(w1), engine.class_id(w2)
    if c1 == c2:
        return EtaResult(True, 1, i_max, True)
    for i in range(1, i_max + 1):
        c1 = engine.extend_class(degree, c1, central)
        c2 = engine.extend_class(degree, c2, central)
        degree += len(central)
        if c1 == c2:
            return EtaResult(True, i, i_max, True)
    return EtaResult(False, None, i_max, False)
