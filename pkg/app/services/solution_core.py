"""
Validation, inversion, sigma/rack data, isomorphism and enumeration of
finite set-theoretic solutions of the Yang-Baxter equation.
"""

from __future__ import annotations

import itertools
from enum import Enum
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from app.exceptions import (
    InternalInconsistency, LemmaViolation, MalformedTable, NotBijective, NotLeftNonDegenerate,
    SigFormulaMismatch, SizeMismatch, TooLarge,
)
from app.models.permutation import Permutation, exponent, generate_group
from app.models.presentation import KIND_A, KIND_M, Presentation
from app.models.solution import InverseSolution, PropertyFlags, SigmaSystem, Solution, name
from app.services.logger import solution_logger as logger


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _component_equations(sol: Solution):
    """First triple violating YB1, YB2 or the rho-equation, else None"""
    lam = lambda x, y: sol.table[x][y][0]
    rho = lambda y, x: sol.table[x][y][1]
    for x, y, z in itertools.product(range(sol.n), repeat=3):
        if lam(x, lam(y, z)) != lam(lam(x, y), lam(rho(y, x), z)):
            return ('YB1', x, y, z)
        if lam(rho(lam(y, z), x), rho(z, y)) != rho(lam(rho(y, x), z), lam(x, y)):
            return ('YB2', x, y, z)
        if rho(z, rho(y, x)) != rho(rho(z, y), rho(lam(y, z), x)):
            return ('rho', x, y, z)
    return None


def _braid_identity(sol: Solution):
    """First triple where (r x id)(id x r)(r x id) != (id x r)(r x id)(id x r), else None"""
    def r12(t):
        u, v = sol.table[t[0]][t[1]]
        return (u, v, t[2])

    def r23(t):
        u, v = sol.table[t[1]][t[2]]
        return (t[0], u, v)

    for t in itertools.product(range(sol.n), repeat=3):
        if r12(r23(r12(t))) != r23(r12(r23(t))):
            return t
    return None


def validate_ybe(sol: Solution) -> PropertyFlags:
    """All property flags; the YBE is checked componentwise and as the braid identity"""
    component_failure = _component_equations(sol)
    braid_failure = _braid_identity(sol)
    if (component_failure is None) != (braid_failure is None):
        logger.error("YBE checks disagree", context={'components': component_failure, 'braid': braid_failure})
        raise InternalInconsistency(
            "componentwise and braid checks of the Yang-Baxter equation disagree",
            components=component_failure, braid=braid_failure,
        )
    flags = PropertyFlags(
        is_ybe=component_failure is None,
        left_nd=sol.left_nd,
        right_nd=sol.right_nd,
        bijective=sol.bijective,
        involutive=sol.involutive,
        square_free=all(sol.table[x][x] == (x, x) for x in range(sol.n)),
    )
    logger.debug("validated solution", context={'label': sol.label, **flags.to_dict()})
    return flags


def invert(sol: Solution) -> InverseSolution:
    if not sol.bijective:
        raise NotBijective("r is not a bijection of X x X", solution=sol.label)
    rows = [[(0, 0)] * sol.n for _ in range(sol.n)]
    for x, row in enumerate(sol.table):
        for y, (u, v) in enumerate(row):
            rows[u][v] = (x, y)
    table = tuple(tuple(row) for row in rows)
    lambda_hat = tuple(tuple(table[x][y][0] for y in range(sol.n)) for x in range(sol.n))
    rho_hat = tuple(tuple(table[x][y][1] for x in range(sol.n)) for y in range(sol.n))
    return InverseSolution(sol.n, table, lambda_hat, rho_hat)


# ---------------------------------------------------------------------------
# sigma and the rack solution
# ---------------------------------------------------------------------------

@lru_cache(maxsize=512)
def sigma_system(sol: Solution) -> SigmaSystem:
    """sigma_z(x) = lambda_z(rho_{lambda_x^-1(z)}(x)) = lambda_z(lambda_hat_z^-1(x))"""
    if not sol.bijective:
        raise NotBijective("sigma needs a bijective solution", solution=sol.label)
    lambdas = sol.lambdas
    inverse = invert(sol)
    if not inverse.left_nd:
        raise SigFormulaMismatch("r^-1 is not left non-degenerate", solution=sol.label)
    lambda_hat = [Permutation(row) for row in inverse.lambda_hat]
    n = sol.n

    sigma = []
    for z in range(n):
        via_rho = tuple(lambdas[z](sol.table[x][lambdas[x].inverse(z)][1]) for x in range(n))
        via_hat = tuple(lambdas[z](lambda_hat[z].inverse(x)) for x in range(n))
        if via_rho != via_hat:
            x = next(i for i in range(n) if via_rho[i] != via_hat[i])
            raise SigFormulaMismatch(f"the two sigma formulas differ at z={name(z)}, x={name(x)}", z=z, x=x)
        permutation = Permutation.try_from(via_rho)
        if permutation is None:
            raise SigFormulaMismatch(f"sigma_{name(z)} is not a bijection", z=z)
        sigma.append(permutation)

    for x, y in itertools.product(range(n), repeat=2):
        if lambdas[x] * sigma[y] != sigma[lambdas[x](y)] * lambdas[x]:
            raise LemmaViolation("lambda_x o sigma_y != sigma_{lambda_x(y)} o lambda_x", x=x, y=y)

    sigma_group = generate_group(sigma, n)
    lambda_group = generate_group(lambdas, n)
    return SigmaSystem(tuple(sigma), sigma_group, lambda_group, exponent(sigma_group), len(lambda_group))


def a_presentation(sol: Solution) -> Presentation:
    """A(X, r): xz = z sigma_z(x)"""
    sigma = sigma_system(sol).sigma
    return Presentation.from_rewrite(KIND_A, sol.n, lambda x, z: (z, sigma[z](x)), label=sol.label)


def m_presentation(sol: Solution) -> Presentation:
    """M(X, r): xy = lambda_x(y) rho_y(x)"""
    if not sol.bijective:
        raise NotBijective("the structure monoid presentation needs a bijective solution", solution=sol.label)
    return Presentation.from_rewrite(KIND_M, sol.n, lambda x, y: sol.table[x][y], label=sol.label)


def rack_solution(sol: Solution) -> Solution:
    """s(x, y) = (y, sigma_y(x))"""
    sigma = sigma_system(sol).sigma
    rack = Solution.from_rows([[(y, sigma[y](x)) for y in range(sol.n)] for x in range(sol.n)],
                              label=f'{sol.label}-rack' if sol.label else 'rack')
    if not validate_ybe(rack).is_ybe:
        raise LemmaViolation("the rack solution does not satisfy the Yang-Baxter equation", solution=sol.label)
    if a_presentation(sol).relations() != m_presentation(rack).relations():
        raise InternalInconsistency("A(X,r) and M(X,s) have different defining relations", solution=sol.label)
    return rack


def check_rack_axioms(system: SigmaSystem) -> dict:
    """Self-distributivity and bijectivity of the translations sigma_y"""
    n = system.n
    sigma = system.sigma
    non_bijective = [y for y in range(n) if len(sigma[y].image(range(n))) != n]
    witness = None
    if not non_bijective:
        for x, y in itertools.product(range(n), repeat=2):
            if sigma[x] * sigma[y] != sigma[sigma[x](y)] * sigma[x]:
                witness = [x, y]
                break
    non_idempotent = [y for y in range(n) if sigma[y](y) != y]
    return {
        'rack': witness is None and not non_bijective,
        'self_distributive': None if non_bijective else witness is None,
        'bijective_translations': not non_bijective,
        'non_bijective_translations': non_bijective,
        'quandle': not non_idempotent,
        'trivial': all(sigma[y](x) == x for x in range(n) for y in range(n)),
        'self_distributivity_witness': witness,
        'non_idempotent': non_idempotent,
    }


def check_cyclic_condition(sol: Solution) -> dict:
    """
    If every x has a unique y with r(x, y) = (x, y), check that r(x, y) = (u, v),
    r(y, y') = (y, y') and r(u, u') = (u, u') force r(v, y') = (u', z) for some z.
    """
    partners = []
    for x in range(sol.n):
        fixed = [y for y in range(sol.n) if sol.table[x][y] == (x, y)]
        if len(fixed) != 1:
            return {'status': 'hypothesis_not_met', 'witness': {'x': x, 'fixed_partners': fixed}}
        partners.append(fixed[0])
    for x, y in itertools.product(range(sol.n), repeat=2):
        u, v = sol.table[x][y]
        y_prime, u_prime = partners[y], partners[u]
        if sol.table[v][y_prime][0] != u_prime:
            return {'status': 'fails', 'witness': {'x': x, 'y': y, "y'": y_prime, 'u': u, 'v': v, "u'": u_prime}}
    return {'status': 'holds', 'witness': None}


# ---------------------------------------------------------------------------
# Isomorphism and canonical forms
# ---------------------------------------------------------------------------

def is_isomorphism(f: Permutation, sol1: Solution, sol2: Solution) -> bool:
    """(f x f) o r1 == r2 o (f x f)"""
    for x, row in enumerate(sol1.table):
        for y, (u, v) in enumerate(row):
            if sol2.table[f(x)][f(y)] != (f(u), f(v)):
                return False
    return True


def isomorphic(sol1: Solution, sol2: Solution) -> Permutation | None:
    """Lexicographically least isomorphism sol1 -> sol2, or None"""
    if sol1.n != sol2.n:
        raise SizeMismatch(f"solutions have different sizes {sol1.n} and {sol2.n}", sizes=(sol1.n, sol2.n))
    for images in itertools.permutations(range(sol1.n)):
        f = Permutation(images)
        if is_isomorphism(f, sol1, sol2):
            return f
    return None


def canonical_form(sol: Solution) -> Solution:
    """The lexicographically least relabelling of sol"""
    best = min((sol.relabel(Permutation(images)) for images in itertools.permutations(range(sol.n))),
               key=lambda candidate: candidate.key)
    return Solution(best.n, best.table, sol.label)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

class EnumerationFilter(str, Enum):
    ALL = 'all'
    INVOLUTIVE = 'involutive'
    RACK_FORM = 'rack-form'
    LAMBDA = 'lambda'


def _quick_ybe(lam: Sequence[Sequence[int]], rho: Sequence[Sequence[int]], n: int) -> bool:
    """Component equations on raw families, rho indexed as rho[y][x]"""
    for x in range(n):
        lx = lam[x]
        for y in range(n):
            ly, ry = lam[y], rho[y]
            a, b = lx[y], ry[x]
            la, lb = lam[a], lam[b]
            for z in range(n):
                if lx[ly[z]] != la[lb[z]]:
                    return False
                c = ly[z]
                if lam[rho[c][x]][rho[z][y]] != rho[lb[z]][a]:
                    return False
                if rho[z][b] != rho[rho[z][y]][rho[c][x]]:
                    return False
    return True


def _rack_identity(sig: Sequence[Sequence[int]], n: int) -> bool:
    for x in range(n):
        sx = sig[x]
        for y in range(n):
            sy, sxy = sig[y], sig[sx[y]]
            for t in range(n):
                if sx[sy[t]] != sxy[sx[t]]:
                    return False
    return True


def _candidates(n: int, mode: EnumerationFilter, lambda_family):
    """(lambda rows, rho rows) pairs that pass the quick YBE screen"""
    perms = list(itertools.permutations(range(n)))
    if mode == EnumerationFilter.ALL:
        for lam in itertools.product(perms, repeat=n):
            for rho in itertools.product(perms, repeat=n):
                if _quick_ybe(lam, rho, n):
                    yield lam, rho
    elif mode == EnumerationFilter.INVOLUTIVE:
        for lam in itertools.product(perms, repeat=n):
            inverse = [Permutation(row).inverse.images for row in lam]
            rho = tuple(tuple(inverse[lam[x][y]][x] for x in range(n)) for y in range(n))
            if all(len(set(row)) == n for row in rho) and _quick_ybe(lam, rho, n):
                yield lam, rho
    elif mode == EnumerationFilter.RACK_FORM:
        identity = tuple(range(n))
        lam = (identity,) * n
        for sig in itertools.product(perms, repeat=n):
            if _rack_identity(sig, n):
                yield lam, sig
    else:
        lam = tuple(tuple(row) for row in lambda_family)
        for rho in itertools.product(perms, repeat=n):
            if _quick_ybe(lam, rho, n):
                yield lam, rho


def enumerate_solutions(n: int, mode: EnumerationFilter | str = EnumerationFilter.ALL,
                        require: Mapping[str, bool] | None = None,
                        lambda_family: Sequence[Sequence[int]] | None = None) -> Iterator[Solution]:
    """One canonical representative per isomorphism class, sorted by canonical key"""
    mode = EnumerationFilter(mode)
    if mode == EnumerationFilter.LAMBDA:
        if lambda_family is None:
            raise MalformedTable("the lambda filter needs a lambda family")
        if len(lambda_family) != n or any(Permutation.try_from(row) is None for row in lambda_family):
            raise NotLeftNonDegenerate("the lambda family must consist of n permutations", n=n)
    if n < 1:
        raise MalformedTable("n must be positive", n=n)
    if n >= 5 or (n == 4 and mode == EnumerationFilter.ALL):
        raise TooLarge(f"enumeration with filter {mode.value!r} is not supported for n={n}", n=n, filter=mode.value)

    require = dict(require or {})
    classes = {}
    for lam, rho in _candidates(n, mode, lambda_family):
        sol = Solution.from_maps(lam, rho)
        flags = validate_ybe(sol)
        if not flags.is_ybe:
            continue
        if mode == EnumerationFilter.INVOLUTIVE and not flags.involutive:
            continue
        if any(getattr(flags, key) != value for key, value in require.items()):
            continue
        canonical = canonical_form(sol)
        classes.setdefault(canonical.key, canonical)

    logger.info("enumerated solutions", context={'n': n, 'filter': mode.value, 'classes': len(classes)})
    for index, key in enumerate(sorted(classes)):
        found = classes[key]
        yield Solution(found.n, found.table, f'n{n}-{mode.value}-{index:04d}')
