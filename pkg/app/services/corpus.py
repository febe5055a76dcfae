"""
Solution files, corpus directories, the analysis report and the named
invariant suites run by corpus sweeps.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from math import comb
from pathlib import Path
from typing import Callable, Iterable

from app.config import Config
from app.exceptions import BudgetExceeded, SolutionParseError, YBEError
from app.models.solution import Solution, subset_label, word_label
from app.services import cocycle, graded_algebra, solution_core, spectrum, word_engine
from app.services.logger import corpus_logger as logger

INDEX_FILE = 'index.json'


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

def parse_solution(text: str, label: str = '') -> Solution:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise SolutionParseError(f"invalid JSON: {e.msg}", location=f"line {e.lineno}, column {e.colno}") from e
    if not isinstance(payload, dict) or 'r' not in payload:
        raise SolutionParseError("expected an object with keys 'n' and 'r'", location='$')
    rows = payload['r']
    n = payload.get('n', len(rows) if isinstance(rows, list) else None)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SolutionParseError("'n' must be a positive integer", location='n')
    if not isinstance(rows, list) or len(rows) != n:
        raise SolutionParseError(f"'r' must be a list of {n} rows", location='r')
    for x, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise SolutionParseError(f"row {x} must be a list of {n} pairs", location=f'r[{x}]')
        for y, pair in enumerate(row):
            if (not isinstance(pair, list) or len(pair) != 2
                    or not all(isinstance(v, int) and not isinstance(v, bool) and 0 <= v < n for v in pair)):
                raise SolutionParseError(f"entry must be a pair of indices in 0..{n - 1}, got {pair!r}",
                                         location=f'r[{x}][{y}]')
    return Solution.from_rows(rows, label=label)


def load_solution(path) -> Solution:
    path = Path(path)
    return parse_solution(path.read_text(encoding='utf-8'), label=path.stem)


def save_solution(sol: Solution, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(sol.to_json(), sort_keys=True) + '\n', encoding='utf-8')
    return path


def fingerprint(sol: Solution) -> str:
    """Isomorphism-invariant: hash of the canonical relabelling"""
    canonical = solution_core.canonical_form(sol)
    return hashlib.sha256(canonical.dumps().encode('utf-8')).hexdigest()[:16]


def write_corpus(solutions: Iterable[Solution], out_dir, n: int, mode: str) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for sol in solutions:
        digest = fingerprint(sol)
        filename = f'{digest}.json'
        save_solution(sol, out / filename)
        entries.append({
            'file': filename,
            'fingerprint': digest,
            'label': sol.label,
            'flags': solution_core.validate_ybe(sol).to_dict(),
        })
    index = {'n': n, 'filter': mode, 'count': len(entries), 'solutions': entries}
    (out / INDEX_FILE).write_text(json.dumps(index, sort_keys=True, indent=2) + '\n', encoding='utf-8')
    logger.info("corpus written", context={'dir': str(out), 'count': len(entries)})
    return index


def load_corpus(corpus_dir) -> list[Solution]:
    root = Path(corpus_dir)
    index_path = root / INDEX_FILE
    if index_path.exists():
        index = json.loads(index_path.read_text(encoding='utf-8'))
        files = [root / entry['file'] for entry in index.get('solutions', [])]
    else:
        files = sorted(p for p in root.glob('*.json') if p.name != INDEX_FILE)
    return [load_solution(path) for path in files]


# ---------------------------------------------------------------------------
# Analysis report
# ---------------------------------------------------------------------------

def _stage(report: dict, stage: str, action: Callable[[], object]):
    try:
        report[stage] = action()
    except YBEError as e:
        logger.error(f"analysis stage {stage} failed", e, context={'solution': report.get('solution')})
        report['errors'].append({'stage': stage, 'error': type(e).__name__, 'message': e.message})
        if isinstance(e, BudgetExceeded):
            report['warnings'].append(f"{stage}: truncated by budget {e.bound}")
        report[stage] = None


def _spectrum_section(sol: Solution) -> dict:
    primes = spectrum.z_family(sol)
    return {
        'z_family': [{**prime.to_dict(), 's': spectrum.s_of_Z(sol, prime.Z).s} for prime in primes],
        'empty_set': spectrum.s_of_Z(sol).to_dict(),
        'gk_dimension': spectrum.gk_dimension(sol),
        'spec_M': [prime.to_dict() for prime in spectrum.spec_M(sol)],
        'note': spectrum.MINIMAL_PRIMES_NOTE,
    }


def _strata_section(sol: Solution, max_degree: int) -> dict:
    strata = word_engine.m_engine(sol).divisibility_strata(max_degree)
    summary = sorted(({'Y': subset_label(Y), 'classes': len(classes)} for Y, classes in strata.items()),
                     key=lambda entry: (len(entry['Y']), entry['Y']))
    return {'degree': max_degree, 'strata': summary}


def analyze(sol: Solution, max_degree: int | None = None, characteristics: Iterable[int] | None = None,
            i_max: int | None = None, k_max: int | None = None) -> dict:
    max_degree = Config.YBE_MAX_DEGREE if max_degree is None else max_degree
    characteristics = Config.characteristics() if characteristics is None else list(characteristics)
    i_max = Config.YBE_IMAX if i_max is None else i_max
    k_max = Config.YBE_KMAX if k_max is None else k_max

    flags = solution_core.validate_ybe(sol)
    report = {
        'solution': sol.label,
        'fingerprint': fingerprint(sol),
        'n': sol.n,
        'flags': flags.to_dict(),
        'bounds': {'max_degree': max_degree, 'i_max': i_max, 'k_max': k_max, 'word_budget': Config.word_budget()},
        'errors': [],
        'warnings': [],
    }
    if not (flags.is_ybe and flags.bijective and flags.left_nd):
        report['errors'].append({'stage': 'validate', 'error': 'InvalidSolution',
                                 'message': 'analysis needs a bijective left non-degenerate solution'})
        return report

    _stage(report, 'sigma', lambda: solution_core.sigma_system(sol).to_dict())
    _stage(report, 'rack_axioms', lambda: solution_core.check_rack_axioms(solution_core.sigma_system(sol)))
    _stage(report, 'rack_solution', lambda: solution_core.rack_solution(sol).to_json())
    _stage(report, 'cyclic_condition', lambda: solution_core.check_cyclic_condition(sol))
    _stage(report, 'constants', lambda: cocycle.structure_constants(sol).to_dict())
    _stage(report, 'central_elements', lambda: cocycle.central_elements(sol).to_dict())
    _stage(report, 'growth', lambda: {
        'A': word_engine.a_engine(sol).growth(max_degree),
        'M': word_engine.m_engine(sol).growth(max_degree),
        'max_degree': max_degree,
    })
    _stage(report, 'spectrum', lambda: _spectrum_section(sol))
    _stage(report, 'strata', lambda: _strata_section(sol, max_degree))
    _stage(report, 'strata_claim', lambda: word_engine.strata_claim_report(sol, max_degree))
    _stage(report, 'orbit_quotient', lambda: {
        'Z': [], 'dimensions': graded_algebra.orbit_quotient_dimension(sol, (), max_degree),
    })
    _stage(report, 'annihilator', lambda: graded_algebra.annihilator_compare(sol, 'A', min(2, max_degree), i_max))
    _stage(report, 'identity_suite', lambda: [
        entry for p in characteristics for entry in graded_algebra.builtin_example_checks(p, k_max)
    ])

    central = report.get('central_elements')
    if central and central['z_central'] is None:
        report['warnings'].append(f"centrality of z unverified beyond degree {central['checked_degree']}")
    return report


# ---------------------------------------------------------------------------
# Invariant suites
# ---------------------------------------------------------------------------

def _is_analysable(sol: Solution) -> bool:
    flags = solution_core.validate_ybe(sol)
    return flags.is_ybe and flags.bijective and flags.left_nd


def _binomial_growth(n: int, max_degree: int) -> list[int]:
    return [comb(degree + n - 1, n - 1) for degree in range(max_degree + 1)]


def suite_involutive_iff_gk_n(sol: Solution, options: dict) -> list[dict]:
    if not _is_analysable(sol):
        return []
    gk = spectrum.gk_dimension(sol)
    if (gk == sol.n) != sol.involutive:
        return [{'check': 'gk == n iff involutive', 'gk_dimension': gk, 'involutive': sol.involutive}]
    return []


def suite_growth_binomial(sol: Solution, options: dict) -> list[dict]:
    if not _is_analysable(sol) or not sol.involutive:
        return []
    max_degree = options.get('max_degree', 6)
    expected = _binomial_growth(sol.n, max_degree)
    failures = []
    for kind, engine in (('A', word_engine.a_engine(sol)), ('M', word_engine.m_engine(sol))):
        observed = engine.growth(max_degree)
        if observed != expected:
            failures.append({'check': f'{kind}-growth binomial', 'observed': observed, 'expected': expected})
    return failures


def suite_prop6_bijection(sol: Solution, options: dict) -> list[dict]:
    if not _is_analysable(sol):
        return []
    return spectrum.check_prime_bijection(sol)['failures']


def suite_cocycle_roundtrip(sol: Solution, options: dict) -> list[dict]:
    if not _is_analysable(sol):
        return []
    max_degree = options.get('cocycle_degree', 5)
    failures = []
    cocycle.check_cocycle_well_defined(sol, max_degree)
    cocycle.check_phi_well_defined(sol, max_degree)
    for degree in range(max_degree + 1):
        for word in itertools.product(range(sol.n), repeat=degree):
            pair = cocycle.psi_theta(sol, word)
            if cocycle.psi_inverse(sol, pair.a_word) != word:
                failures.append({'check': 'psi_inverse o psi = id', 'word': word_label(word)})
            if cocycle.psi_theta(sol, cocycle.psi_inverse(sol, word)).a_word != word:
                failures.append({'check': 'psi o psi_inverse = id', 'word': word_label(word)})
            if cocycle.phi(sol, pair.a_word) != pair.theta:
                failures.append({'check': 'phi o psi = theta', 'word': word_label(word)})
    return failures


def suite_spectrum(sol: Solution, options: dict) -> list[dict]:
    if not _is_analysable(sol):
        return []
    max_degree = options.get('strata_degree', 4)
    failures = []
    for prime in spectrum.z_family(sol):
        closed = spectrum.prime_closure(sol, prime)
        if prime.Z not in closed.zs:
            failures.append({'check': 'closure contains Q', 'Z': subset_label(prime.Z)})
        if closed.height != prime.height:
            failures.append({'check': 'height preserved', 'Z': subset_label(prime.Z)})
    for P in spectrum.spec_M(sol):
        for degree in range(1, max_degree + 1):
            spectrum.check_union_of_strata(sol, P, degree)
    spectrum.check_inclusion_rule(sol, max_degree)
    return failures


def suite_rack_solution(sol: Solution, options: dict) -> list[dict]:
    if not _is_analysable(sol):
        return []
    rack = solution_core.rack_solution(sol)
    flags = solution_core.validate_ybe(rack)
    if not (sol.bijective == flags.bijective == flags.right_nd):
        return [{'check': 'bijective iff rack bijective iff rack right non-degenerate',
                 'rack_flags': flags.to_dict()}]
    return []


def suite_cancellative_iff_involutive(sol: Solution, options: dict) -> list[dict]:
    """Involutive solutions show no cancellation witness up to the degree; the others show one"""
    if not _is_analysable(sol):
        return []
    max_degree = options.get('cancel_degree', 4)
    failures = []
    for kind, engine in (('A', word_engine.a_engine(sol)), ('M', word_engine.m_engine(sol))):
        witness = engine.cancellation_witness(max_degree)
        if sol.involutive and witness is not None:
            failures.append({'check': f'{kind} cancellative up to degree {max_degree}',
                             'witness': {**witness, 'words': [word_label(w) for w in witness['words']]}})
        elif not sol.involutive and witness is None:
            failures.append({'check': f'{kind} has a cancellation witness up to degree {max_degree}',
                             'involutive': False})
    return failures


SUITES: dict[str, Callable[[Solution, dict], list[dict]]] = {
    'involutive-iff-gk-n': suite_involutive_iff_gk_n,
    'growth-binomial': suite_growth_binomial,
    'prop6-bijection': suite_prop6_bijection,
    'cocycle-roundtrip': suite_cocycle_roundtrip,
    'spectrum': suite_spectrum,
    'rack-solution': suite_rack_solution,
    'cancellative-iff-involutive': suite_cancellative_iff_involutive,
}


def run_suite(name: str, sol: Solution, options: dict | None = None) -> dict:
    """One suite on one solution; errors become failures carrying their witness"""
    if name not in SUITES:
        raise YBEError(f"unknown suite {name!r}", known=sorted(SUITES))
    options = options or {}
    try:
        failures = SUITES[name](sol, options)
    except YBEError as e:
        logger.warning(f"suite {name} raised", context={'solution': sol.label, 'error': type(e).__name__})
        failures = [{'check': 'raised', **e.to_dict()}]
    return {'solution': sol.label, 'fingerprint': fingerprint(sol), 'failures': failures}


def aggregate(name: str, results: list[dict]) -> dict:
    failing = [r for r in results if r['failures']]
    return {
        'suite': name,
        'solutions': len(results),
        'passed': len(results) - len(failing),
        'failures': failing,
    }
