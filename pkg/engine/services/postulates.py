"""
📋 Postulate Checking Service
Executable postulates for contraction, severe withdrawal, revision and iterated
revision, plus a seeded fuzzer that shrinks the failures it finds
"""

import logging
import random
from fractions import Fraction
from typing import Callable, Dict, Iterator, NamedTuple, Optional, Tuple

from config.settings import engine_config
from models.distributions import ProbDist
from models.logic import Alphabet, Formula, WorldSet
from models.postulates import FAMILY_POSTULATES, PostulateReport, PostulateVerdict, Witness
from services.belief_change import contraction_mask, full_meet_mask, revision_mask, severe_mask
from services.errors import EnumerationCapError, InconsistentBeliefError, UnknownOperatorError
from services.file_formats import dump_distribution_text, load_distribution
from services.logic import formula_of_worlds, models_mask
from services.parser import parse
from services.probability import p_entails_mask, p_equiv_mask

logger = logging.getLogger(__name__)

MaskOperator = Callable[[int, int, ProbDist], int]

OPERATORS: Dict[str, MaskOperator] = {
    'km-contraction': contraction_mask,
    'full-meet': full_meet_mask,
    'severe-withdrawal': severe_mask,
    'km-revision': revision_mask,
}

DEFAULT_OPERATORS: Dict[str, str] = {
    'contraction': 'km-contraction',
    'severe': 'severe-withdrawal',
    'revision': 'km-revision',
    'iterated': 'km-revision',
}

FUZZ_LETTERS = ('a', 'b', 'c', 'd')


def get_operator(name: str) -> MaskOperator:
    try:
        return OPERATORS[name]
    except KeyError:
        raise UnknownOperatorError(f"Unknown operator '{name}'; expected one of {', '.join(sorted(OPERATORS))}")


def zero_mass_variant(mask: int, dist: ProbDist) -> int:
    """``mask`` with every zero-mass world toggled; P-equivalent to ``mask`` by construction"""
    return mask ^ (dist.alphabet.full_mask & ~dist.support_mask)


# ---------------------------------------------------------------------------
# Postulate evaluation on model masks. ``extra`` is beta for the single-step
# families and psi for the iterated one.
# ---------------------------------------------------------------------------

def _contraction(op: MaskOperator, dist: ProbDist, phi: int, alpha: int, beta: int) -> Dict[str, bool]:
    s = dist.support_mask
    c = op(phi, alpha, dist)
    c_ab = op(phi, alpha & beta, dist)
    c_b = op(phi, beta, dist)
    tautology = s & ~alpha == 0
    return {
        'K1': p_entails_mask(phi, c, s),
        'K2': p_entails_mask(phi, alpha, s) or p_equiv_mask(c, phi, s),
        'K3': tautology or not p_entails_mask(c, alpha, s),
        'K4': p_equiv_mask(c, op(phi, zero_mass_variant(alpha, dist), dist), s),
        'K5': p_entails_mask(c & alpha, phi, s),
        'K6': p_entails_mask(c_ab, c | c_b, s),
        'K7': p_entails_mask(c_ab, alpha, s) or p_entails_mask(c, c_ab, s),
    }


def _severe(op: MaskOperator, dist: ProbDist, phi: int, alpha: int, beta: int) -> Dict[str, bool]:
    s = dist.support_mask
    w = op(phi, alpha, dist)
    w_ab = op(phi, alpha & beta, dist)
    tautology = s & ~alpha == 0
    vacuous = tautology or not p_entails_mask(phi, alpha, s)
    return {
        'W1': p_entails_mask(phi, w, s),
        'W2': not vacuous or p_equiv_mask(w, phi, s),
        'W3': tautology or not p_entails_mask(w, alpha, s),
        'W4': p_equiv_mask(w, op(phi, zero_mass_variant(alpha, dist), dist), s),
        'W6a': tautology or p_entails_mask(w_ab, w, s),
        'W7': p_entails_mask(w_ab, alpha, s) or p_entails_mask(w, w_ab, s),
    }


def _revision(op: MaskOperator, dist: ProbDist, phi: int, alpha: int, beta: int) -> Dict[str, bool]:
    s = dist.support_mask
    full = dist.alphabet.full_mask
    r = op(phi, alpha, dist)
    r_ab = op(phi, alpha & beta, dist)
    return {
        'R1': p_entails_mask(phi & alpha, r, s),
        'R2': p_entails_mask(phi, full & ~alpha, s) or p_equiv_mask(r, phi & alpha, s),
        'R3': p_entails_mask(r, alpha, s),
        'R4': p_equiv_mask(r, op(phi, zero_mass_variant(alpha, dist), dist), s),
        'R5': alpha & s == 0 or r & s != 0,
        'R6': p_entails_mask(r & beta, r_ab, s),
        'R7': p_entails_mask(r, full & ~beta, s) or p_entails_mask(r_ab, r & beta, s),
    }


def _iterated(op: MaskOperator, dist: ProbDist, phi: int, alpha: int, psi: int) -> Dict[str, bool]:
    s = dist.support_mask
    full = dist.alphabet.full_mask
    twice = op(op(phi, alpha, dist), psi, dist)
    once = op(phi, psi, dist)
    not_alpha = full & ~alpha
    return {
        'C1': not p_entails_mask(psi, alpha, s) or p_equiv_mask(twice, once, s),
        'C2': not p_entails_mask(psi, not_alpha, s) or p_equiv_mask(twice, once, s),
        'C3': not p_entails_mask(once, alpha, s) or p_entails_mask(twice, alpha, s),
        'C4': p_entails_mask(once, not_alpha, s) or not p_entails_mask(twice, not_alpha, s),
    }


EVALUATORS = {
    'contraction': _contraction,
    'severe': _severe,
    'revision': _revision,
    'iterated': _iterated,
}


def evaluate(family: str, operator: str, dist: ProbDist, phi: int, alpha: int, extra: int) -> Dict[str, bool]:
    """Postulate -> holds, for one instance given as model masks"""
    return EVALUATORS[family](get_operator(operator), dist, phi, alpha, extra)


# ---------------------------------------------------------------------------
# Formula-level checks
# ---------------------------------------------------------------------------

def _single_report(family: str, operator: str, verdicts: Dict[str, bool],
                   witness: Callable[[str], Witness]) -> PostulateReport:
    return PostulateReport(
        family=family,
        operator=operator,
        cases=1,
        verdicts={
            key: PostulateVerdict(postulate=key, checked=1, failed=0 if holds else 1,
                                  witness=None if holds else witness(key))
            for key, holds in sorted(verdicts.items())
        },
    )


def check_family(family: str, operator: Optional[str], phi: Formula, alpha: Formula,
                 extra: Formula, dist: ProbDist) -> PostulateReport:
    operator = operator or DEFAULT_OPERATORS[family]
    phi_mask = models_mask(phi, dist.alphabet)
    if phi_mask & dist.support_mask == 0:
        raise InconsistentBeliefError(f"'{phi.render()}' has no possible model under the distribution")
    verdicts = evaluate(family, operator, dist, phi_mask,
                        models_mask(alpha, dist.alphabet), models_mask(extra, dist.alphabet))
    text = dump_distribution_text(dist)
    extra_field = 'psi' if family == 'iterated' else 'beta'

    def witness(postulate: str) -> Witness:
        return Witness(family=family, operator=operator, postulate=postulate, distribution=text,
                       phi=phi.render(), alpha=alpha.render(), **{extra_field: extra.render()})

    report = _single_report(family, operator, verdicts, witness)
    for verdict in report.failures():
        logger.warning(f"⚠️ {operator} violates {verdict.postulate} ({verdict.name})")
    return report


def check_contraction(op: Optional[str], phi: Formula, alpha: Formula, beta: Formula,
                      dist: ProbDist) -> PostulateReport:
    return check_family('contraction', op, phi, alpha, beta, dist)


def check_severe(op: Optional[str], phi: Formula, alpha: Formula, beta: Formula,
                 dist: ProbDist) -> PostulateReport:
    return check_family('severe', op, phi, alpha, beta, dist)


def check_revision(op: Optional[str], phi: Formula, alpha: Formula, beta: Formula,
                   dist: ProbDist) -> PostulateReport:
    return check_family('revision', op, phi, alpha, beta, dist)


def check_iterated(op: Optional[str], phi: Formula, alpha: Formula, psi: Formula,
                   dist: ProbDist) -> PostulateReport:
    return check_family('iterated', op, phi, alpha, psi, dist)


def replay(witness: Witness) -> bool:
    """Re-evaluate the witnessed postulate from its text form; True when it holds"""
    dist = load_distribution(witness.distribution)
    alphabet = dist.alphabet
    extra_text = witness.psi if witness.family == 'iterated' else witness.beta
    masks = [
        models_mask(parse(text, alphabet), alphabet)
        for text in (witness.phi, witness.alpha, extra_text or 'true')
    ]
    return evaluate(witness.family, witness.operator, dist, *masks)[witness.postulate]


# ---------------------------------------------------------------------------
# Fuzzing
# ---------------------------------------------------------------------------

class Instance(NamedTuple):
    """Integer mass weights plus model masks for phi, alpha and beta/psi"""
    weights: Tuple[int, ...]
    phi: int
    alpha: int
    extra: int


def instance_dist(alphabet: Alphabet, weights: Tuple[int, ...]) -> ProbDist:
    total = sum(weights)
    return ProbDist(alphabet=alphabet, masses=tuple(Fraction(weight, total) for weight in weights))


def _support_of(weights: Tuple[int, ...]) -> int:
    return sum(1 << w for w, weight in enumerate(weights) if weight)


def _sample_mask(rng: random.Random, full: int, support: int) -> int:
    roll = rng.random()
    if roll < 0.05:
        return full
    if roll < 0.10:
        return 0
    if roll < 0.15:
        return support
    if roll < 0.20:
        return full & ~support
    return rng.getrandbits(full.bit_length())


def sample_instance(rng: random.Random, alphabet: Alphabet) -> Instance:
    count = alphabet.world_count
    weights = [rng.choice(engine_config.MASS_GRID) for _ in range(count)]
    if not any(weights):
        weights[rng.randrange(count)] = max(engine_config.MASS_GRID)
    support = _support_of(tuple(weights))
    full = alphabet.full_mask
    phi = rng.getrandbits(count)
    while phi & support == 0:
        phi = rng.getrandbits(count)
    return Instance(tuple(weights), phi, _sample_mask(rng, full, support), _sample_mask(rng, full, support))


def _simplifications(instance: Instance) -> Iterator[Instance]:
    """Smaller variants: drop a possible world, lower a weight to 1, drop zero-mass models"""
    weights = instance.weights
    support = _support_of(weights)
    if bin(support).count("1") > 1:
        for w, weight in enumerate(weights):
            if weight:
                clear = ~(1 << w)
                dropped = weights[:w] + (0,) + weights[w + 1:]
                yield Instance(dropped, instance.phi & clear, instance.alpha & clear, instance.extra & clear)
    for w, weight in enumerate(weights):
        if weight > 1:
            yield instance._replace(weights=weights[:w] + (1,) + weights[w + 1:])
    for field in ('phi', 'alpha', 'extra'):
        mask = getattr(instance, field)
        if mask & ~support:
            yield instance._replace(**{field: mask & support})


def shrink(instance: Instance, fails: Callable[[Instance], bool]) -> Instance:
    """Greedy shrinking: keep taking the first simplification that still fails"""
    for _ in range(engine_config.SHRINK_ROUNDS):
        for candidate in _simplifications(instance):
            if candidate.phi & _support_of(candidate.weights) and fails(candidate):
                instance = candidate
                break
        else:
            return instance
    return instance


def _witness(family: str, operator: str, postulate: str, alphabet: Alphabet, instance: Instance) -> Witness:
    def text(mask: int) -> str:
        return formula_of_worlds(WorldSet(alphabet=alphabet, mask=mask)).render()

    extra_field = 'psi' if family == 'iterated' else 'beta'
    return Witness(
        family=family,
        operator=operator,
        postulate=postulate,
        distribution=dump_distribution_text(instance_dist(alphabet, instance.weights)),
        phi=text(instance.phi),
        alpha=text(instance.alpha),
        **{extra_field: text(instance.extra)},
    )


def fuzz(family: str, n_letters: int, n_cases: Optional[int] = None, seed: Optional[int] = None,
         operator: Optional[str] = None) -> PostulateReport:
    """Seeded random postulate checking over small alphabets; failures carry shrunk witnesses"""
    if not 1 <= n_letters <= engine_config.FUZZ_MAX_LETTERS:
        raise EnumerationCapError(
            f"Fuzzing supports 1 to {engine_config.FUZZ_MAX_LETTERS} letters, got {n_letters}"
        )
    operator = operator or DEFAULT_OPERATORS[family]
    get_operator(operator)
    n_cases = engine_config.DEFAULT_FUZZ_CASES if n_cases is None else n_cases
    seed = engine_config.DEFAULT_FUZZ_SEED if seed is None else seed
    alphabet = Alphabet(letters=FUZZ_LETTERS[:n_letters])
    rng = random.Random(seed)

    checked = {key: 0 for key in FAMILY_POSTULATES[family]}
    failed = {key: 0 for key in FAMILY_POSTULATES[family]}
    witnesses: Dict[str, Witness] = {}

    for _ in range(n_cases):
        instance = sample_instance(rng, alphabet)
        verdicts = evaluate(family, operator, instance_dist(alphabet, instance.weights), *instance[1:])
        for key, holds in verdicts.items():
            checked[key] += 1
            if holds:
                continue
            failed[key] += 1

            def fails(candidate: Instance, key=key) -> bool:
                dist = instance_dist(alphabet, candidate.weights)
                return not evaluate(family, operator, dist, *candidate[1:])[key]

            witness = _witness(family, operator, key, alphabet, shrink(instance, fails))
            if key not in witnesses or witness.size_key() < witnesses[key].size_key():
                witnesses[key] = witness

    report = PostulateReport(
        family=family,
        operator=operator,
        cases=n_cases,
        verdicts={
            key: PostulateVerdict(postulate=key, checked=checked[key], failed=failed[key],
                                  witness=witnesses.get(key))
            for key in sorted(checked)
        },
    )
    failures = report.failures()
    if failures:
        logger.warning(
            f"⚠️ {operator}: {', '.join(v.postulate for v in failures)} failed on {n_letters} letters, seed {seed}"
        )
    else:
        logger.info(f"✅ {operator}: all {family} postulates held on {n_cases} cases, seed {seed}")
    return report
