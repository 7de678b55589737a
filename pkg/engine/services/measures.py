"""
🧮 Knowledge Measure Service
Shannon measure, base-b family, the uniform-case measure and s-entailment
"""

import itertools
import logging
import math
from fractions import Fraction
from typing import Iterator, List, Optional

from config.settings import engine_config
from models.distributions import ProbDist
from models.logic import Alphabet, Bottom, Formula, Top, WorldSet
from models.measures import KmValue, KnowledgeMeasureConfig, Substitution
from services.errors import AlphabetMismatchError, EnumerationCapError, SubstitutionError
from services.logic import conjoin, letters_alphabet, models_mask
from services.probability import p_independent, prob

logger = logging.getLogger(__name__)


def kappa_s(phi: Formula, dist: ProbDist) -> KmValue:
    """-log2 P(phi); inf when P(phi) = 0"""
    return KmValue(probability=prob(phi, dist), base=2.0)


def kappa_b(phi: Formula, dist: ProbDist, config: Optional[KnowledgeMeasureConfig] = None) -> KmValue:
    """-log_b P(phi), i.e. kappa_s / log2(b)"""
    config = config or KnowledgeMeasureConfig()
    return KmValue(probability=prob(phi, dist), base=config.base)


def kappa_of_probability(probability: Fraction, config: Optional[KnowledgeMeasureConfig] = None) -> KmValue:
    base = config.base if config else 2.0
    return KmValue(probability=probability, base=base)


def kappa_of_worlds(ws: WorldSet, dist: ProbDist) -> KmValue:
    if ws.alphabet != dist.alphabet:
        raise AlphabetMismatchError(f"World set over [{ws.alphabet}] but distribution over [{dist.alphabet}]")
    return KmValue(probability=dist.mass_of(ws.mask), base=2.0)


def kappa_h(phi: Formula) -> KmValue:
    """|letters(phi)| - log2 |models of phi over its own letters|"""
    if isinstance(phi, Top):
        return KmValue(probability=Fraction(1))
    if isinstance(phi, Bottom):
        return KmValue(probability=Fraction(0))
    own = letters_alphabet(phi)
    model_count = bin(models_mask(phi, own)).count("1")
    return KmValue(probability=Fraction(model_count, own.world_count))


# ---------------------------------------------------------------------------
# Substitutions and s-entailment
# ---------------------------------------------------------------------------

def substitute_world(world: int, targets, signs) -> int:
    """w theta: letter i's value moves to letter targets[i], flipped when signs[i]"""
    result = 0
    for i, target in enumerate(targets):
        if (world >> i & 1) ^ signs[i]:
            result |= 1 << target
    return result


def world_substitute(ws: WorldSet, theta: Substitution) -> WorldSet:
    if theta.alphabet != ws.alphabet:
        raise SubstitutionError(f"Substitution over [{theta.alphabet}] applied to worlds over [{ws.alphabet}]")
    targets, signs = theta.as_permutation()
    return WorldSet.from_worlds(ws.alphabet, (substitute_world(w, targets, signs) for w in ws.worlds()))


def substitutions(alphabet: Alphabet) -> Iterator[Substitution]:
    """All n! * 2^n substitutions"""
    n = alphabet.size
    for targets in itertools.permutations(range(n)):
        for signs in itertools.product((0, 1), repeat=n):
            yield Substitution.from_permutation(alphabet, targets, signs)


def find_substitution(phi: Formula, psi: Formula, alphabet: Alphabet) -> Optional[Substitution]:
    """A substitution mapping [phi] into [psi], or None"""
    if alphabet.size > engine_config.S_ENTAILMENT_CAP:
        raise EnumerationCapError(
            f"s-entailment searches n!*2^n substitutions; {alphabet.size} letters exceeds the cap of "
            f"{engine_config.S_ENTAILMENT_CAP}"
        )
    phi_mask = models_mask(phi, alphabet)
    psi_mask = models_mask(psi, alphabet)
    n = alphabet.size
    if phi_mask & ~psi_mask == 0:
        return Substitution.identity(alphabet)
    # substitutions permute worlds, so a larger model set can never fit
    if bin(phi_mask).count("1") > bin(psi_mask).count("1"):
        return None
    phi_worlds: List[int] = WorldSet(alphabet=alphabet, mask=phi_mask).worlds()
    for targets in itertools.permutations(range(n)):
        for signs in itertools.product((0, 1), repeat=n):
            if all(psi_mask >> substitute_world(w, targets, signs) & 1 for w in phi_worlds):
                logger.debug(f"🔍 s-entailment witness found for '{phi.render()}' into '{psi.render()}'")
                return Substitution.from_permutation(alphabet, targets, signs)
    return None


def s_entails(phi: Formula, psi: Formula, alphabet: Alphabet) -> bool:
    return find_substitution(phi, psi, alphabet) is not None


def s_strict(phi: Formula, psi: Formula, alphabet: Alphabet) -> bool:
    return s_entails(phi, psi, alphabet) and not s_entails(psi, phi, alphabet)


def s_equivalent(phi: Formula, psi: Formula, alphabet: Alphabet) -> bool:
    return s_entails(phi, psi, alphabet) and s_entails(psi, phi, alphabet)


# ---------------------------------------------------------------------------
# Measure axioms as executable checks
# ---------------------------------------------------------------------------

def check_km1(dist: ProbDist) -> bool:
    """kappa(true) = 0 and kappa(false) = inf"""
    return kappa_s(Top(), dist).value == 0 and kappa_s(Bottom(), dist).is_infinite


def check_km2(phi: Formula, psi: Formula, dist: ProbDist) -> bool:
    """P(phi) <= P(psi) implies kappa(psi) <= kappa(phi), strict likewise"""
    p_phi, p_psi = prob(phi, dist), prob(psi, dist)
    k_phi, k_psi = kappa_s(phi, dist), kappa_s(psi, dist)
    if p_phi <= p_psi and not k_psi.value <= k_phi.value:
        return False
    if p_phi < p_psi and not k_psi < k_phi:
        return False
    return True


def check_km3(phi: Formula, psi: Formula, dist: ProbDist, tolerance: Optional[float] = None) -> bool:
    """P-independent formulas have additive measures"""
    if not p_independent(phi, psi, dist):
        return True
    tolerance = engine_config.MEASURE_TOLERANCE if tolerance is None else tolerance
    joint = kappa_s(conjoin(phi, psi), dist).value
    separate = kappa_s(phi, dist).value + kappa_s(psi, dist).value
    if math.isinf(joint) or math.isinf(separate):
        return math.isinf(joint) and math.isinf(separate)
    return abs(joint - separate) <= tolerance
