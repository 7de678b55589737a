"""
📈 Probability Service
Formula probabilities, extension/marginalisation and the P-entailment relations
"""

import logging
from fractions import Fraction
from typing import List

from models.distributions import ProbDist
from models.logic import Alphabet, Formula, PossibleWorldSet, WorldSet
from services.errors import AlphabetError, AlphabetMismatchError, DistributionError
from services.logic import formula_of_worlds, models_mask, project_world

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Mask-level relations; every relation below is an exact subset test on
# possible worlds
# ---------------------------------------------------------------------------

def p_entails_mask(phi_mask: int, psi_mask: int, support: int) -> bool:
    """[phi]+ is contained in [psi]"""
    return phi_mask & support & ~psi_mask == 0


def p_equiv_mask(phi_mask: int, psi_mask: int, support: int) -> bool:
    return (phi_mask ^ psi_mask) & support == 0


# ---------------------------------------------------------------------------
# Formula-level API
# ---------------------------------------------------------------------------

def prob(phi: Formula, dist: ProbDist) -> Fraction:
    """Sum of the masses of the models of phi"""
    return dist.mass_of(models_mask(phi, dist.alphabet))


def prob_of_worlds(ws: WorldSet, dist: ProbDist) -> Fraction:
    if ws.alphabet != dist.alphabet:
        raise AlphabetMismatchError(f"World set over [{ws.alphabet}] but distribution over [{dist.alphabet}]")
    return dist.mass_of(ws.mask)


def conditional(alpha: Formula, phi: Formula, dist: ProbDist) -> Fraction:
    """P(alpha | phi); phi must have non-zero probability"""
    p_phi = prob(phi, dist)
    if p_phi == 0:
        raise DistributionError(f"P({phi.render()}) = 0, conditional probability is undefined")
    joint = dist.mass_of(models_mask(phi, dist.alphabet) & models_mask(alpha, dist.alphabet))
    return joint / p_phi


def support(dist: ProbDist) -> PossibleWorldSet:
    return PossibleWorldSet(alphabet=dist.alphabet, mask=dist.support_mask, support=dist.support_mask)


def possible_models(phi: Formula, dist: ProbDist) -> PossibleWorldSet:
    """[phi]+ = models of phi with non-zero mass"""
    mask = models_mask(phi, dist.alphabet) & dist.support_mask
    return PossibleWorldSet(alphabet=dist.alphabet, mask=mask, support=dist.support_mask)


def possible_worlds(mask: int, dist: ProbDist) -> PossibleWorldSet:
    return PossibleWorldSet(alphabet=dist.alphabet, mask=mask & dist.support_mask, support=dist.support_mask)


def p_max(phi: Formula, dist: ProbDist) -> Fraction:
    """Largest mass of a possible model of phi (0 when phi has none)"""
    return dist.max_mass_of(models_mask(phi, dist.alphabet))


def p_entails(phi: Formula, psi: Formula, dist: ProbDist) -> bool:
    return p_entails_mask(models_mask(phi, dist.alphabet), models_mask(psi, dist.alphabet), dist.support_mask)


def p_strict(phi: Formula, psi: Formula, dist: ProbDist) -> bool:
    return p_entails(phi, psi, dist) and not p_entails(psi, phi, dist)


def p_equiv(phi: Formula, psi: Formula, dist: ProbDist) -> bool:
    return p_equiv_mask(models_mask(phi, dist.alphabet), models_mask(psi, dist.alphabet), dist.support_mask)


def p_consistent(phi: Formula, dist: ProbDist) -> bool:
    return models_mask(phi, dist.alphabet) & dist.support_mask != 0


def p_independent(phi: Formula, psi: Formula, dist: ProbDist) -> bool:
    phi_mask = models_mask(phi, dist.alphabet)
    psi_mask = models_mask(psi, dist.alphabet)
    return dist.mass_of(phi_mask & psi_mask) == dist.mass_of(phi_mask) * dist.mass_of(psi_mask)


def p_zero_formula(dist: ProbDist) -> Formula:
    """Disjunction of the zero-mass worlds (false when the support is total)"""
    zero = WorldSet(alphabet=dist.alphabet, mask=dist.alphabet.full_mask & ~dist.support_mask)
    return formula_of_worlds(zero)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def uniform(alphabet: Alphabet) -> ProbDist:
    share = Fraction(1, alphabet.world_count)
    return ProbDist(alphabet=alphabet, masses=tuple(share for _ in alphabet.worlds()))


def extend(dist: ProbDist, to: Alphabet) -> ProbDist:
    """Split each world's mass uniformly over its extensions to ``to``"""
    if not dist.alphabet.issubset(to):
        raise AlphabetError(f"[{dist.alphabet}] is not contained in [{to}]")
    extra = to.size - dist.alphabet.size
    share = Fraction(1, 1 << extra)
    masses: List[Fraction] = [
        dist.mass(project_world(world, to, dist.alphabet)) * share for world in to.worlds()
    ]
    logger.debug(f"🔄 Extended distribution from [{dist.alphabet}] to [{to}] ({extra} new letters)")
    return ProbDist(alphabet=to, masses=tuple(masses))


def marginalize(dist: ProbDist, to: Alphabet) -> ProbDist:
    """Mass of each world over ``to`` is the total mass of its extensions"""
    if not to.issubset(dist.alphabet):
        raise AlphabetError(f"[{to}] is not contained in [{dist.alphabet}]")
    masses: List[Fraction] = [Fraction(0)] * to.world_count
    for world, mass in dist.items():
        masses[project_world(world, dist.alphabet, to)] += mass
    logger.debug(f"🔄 Marginalised distribution from [{dist.alphabet}] to [{to}]")
    return ProbDist(alphabet=to, masses=tuple(masses))
