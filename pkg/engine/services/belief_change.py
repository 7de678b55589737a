"""
🔀 Belief Change Service
KM-contraction, full-meet contraction, expansion, KM-revision, severe withdrawal
and sphere systems over one exact distribution
"""

import logging
import math
from fractions import Fraction
from typing import Dict, List, Sequence

from config.settings import engine_config
from models.change import Annulus, ChangeReport, RemainderCandidate, RemainderSet, SphereSystem
from models.distributions import ProbDist
from models.logic import Formula, PossibleWorldSet, WorldSet
from models.measures import KmValue
from services.errors import EnumerationCapError, InconsistentBeliefError, InvariantBreachError
from services.logic import conjoin, disjoin, formula_of_worlds, models_mask, negate
from services.probability import p_entails_mask, p_equiv_mask

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Operators on model masks. ``phi`` and ``alpha`` are bitmasks of models over
# the distribution's alphabet; results are masks of possible worlds.
# ---------------------------------------------------------------------------

def min_kappa_mask(mask: int, dist: ProbDist) -> int:
    """Every possible world of ``mask`` with maximal mass (the exact tie set)"""
    best = dist.max_mass_of(mask)
    if best == 0:
        return 0
    return dist.worlds_with_mass(mask, best)


def contraction_mask(phi: int, alpha: int, dist: ProbDist) -> int:
    support = dist.support_mask
    base = phi & support
    if p_entails_mask(phi, alpha, support):
        return base | min_kappa_mask(dist.alphabet.full_mask & ~alpha, dist)
    return base


def full_meet_mask(phi: int, alpha: int, dist: ProbDist) -> int:
    support = dist.support_mask
    base = phi & support
    if p_entails_mask(phi, alpha, support):
        return base | (support & ~alpha)
    return base


def sigma_mask(phi: int, alpha: int, dist: ProbDist) -> int:
    """[phi]+ plus every possible world outside it whose mass reaches p_max(~alpha)"""
    support = dist.support_mask
    base = phi & support
    threshold = dist.max_mass_of(dist.alphabet.full_mask & ~alpha)
    if threshold == 0:
        return base
    outside = support & ~base
    selected = base
    while outside:
        low = outside & -outside
        if dist.masses[low.bit_length() - 1] >= threshold:
            selected |= low
        outside ^= low
    return selected


def severe_mask(phi: int, alpha: int, dist: ProbDist) -> int:
    support = dist.support_mask
    base = phi & support
    tautological = support & ~alpha == 0
    if tautological or not p_entails_mask(phi, alpha, support):
        return base
    return sigma_mask(phi, alpha, dist)


def revision_mask(phi: int, alpha: int, dist: ProbDist) -> int:
    support = dist.support_mask
    if p_entails_mask(phi, dist.alphabet.full_mask & ~alpha, support):
        return min_kappa_mask(alpha, dist)
    return phi & alpha & support


def expansion_mask(phi: int, alpha: int, dist: ProbDist) -> int:
    return phi & alpha & dist.support_mask


# ---------------------------------------------------------------------------
# Enumeration oracles
# ---------------------------------------------------------------------------

def _check_cap(dist: ProbDist, cap: int, what: str) -> None:
    if dist.alphabet.size > cap:
        raise EnumerationCapError(
            f"{what} enumerates exponentially many candidates; {dist.alphabet.size} letters exceeds the cap of {cap}"
        )


def _submasks(mask: int):
    """Every subset of ``mask``, the empty set included"""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def possible_remainder_masks(phi: int, alpha: int, dist: ProbDist) -> List[int]:
    """Possible-world sets of the possible remainders, one per P-equivalence class"""
    _check_cap(dist, engine_config.REMAINDER_ENUMERATION_CAP, "Possible-remainder enumeration")
    support = dist.support_mask
    base = phi & support
    if support & ~alpha == 0:
        return [base]
    found = []
    for extra in _submasks(support & ~base):
        candidate = base | extra
        if not p_entails_mask(candidate, alpha, support):
            found.append(candidate)
    return sorted(found)


def remainder_masks_by_enumeration(phi: int, alpha: int, dist: ProbDist) -> List[int]:
    """Inclusion-minimal possible remainders, i.e. the <_P-minimal ones"""
    candidates = possible_remainder_masks(phi, alpha, dist)
    return [
        c for c in candidates
        if not any(other != c and other & ~c == 0 for other in candidates)
    ]


def contraction_mask_by_enumeration(phi: int, alpha: int, dist: ProbDist) -> int:
    """Union of the most probable remainders found by full enumeration"""
    remainders = remainder_masks_by_enumeration(phi, alpha, dist)
    best = max(dist.mass_of(mask) for mask in remainders)
    result = 0
    for mask in remainders:
        if dist.mass_of(mask) == best:
            result |= mask
    return result


def severe_mask_by_definition(phi: int, alpha: int, dist: ProbDist) -> int:
    """Conjunction of every beta with contract(phi, alpha & beta) <=_P beta, beta over all world sets"""
    _check_cap(dist, engine_config.SEVERE_DEFINITION_CAP, "The severe-withdrawal definition")
    support = dist.support_mask
    full = dist.alphabet.full_mask
    if support & ~alpha == 0:
        return phi & support
    kept = full
    contracted_by: Dict[int, int] = {}
    for beta in range(full + 1):
        narrowed = alpha & beta
        if narrowed not in contracted_by:
            contracted_by[narrowed] = contraction_mask(phi, narrowed, dist)
        contracted = contracted_by[narrowed]
        if p_entails_mask(contracted, beta, support):
            kept &= beta
    return kept & support


# ---------------------------------------------------------------------------
# Service
# ---------------------------------------------------------------------------

class BeliefChangeService:
    """Belief change operators bound to one distribution"""

    def __init__(self, dist: ProbDist):
        self.dist = dist
        self.alphabet = dist.alphabet

    # -- helpers ---------------------------------------------------------

    def _mask(self, formula: Formula) -> int:
        return models_mask(formula, self.alphabet)

    def _possible(self, mask: int) -> PossibleWorldSet:
        support = self.dist.support_mask
        return PossibleWorldSet(alphabet=self.alphabet, mask=mask & support, support=support)

    def _require_consistent(self, phi: Formula) -> int:
        mask = self._mask(phi)
        if mask & self.dist.support_mask == 0:
            raise InconsistentBeliefError(f"'{phi.render()}' has no possible model under the distribution")
        return mask

    def _kappa(self, mask: int) -> KmValue:
        return KmValue(probability=self.dist.mass_of(mask))

    def _report(self, operator: str, phi: Formula, alpha: Formula, phi_mask: int,
                result_mask: int, closed_form: float) -> ChangeReport:
        worlds = self._possible(result_mask)
        report = ChangeReport(
            operator=operator,
            phi=phi,
            alpha=alpha,
            result=formula_of_worlds(worlds.as_world_set()),
            result_worlds=worlds,
            kappa_before=self._kappa(phi_mask),
            kappa_after=self._kappa(result_mask),
            closed_form=closed_form,
        )
        if not report.agrees():
            raise InvariantBreachError(
                f"{operator}: definitional measure {report.measure} differs from closed form {closed_form}"
            )
        return report

    # -- remainders ------------------------------------------------------

    def possible_remainders(self, phi: Formula, alpha: Formula) -> List[Formula]:
        """Every possible remainder, as formulas over the possible worlds"""
        phi_mask = self._require_consistent(phi)
        masks = possible_remainder_masks(phi_mask, self._mask(alpha), self.dist)
        logger.debug(f"🔍 {len(masks)} possible remainders for '{phi.render()}' and '{alpha.render()}'")
        return [formula_of_worlds(WorldSet(alphabet=self.alphabet, mask=mask)) for mask in masks]

    def remainders(self, phi: Formula, alpha: Formula) -> RemainderSet:
        phi_mask = self._require_consistent(phi)
        alpha_mask = self._mask(alpha)
        support = self.dist.support_mask
        base = self._possible(phi_mask)
        if p_entails_mask(phi_mask, alpha_mask, support) and support & ~alpha_mask:
            p_phi = self.dist.mass_of(phi_mask)
            counter = WorldSet(alphabet=self.alphabet, mask=support & ~alpha_mask)
            candidates = tuple(
                RemainderCandidate(world=w, probability=p_phi + self.dist.mass(w))
                for w in counter.worlds()
            )
            return RemainderSet(base=base, candidates=candidates)
        return RemainderSet(base=base, collapsed=True)

    # -- contraction -----------------------------------------------------

    def contract(self, phi: Formula, alpha: Formula) -> ChangeReport:
        """[phi]+ plus the most probable possible counter-models of alpha"""
        phi_mask = self._require_consistent(phi)
        alpha_mask = self._mask(alpha)
        result = contraction_mask(phi_mask, alpha_mask, self.dist)
        p_phi = self.dist.mass_of(phi_mask)
        added = self.dist.mass_of(result & ~phi_mask)
        closed = math.log2(1 + added / p_phi) if added else 0.0
        logger.debug(f"➖ Contracted '{phi.render()}' by '{alpha.render()}'")
        return self._report('contraction', phi, alpha, phi_mask, result, closed)

    def contract_by_enumeration(self, phi: Formula, alpha: Formula) -> PossibleWorldSet:
        phi_mask = self._require_consistent(phi)
        return self._possible(contraction_mask_by_enumeration(phi_mask, self._mask(alpha), self.dist))

    def full_meet_contract(self, phi: Formula, alpha: Formula) -> ChangeReport:
        phi_mask = self._require_consistent(phi)
        result = full_meet_mask(phi_mask, self._mask(alpha), self.dist)
        p_phi = self.dist.mass_of(phi_mask)
        added = self.dist.mass_of(result & ~phi_mask)
        closed = math.log2(1 + added / p_phi) if added else 0.0
        return self._report('full-meet', phi, alpha, phi_mask, result, closed)

    def harper_contract(self, phi: Formula, alpha: Formula) -> PossibleWorldSet:
        """phi | (phi revised by ~alpha), checked against the direct contraction"""
        phi_mask = self._require_consistent(phi)
        revised = self.revise(phi, negate(alpha))
        harper = self._possible(self._mask(disjoin(phi, revised.result)))
        direct = contraction_mask(phi_mask, self._mask(alpha), self.dist)
        if not p_equiv_mask(harper.mask, direct, self.dist.support_mask):
            raise InvariantBreachError(
                f"Harper identity broken for '{phi.render()}' contracted by '{alpha.render()}': "
                f"{harper.render()} vs {self._possible(direct).render()}"
            )
        return harper

    # -- expansion and revision -----------------------------------------

    def expand(self, phi: Formula, alpha: Formula) -> ChangeReport:
        """phi & alpha with gain G = -log2 P(alpha | phi)"""
        phi_mask = self._require_consistent(phi)
        alpha_mask = self._mask(alpha)
        result = expansion_mask(phi_mask, alpha_mask, self.dist)
        conditional = self.dist.mass_of(phi_mask & alpha_mask) / self.dist.mass_of(phi_mask)
        closed = -math.log2(conditional) if conditional else math.inf
        if closed == 0:
            closed = 0.0
        return self._report('expansion', phi, alpha, phi_mask, result, closed)

    def revise(self, phi: Formula, alpha: Formula) -> ChangeReport:
        """Most probable alpha-worlds when phi P-entails ~alpha, else [phi]+ within alpha"""
        phi_mask = self._require_consistent(phi)
        alpha_mask = self._mask(alpha)
        support = self.dist.support_mask
        result = revision_mask(phi_mask, alpha_mask, self.dist)
        p_phi = self.dist.mass_of(phi_mask)
        if p_entails_mask(phi_mask, self.alphabet.full_mask & ~alpha_mask, support):
            p_min = self.dist.mass_of(result)
            closed = math.log2(p_phi / p_min) if p_min else math.inf
        else:
            conditional = self.dist.mass_of(phi_mask & alpha_mask) / p_phi
            closed = -math.log2(conditional)
        if result == 0:
            logger.info(f"⚠️ '{alpha.render()}' has no possible model; revision yields false")
        return self._report('revision', phi, alpha, phi_mask, result, closed)

    def levi_revise(self, phi: Formula, alpha: Formula) -> PossibleWorldSet:
        """Contract by ~alpha, then conjoin alpha; checked against the direct revision"""
        phi_mask = self._require_consistent(phi)
        contracted = self.contract(phi, negate(alpha))
        levi = self._possible(self._mask(conjoin(contracted.result, alpha)))
        direct = revision_mask(phi_mask, self._mask(alpha), self.dist)
        if levi.mask != direct:
            raise InvariantBreachError(
                f"Levi identity broken for '{phi.render()}' revised by '{alpha.render()}': "
                f"{levi.render()} vs {self._possible(direct).render()}"
            )
        return levi

    def revise_sequence(self, phi: Formula, alphas: Sequence[Formula]) -> List[ChangeReport]:
        """Iterated revision; every step starts from the previous result"""
        reports: List[ChangeReport] = []
        current = phi
        for alpha in alphas:
            report = self.revise(current, alpha)
            reports.append(report)
            current = report.result
        return reports

    # -- severe withdrawal and spheres ----------------------------------

    def sigma(self, phi: Formula, alpha: Formula) -> PossibleWorldSet:
        phi_mask = self._require_consistent(phi)
        return self._possible(sigma_mask(phi_mask, self._mask(alpha), self.dist))

    def severe_withdraw(self, phi: Formula, alpha: Formula) -> ChangeReport:
        phi_mask = self._require_consistent(phi)
        result = severe_mask(phi_mask, self._mask(alpha), self.dist)
        p_phi = self.dist.mass_of(phi_mask)
        added = self.dist.mass_of(result & ~phi_mask)
        closed = math.log2(1 + added / p_phi) if added else 0.0
        logger.debug(f"➖ Severely withdrew '{alpha.render()}' from '{phi.render()}'")
        return self._report('severe-withdrawal', phi, alpha, phi_mask, result, closed)

    def severe_withdraw_by_definition(self, phi: Formula, alpha: Formula) -> PossibleWorldSet:
        phi_mask = self._require_consistent(phi)
        return self._possible(severe_mask_by_definition(phi_mask, self._mask(alpha), self.dist))

    def spheres(self, phi: Formula) -> SphereSystem:
        phi_mask = self._require_consistent(phi)
        support = self.dist.support_mask
        center = self._possible(phi_mask)
        by_mass: Dict[Fraction, int] = {}
        for world, mass in self.dist.items():
            if not center.mask >> world & 1:
                by_mass[mass] = by_mass.get(mass, 0) | 1 << world
        annuli = tuple(
            Annulus(worlds=PossibleWorldSet(alphabet=self.alphabet, mask=mask, support=support), mass=mass)
            for mass, mask in sorted(by_mass.items(), key=lambda item: item[0], reverse=True)
        )
        return SphereSystem(center=center, annuli=annuli)


# ---------------------------------------------------------------------------
# Module-level API
# ---------------------------------------------------------------------------

def expand(phi: Formula, alpha: Formula) -> Formula:
    """Syntactic expansion phi & alpha"""
    return conjoin(phi, alpha)


def possible_remainders(phi: Formula, alpha: Formula, dist: ProbDist) -> List[Formula]:
    return BeliefChangeService(dist).possible_remainders(phi, alpha)


def remainders(phi: Formula, alpha: Formula, dist: ProbDist) -> RemainderSet:
    return BeliefChangeService(dist).remainders(phi, alpha)


def contract(phi: Formula, alpha: Formula, dist: ProbDist) -> ChangeReport:
    return BeliefChangeService(dist).contract(phi, alpha)


def full_meet_contract(phi: Formula, alpha: Formula, dist: ProbDist) -> ChangeReport:
    return BeliefChangeService(dist).full_meet_contract(phi, alpha)


def revise(phi: Formula, alpha: Formula, dist: ProbDist) -> ChangeReport:
    return BeliefChangeService(dist).revise(phi, alpha)


def severe_withdraw(phi: Formula, alpha: Formula, dist: ProbDist) -> ChangeReport:
    return BeliefChangeService(dist).severe_withdraw(phi, alpha)


def spheres(phi: Formula, dist: ProbDist) -> SphereSystem:
    return BeliefChangeService(dist).spheres(phi)


def sigma(phi: Formula, alpha: Formula, dist: ProbDist) -> PossibleWorldSet:
    return BeliefChangeService(dist).sigma(phi, alpha)


def contract_by_enumeration(phi: Formula, alpha: Formula, dist: ProbDist) -> PossibleWorldSet:
    return BeliefChangeService(dist).contract_by_enumeration(phi, alpha)


def severe_withdraw_by_definition(phi: Formula, alpha: Formula, dist: ProbDist) -> PossibleWorldSet:
    return BeliefChangeService(dist).severe_withdraw_by_definition(phi, alpha)


def levi_revise(phi: Formula, alpha: Formula, dist: ProbDist) -> PossibleWorldSet:
    return BeliefChangeService(dist).levi_revise(phi, alpha)


def harper_contract(phi: Formula, alpha: Formula, dist: ProbDist) -> PossibleWorldSet:
    return BeliefChangeService(dist).harper_contract(phi, alpha)


def revise_sequence(phi: Formula, alphas: Sequence[Formula], dist: ProbDist) -> List[ChangeReport]:
    return BeliefChangeService(dist).revise_sequence(phi, alphas)
