"""
🪜 Ranking Service
Faithful assignments, the ranking-to-distribution construction and ranked operators
"""

import logging
from fractions import Fraction
from typing import Callable, Iterable, List, Mapping, Union

from models.distributions import ProbDist
from models.logic import Alphabet, Formula, WorldSet
from models.rankings import FaithfulRanking, RepresentationDiscrepancy, RepresentationReport
from services.belief_change import contraction_mask, severe_mask
from services.errors import RankingError
from services.logic import check_letters, formula_of_worlds, models_mask

logger = logging.getLogger(__name__)

WorldPreorder = Callable[[int, int], bool]
Score = Union[int, Fraction]


def preorder_from_scores(scores: Mapping[int, Score]) -> WorldPreorder:
    """w <= w' iff score(w) <= score(w')"""
    def leq(left: int, right: int) -> bool:
        return scores[left] <= scores[right]
    return leq


def _validate_preorder(leq: WorldPreorder, worlds: List[int]) -> None:
    for a in worlds:
        for b in worlds:
            if not (leq(a, b) or leq(b, a)):
                raise RankingError(f"Worlds {a} and {b} are incomparable; the order must be total")
            if leq(a, b):
                for c in worlds:
                    if leq(b, c) and not leq(a, c):
                        raise RankingError(f"Order is not transitive on worlds {a}, {b}, {c}")


def _validate_faithful(phi_mask: int, leq: WorldPreorder, worlds: List[int]) -> None:
    inside = [w for w in worlds if phi_mask >> w & 1]
    outside = [w for w in worlds if not phi_mask >> w & 1]
    for a in inside:
        for b in inside:
            if not leq(a, b):
                raise RankingError(f"Models {a} and {b} of the belief must be equally plausible")
        for b in outside:
            if leq(b, a):
                raise RankingError(f"Non-model {b} must be strictly less plausible than model {a}")


def ranking_from_preorder(phi: Formula, leq: WorldPreorder, alphabet: Alphabet) -> FaithfulRanking:
    """Rank 0 for the minimal worlds, rank 1 for the minima of the rest, and so on"""
    check_letters(phi, alphabet)
    worlds = list(alphabet.worlds())
    phi_mask = models_mask(phi, alphabet)
    if phi_mask == 0:
        raise RankingError(f"'{phi.render()}' is unsatisfiable and has no faithful ranking")
    _validate_preorder(leq, worlds)
    _validate_faithful(phi_mask, leq, worlds)

    ranks = [0] * len(worlds)
    remaining = worlds
    rank = 0
    while remaining:
        minimal = [w for w in remaining if all(leq(w, other) for other in remaining)]
        for w in minimal:
            ranks[w] = rank
        remaining = [w for w in remaining if w not in minimal]
        rank += 1
    return FaithfulRanking(phi=phi, alphabet=alphabet, ranks=tuple(ranks))


def ranking_from_scores(phi: Formula, scores: Mapping[int, Score], alphabet: Alphabet) -> FaithfulRanking:
    missing = [w for w in alphabet.worlds() if w not in scores]
    if missing:
        raise RankingError(f"Scores missing for worlds {[alphabet.world_bits(w) for w in missing]}")
    return ranking_from_preorder(phi, preorder_from_scores(scores), alphabet)


def dist_from_ranking(ranking: FaithfulRanking) -> ProbDist:
    """mass(w) proportional to m - r(w), m = 1 + max rank; full support, strictly decreasing in rank"""
    top = 1 + ranking.max_rank
    weights = [top - rank for rank in ranking.ranks]
    total = sum(weights)
    return ProbDist(alphabet=ranking.alphabet, masses=tuple(Fraction(weight, total) for weight in weights))


def _check_belief(phi: Formula, ranking: FaithfulRanking) -> int:
    check_letters(phi, ranking.alphabet)
    phi_mask = models_mask(phi, ranking.alphabet)
    if phi_mask != ranking.rank_mask(0):
        raise RankingError(f"The ranking is faithful to '{ranking.phi.render()}', not to '{phi.render()}'")
    return phi_mask


def ranked_contract_mask(phi: Formula, alpha: Formula, ranking: FaithfulRanking) -> int:
    phi_mask = _check_belief(phi, ranking)
    check_letters(alpha, ranking.alphabet)
    counter = ranking.alphabet.full_mask & ~models_mask(alpha, ranking.alphabet)
    return phi_mask | ranking.min_rank_mask(counter)


def ranked_contract(phi: Formula, alpha: Formula, ranking: FaithfulRanking) -> Formula:
    """[phi] plus the minimal-rank counter-models of alpha"""
    mask = ranked_contract_mask(phi, alpha, ranking)
    return formula_of_worlds(WorldSet(alphabet=ranking.alphabet, mask=mask))


def ranked_withdraw_mask(phi: Formula, alpha: Formula, ranking: FaithfulRanking) -> int:
    phi_mask = _check_belief(phi, ranking)
    check_letters(alpha, ranking.alphabet)
    alpha_mask = models_mask(alpha, ranking.alphabet)
    counter = ranking.alphabet.full_mask & ~alpha_mask
    if counter == 0 or phi_mask & ~alpha_mask:
        return phi_mask
    reach = ranking.rank(ranking.min_rank_mask(counter).bit_length() - 1)
    sphere = 0
    for rank in range(reach + 1):
        sphere |= ranking.rank_mask(rank)
    return sphere


def ranked_withdraw(phi: Formula, alpha: Formula, ranking: FaithfulRanking) -> Formula:
    """The smallest sphere of the ranking that meets [~alpha]"""
    mask = ranked_withdraw_mask(phi, alpha, ranking)
    return formula_of_worlds(WorldSet(alphabet=ranking.alphabet, mask=mask))


def _compare(operator: str, phi: Formula, ranking: FaithfulRanking, alphas: Iterable[Formula],
             ranked: Callable[[Formula, Formula, FaithfulRanking], int],
             measured: Callable[[int, int, ProbDist], int]) -> RepresentationReport:
    dist = dist_from_ranking(ranking)
    alphabet = ranking.alphabet
    phi_mask = _check_belief(phi, ranking)
    discrepancies = []
    checked = 0
    for alpha in alphas:
        checked += 1
        expected = ranked(phi, alpha, ranking)
        actual = measured(phi_mask, models_mask(alpha, alphabet), dist)
        if expected != actual:
            discrepancies.append(RepresentationDiscrepancy(
                alpha=alpha,
                ranked=WorldSet(alphabet=alphabet, mask=expected),
                measured=WorldSet(alphabet=alphabet, mask=actual),
            ))
    if discrepancies:
        logger.warning(f"⚠️ {operator}: {len(discrepancies)} of {checked} inputs differ from the ranked operator")
    else:
        logger.info(f"✅ {operator}: ranked and measure-based results agree on {checked} inputs")
    return RepresentationReport(operator=operator, phi=phi, checked=checked, discrepancies=tuple(discrepancies))


def representation_check(phi: Formula, ranking: FaithfulRanking, alphas: Iterable[Formula]) -> RepresentationReport:
    """ranked_contract against KM-contraction on dist_from_ranking"""
    return _compare(
        'km-contraction', phi, ranking, alphas, ranked_contract_mask, contraction_mask,
    )


def severe_representation_check(phi: Formula, ranking: FaithfulRanking,
                                alphas: Iterable[Formula]) -> RepresentationReport:
    """Sphere-based withdrawal on the ranking against KM-severe withdrawal on dist_from_ranking"""
    return _compare(
        'severe-withdrawal', phi, ranking, alphas, ranked_withdraw_mask, severe_mask,
    )
