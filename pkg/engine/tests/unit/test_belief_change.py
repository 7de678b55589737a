"""
🧪 Belief Change Tests
Contraction, full meet, severe withdrawal, revision and expansion against the
worked examples and the enumeration oracles
"""

import math
from fractions import Fraction

import pytest

from models.distributions import ProbDist
from models.logic import Alphabet, Bottom, Top, WorldSet
from services.belief_change import (
    BeliefChangeService, contract, contraction_mask, contraction_mask_by_enumeration, expand,
    full_meet_contract, full_meet_mask, harper_contract, levi_revise, possible_remainder_masks,
    possible_remainders, remainder_masks_by_enumeration, remainders, revise, revise_sequence,
    revision_mask, severe_mask, severe_mask_by_definition, severe_withdraw, severe_withdraw_by_definition,
    sigma, sigma_mask, spheres,
)
from services.errors import EnumerationCapError, InconsistentBeliefError
from services.logic import equivalent, formula_of_worlds, models_mask
from services.parser import parse
from services.probability import p_entails, p_equiv

pytestmark = pytest.mark.unit


def bits(ws):
    return sorted(ws.bitstrings())


class TestRunningExampleContraction:
    """Test contracting the bird knowledge base by f"""

    def test_remainder_probabilities(self, running_dist, kb):
        """Test one remainder per possible non-flying bird"""
        found = remainders(kb, parse("f"), running_dist)
        assert len(found) == 3
        assert sorted(found.probabilities()) == [Fraction(1, 2), Fraction(11, 20), Fraction(11, 20)]

    def test_contraction_keeps_heaviest_counter_models(self, running_dist, kb):
        """Test the result adds 10101 and 10001 to [KB]+"""
        report = contract(kb, parse("f"), running_dist)
        added = report.result_worlds.difference(WorldSet(alphabet=running_dist.alphabet,
                                                         mask=models_mask(kb, running_dist.alphabet)))
        assert bits(added) == ["10001", "10101"]
        assert report.operator == "contraction"

    def test_loss(self, running_dist, kb):
        """Test L = log2(15/7) = 1.0995"""
        report = contract(kb, parse("f"), running_dist)
        assert report.measure_name == "L"
        assert report.loss == pytest.approx(math.log2(Fraction(15, 7)))
        assert report.closed_form == pytest.approx(1.0995, abs=1e-4)
        assert report.gain is None and report.change is None

    def test_full_meet_keeps_every_counter_model(self, running_dist, kb):
        """Test full meet adds all of [~f]+"""
        report = full_meet_contract(kb, parse("f"), running_dist)
        assert len(report.result_worlds.worlds()) == 6
        assert report.operator == "full-meet"

    def test_severe_withdrawal_matches_contraction(self, running_dist, kb):
        """Test sigma of ~f adds the same two worlds"""
        withdrawal = severe_withdraw(kb, parse("f"), running_dist)
        contraction = contract(kb, parse("f"), running_dist)
        assert withdrawal.result_worlds == contraction.result_worlds
        assert sigma(kb, parse("f"), running_dist) == contraction.result_worlds

    def test_non_entailed_input_leaves_belief(self, running_dist, kb):
        """Test contracting by something KB does not believe is vacuous"""
        report = contract(kb, parse("p"), running_dist)
        assert p_equiv(report.result, kb, running_dist)
        assert report.measure == 0.0

    def test_tautology_leaves_belief(self, running_dist, kb):
        """Test contracting by true changes nothing"""
        report = contract(kb, Top(), running_dist)
        assert p_equiv(report.result, kb, running_dist)

    def test_remainder_enumeration_cap(self, running_dist, kb):
        """Test enumerating possible remainders over five letters is refused"""
        with pytest.raises(EnumerationCapError):
            possible_remainders(kb, parse("f"), running_dist)

    def test_inconsistent_belief(self, running_dist):
        """Test a belief with no possible model is rejected"""
        with pytest.raises(InconsistentBeliefError):
            contract(parse("~b & ~p"), parse("f"), running_dist)


class TestMarginalContraction:
    """Test enumeration agrees with the closed form on the four-letter marginal"""

    def test_enumerated_remainders(self, running_marginal):
        """Test the minimal possible remainders are [KB]+ plus one counter-model each"""
        kb = parse("b & (b -> f) & (p -> b) & (o -> b) & ~(p & o)", running_marginal.alphabet)
        service = BeliefChangeService(running_marginal)
        found = remainders(kb, parse("f"), running_marginal)
        kb_mask = models_mask(kb, running_marginal.alphabet)
        minimal = remainder_masks_by_enumeration(kb_mask, models_mask(parse("f"), running_marginal.alphabet),
                                                 running_marginal)
        assert sorted(minimal) == sorted(ws.mask for ws in found.world_sets())
        assert service.contract_by_enumeration(kb, parse("f")) == service.contract(kb, parse("f")).result_worlds

    def test_possible_remainders_fail_to_entail(self, running_marginal):
        """Test every possible remainder fails to P-entail f"""
        kb = parse("b & f & ~(p & o)")
        for remainder in possible_remainders(kb, parse("f"), running_marginal):
            assert not p_entails(remainder, parse("f"), running_marginal)


class TestTable1:
    """Test the ranked three-letter example"""

    def test_contraction_is_a(self, table1):
        """Test (a & b) contracted by b is equivalent to a"""
        _, dist = table1
        report = contract(parse("a & b"), parse("b"), dist)
        assert equivalent(report.result, parse("a"), dist.alphabet)

    def test_revision_is_a_and_not_b(self, table1):
        """Test (a & b) revised by ~b is a & ~b with R = 0.585"""
        _, dist = table1
        report = revise(parse("a & b"), parse("~b"), dist)
        assert equivalent(report.result, parse("a & ~b"), dist.alphabet)
        assert report.measure_name == "R"
        assert report.change == pytest.approx(math.log2(1.5))

    def test_severe_withdrawal_keeps_both_ties(self, table1):
        """Test severe withdrawal gives a | b since both single-letter worlds tie"""
        _, dist = table1
        report = severe_withdraw(parse("a & b"), parse("b"), dist)
        assert equivalent(report.result, parse("a | b"), dist.alphabet)

    def test_spheres(self, table1):
        """Test the sphere system follows the ranks"""
        _, dist = table1
        system = spheres(parse("a & b"), dist)
        assert [annulus.mass for annulus in system.annuli] == [Fraction(1, 8), Fraction(1, 16)]
        assert system.spheres()[-1].is_full()
        assert system.smallest_meeting(models_mask(parse("~b"), dist.alphabet)) == system.spheres()[1]


class TestRevision:
    """Test revision on the iterated examples"""

    def test_c2_revisions(self, c2):
        """Test the three revisions of the opposite-direction example"""
        phi = parse("(p & q) | (~p & ~q)")
        assert bits(revise(phi, parse("p"), c2).result_worlds) == ["11"]
        by_alpha = revise(phi, parse("~p & q"), c2)
        assert bits(by_alpha.result_worlds) == ["01"]
        assert bits(revise(by_alpha.result, parse("p"), c2).result_worlds) == ["10"]

    def test_c2_revision_measure(self, c2):
        """Test R = log2(P(phi) / P(01)) = log2 3"""
        report = revise(parse("(p & q) | (~p & ~q)"), parse("~p & q"), c2)
        assert report.measure == pytest.approx(math.log2(3))

    def test_pets_sequence(self, pets):
        """Test the pets revisions in sequence"""
        phi = parse("~p")
        assert p_equiv(revise(phi, parse("~d"), pets).result, phi, pets)
        steps = revise_sequence(phi, [parse("d"), parse("~d")], pets)
        assert bits(steps[0].result_worlds) == ["110"]
        assert bits(steps[1].result_worlds) == ["000", "101"]

    def test_consistent_input_is_expansion(self, running_dist, kb):
        """Test revising by a P-consistent formula conjoins it"""
        report = revise(kb, parse("p"), running_dist)
        assert p_equiv(report.result, parse("b & p & f"), running_dist)
        assert report.measure == pytest.approx(math.log2(Fraction(7, 2)))

    def test_impossible_input(self, zero_ab_bar):
        """Test revising by a formula with no possible model yields false"""
        report = revise(parse("b"), parse("a & ~b"), zero_ab_bar)
        assert report.result == Bottom()
        assert math.isinf(report.measure)

    def test_levi_identity(self, running_dist, kb):
        """Test contraction by ~alpha then adding alpha equals revision"""
        for text in ("~f", "p", "~b", "w"):
            alpha = parse(text)
            assert levi_revise(kb, alpha, running_dist) == revise(kb, alpha, running_dist).result_worlds

    def test_harper_identity(self, running_dist, kb):
        """Test phi | (phi revised by ~alpha) equals contraction"""
        for text in ("f", "b", "p", "true"):
            alpha = parse(text)
            harper = harper_contract(kb, alpha, running_dist)
            assert harper == contract(kb, alpha, running_dist).result_worlds


class TestExpansion:
    """Test expansion and its information gain"""

    def test_syntactic_expansion(self):
        """Test the module-level expansion conjoins"""
        assert expand(Top(), parse("a")) == parse("a")
        assert expand(parse("a"), parse("b")) == parse("a & b")

    def test_gain(self, running_dist, kb):
        """Test G = -log2 P(p | KB) = log2(7/2)"""
        report = BeliefChangeService(running_dist).expand(kb, parse("p"))
        assert report.measure_name == "G"
        assert report.gain == pytest.approx(math.log2(3.5))

    def test_redundant_gain_is_zero(self, running_dist, kb):
        """Test adding an entailed formula gains nothing"""
        report = BeliefChangeService(running_dist).expand(kb, parse("f"))
        assert report.gain == 0.0

    def test_contradictory_gain_is_infinite(self, running_dist, kb):
        """Test adding ~f to KB gains inf"""
        report = BeliefChangeService(running_dist).expand(kb, parse("~f"))
        assert math.isinf(report.gain)
        assert report.result == Bottom()


def _grid_cases(dist):
    full = dist.alphabet.full_mask
    for phi in range(1, full + 1):
        if phi & dist.support_mask == 0:
            continue
        for alpha in range(full + 1):
            yield phi, alpha


@pytest.mark.oracle
class TestOraclesTwoLetters:
    """Test closed forms against enumeration on every instance over two letters"""

    def test_contraction(self, grid_dists):
        """Test the closed-form contraction equals the union of best remainders"""
        for dist in grid_dists:
            for phi, alpha in _grid_cases(dist):
                assert contraction_mask(phi, alpha, dist) == contraction_mask_by_enumeration(phi, alpha, dist)

    def test_severe_withdrawal(self, grid_dists):
        """Test sigma-based severe withdrawal equals the conjunction definition"""
        for dist in grid_dists:
            for phi, alpha in _grid_cases(dist):
                assert severe_mask(phi, alpha, dist) == severe_mask_by_definition(phi, alpha, dist)

    def test_remainders_fail_alpha_unless_tautological(self, grid_dists):
        """Test every enumerated remainder fails to P-entail alpha when ~alpha is possible"""
        for dist in grid_dists:
            support = dist.support_mask
            for phi, alpha in _grid_cases(dist):
                for mask in possible_remainder_masks(phi, alpha, dist):
                    assert mask & support & ~alpha or support & ~alpha == 0

    def test_dominance(self, grid_dists):
        """Test KM-contraction sits between [phi]+ and full meet and inside severe withdrawal"""
        for dist in grid_dists:
            for phi, alpha in _grid_cases(dist):
                km = contraction_mask(phi, alpha, dist)
                assert phi & dist.support_mask & ~km == 0
                assert km & ~full_meet_mask(phi, alpha, dist) == 0
                assert km & ~severe_mask(phi, alpha, dist) == 0
                assert km & ~sigma_mask(phi, alpha, dist) == 0


@pytest.mark.oracle
@pytest.mark.slow
class TestOraclesThreeLetters:
    """Test closed forms against enumeration over three letters"""

    def test_contraction_and_remainders(self, grid_dist_abc):
        """Test the closed-form contraction and remainders on every pair of world sets"""
        dist = grid_dist_abc
        service = BeliefChangeService(dist)
        formulas = [
            formula_of_worlds(WorldSet(alphabet=dist.alphabet, mask=mask))
            for mask in range(dist.alphabet.full_mask + 1)
        ]
        for phi, alpha in _grid_cases(dist):
            assert contraction_mask(phi, alpha, dist) == contraction_mask_by_enumeration(phi, alpha, dist)
            closed = service.remainders(formulas[phi], formulas[alpha])
            assert sorted(ws.mask for ws in closed.world_sets()) == remainder_masks_by_enumeration(phi, alpha, dist)

    def test_severe_withdrawal(self, grid_dist_abc):
        """Test the sphere construction equals the conjunction definition on every pair of world sets"""
        dist = grid_dist_abc
        for phi, alpha in _grid_cases(dist):
            assert severe_mask(phi, alpha, dist) == severe_mask_by_definition(phi, alpha, dist)

    def test_severe_definition_service(self, table1):
        """Test the service-level definitional withdrawal"""
        _, dist = table1
        phi, alpha = parse("a & b"), parse("b")
        assert severe_withdraw_by_definition(phi, alpha, dist) == severe_withdraw(phi, alpha, dist).result_worlds

    def test_severe_definition_cap(self, running_dist, kb):
        """Test the definition refuses five letters"""
        with pytest.raises(EnumerationCapError):
            severe_withdraw_by_definition(kb, parse("f"), running_dist)


class TestRevisionMask:
    """Test revision on masks directly"""

    def test_revision_picks_tie_set(self, abc):
        """Test every heaviest alpha-world is kept"""
        dist = ProbDist.from_bitstrings(abc, {"111": "1/2", "100": "1/4", "010": "1/4"})
        phi = models_mask(parse("a & b"), abc)
        alpha = models_mask(parse("~(a & b)"), abc)
        assert WorldSet(alphabet=abc, mask=revision_mask(phi, alpha, dist)).bitstrings() == ["100", "010"]

    def test_uniform_revision_keeps_all(self):
        """Test under the uniform distribution revision keeps all possible alpha-worlds"""
        alphabet = Alphabet.of("a", "b")
        dist = ProbDist(alphabet=alphabet, masses=("1/4",) * 4)
        phi = models_mask(parse("a & b"), alphabet)
        alpha = models_mask(parse("~a"), alphabet)
        assert revision_mask(phi, alpha, dist) == alpha
