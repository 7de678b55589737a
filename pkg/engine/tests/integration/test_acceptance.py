"""
🧪 Acceptance Tests
Golden values of the worked examples, long fuzz runs and property-based
checks of the identities linking the operators
"""

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from models.distributions import ProbDist
from models.logic import Alphabet
from services.belief_change import (
    contraction_mask, contraction_mask_by_enumeration, expansion_mask, full_meet_mask, revision_mask,
    severe_mask, severe_mask_by_definition,
)
from services.demos import c2_dist, run_demo
from services.measures import kappa_of_probability
from services.postulates import fuzz, replay

pytestmark = pytest.mark.integration

ABC = Alphabet.of("a", "b", "c")
FULL = ABC.full_mask


@st.composite
def distributions(draw):
    """Distributions over a b c with small integer weights, zero-mass worlds allowed"""
    weights = draw(st.lists(st.integers(min_value=0, max_value=4), min_size=8, max_size=8).filter(any))
    total = sum(weights)
    return ProbDist(alphabet=ABC, masses=tuple(Fraction(weight, total) for weight in weights))


masks = st.integers(min_value=0, max_value=FULL)


class TestGoldenValues:
    """Test the worked examples reproduce their published values"""

    def test_running_example(self):
        """Test the bird knowledge base contracted by f"""
        values = run_demo('running-example').values
        assert values['P(KB)'] == "7/20 (0.35)"
        assert values['kappa_S(KB)'] == "1.515"
        assert values['kappa_h(KB)'] == "2.415"
        assert values['P(f)'] == "9/20 (0.45)"
        assert values['kappa_S(f)'] == "1.152"
        assert sorted(values['remainders'].split(", ")) == ["1/2", "11/20", "11/20"]
        assert values['L'] == "1.1"
        assert values['L closed form'] == "1.1"
        assert values['severe withdrawal'] == values['contraction']
        assert values['L severe'] == "1.1"

    def test_running_example_precision(self):
        """Test more decimals expose L = 1.0995"""
        assert run_demo('running-example', 4).values['L'] == "1.0995"

    def test_table1(self):
        """Test masses by rank, contraction to a and revision to a & ~b"""
        values = run_demo('table1').values
        assert values['masses'] == "3/16, 1/8, 1/16"
        assert values['contraction == a'] == "yes"
        assert values['ranked == a'] == "yes"
        assert values['revision == a & ~b'] == "yes"
        assert values['R'] == "0.585"

    def test_c2_counterexample(self):
        """Test the three revisions and the single failing iteration postulate"""
        values = run_demo('c2-counterexample').values
        assert values['phi * psi'] == "{p q}"
        assert values['phi * alpha'] == "{-p q}"
        assert values['(phi * alpha) * psi'] == "{p -q}"
        assert values['C2 holds'] == "no"
        assert (values['C1 holds'], values['C3 holds'], values['C4 holds']) == ("yes", "yes", "yes")

    def test_c2_measures(self):
        """Test kappa_S per world of the two-letter distribution: 3.32, 3.32, 0.74 and 2.32"""
        dist = c2_dist()
        rendered = [kappa_of_probability(dist.mass(w)).render(2) for w in dist.alphabet.worlds()]
        assert rendered == ["3.32", "0.74", "3.32", "2.32"]

    def test_pets(self):
        """Test learning of a dog and then of no dog"""
        values = run_demo('pets').values
        assert values['phi * ~d == phi'] == "yes"
        assert values['phi * d'] == "{p d -c}"
        assert values['(phi * d) * ~d'] == "{-p -d -c, p -d c}"
        assert values['matches expected'] == "yes"
        assert values['R(phi * d)'] == "0.263"

    def test_no_surprise(self):
        """Test a certain conjunction measures 0 while the syntactic measure is 2"""
        values = run_demo('no-surprise').values
        assert values == {'P(a & b)': "1", 'kappa_S': "0.0", 'kappa_h': "2.0"}


@pytest.mark.slow
class TestLongFuzz:
    """Test a thousand random three-letter instances per family"""

    @pytest.mark.parametrize("family,operator", [
        ('contraction', 'km-contraction'),
        ('contraction', 'full-meet'),
        ('severe', 'severe-withdrawal'),
        ('revision', 'km-revision'),
    ])
    def test_family_holds(self, family, operator):
        """Test the operator satisfies its whole family"""
        report = fuzz(family, 3, 1000, seed=2024, operator=operator)
        assert report.cases == 1000
        assert report.ok, [v.postulate for v in report.failures()]

    def test_severe_withdrawal_fails_recovery(self):
        """Test the fuzzer surfaces a recovery failure for severe withdrawal that replays"""
        report = fuzz('contraction', 3, 1000, seed=2024, operator='severe-withdrawal')
        assert not report.holds('K5')
        assert replay(report.verdict('K5').witness) is False

    def test_iteration(self):
        """Test C1, C3 and C4 never fail for KM-revision"""
        report = fuzz('iterated', 3, 1000, seed=2024)
        assert report.holds('C1') and report.holds('C3') and report.holds('C4')


@pytest.mark.property
class TestOperatorIdentities:
    """Test identities between operators on random distributions"""

    @settings(max_examples=200, deadline=None)
    @given(dist=distributions(), phi=masks, alpha=masks)
    def test_levi_identity(self, dist, phi, alpha):
        """Test revision equals contraction by the negation followed by expansion"""
        assume(phi & dist.support_mask)
        levi = expansion_mask(contraction_mask(phi, FULL & ~alpha, dist), alpha, dist)
        assert levi == revision_mask(phi, alpha, dist)

    @settings(max_examples=200, deadline=None)
    @given(dist=distributions(), phi=masks, alpha=masks)
    def test_harper_identity(self, dist, phi, alpha):
        """Test contraction equals the belief joined with its revision by the negation"""
        assume(phi & dist.support_mask)
        harper = (phi & dist.support_mask) | revision_mask(phi, FULL & ~alpha, dist)
        assert harper == contraction_mask(phi, alpha, dist)

    @settings(max_examples=200, deadline=None)
    @given(dist=distributions(), phi=masks, alpha=masks)
    def test_contraction_is_the_smallest_change(self, dist, phi, alpha):
        """Test KM-contraction keeps a subset of both full meet and severe withdrawal"""
        assume(phi & dist.support_mask)
        contracted = contraction_mask(phi, alpha, dist)
        assert contracted & ~full_meet_mask(phi, alpha, dist) == 0
        assert contracted & ~severe_mask(phi, alpha, dist) == 0
        assert dist.mass_of(contracted) <= dist.mass_of(full_meet_mask(phi, alpha, dist))

    @settings(max_examples=100, deadline=None)
    @given(dist=distributions(), phi=masks, alpha=masks)
    def test_contraction_matches_enumeration(self, dist, phi, alpha):
        """Test the closed form equals the union of the most probable remainders"""
        assume(phi & dist.support_mask)
        assert contraction_mask(phi, alpha, dist) == contraction_mask_by_enumeration(phi, alpha, dist)

    @settings(max_examples=100, deadline=None)
    @given(dist=distributions(), phi=masks, alpha=masks)
    def test_severe_matches_definition(self, dist, phi, alpha):
        """Test the sphere construction equals the conjunction over every beta"""
        assume(phi & dist.support_mask)
        assert severe_mask(phi, alpha, dist) == severe_mask_by_definition(phi, alpha, dist)

    @settings(max_examples=200, deadline=None)
    @given(dist=distributions(), phi=masks, alpha=masks)
    def test_revision_success(self, dist, phi, alpha):
        """Test a revision lies inside the input and is empty only for impossible inputs"""
        revised = revision_mask(phi, alpha, dist)
        assert revised & ~alpha == 0
        assert (revised == 0) == (alpha & dist.support_mask == 0)
