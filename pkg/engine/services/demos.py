"""
🎬 Demo Scripts
Worked examples replayed end to end: the bird knowledge base, the ranked
three-letter table, the iterated-revision counterexample, the pets and the
no-surprise case
"""

import logging
from typing import Callable, Dict, List, Optional

from config.settings import render_config
from models.distributions import ProbDist
from models.logic import Alphabet, PossibleWorldSet, WorldSet
from models.rankings import FaithfulRanking
from models.session import DemoReport
from services.belief_change import BeliefChangeService
from services.errors import BeliefEngineError
from services.file_formats import parse_distribution_text
from services.formatting import format_measure, format_probability
from services.logic import equivalent, models_mask
from services.measures import kappa_h, kappa_of_probability, kappa_s
from services.parser import parse
from services.postulates import check_iterated
from services.probability import p_equiv, prob
from services.rankings import dist_from_ranking, ranked_contract, ranking_from_scores

logger = logging.getLogger(__name__)

RUNNING_EXAMPLE_DIST = """\
b p o f w
11011 1/10
10111 1/10
10011 3/20
11001 3/20
10101 1/5
10001 1/5
01011 7/100
01010 3/100
"""

RUNNING_EXAMPLE_KB = "b & (b -> f) & (p -> b) & (o -> b) & ~(p & o)"

C2_DIST = """\
p q
10 3/5
11 1/5
00 1/10
01 1/10
"""

PETS_DIST = """\
p d c
000 3/10
101 3/10
110 1/4
111 3/20
"""

NO_SURPRISE_DIST = """\
a b
11 1
"""


def running_example_dist() -> ProbDist:
    return parse_distribution_text(RUNNING_EXAMPLE_DIST)


def c2_dist() -> ProbDist:
    return parse_distribution_text(C2_DIST)


def pets_dist() -> ProbDist:
    return parse_distribution_text(PETS_DIST)


def no_surprise_dist() -> ProbDist:
    return parse_distribution_text(NO_SURPRISE_DIST)


def table1_ranking() -> FaithfulRanking:
    """Ranks over a b c: ab at 0, exactly one of a/b at 1, neither at 2"""
    alphabet = Alphabet.of("a", "b", "c")
    scores = {w: 2 - (w & 1) - (w >> 1 & 1) for w in alphabet.worlds()}
    return ranking_from_scores(parse("a & b", alphabet), scores, alphabet)


def _worlds(ws: WorldSet) -> str:
    return "{" + ", ".join(ws.rendered_worlds()) + "}"


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def running_example(decimals: int) -> DemoReport:
    dist = running_example_dist()
    alphabet = dist.alphabet
    kb = parse(RUNNING_EXAMPLE_KB, alphabet)
    f = parse("f", alphabet)
    service = BeliefChangeService(dist)

    remainders = service.remainders(kb, f)
    contraction = service.contract(kb, f)
    withdrawal = service.severe_withdraw(kb, f)
    counter = PossibleWorldSet(
        alphabet=alphabet, mask=models_mask(parse("~f", alphabet), alphabet) & dist.support_mask,
        support=dist.support_mask,
    )
    values = {
        'P(KB)': format_probability(prob(kb, dist)),
        'kappa_S(KB)': kappa_s(kb, dist).render(decimals),
        'kappa_h(KB)': kappa_h(kb).render(decimals),
        'P(f)': format_probability(prob(f, dist)),
        'kappa_S(f)': kappa_s(f, dist).render(decimals),
        'remainders': ", ".join(str(p) for p in remainders.probabilities()),
        'contraction': _worlds(contraction.result_worlds),
        'L': format_measure(contraction.measure, decimals),
        'L closed form': format_measure(contraction.closed_form, decimals),
        'severe withdrawal': _worlds(withdrawal.result_worlds),
        'L severe': format_measure(withdrawal.measure, decimals),
    }
    lines = [
        f"KB = {kb.render()}",
        f"P(KB) = {values['P(KB)']}",
        f"kappa_S(KB) = {values['kappa_S(KB)']}",
        f"kappa_h(KB) = {values['kappa_h(KB)']}",
        f"P(f) = {values['P(f)']}, kappa_S(f) = {values['kappa_S(f)']}",
        f"[~f]+ = {_worlds(counter)}",
        f"remainders of KB by f have probabilities {values['remainders']}",
    ]
    for world_set, probability in zip(remainders.world_sets(), remainders.probabilities()):
        lines.append(f"  {_worlds(world_set)}: kappa_S = {kappa_of_probability(probability).render(decimals)}")
    lines += [
        f"KB contracted by f = {contraction.result.render()}",
        f"  worlds {values['contraction']}",
        f"  L = {values['L']} (closed form {values['L closed form']})",
        f"KB severely withdrawn by f: worlds {values['severe withdrawal']}, L = {values['L severe']}",
    ]
    return DemoReport(name='running-example', title="Running example: birds, penguins and ostriches",
                      lines=lines, values=values)


def table1(decimals: int) -> DemoReport:
    ranking = table1_ranking()
    dist = dist_from_ranking(ranking)
    alphabet = dist.alphabet
    phi, a, b = parse("a & b", alphabet), parse("a", alphabet), parse("b", alphabet)
    not_b = parse("~b", alphabet)
    service = BeliefChangeService(dist)

    lines = ["world     r  P     kappa_S"]
    for world in alphabet.worlds():
        mass = dist.mass(world)
        lines.append(
            f"{alphabet.render_world(world):<9} {ranking.rank(world)}  {str(mass):<5} "
            f"{kappa_of_probability(mass).render(decimals)}"
        )
    contraction = service.contract(phi, b)
    revision = service.revise(phi, not_b)
    ranked = ranked_contract(phi, b, ranking)
    values = {
        'masses': ", ".join(str(dist.mass(w)) for w in (3, 1, 0)),
        'contraction': contraction.result.render(),
        'contraction == a': _yes(equivalent(contraction.result, a, alphabet)),
        'ranked == a': _yes(equivalent(ranked, a, alphabet)),
        'revision': revision.result.render(),
        'revision == a & ~b': _yes(equivalent(revision.result, parse("a & ~b", alphabet), alphabet)),
        'R': format_measure(revision.measure, decimals),
    }
    lines += [
        f"(a & b) contracted by b = {values['contraction']}; equivalent to a: {values['contraction == a']}",
        f"ranked contraction equivalent to a: {values['ranked == a']}",
        f"(a & b) revised by ~b = {values['revision']}; equivalent to a & ~b: {values['revision == a & ~b']}",
        f"R = {values['R']}",
    ]
    return DemoReport(name='table1', title="Faithful ranking over a b c", lines=lines, values=values)


def c2_counterexample(decimals: int) -> DemoReport:
    dist = c2_dist()
    alphabet = dist.alphabet
    phi = parse("(p & q) | (~p & ~q)", alphabet)
    alpha = parse("~p & q", alphabet)
    psi = parse("p", alphabet)
    service = BeliefChangeService(dist)

    by_psi = service.revise(phi, psi)
    by_alpha = service.revise(phi, alpha)
    twice = service.revise(by_alpha.result, psi)
    report = check_iterated('km-revision', phi, alpha, psi, dist)
    lines = [
        "world  P     kappa_S",
        *(
            f"{alphabet.render_world(w):<6} {str(dist.mass(w)):<5} {kappa_of_probability(dist.mass(w)).render(decimals)}"
            for w in alphabet.worlds()
        ),
    ]
    values = {
        'phi * psi': _worlds(by_psi.result_worlds),
        'phi * alpha': _worlds(by_alpha.result_worlds),
        '(phi * alpha) * psi': _worlds(twice.result_worlds),
        'C2 holds': _yes(report.holds('C2')),
        'C1 holds': _yes(report.holds('C1')),
        'C3 holds': _yes(report.holds('C3')),
        'C4 holds': _yes(report.holds('C4')),
    }
    lines += [
        f"phi = {phi.render()}, alpha = {alpha.render()}, psi = {psi.render()}",
        f"phi revised by psi: {values['phi * psi']}",
        f"phi revised by alpha: {values['phi * alpha']}",
        f"then revised by psi: {values['(phi * alpha) * psi']}",
        f"C1 {values['C1 holds']}, C2 {values['C2 holds']}, C3 {values['C3 holds']}, C4 {values['C4 holds']}",
    ]
    if not report.holds('C2'):
        lines.append("C2 is violated: psi P-entails ~alpha yet the two revisions differ")
    return DemoReport(name='c2-counterexample', title="Iterated revision: opposite-direction counterexample",
                      lines=lines, values=values)


def pets(decimals: int) -> DemoReport:
    dist = pets_dist()
    alphabet = dist.alphabet
    phi = parse("~p", alphabet)
    d, not_d = parse("d", alphabet), parse("~d", alphabet)
    service = BeliefChangeService(dist)

    by_not_d = service.revise(phi, not_d)
    steps = service.revise_sequence(phi, [d, not_d])
    expected = parse("(~p & ~d & ~c) | (p & ~d & c)", alphabet)
    values = {
        'phi * ~d': _worlds(by_not_d.result_worlds),
        'phi * ~d == phi': _yes(p_equiv(by_not_d.result, phi, dist)),
        'phi * d': _worlds(steps[0].result_worlds),
        '(phi * d) * ~d': _worlds(steps[1].result_worlds),
        'matches expected': _yes(p_equiv(steps[1].result, expected, dist)),
        'R(phi * d)': format_measure(steps[0].measure, decimals),
    }
    lines = [
        f"phi = {phi.render()} (no pet)",
        f"revised by ~d: {values['phi * ~d']}; P-equivalent to phi: {values['phi * ~d == phi']}",
        f"revised by d: {values['phi * d']} (R = {values['R(phi * d)']})",
        f"then revised by ~d: {values['(phi * d) * ~d']}",
        f"P-equivalent to {expected.render()}: {values['matches expected']}",
    ]
    return DemoReport(name='pets', title="Iterated revision: pets", lines=lines, values=values)


def no_surprise(decimals: int) -> DemoReport:
    dist = no_surprise_dist()
    phi = parse("a & b", dist.alphabet)
    values = {
        'P(a & b)': format_probability(prob(phi, dist)),
        'kappa_S': kappa_s(phi, dist).render(decimals),
        'kappa_h': kappa_h(phi).render(decimals),
    }
    lines = [
        f"P(a & b) = {values['P(a & b)']}",
        f"kappa_S(a & b) = {values['kappa_S']} while kappa_h(a & b) = {values['kappa_h']}",
    ]
    return DemoReport(name='no-surprise', title="A certain conjunction carries no surprise",
                      lines=lines, values=values)


DEMOS: Dict[str, Callable[[int], DemoReport]] = {
    'running-example': running_example,
    'table1': table1,
    'c2-counterexample': c2_counterexample,
    'pets': pets,
    'no-surprise': no_surprise,
}


def run_demo(name: str, decimals: Optional[int] = None) -> DemoReport:
    try:
        demo = DEMOS[name]
    except KeyError:
        raise BeliefEngineError(f"Unknown demo '{name}'; expected one of {', '.join(DEMOS)}")
    logger.info(f"🎬 Running demo {name}")
    return demo(render_config.MEASURE_DECIMALS if decimals is None else decimals)


def demo_names() -> List[str]:
    return list(DEMOS)
