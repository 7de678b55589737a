"""
🧪 Test Configuration and Fixtures
Worked-example distributions, rankings and alphabets shared by the test suite
"""

import logging
from fractions import Fraction

import pytest

from models.distributions import ProbDist
from models.logic import Alphabet
from services.demos import (
    C2_DIST, PETS_DIST, RUNNING_EXAMPLE_DIST, RUNNING_EXAMPLE_KB,
    c2_dist, pets_dist, running_example_dist, table1_ranking,
)
from services.parser import parse
from services.probability import marginalize, uniform
from services.rankings import dist_from_ranking


@pytest.fixture(autouse=True)
def reset_engine_logging():
    """Drop handlers installed by the CLI so they never outlive a captured stream"""
    root = logging.getLogger()
    level = root.level
    yield
    root.setLevel(level)
    for handler in list(root.handlers):
        if handler.get_name() in ("engine-stderr", "engine-file"):
            root.removeHandler(handler)
            handler.close()


# Alphabets

@pytest.fixture
def ab() -> Alphabet:
    return Alphabet.of("a", "b")


@pytest.fixture
def abc() -> Alphabet:
    return Alphabet.of("a", "b", "c")


@pytest.fixture
def birds() -> Alphabet:
    return Alphabet.from_text("b p o f w")


# Distributions

@pytest.fixture
def running_dist() -> ProbDist:
    """The bird distribution over b p o f w"""
    return running_example_dist()


@pytest.fixture
def running_marginal(running_dist) -> ProbDist:
    """The bird distribution marginalised to b p o f"""
    return marginalize(running_dist, Alphabet.from_text("b p o f"))


@pytest.fixture
def kb(running_dist):
    return parse(RUNNING_EXAMPLE_KB, running_dist.alphabet)


@pytest.fixture
def table1():
    ranking = table1_ranking()
    return ranking, dist_from_ranking(ranking)


@pytest.fixture
def c2() -> ProbDist:
    return c2_dist()


@pytest.fixture
def pets() -> ProbDist:
    return pets_dist()


@pytest.fixture
def uniform_abc(abc) -> ProbDist:
    return uniform(abc)


@pytest.fixture
def zero_ab_bar(ab) -> ProbDist:
    """P(a & ~b) = 0 over a b"""
    return ProbDist.from_bitstrings(ab, {"11": Fraction(1, 2), "01": Fraction(1, 4), "00": Fraction(1, 4)})


@pytest.fixture
def grid_dists(ab):
    """Three small-grid distributions over a b, one with a zero-mass world"""
    return [
        ProbDist.from_bitstrings(ab, {"00": "1/10", "10": "2/10", "01": "3/10", "11": "4/10"}),
        ProbDist.from_bitstrings(ab, {"00": "1/4", "10": "1/4", "01": "1/4", "11": "1/4"}),
        ProbDist.from_bitstrings(ab, {"10": "1/2", "01": "1/4", "11": "1/4"}),
    ]


@pytest.fixture(params=["ranked", "zero-mass", "uniform"])
def grid_dist_abc(request, abc) -> ProbDist:
    """Three-letter grid: tied masses by rank, two impossible worlds, every world tied"""
    if request.param == "ranked":
        return dist_from_ranking(table1_ranking())
    if request.param == "zero-mass":
        return ProbDist.from_bitstrings(abc, {
            "111": "1/4", "110": "1/8", "101": "1/8", "011": "1/4", "001": "1/8", "000": "1/8",
        })
    return uniform(abc)


# Files

@pytest.fixture
def running_dist_file(tmp_path):
    path = tmp_path / "birds.dist"
    path.write_text(RUNNING_EXAMPLE_DIST)
    return path


@pytest.fixture
def c2_dist_file(tmp_path):
    path = tmp_path / "c2.dist"
    path.write_text(C2_DIST)
    return path


@pytest.fixture
def pets_dist_file(tmp_path):
    path = tmp_path / "pets.dist"
    path.write_text(PETS_DIST)
    return path


@pytest.fixture
def table1_ranking_file(tmp_path):
    path = tmp_path / "table1.rank"
    path.write_text("a b c\n111 0\n110 0\n101 1\n100 1\n011 1\n010 1\n001 2\n000 2\n")
    return path
