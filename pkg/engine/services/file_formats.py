"""
📄 File Formats
Text and JSON readers/writers for distributions and rankings
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import ValidationError

from models.distributions import DistributionDocument, ProbDist
from models.logic import Alphabet, Formula, WorldSet
from models.rankings import FaithfulRanking, RankingDocument
from services.errors import AlphabetMismatchError, DistributionError, RankingError
from services.formatting import format_fraction
from services.logic import formula_of_worlds

logger = logging.getLogger(__name__)

Source = Union[str, Path]


def _read(source: Source) -> str:
    """File contents when ``source`` names an existing file, else ``source`` itself"""
    if isinstance(source, Path):
        return source.read_text()
    if "\n" not in source and len(source) < 4096:
        path = Path(source)
        if path.is_file():
            return path.read_text()
    return source


def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((number, line))
    return lines


def _alphabet_line(lines: List[Tuple[int, str]], error: type) -> Alphabet:
    if not lines:
        raise error("Empty file; the first line must list the alphabet letters")
    try:
        return Alphabet.from_text(lines[0][1])
    except (ValidationError, ValueError) as e:
        raise error(f"Line {lines[0][0]}: invalid alphabet: {e}") from e


def _world_entries(lines: List[Tuple[int, str]], alphabet: Alphabet, error: type) -> Dict[int, str]:
    entries: Dict[int, str] = {}
    for number, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise error(f"Line {number}: expected '<bitstring> <value>', got '{line}'")
        try:
            world = alphabet.parse_world(parts[0])
        except AlphabetMismatchError as e:
            raise error(f"Line {number}: {e}") from e
        if world in entries:
            raise error(f"Line {number}: world {parts[0]} listed twice")
        entries[world] = parts[1]
    return entries


# ---------------------------------------------------------------------------
# Distributions
# ---------------------------------------------------------------------------

def parse_distribution_text(text: str) -> ProbDist:
    lines = _content_lines(text)
    alphabet = _alphabet_line(lines, DistributionError)
    entries = _world_entries(lines, alphabet, DistributionError)
    try:
        return ProbDist.from_mapping(alphabet, entries)
    except ValidationError as e:
        raise DistributionError(f"Invalid distribution: {e.errors()[0]['msg']}") from e


def parse_distribution_json(text: str) -> ProbDist:
    try:
        return DistributionDocument.model_validate_json(text).to_dist()
    except ValidationError as e:
        raise DistributionError(f"Invalid distribution document: {e.errors()[0]['msg']}") from e
    except AlphabetMismatchError as e:
        raise DistributionError(str(e)) from e


def load_distribution(source: Source) -> ProbDist:
    """Distribution from a path or from text; JSON when the content starts with '{'"""
    text = _read(source)
    if text.lstrip().startswith("{"):
        dist = parse_distribution_json(text)
    else:
        dist = parse_distribution_text(text)
    logger.debug(f"📄 Loaded distribution over [{dist.alphabet}] with {bin(dist.support_mask).count('1')} possible worlds")
    return dist


def dump_distribution_text(dist: ProbDist, decimal: bool = False) -> str:
    lines = [" ".join(dist.alphabet.letters)]
    for world, mass in dist.items():
        lines.append(f"{dist.alphabet.world_bits(world)} {format_fraction(mass, decimal)}")
    return "\n".join(lines) + "\n"


def dump_distribution_json(dist: ProbDist) -> str:
    return DistributionDocument.from_dist(dist).model_dump_json(indent=2)


# ---------------------------------------------------------------------------
# Rankings
# ---------------------------------------------------------------------------

def _ranking(alphabet: Alphabet, ranks: Dict[int, int], phi: Optional[Formula]) -> FaithfulRanking:
    missing = [alphabet.world_bits(w) for w in alphabet.worlds() if w not in ranks]
    if missing:
        raise RankingError(f"A ranking must rank every world; missing {', '.join(missing)}")
    dense = tuple(ranks[w] for w in alphabet.worlds())
    if phi is None:
        rank_zero = sum(1 << w for w, rank in enumerate(dense) if rank == 0)
        phi = formula_of_worlds(WorldSet(alphabet=alphabet, mask=rank_zero))
    try:
        return FaithfulRanking(phi=phi, alphabet=alphabet, ranks=dense)
    except ValidationError as e:
        raise RankingError(f"Invalid ranking: {e.errors()[0]['msg']}") from e


def parse_ranking_text(text: str, phi: Optional[Formula] = None) -> FaithfulRanking:
    lines = _content_lines(text)
    alphabet = _alphabet_line(lines, RankingError)
    ranks = {}
    for world, value in _world_entries(lines, alphabet, RankingError).items():
        if not value.isdigit():
            raise RankingError(f"Rank '{value}' of world {alphabet.world_bits(world)} is not a natural number")
        ranks[world] = int(value)
    return _ranking(alphabet, ranks, phi)


def parse_ranking_json(text: str, phi: Optional[Formula] = None) -> FaithfulRanking:
    try:
        document = RankingDocument.model_validate_json(text)
        alphabet = Alphabet(letters=tuple(document.alphabet))
    except ValidationError as e:
        raise RankingError(f"Invalid ranking document: {e.errors()[0]['msg']}") from e
    try:
        ranks = {alphabet.parse_world(bits): rank for bits, rank in document.ranks.items()}
    except AlphabetMismatchError as e:
        raise RankingError(str(e)) from e
    return _ranking(alphabet, ranks, phi)


def load_ranking(source: Source, phi: Optional[Formula] = None) -> FaithfulRanking:
    """Ranking from a path or text; the belief defaults to the rank-0 worlds"""
    text = _read(source)
    if text.lstrip().startswith("{"):
        return parse_ranking_json(text, phi)
    return parse_ranking_text(text, phi)
