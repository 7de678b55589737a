"""
🎲 Distribution Models
Exact probability distributions over the worlds of an alphabet
"""

from decimal import Decimal
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

from pydantic import BaseModel, ConfigDict, PrivateAttr, field_validator, model_validator

from models.logic import Alphabet


def to_fraction(value) -> Fraction:
    """Exact rational from int, Fraction, Decimal, '3/20', '0.15' or a float's decimal text"""
    if isinstance(value, bool):
        raise ValueError('booleans are not probabilities')
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"'{value}' is not a rational number")
    raise ValueError(f'unsupported mass type {type(value).__name__}')


class ProbDist(BaseModel):
    """Dense map world -> exact mass; masses sum to exactly 1"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    alphabet: Alphabet
    masses: Tuple[Fraction, ...]

    _support: int = PrivateAttr(default=0)

    @field_validator('masses', mode='before')
    @classmethod
    def coerce_masses(cls, v):
        return tuple(to_fraction(mass) for mass in v)

    @model_validator(mode='after')
    def validate_distribution(self):
        if len(self.masses) != self.alphabet.world_count:
            raise ValueError(
                f'expected {self.alphabet.world_count} masses for [{self.alphabet}], got {len(self.masses)}'
            )
        negative = [w for w, mass in enumerate(self.masses) if mass < 0]
        if negative:
            raise ValueError(f'negative mass at world {self.alphabet.world_bits(negative[0])}')
        total = sum(self.masses, Fraction(0))
        if total != 1:
            raise ValueError(f'masses sum to {total}, not exactly 1')
        return self

    def model_post_init(self, __context) -> None:
        support = 0
        for world, mass in enumerate(self.masses):
            if mass:
                support |= 1 << world
        self._support = support

    @classmethod
    def from_mapping(cls, alphabet: Alphabet, masses: Dict[int, object]) -> 'ProbDist':
        """Worlds missing from ``masses`` get 0"""
        dense: List[object] = [Fraction(0)] * alphabet.world_count
        for world, mass in masses.items():
            if not 0 <= world < alphabet.world_count:
                raise ValueError(f'world {world} is outside the space over [{alphabet}]')
            dense[world] = mass
        return cls(alphabet=alphabet, masses=tuple(dense))

    @classmethod
    def from_bitstrings(cls, alphabet: Alphabet, masses: Dict[str, object]) -> 'ProbDist':
        return cls.from_mapping(alphabet, {alphabet.parse_world(bits): mass for bits, mass in masses.items()})

    @property
    def support_mask(self) -> int:
        return self._support

    def mass(self, world: int) -> Fraction:
        return self.masses[world]

    def mass_of(self, mask: int) -> Fraction:
        total = Fraction(0)
        mask &= self._support
        while mask:
            low = mask & -mask
            total += self.masses[low.bit_length() - 1]
            mask ^= low
        return total

    def max_mass_of(self, mask: int) -> Fraction:
        """Largest mass among the possible worlds of ``mask``; 0 when there are none"""
        best = Fraction(0)
        mask &= self._support
        while mask:
            low = mask & -mask
            best = max(best, self.masses[low.bit_length() - 1])
            mask ^= low
        return best

    def worlds_with_mass(self, mask: int, mass: Fraction) -> int:
        selected = 0
        candidates = mask & self._support
        while candidates:
            low = candidates & -candidates
            if self.masses[low.bit_length() - 1] == mass:
                selected |= low
            candidates ^= low
        return selected

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        """(world, mass) for every world of non-zero mass"""
        return ((world, mass) for world, mass in enumerate(self.masses) if mass)

    def is_uniform(self) -> bool:
        return len(set(self.masses)) == 1


class DistributionDocument(BaseModel):
    """JSON form of a distribution: letters plus bitstring -> exact fraction string"""

    alphabet: List[str]
    masses: Dict[str, str]

    @classmethod
    def from_dist(cls, dist: ProbDist) -> 'DistributionDocument':
        return cls(
            alphabet=list(dist.alphabet.letters),
            masses={dist.alphabet.world_bits(world): str(mass) for world, mass in dist.items()},
        )

    def to_dist(self) -> ProbDist:
        alphabet = Alphabet(letters=tuple(self.alphabet))
        return ProbDist.from_bitstrings(alphabet, self.masses)
