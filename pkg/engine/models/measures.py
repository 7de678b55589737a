"""
📏 Knowledge Measure Models
Measure values over the extended reals, base configuration and substitutions
"""

import math
from fractions import Fraction
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import engine_config
from models.distributions import to_fraction
from models.logic import Alphabet
from services.formatting import format_measure


class KnowledgeMeasureConfig(BaseModel):
    """Logarithm base of the measure; base 2 is the Shannon measure"""

    model_config = ConfigDict(frozen=True)

    base: float = Field(default_factory=lambda: engine_config.DEFAULT_BASE, gt=1)

    @property
    def log2_base(self) -> float:
        return math.log2(self.base)


def _neg_log2(probability: Fraction) -> float:
    # log2 of numerator and denominator separately keeps precision for tiny masses
    return math.log2(probability.denominator) - math.log2(probability.numerator)


class KmValue(BaseModel):
    """-log_b P for an exact probability P; +inf when P = 0, 0 when P = 1

    Ordering is decided on the exact probability (larger probability, smaller
    measure); floats only appear in ``value``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    probability: Fraction
    base: float = Field(default=2.0, gt=1)

    @field_validator('probability', mode='before')
    @classmethod
    def coerce_probability(cls, v):
        return to_fraction(v)

    @model_validator(mode='after')
    def validate_range(self):
        if not 0 <= self.probability <= 1:
            raise ValueError(f'probability {self.probability} is outside [0, 1]')
        return self

    @property
    def is_infinite(self) -> bool:
        return self.probability == 0

    @property
    def value(self) -> float:
        if self.probability == 0:
            return math.inf
        if self.probability == 1:
            return 0.0
        return _neg_log2(self.probability) / math.log2(self.base)

    def __float__(self) -> float:
        return self.value

    def _comparable(self, other: 'KmValue') -> Fraction:
        if not isinstance(other, KmValue):
            raise TypeError(f"cannot compare a measure with {type(other).__name__}")
        if other.base != self.base:
            raise ValueError(f'cannot compare measures in base {self.base} and {other.base}')
        return other.probability

    def __lt__(self, other: 'KmValue') -> bool:
        return self.probability > self._comparable(other)

    def __le__(self, other: 'KmValue') -> bool:
        return self.probability >= self._comparable(other)

    def __gt__(self, other: 'KmValue') -> bool:
        return self.probability < self._comparable(other)

    def __ge__(self, other: 'KmValue') -> bool:
        return self.probability <= self._comparable(other)

    def __add__(self, other: 'KmValue') -> float:
        return self.value + float(other)

    def __sub__(self, other: 'KmValue') -> float:
        """Extended-real difference; inf - inf is undefined"""
        mine, theirs = self.value, float(other)
        if math.isinf(mine) and math.isinf(theirs):
            raise ValueError('inf - inf is undefined')
        return mine - theirs

    def render(self, decimals: int = 3) -> str:
        return format_measure(self.value, decimals)

    def __str__(self) -> str:
        return self.render()


LITERAL_NEGATION = "~"


class Substitution(BaseModel):
    """Bijection letter -> literal over one alphabet, e.g. {'p': '~q', 'q': 'p'}"""

    model_config = ConfigDict(frozen=True)

    alphabet: Alphabet
    mapping: Dict[str, str]

    @model_validator(mode='after')
    def validate_bijection(self):
        letters = set(self.alphabet.letters)
        if set(self.mapping) != letters:
            raise ValueError('substitution keys must be exactly the alphabet letters')
        targets = [literal.lstrip(LITERAL_NEGATION) for literal in self.mapping.values()]
        for literal in self.mapping.values():
            body = literal[1:] if literal.startswith(LITERAL_NEGATION) else literal
            if body not in letters:
                raise ValueError(f"'{literal}' is not a literal over the alphabet")
        if len(set(targets)) != len(targets):
            raise ValueError('every letter must occur exactly once among the substituted literals')
        return self

    @classmethod
    def identity(cls, alphabet: Alphabet) -> 'Substitution':
        return cls(alphabet=alphabet, mapping={letter: letter for letter in alphabet.letters})

    @classmethod
    def from_permutation(cls, alphabet: Alphabet, targets: Tuple[int, ...], signs: Tuple[int, ...]) -> 'Substitution':
        mapping = {}
        for i, letter in enumerate(alphabet.letters):
            target = alphabet.letters[targets[i]]
            mapping[letter] = f"{LITERAL_NEGATION}{target}" if signs[i] else target
        return cls(alphabet=alphabet, mapping=mapping)

    def as_permutation(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """(target index, negated flag) per letter index"""
        targets, signs = [], []
        for letter in self.alphabet.letters:
            literal = self.mapping[letter]
            negated = literal.startswith(LITERAL_NEGATION)
            targets.append(self.alphabet.index(literal[1:] if negated else literal))
            signs.append(1 if negated else 0)
        return tuple(targets), tuple(signs)

    def render(self) -> str:
        return "{" + ", ".join(f"{letter}/{self.mapping[letter]}" for letter in self.alphabet.letters) + "}"
