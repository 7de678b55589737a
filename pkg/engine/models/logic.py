"""
🔤 Propositional Models
Alphabets, formula syntax trees and bitset world sets
"""

import re
from typing import ClassVar, Iterable, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import engine_config
from services.errors import AlphabetMismatchError, UnknownLetterError

LETTER_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
RESERVED_WORDS = frozenset({"true", "false"})


class Alphabet(BaseModel):
    """Ordered set of propositional letters; letter i is bit i of every world"""

    model_config = ConfigDict(frozen=True)

    letters: Tuple[str, ...] = Field(..., min_length=1)

    @field_validator('letters')
    @classmethod
    def validate_letters(cls, v):
        if len(v) > engine_config.MAX_LETTERS:
            raise ValueError(f'at most {engine_config.MAX_LETTERS} letters are supported (got {len(v)})')
        for letter in v:
            if not LETTER_PATTERN.match(letter):
                raise ValueError(f"'{letter}' is not a valid letter name")
            if letter in RESERVED_WORDS:
                raise ValueError(f"'{letter}' is reserved")
        if len(set(v)) != len(v):
            raise ValueError('letters must be distinct')
        return v

    @classmethod
    def from_text(cls, text: str) -> 'Alphabet':
        """Build from 'b p o f w' or 'b,p,o,f,w'"""
        return cls(letters=tuple(part for part in re.split(r"[\s,]+", text.strip()) if part))

    @classmethod
    def of(cls, *letters: str) -> 'Alphabet':
        return cls(letters=tuple(letters))

    @property
    def size(self) -> int:
        return len(self.letters)

    @property
    def world_count(self) -> int:
        return 1 << len(self.letters)

    @property
    def full_mask(self) -> int:
        return (1 << self.world_count) - 1

    def __contains__(self, letter: object) -> bool:
        return letter in self.letters

    def index(self, letter: str) -> int:
        try:
            return self.letters.index(letter)
        except ValueError:
            raise UnknownLetterError(letter)

    def issubset(self, other: 'Alphabet') -> bool:
        return set(self.letters) <= set(other.letters)

    def union(self, other: 'Alphabet') -> 'Alphabet':
        extra = tuple(letter for letter in other.letters if letter not in self.letters)
        return Alphabet(letters=self.letters + extra)

    def worlds(self) -> range:
        return range(self.world_count)

    def render_world(self, world: int) -> str:
        """Literal rendering, e.g. 'b -p o f -w'"""
        return " ".join(
            letter if world >> i & 1 else f"-{letter}"
            for i, letter in enumerate(self.letters)
        )

    def world_bits(self, world: int) -> str:
        """Fixed-width bitstring; character i is letter i"""
        return "".join("1" if world >> i & 1 else "0" for i in range(self.size))

    def parse_world(self, bits: str) -> int:
        bits = bits.strip()
        if len(bits) != self.size or set(bits) - {"0", "1"}:
            raise AlphabetMismatchError(
                f"World '{bits}' is not a {self.size}-character bitstring over {self.render()}"
            )
        return sum(1 << i for i, char in enumerate(bits) if char == "1")

    def render(self) -> str:
        return " ".join(self.letters)

    def __str__(self) -> str:
        return self.render()


# ---------------------------------------------------------------------------
# Formula syntax
# ---------------------------------------------------------------------------

class Formula(BaseModel):
    """Base node of the formula syntax tree"""

    model_config = ConfigDict(frozen=True)

    PRECEDENCE: ClassVar[int] = 100

    def render(self) -> str:
        raise NotImplementedError

    def children(self) -> Tuple['Formula', ...]:
        return ()

    @property
    def is_constant(self) -> bool:
        return False

    def __str__(self) -> str:
        return self.render()


class Top(Formula):
    def render(self) -> str:
        return "true"

    @property
    def is_constant(self) -> bool:
        return True


class Bottom(Formula):
    def render(self) -> str:
        return "false"

    @property
    def is_constant(self) -> bool:
        return True


class Atom(Formula):
    letter: str

    @field_validator('letter')
    @classmethod
    def validate_letter(cls, v):
        if not LETTER_PATTERN.match(v) or v in RESERVED_WORDS:
            raise ValueError(f"'{v}' is not a valid letter name")
        return v

    def render(self) -> str:
        return self.letter


def _reject_constant(operand: Formula) -> Formula:
    if operand.is_constant:
        raise ValueError('true/false may only appear as the whole formula')
    return operand


class Not(Formula):
    operand: Formula

    PRECEDENCE: ClassVar[int] = 50

    @field_validator('operand')
    @classmethod
    def validate_operand(cls, v):
        return _reject_constant(v)

    def children(self) -> Tuple[Formula, ...]:
        return (self.operand,)

    def render(self) -> str:
        inner = self.operand.render()
        if self.operand.PRECEDENCE < self.PRECEDENCE:
            inner = f"({inner})"
        return f"~{inner}"


class BinaryFormula(Formula):
    """Binary connective; subclasses fix symbol, precedence and associativity"""

    left: Formula
    right: Formula

    SYMBOL: ClassVar[str] = "?"
    RIGHT_ASSOCIATIVE: ClassVar[bool] = False

    @field_validator('left', 'right')
    @classmethod
    def validate_operands(cls, v):
        return _reject_constant(v)

    def children(self) -> Tuple[Formula, ...]:
        return (self.left, self.right)

    def _wrap(self, operand: Formula, allow_equal: bool) -> str:
        text = operand.render()
        if operand.PRECEDENCE < self.PRECEDENCE or (operand.PRECEDENCE == self.PRECEDENCE and not allow_equal):
            return f"({text})"
        return text

    def render(self) -> str:
        if self.RIGHT_ASSOCIATIVE:
            return f"{self._wrap(self.left, False)} {self.SYMBOL} {self._wrap(self.right, True)}"
        # walk the left spine iteratively; long disjunctions of worlds are left-deep
        rights: List[Formula] = []
        node: Formula = self
        while type(node) is type(self):
            rights.append(node.right)  # type: ignore[attr-defined]
            node = node.left  # type: ignore[attr-defined]
        parts = [self._wrap(node, True)] + [self._wrap(right, False) for right in reversed(rights)]
        return f" {self.SYMBOL} ".join(parts)


class And(BinaryFormula):
    SYMBOL: ClassVar[str] = "&"
    PRECEDENCE: ClassVar[int] = 40


class Or(BinaryFormula):
    SYMBOL: ClassVar[str] = "|"
    PRECEDENCE: ClassVar[int] = 30


class Implies(BinaryFormula):
    SYMBOL: ClassVar[str] = "->"
    PRECEDENCE: ClassVar[int] = 20
    RIGHT_ASSOCIATIVE: ClassVar[bool] = True


class Iff(BinaryFormula):
    SYMBOL: ClassVar[str] = "<->"
    PRECEDENCE: ClassVar[int] = 10


BINARY_CONNECTIVES = {cls.SYMBOL: cls for cls in (And, Or, Implies, Iff)}


# ---------------------------------------------------------------------------
# World sets
# ---------------------------------------------------------------------------

class WorldSet(BaseModel):
    """Subset of the 2^n worlds over an alphabet, stored as a bitmask (bit w = world w)"""

    model_config = ConfigDict(frozen=True)

    alphabet: Alphabet
    mask: int = Field(default=0, ge=0)

    @model_validator(mode='after')
    def validate_mask(self):
        if self.mask > self.alphabet.full_mask:
            raise ValueError(f'mask has worlds outside the {self.alphabet.world_count}-world space')
        return self

    @classmethod
    def from_worlds(cls, alphabet: Alphabet, worlds: Iterable[int]) -> 'WorldSet':
        mask = 0
        for world in worlds:
            if not 0 <= world < alphabet.world_count:
                raise AlphabetMismatchError(f"World {world} is outside the space over {alphabet}")
            mask |= 1 << world
        return cls(alphabet=alphabet, mask=mask)

    @classmethod
    def full(cls, alphabet: Alphabet) -> 'WorldSet':
        return cls(alphabet=alphabet, mask=alphabet.full_mask)

    @classmethod
    def empty(cls, alphabet: Alphabet) -> 'WorldSet':
        return cls(alphabet=alphabet, mask=0)

    def _check_alphabet(self, other: 'WorldSet') -> None:
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError(
                f"World sets over different alphabets: [{self.alphabet}] vs [{other.alphabet}]"
            )

    def worlds(self) -> List[int]:
        mask = self.mask
        found = []
        while mask:
            low = mask & -mask
            found.append(low.bit_length() - 1)
            mask ^= low
        return found

    @property
    def cardinality(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, world: object) -> bool:
        return isinstance(world, int) and 0 <= world < self.alphabet.world_count and bool(self.mask >> world & 1)

    def is_empty(self) -> bool:
        return self.mask == 0

    def is_full(self) -> bool:
        return self.mask == self.alphabet.full_mask

    def union(self, other: 'WorldSet') -> 'WorldSet':
        self._check_alphabet(other)
        return WorldSet(alphabet=self.alphabet, mask=self.mask | other.mask)

    def intersection(self, other: 'WorldSet') -> 'WorldSet':
        self._check_alphabet(other)
        return WorldSet(alphabet=self.alphabet, mask=self.mask & other.mask)

    def difference(self, other: 'WorldSet') -> 'WorldSet':
        self._check_alphabet(other)
        return WorldSet(alphabet=self.alphabet, mask=self.mask & ~other.mask)

    def complement(self) -> 'WorldSet':
        return WorldSet(alphabet=self.alphabet, mask=self.alphabet.full_mask & ~self.mask)

    def issubset(self, other: 'WorldSet') -> bool:
        self._check_alphabet(other)
        return self.mask & ~other.mask == 0

    def same_worlds(self, other: 'WorldSet') -> bool:
        self._check_alphabet(other)
        return self.mask == other.mask

    def rendered_worlds(self) -> List[str]:
        return [self.alphabet.render_world(w) for w in self.worlds()]

    def bitstrings(self) -> List[str]:
        return [self.alphabet.world_bits(w) for w in self.worlds()]

    def render(self) -> str:
        return "{" + ", ".join(self.rendered_worlds()) + "}"

    def __str__(self) -> str:
        return self.render()


class PossibleWorldSet(WorldSet):
    """World set restricted to the support of a distribution ([phi]+)"""

    support: int = Field(..., ge=0)

    @model_validator(mode='after')
    def validate_possible(self):
        if self.mask & ~self.support:
            raise ValueError('possible world sets may only contain worlds of non-zero mass')
        return self

    def as_world_set(self) -> WorldSet:
        return WorldSet(alphabet=self.alphabet, mask=self.mask)
