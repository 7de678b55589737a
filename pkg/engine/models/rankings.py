"""
🪜 Ranking Models
Faithful rankings over worlds and representation-check reports
"""

from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from models.logic import Alphabet, Formula, WorldSet
from services.logic import models_mask


class FaithfulRanking(BaseModel):
    """Natural-number grading of every world with exactly [phi] at rank 0"""

    model_config = ConfigDict(frozen=True)

    phi: Formula
    alphabet: Alphabet
    ranks: Tuple[int, ...]

    @field_validator('ranks')
    @classmethod
    def validate_ranks(cls, v):
        if any(rank < 0 for rank in v):
            raise ValueError('ranks must be natural numbers')
        used = set(v)
        if used and used != set(range(max(used) + 1)):
            raise ValueError(f'ranks must form a contiguous range from 0, got {sorted(used)}')
        return v

    @model_validator(mode='after')
    def validate_faithful(self):
        if len(self.ranks) != self.alphabet.world_count:
            raise ValueError(
                f'a ranking over [{self.alphabet}] needs {self.alphabet.world_count} ranks, got {len(self.ranks)}'
            )
        if self.rank_mask(0) != models_mask(self.phi, self.alphabet):
            raise ValueError(f"rank-0 worlds must be exactly the models of '{self.phi.render()}'")
        return self

    @property
    def max_rank(self) -> int:
        return max(self.ranks)

    def rank(self, world: int) -> int:
        return self.ranks[world]

    def rank_mask(self, rank: int) -> int:
        mask = 0
        for world, value in enumerate(self.ranks):
            if value == rank:
                mask |= 1 << world
        return mask

    def min_rank_mask(self, mask: int) -> int:
        """Worlds of ``mask`` with the smallest rank; 0 for an empty mask"""
        if mask == 0:
            return 0
        lowest = min(self.ranks[w] for w in range(len(self.ranks)) if mask >> w & 1)
        return mask & self.rank_mask(lowest)

    def levels(self) -> List[WorldSet]:
        return [WorldSet(alphabet=self.alphabet, mask=self.rank_mask(r)) for r in range(self.max_rank + 1)]

    def as_mapping(self) -> Dict[str, int]:
        return {self.alphabet.world_bits(w): rank for w, rank in enumerate(self.ranks)}


class RepresentationDiscrepancy(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: Formula
    ranked: WorldSet
    measured: WorldSet


class RepresentationReport(BaseModel):
    """Ranked operator vs. the measure-based operator on dist_from_ranking"""

    model_config = ConfigDict(frozen=True)

    operator: str
    phi: Formula
    checked: int = 0
    discrepancies: Tuple[RepresentationDiscrepancy, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.discrepancies


class RankingDocument(BaseModel):
    """JSON form of a ranking: letters plus bitstring -> rank"""

    alphabet: List[str]
    ranks: Dict[str, int]
