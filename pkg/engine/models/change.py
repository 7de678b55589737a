"""
🔀 Belief Change Models
Remainder sets, sphere systems and change reports
"""

import math
from fractions import Fraction
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config.settings import engine_config
from models.logic import Formula, PossibleWorldSet, WorldSet
from models.measures import KmValue
from services.logic import formula_of_worlds, models_mask

OperatorName = Literal['contraction', 'full-meet', 'severe-withdrawal', 'revision', 'expansion']
MeasureName = Literal['L', 'G', 'R']


class RemainderCandidate(BaseModel):
    """[phi]+ plus one possible counter-model of alpha"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    world: int = Field(..., ge=0)
    probability: Fraction


class RemainderSet(BaseModel):
    """phi remainder alpha: either one candidate per possible counter-model, or [phi]+ alone"""

    model_config = ConfigDict(frozen=True)

    base: PossibleWorldSet
    candidates: Tuple[RemainderCandidate, ...] = ()
    collapsed: bool = False

    @model_validator(mode='after')
    def validate_shape(self):
        if self.collapsed and self.candidates:
            raise ValueError('a collapsed remainder set has no per-world candidates')
        if not self.collapsed and not self.candidates:
            raise ValueError('a non-collapsed remainder set needs at least one candidate')
        for candidate in self.candidates:
            if candidate.world in self.base:
                raise ValueError('remainder candidates must add a world outside [phi]+')
        return self

    def world_sets(self) -> List[WorldSet]:
        if self.collapsed:
            return [self.base.as_world_set()]
        return [
            WorldSet(alphabet=self.base.alphabet, mask=self.base.mask | 1 << candidate.world)
            for candidate in self.candidates
        ]

    def formulas(self) -> List[Formula]:
        return [formula_of_worlds(ws) for ws in self.world_sets()]

    def probabilities(self) -> List[Fraction]:
        if self.collapsed:
            return []
        return [candidate.probability for candidate in self.candidates]

    def __len__(self) -> int:
        return 1 if self.collapsed else len(self.candidates)


class Annulus(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    worlds: PossibleWorldSet
    mass: Fraction


class SphereSystem(BaseModel):
    """Nested spheres centred on [phi]+; each annulus holds worlds of one mass, masses decrease outwards"""

    model_config = ConfigDict(frozen=True)

    center: PossibleWorldSet
    annuli: Tuple[Annulus, ...] = ()

    @model_validator(mode='after')
    def validate_nesting(self):
        covered = self.center.mask
        previous: Optional[Fraction] = None
        for annulus in self.annuli:
            if annulus.worlds.is_empty():
                raise ValueError('annuli must be non-empty')
            if annulus.worlds.mask & covered:
                raise ValueError('annuli must be disjoint from the centre and from each other')
            if previous is not None and not annulus.mass < previous:
                raise ValueError('annulus masses must strictly decrease outwards')
            covered |= annulus.worlds.mask
            previous = annulus.mass
        if covered != self.center.support:
            raise ValueError('centre and annuli must cover every possible world')
        return self

    def spheres(self) -> List[WorldSet]:
        """sigma_0 = centre, ..., sigma_n = all possible worlds"""
        alphabet = self.center.alphabet
        mask = self.center.mask
        spheres = [WorldSet(alphabet=alphabet, mask=mask)]
        for annulus in self.annuli:
            mask |= annulus.worlds.mask
            spheres.append(WorldSet(alphabet=alphabet, mask=mask))
        return spheres

    def smallest_meeting(self, mask: int) -> Optional[WorldSet]:
        """Innermost sphere that intersects ``mask``; None when no possible world of ``mask`` exists"""
        for sphere in self.spheres():
            if sphere.mask & mask:
                return sphere
        return None


class ChangeReport(BaseModel):
    """Outcome of one change operation with its information measure

    ``kappa_before``/``kappa_after`` give the definitional measure; ``closed_form``
    is the same quantity computed from probabilities only.
    """

    model_config = ConfigDict(frozen=True)

    operator: OperatorName
    phi: Formula
    alpha: Formula
    result: Formula
    result_worlds: PossibleWorldSet
    kappa_before: KmValue
    kappa_after: KmValue
    closed_form: float

    @model_validator(mode='after')
    def validate_report(self):
        if models_mask(self.result, self.result_worlds.alphabet) != self.result_worlds.mask:
            raise ValueError('result formula and result worlds disagree')
        if self.measure_name in ('L', 'G') and self.measure < -engine_config.MEASURE_TOLERANCE:
            raise ValueError(f'{self.measure_name} must be non-negative (got {self.measure})')
        return self

    @property
    def measure_name(self) -> MeasureName:
        if self.operator == 'expansion':
            return 'G'
        if self.operator == 'revision':
            return 'R'
        return 'L'

    @property
    def measure(self) -> float:
        """L = kappa(before) - kappa(after); G and R = kappa(after) - kappa(before)"""
        if self.measure_name == 'L':
            return self.kappa_before - self.kappa_after
        return self.kappa_after - self.kappa_before

    @property
    def loss(self) -> Optional[float]:
        return self.measure if self.measure_name == 'L' else None

    @property
    def gain(self) -> Optional[float]:
        return self.measure if self.measure_name == 'G' else None

    @property
    def change(self) -> Optional[float]:
        return self.measure if self.measure_name == 'R' else None

    def agrees(self, tolerance: Optional[float] = None) -> bool:
        """Definitional measure and closed form coincide"""
        tolerance = engine_config.MEASURE_TOLERANCE if tolerance is None else tolerance
        definitional = self.measure
        if math.isinf(definitional) or math.isinf(self.closed_form):
            return definitional == self.closed_form
        return abs(definitional - self.closed_form) <= tolerance
