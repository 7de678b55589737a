"""
📋 Postulate Models
Verdicts, witnesses and aggregated postulate reports
"""

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

PostulateFamily = Literal['contraction', 'severe', 'revision', 'iterated']

FAMILY_POSTULATES: Dict[str, tuple] = {
    'contraction': ('K1', 'K2', 'K3', 'K4', 'K5', 'K6', 'K7'),
    'severe': ('W1', 'W2', 'W3', 'W4', 'W6a', 'W7'),
    'revision': ('R1', 'R2', 'R3', 'R4', 'R5', 'R6', 'R7'),
    'iterated': ('C1', 'C2', 'C3', 'C4'),
}

# K: contraction (÷), W: severe withdrawal (⋇), R: revision (★), C: iterated revision
POSTULATE_NAMES: Dict[str, str] = {
    'K1': 'inclusion', 'K2': 'vacuity', 'K3': 'success', 'K4': 'extensionality',
    'K5': 'recovery', 'K6': 'conjunctive overlap', 'K7': 'conjunctive inclusion',
    'W1': 'inclusion', 'W2': 'vacuity', 'W3': 'success', 'W4': 'extensionality',
    'W6a': 'antitony', 'W7': 'conjunctive inclusion',
    'R1': 'inclusion', 'R2': 'vacuity', 'R3': 'success', 'R4': 'extensionality',
    'R5': 'consistency', 'R6': 'superexpansion', 'R7': 'subexpansion',
    'C1': 'same-direction iteration', 'C2': 'opposite-direction iteration',
    'C3': 'retained consequence', 'C4': 'retained consistency',
}


class Witness(BaseModel):
    """A concrete input on which a postulate was evaluated; formulas and distribution as text"""

    model_config = ConfigDict(frozen=True)

    family: PostulateFamily
    operator: str
    postulate: str
    distribution: str
    phi: str
    alpha: str
    beta: Optional[str] = None
    psi: Optional[str] = None

    def size_key(self) -> tuple:
        """Smaller witnesses sort first; used to pick one witness deterministically"""
        return (
            len(self.distribution),
            len(self.phi) + len(self.alpha) + len(self.beta or "") + len(self.psi or ""),
            self.distribution, self.phi, self.alpha, self.beta or "", self.psi or "",
        )


class PostulateVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    postulate: str
    checked: int = Field(default=0, ge=0)
    failed: int = Field(default=0, ge=0)
    witness: Optional[Witness] = None

    @model_validator(mode='after')
    def validate_witness(self):
        if self.failed > self.checked:
            raise ValueError('a postulate cannot fail more often than it was checked')
        if self.failed and self.witness is None:
            raise ValueError(f'failure of {self.postulate} must carry a witness')
        return self

    @property
    def holds(self) -> bool:
        return self.failed == 0

    @property
    def name(self) -> str:
        return POSTULATE_NAMES.get(self.postulate, self.postulate)

    def merge(self, other: 'PostulateVerdict') -> 'PostulateVerdict':
        witnesses = [w for w in (self.witness, other.witness) if w is not None]
        return PostulateVerdict(
            postulate=self.postulate,
            checked=self.checked + other.checked,
            failed=self.failed + other.failed,
            witness=min(witnesses, key=Witness.size_key) if witnesses else None,
        )


class PostulateReport(BaseModel):
    """Verdicts keyed by postulate; merging is commutative and associative"""

    model_config = ConfigDict(frozen=True)

    family: PostulateFamily
    operator: str
    cases: int = Field(default=0, ge=0)
    verdicts: Dict[str, PostulateVerdict] = Field(default_factory=dict)

    def verdict(self, postulate: str) -> PostulateVerdict:
        return self.verdicts.get(postulate, PostulateVerdict(postulate=postulate))

    def holds(self, postulate: str) -> bool:
        return self.verdict(postulate).holds

    @property
    def ok(self) -> bool:
        return all(v.holds for v in self.verdicts.values())

    def failures(self) -> List[PostulateVerdict]:
        return [self.verdicts[key] for key in sorted(self.verdicts) if not self.verdicts[key].holds]

    def merge(self, other: 'PostulateReport') -> 'PostulateReport':
        if (self.family, self.operator) != (other.family, other.operator):
            raise ValueError('only reports of the same family and operator can be merged')
        merged = dict(self.verdicts)
        for key, verdict in other.verdicts.items():
            merged[key] = merged[key].merge(verdict) if key in merged else verdict
        return PostulateReport(
            family=self.family,
            operator=self.operator,
            cases=self.cases + other.cases,
            verdicts={key: merged[key] for key in sorted(merged)},
        )
