"""
🗂️ Session Model
The alphabet, distribution and current belief a CLI invocation works on
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, model_validator

from models.distributions import ProbDist
from models.logic import Alphabet, Formula, Top
from services.logic import letters, models_mask


class Session(BaseModel):
    model_config = ConfigDict(frozen=True)

    alphabet: Alphabet
    dist: ProbDist
    belief: Formula = Top()

    @model_validator(mode='after')
    def validate_session(self):
        if self.dist.alphabet != self.alphabet:
            raise ValueError(f'distribution is over [{self.dist.alphabet}], session alphabet is [{self.alphabet}]')
        outside = [letter for letter in letters(self.belief) if letter not in self.alphabet]
        if outside:
            raise ValueError(f"belief uses letters {', '.join(outside)} outside [{self.alphabet}]")
        if models_mask(self.belief, self.alphabet) & self.dist.support_mask == 0:
            raise ValueError(f"belief '{self.belief.render()}' has no possible model under the distribution")
        return self

    @classmethod
    def open(cls, dist: ProbDist, belief: Optional[Formula] = None) -> 'Session':
        return cls(alphabet=dist.alphabet, dist=dist, belief=belief if belief is not None else Top())

    def with_belief(self, belief: Formula) -> 'Session':
        return Session(alphabet=self.alphabet, dist=self.dist, belief=belief)


class DemoReport(BaseModel):
    """Printed lines of a scripted demo plus its headline values keyed by name"""

    name: str
    title: str
    lines: List[str]
    values: Dict[str, str]

    def render(self) -> str:
        return "\n".join([self.title, "=" * len(self.title), *self.lines])
