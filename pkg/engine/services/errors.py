"""
🚨 Engine Errors
Exception hierarchy shared by every service
"""

from typing import Optional


class BeliefEngineError(Exception):
    """Base class for all errors raised by the engine"""
    pass


class FormulaSyntaxError(BeliefEngineError):
    """Formula text does not conform to the grammar"""

    def __init__(self, message: str, position: Optional[int] = None, text: Optional[str] = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class NestedConstantError(FormulaSyntaxError):
    """true/false used inside a larger formula"""
    pass


class UnknownLetterError(BeliefEngineError):
    """Identifier not in the ambient alphabet"""

    def __init__(self, letter: str, position: Optional[int] = None):
        self.letter = letter
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"Unknown letter '{letter}'{where}")


class AlphabetError(BeliefEngineError):
    """Malformed alphabet (duplicates, reserved words, size out of range)"""
    pass


class AlphabetMismatchError(BeliefEngineError):
    """Formula, world set or distribution built over an incompatible alphabet"""
    pass


class DistributionError(BeliefEngineError):
    """Invalid probability distribution or distribution file"""
    pass


class InconsistentBeliefError(BeliefEngineError):
    """The belief is not P-consistent where the operation requires it"""
    pass


class EnumerationCapError(BeliefEngineError):
    """An exhaustive operation was asked to run above its configured cap"""
    pass


class SubstitutionError(BeliefEngineError):
    """Substitution is not a bijection between letters and literals"""
    pass


class RankingError(BeliefEngineError):
    """Preorder or ranking is not total, transitive or faithful"""
    pass


class InvariantBreachError(BeliefEngineError):
    """Two independent computations of the same quantity disagree"""
    pass


class UnknownOperatorError(BeliefEngineError):
    """Operator name not in the registry"""
    pass
