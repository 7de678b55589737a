"""
🌐 Possible-Worlds Semantics
Model sets, entailment and formula construction over a finite alphabet
"""

import logging
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

from models.logic import (
    Alphabet, And, Atom, BinaryFormula, Bottom, Formula, Iff, Implies, Not, Or,
    Top, WorldSet,
)
from services.errors import AlphabetError, AlphabetMismatchError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=512)
def atom_mask(world_count: int, index: int) -> int:
    """Bitmask of the worlds (out of ``world_count``) in which letter ``index`` is true"""
    half = 1 << index
    period = half << 1
    mask = ((1 << half) - 1) << half
    length = period
    while length < world_count:
        mask |= mask << length
        length <<= 1
    return mask & ((1 << world_count) - 1)


def walk(phi: Formula) -> Iterator[Formula]:
    """Pre-order traversal without recursion"""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def letters(phi: Formula) -> Tuple[str, ...]:
    """Letters occurring in phi, in order of first occurrence; empty for true/false"""
    seen: List[str] = []
    for node in walk(phi):
        if isinstance(node, Atom) and node.letter not in seen:
            seen.append(node.letter)
    return tuple(seen)


def letters_alphabet(phi: Formula) -> Optional[Alphabet]:
    found = letters(phi)
    return Alphabet(letters=found) if found else None


def length(phi: Formula) -> int:
    """|p| = 1, |~f| = 1 + |f|, |f o g| = 1 + |f| + |g|; constants count 1"""
    return sum(1 for _ in walk(phi))


def check_letters(phi: Formula, alphabet: Alphabet) -> None:
    missing = [letter for letter in letters(phi) if letter not in alphabet]
    if missing:
        raise AlphabetMismatchError(
            f"Formula '{phi.render()}' uses letters {', '.join(missing)} outside the alphabet [{alphabet}]"
        )


def models_mask(phi: Formula, alphabet: Alphabet) -> int:
    """Bitmask of the models of phi; post-order evaluation with an explicit stack"""
    check_letters(phi, alphabet)
    count = alphabet.world_count
    full = alphabet.full_mask
    values: dict = {}
    stack: List[Tuple[Formula, bool]] = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        key = id(node)
        if key in values:
            continue
        if isinstance(node, Top):
            values[key] = full
        elif isinstance(node, Bottom):
            values[key] = 0
        elif isinstance(node, Atom):
            values[key] = atom_mask(count, alphabet.index(node.letter))
        elif not expanded:
            stack.append((node, True))
            for child in node.children():
                stack.append((child, False))
        elif isinstance(node, Not):
            values[key] = full & ~values[id(node.operand)]
        elif isinstance(node, BinaryFormula):
            left, right = values[id(node.left)], values[id(node.right)]
            if isinstance(node, And):
                values[key] = left & right
            elif isinstance(node, Or):
                values[key] = left | right
            elif isinstance(node, Implies):
                values[key] = (full & ~left) | right
            elif isinstance(node, Iff):
                values[key] = full & ~(left ^ right)
            else:
                raise TypeError(f"Unsupported connective {type(node).__name__}")
        else:
            raise TypeError(f"Unsupported formula node {type(node).__name__}")
    return values[id(phi)]


def models(phi: Formula, alphabet: Alphabet) -> WorldSet:
    """[phi] over the alphabet"""
    return WorldSet(alphabet=alphabet, mask=models_mask(phi, alphabet))


def entails(phi: Formula, psi: Formula, alphabet: Alphabet) -> bool:
    return models_mask(phi, alphabet) & ~models_mask(psi, alphabet) == 0


def strictly_entails(phi: Formula, psi: Formula, alphabet: Alphabet) -> bool:
    return entails(phi, psi, alphabet) and not entails(psi, phi, alphabet)


def equivalent(phi: Formula, psi: Formula, alphabet: Alphabet) -> bool:
    return models_mask(phi, alphabet) == models_mask(psi, alphabet)


# ---------------------------------------------------------------------------
# Constant-folding constructors
# ---------------------------------------------------------------------------

def negate(phi: Formula) -> Formula:
    if isinstance(phi, Top):
        return Bottom()
    if isinstance(phi, Bottom):
        return Top()
    return Not(operand=phi)


def conjoin(phi: Formula, psi: Formula) -> Formula:
    if isinstance(phi, Bottom) or isinstance(psi, Bottom):
        return Bottom()
    if isinstance(phi, Top):
        return psi
    if isinstance(psi, Top):
        return phi
    return And(left=phi, right=psi)


def disjoin(phi: Formula, psi: Formula) -> Formula:
    if isinstance(phi, Top) or isinstance(psi, Top):
        return Top()
    if isinstance(phi, Bottom):
        return psi
    if isinstance(psi, Bottom):
        return phi
    return Or(left=phi, right=psi)


def conjoin_all(formulas: Sequence[Formula]) -> Formula:
    result: Formula = Top()
    for formula in formulas:
        result = conjoin(result, formula)
    return result


def disjoin_all(formulas: Sequence[Formula]) -> Formula:
    result: Formula = Bottom()
    for formula in formulas:
        result = disjoin(result, formula)
    return result


def world_formula(world: int, alphabet: Alphabet) -> Formula:
    """Conjunction of the literals true in ``world``, in alphabet order"""
    literals: List[Formula] = []
    for i, letter in enumerate(alphabet.letters):
        atom = Atom(letter=letter)
        literals.append(atom if world >> i & 1 else Not(operand=atom))
    return conjoin_all(literals)


def formula_of_worlds(ws: WorldSet) -> Formula:
    """Empty set gives false, the full set gives true, otherwise a disjunction of world conjunctions"""
    if ws.is_empty():
        return Bottom()
    if ws.is_full():
        return Top()
    return disjoin_all([world_formula(w, ws.alphabet) for w in ws.worlds()])


def extend_world(world: int, source: Alphabet, target: Alphabet) -> WorldSet:
    """All worlds over ``target`` that agree with ``world`` on the letters of ``source``"""
    if not source.issubset(target):
        raise AlphabetError(f"[{source}] is not contained in [{target}]")
    if not 0 <= world < source.world_count:
        raise AlphabetMismatchError(f"World {world} is outside the space over [{source}]")
    mask = target.full_mask
    for i, letter in enumerate(source.letters):
        letter_mask = atom_mask(target.world_count, target.index(letter))
        mask &= letter_mask if world >> i & 1 else ~letter_mask
    return WorldSet(alphabet=target, mask=mask & target.full_mask)


def project_world(world: int, source: Alphabet, target: Alphabet) -> int:
    """Restriction of a world over ``source`` to the letters of ``target``"""
    projected = 0
    for j, letter in enumerate(target.letters):
        if world >> source.index(letter) & 1:
            projected |= 1 << j
    return projected


def render_world(world: int, alphabet: Alphabet) -> str:
    return alphabet.render_world(world)


def parse_world(bits: str, alphabet: Alphabet) -> int:
    return alphabet.parse_world(bits)
