"""
🧩 Formula Parser
Recursive-descent parser for the propositional grammar

Grammar (loosest binding first):

    iff      := implies ('<->' implies)*          left associative
    implies  := or ('->' implies)?                right associative
    or       := and ('|' and)*                    left associative
    and      := unary ('&' unary)*                left associative
    unary    := '~' unary | primary
    primary  := LETTER | 'true' | 'false' | '(' iff ')'

true/false are accepted only as the entire formula.
"""

import logging
import re
from typing import List, NamedTuple, Optional

from models.logic import (
    Alphabet, And, Atom, Bottom, Formula, Iff, Implies, Not, Or, Top,
)
from services.errors import FormulaSyntaxError, NestedConstantError, UnknownLetterError

logger = logging.getLogger(__name__)

TOKEN_PATTERN = re.compile(
    r"\s*(?:(?P<op><->|->|~|&|\||\(|\))|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<bad>\S))"
)


class Token(NamedTuple):
    kind: str
    value: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    for match in TOKEN_PATTERN.finditer(text):
        if match.group('bad') is not None:
            raise FormulaSyntaxError(f"Unexpected character '{match.group('bad')}'", match.start('bad'), text)
        if match.group('op') is not None:
            tokens.append(Token('op', match.group('op'), match.start('op')))
        elif match.group('name') is not None:
            tokens.append(Token('name', match.group('name'), match.start('name')))
    tokens.append(Token('end', '', len(text)))
    return tokens


class FormulaParser:
    """Parses one formula; the alphabet, when given, restricts the letters"""

    def __init__(self, text: str, alphabet: Optional[Alphabet] = None):
        self.text = text
        self.alphabet = alphabet
        self.tokens = tokenize(text)
        self.pos = 0
        self._constant_positions: List[int] = []

    def _peek(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != 'end':
            self.pos += 1
        return token

    def _expect(self, value: str) -> Token:
        token = self._peek()
        if token.value != value or token.kind != 'op':
            found = "end of input" if token.kind == 'end' else f"'{token.value}'"
            raise FormulaSyntaxError(f"Expected '{value}' but found {found}", token.position, self.text)
        return self._advance()

    def _combine(self, node_cls, *operands: Formula) -> Formula:
        if any(operand.is_constant for operand in operands):
            raise NestedConstantError(
                "true/false cannot occur inside a larger formula",
                self._constant_positions[0],
                self.text,
            )
        if node_cls is Not:
            return Not(operand=operands[0])
        return node_cls(left=operands[0], right=operands[1])

    def parse(self) -> Formula:
        if self._peek().kind == 'end':
            raise FormulaSyntaxError("Empty formula", 0, self.text)
        formula = self._parse_iff()
        token = self._peek()
        if token.kind != 'end':
            raise FormulaSyntaxError(f"Unexpected '{token.value}'", token.position, self.text)
        return formula

    def _parse_iff(self) -> Formula:
        left = self._parse_implies()
        while self._peek().value == '<->' and self._peek().kind == 'op':
            self._advance()
            left = self._combine(Iff, left, self._parse_implies())
        return left

    def _parse_implies(self) -> Formula:
        left = self._parse_or()
        if self._peek().value == '->' and self._peek().kind == 'op':
            self._advance()
            return self._combine(Implies, left, self._parse_implies())
        return left

    def _parse_or(self) -> Formula:
        left = self._parse_and()
        while self._peek().value == '|' and self._peek().kind == 'op':
            self._advance()
            left = self._combine(Or, left, self._parse_and())
        return left

    def _parse_and(self) -> Formula:
        left = self._parse_unary()
        while self._peek().value == '&' and self._peek().kind == 'op':
            self._advance()
            left = self._combine(And, left, self._parse_unary())
        return left

    def _parse_unary(self) -> Formula:
        if self._peek().value == '~' and self._peek().kind == 'op':
            self._advance()
            return self._combine(Not, self._parse_unary())
        return self._parse_primary()

    def _parse_primary(self) -> Formula:
        token = self._advance()
        if token.kind == 'op' and token.value == '(':
            inner = self._parse_iff()
            self._expect(')')
            return inner
        if token.kind == 'name':
            if token.value == 'true':
                self._constant_positions.append(token.position)
                return Top()
            if token.value == 'false':
                self._constant_positions.append(token.position)
                return Bottom()
            if self.alphabet is not None and token.value not in self.alphabet:
                raise UnknownLetterError(token.value, token.position)
            return Atom(letter=token.value)
        found = "end of input" if token.kind == 'end' else f"'{token.value}'"
        raise FormulaSyntaxError(f"Expected a letter, constant or '(' but found {found}", token.position, self.text)


def parse(text: str, alphabet: Optional[Alphabet] = None) -> Formula:
    """Parse ``text`` into a formula over ``alphabet``"""
    formula = FormulaParser(text, alphabet).parse()
    logger.debug(f"🧩 Parsed '{text}' as {formula.render()}")
    return formula
