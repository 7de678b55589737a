"""
🧪 Formula Parser Tests
Grammar, precedence, associativity and error positions
"""

import pytest

from models.logic import Alphabet, And, Atom, Bottom, Iff, Implies, Not, Or, Top
from services.errors import FormulaSyntaxError, NestedConstantError, UnknownLetterError
from services.parser import parse, tokenize

pytestmark = pytest.mark.unit


def atom(letter):
    return Atom(letter=letter)


class TestPrecedence:
    """Test binding strength of the connectives"""

    def test_and_binds_tighter_than_or(self):
        """Test a | b & c groups as a | (b & c)"""
        assert parse("a | b & c") == Or(left=atom("a"), right=And(left=atom("b"), right=atom("c")))

    def test_or_binds_tighter_than_implies(self):
        """Test a | b -> c groups as (a | b) -> c"""
        assert parse("a | b -> c") == Implies(left=Or(left=atom("a"), right=atom("b")), right=atom("c"))

    def test_implies_binds_tighter_than_iff(self):
        """Test a -> b <-> c groups as (a -> b) <-> c"""
        assert parse("a -> b <-> c") == Iff(left=Implies(left=atom("a"), right=atom("b")), right=atom("c"))

    def test_negation_binds_tightest(self):
        """Test ~a & b negates only a"""
        assert parse("~a & b") == And(left=Not(operand=atom("a")), right=atom("b"))

    def test_parentheses_override(self):
        """Test parentheses regroup an expression"""
        assert parse("(a | b) & c") == And(left=Or(left=atom("a"), right=atom("b")), right=atom("c"))


class TestAssociativity:
    """Test associativity of the binary connectives"""

    def test_implication_is_right_associative(self):
        """Test a -> b -> c is a -> (b -> c)"""
        assert parse("a -> b -> c") == Implies(left=atom("a"), right=Implies(left=atom("b"), right=atom("c")))

    def test_conjunction_is_left_associative(self):
        """Test a & b & c is (a & b) & c"""
        assert parse("a & b & c") == And(left=And(left=atom("a"), right=atom("b")), right=atom("c"))

    def test_iff_is_left_associative(self):
        """Test a <-> b <-> c is (a <-> b) <-> c"""
        assert parse("a <-> b <-> c") == Iff(left=Iff(left=atom("a"), right=atom("b")), right=atom("c"))

    def test_double_negation(self):
        """Test stacked negations parse"""
        assert parse("~~a") == Not(operand=Not(operand=atom("a")))


class TestRendering:
    """Test that rendering parses back to the same tree"""

    @pytest.mark.parametrize("text", [
        "a & b | c",
        "a -> b -> c",
        "(a -> b) -> c",
        "~(a | b) <-> c",
        "b & (b -> f) & (p -> b) & (o -> b) & ~(p & o)",
        "a & (b & c)",
    ])
    def test_render_reparses(self, text):
        """Test render output is parsed into an identical formula"""
        formula = parse(text)
        assert parse(formula.render()) == formula

    def test_minimal_parentheses(self):
        """Test rendering adds only the parentheses precedence requires"""
        assert parse("((a) & (b)) | c").render() == "a & b | c"
        assert parse("a & (b | c)").render() == "a & (b | c)"


class TestConstants:
    """Test true/false handling"""

    def test_whole_formula_constants(self):
        """Test true and false parse on their own"""
        assert parse("true") == Top()
        assert parse("false") == Bottom()
        assert parse(" ( true ) ") == Top()

    @pytest.mark.parametrize("text", ["a & true", "false | a", "~true", "a -> false", "(true) <-> a"])
    def test_nested_constant_rejected(self, text):
        """Test constants inside a larger formula are rejected"""
        with pytest.raises(NestedConstantError):
            parse(text)

    def test_nested_constant_is_a_syntax_error(self):
        """Test the nested-constant error is a syntax error subtype"""
        with pytest.raises(FormulaSyntaxError):
            parse("a & true")


class TestSyntaxErrors:
    """Test malformed input reports a position"""

    @pytest.mark.parametrize("text,position", [
        ("a &", 3),
        ("(a | b", 6),
        ("a b", 2),
        ("a $ b", 2),
        (")", 0),
    ])
    def test_error_position(self, text, position):
        """Test syntax errors carry the offending position"""
        with pytest.raises(FormulaSyntaxError) as exc_info:
            parse(text)
        assert exc_info.value.position == position
        assert f"position {position}" in str(exc_info.value)

    def test_empty_formula(self):
        """Test blank input is rejected"""
        with pytest.raises(FormulaSyntaxError):
            parse("   ")

    def test_unknown_letter(self):
        """Test a letter outside the alphabet is rejected with its position"""
        with pytest.raises(UnknownLetterError) as exc_info:
            parse("a & z", Alphabet.of("a", "b"))
        assert exc_info.value.letter == "z"
        assert exc_info.value.position == 4

    def test_letters_unrestricted_without_alphabet(self):
        """Test any identifier is a letter when no alphabet is given"""
        assert parse("penguin_2") == atom("penguin_2")


class TestTokenizer:
    """Test the tokenizer"""

    def test_multi_character_operators(self):
        """Test -> and <-> are single tokens"""
        values = [token.value for token in tokenize("a<->b->c")]
        assert values == ["a", "<->", "b", "->", "c", ""]

    def test_end_token(self):
        """Test the stream ends with an end token at the text length"""
        tokens = tokenize("ab")
        assert tokens[-1].kind == "end"
        assert tokens[-1].position == 2
