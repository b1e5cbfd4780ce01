import pytest
from hypothesis import given, settings

from app.errors import InvalidInputError, ParseError
from app.services.curves import canonical_twist, delta, gamma, twist_word
from app.services.grammar import parse_twist_word, print_twist_word
from app.services.oracle import words_equal
from app.services.twists import conjugate_twist, lantern_step

from .conftest import twist_words


def test_parse_basic_letters():
    w = parse_twist_word("d1 g3^-2 t{1,3}", 3)
    assert list(w.letters) == [delta(1), gamma(3, -1), gamma(3, -1), canonical_twist((1, 3))]


def test_single_index_set_is_a_delta():
    assert parse_twist_word("t{2}", 2).letters == (delta(2),)


def test_zero_exponent_and_empty_input():
    assert len(parse_twist_word("d1^0", 2)) == 0
    assert len(parse_twist_word("", 2)) == 0


def test_index_out_of_range():
    with pytest.raises(InvalidInputError):
        parse_twist_word("t{1,5}", 3)
    with pytest.raises(InvalidInputError):
        parse_twist_word("g1", 3)


def test_parse_error_reports_the_column():
    with pytest.raises(ParseError) as info:
        parse_twist_word("x{", 3)
    assert info.value.column == 1
    assert "column 1" in str(info.value)


@pytest.mark.parametrize("text", ["d1 t{}", "d1 g", "t{1,2", "d1^"])
def test_malformed_words(text):
    with pytest.raises(ParseError):
        parse_twist_word(text, 3)


def test_framed_letter():
    w = parse_twist_word("t{2,3}[g2]^-1", 3)
    (letter,) = w.letters
    expected = conjugate_twist(canonical_twist((2, 3), -1), twist_word([gamma(2)], 3))
    assert letter == expected


def test_print_compresses_runs():
    w = twist_word([gamma(3), gamma(3), delta(1, -1), canonical_twist((1, 3))], 3)
    assert print_twist_word(w.letters) == "g3^2 d1^-1 t{1,3}"


@pytest.mark.parametrize(
    "text, expected",
    [
        ("d1d2", [delta(1), delta(2)]),
        ("t{1, 3}", [canonical_twist((1, 3))]),
        ("g3^+2", [gamma(3), gamma(3)]),
        ("d 1", [delta(1)]),
        ("t{1,3}^-1 d2^2", [canonical_twist((1, 3), -1), delta(2), delta(2)]),
    ],
)
def test_spacing_and_signed_exponents(text, expected):
    assert list(parse_twist_word(text, 3).letters) == expected


def test_frame_with_exponents_inside():
    w = parse_twist_word("t{2,3}[g2^2 d1]", 3)
    (letter,) = w.letters
    expected = conjugate_twist(canonical_twist((2, 3)), twist_word([gamma(2), gamma(2), delta(1)], 3))
    assert letter == expected


@settings(max_examples=60, deadline=None)
@given(twist_words(max_n=5, max_length=6))
def test_print_then_parse_preserves_the_word(w):
    assert parse_twist_word(print_twist_word(w.letters), w.n).letters == w.letters


def test_lantern_output_survives_printing():
    out = lantern_step(canonical_twist((1, 3, 4)), 4)
    text = print_twist_word(out)
    parsed = parse_twist_word(text, 4)
    assert words_equal(parsed, twist_word(out, 4))
    assert words_equal(parsed, twist_word([canonical_twist((1, 3, 4))], 4))
