"""Text form of twist words.

    word     := twist*
    twist    := base frame? exponent?
    base     := "d" INT | "g" INT | "t{" INT ("," INT)* "}"
    frame    := "[" word "]"
    exponent := "^" SIGNED_INT

A frame marks a conjugated curve: ``t{2,3}[g2]`` is the twist along the
image of the canonical curve around B2, B3 under gamma_2.
"""
import functools
import logging
from typing import List

from pyparsing import (
    Combine,
    Forward,
    Group,
    Literal,
    Optional,
    ParseException,
    Suppress,
    Word,
    ZeroOrMore,
    nums,
)

from ..errors import InvalidInputError, ParseError
from .curves import Surface, Twist, TwistWord, canonical_curve
from .twists import conjugate_twist

logger = logging.getLogger(__name__)


@functools.lru_cache()
def _grammar():
    integer = Word(nums)
    signed_integer = Combine(Optional(Literal("+") | Literal("-")) + Word(nums))

    delta_base = Group(Literal("d") + integer)
    gamma_base = Group(Literal("g") + integer)
    set_base = Group(Literal("t") + Suppress("{") + integer + ZeroOrMore(Suppress(",") + integer) + Suppress("}"))

    word = Forward()
    frame = Group(Suppress("[") + word + Suppress("]"))
    exponent = Suppress("^") + signed_integer("exponent")
    # names sit on the inner groups so item["base"] is ["d", "1"], not [["d", "1"]]
    twist = Group(
        (delta_base("base") | gamma_base("base") | set_base("base"))
        + Optional(frame("frame"))
        + Optional(exponent)
    )
    word <<= Group(ZeroOrMore(twist))
    return word


def _indices(base, n: int) -> List[int]:
    kind, values = base[0], [int(v) for v in base[1:]]
    if kind == "d":
        indices = values
    elif kind == "g":
        j = values[0]
        if j < 2:
            raise InvalidInputError(f"g{j} is not a gamma; gammas start at g2")
        indices = list(range(1, j + 1))
    else:
        indices = values
    surface = Surface(n)
    for i in indices:
        surface.check_index(i)
    if len(set(indices)) != len(indices):
        raise InvalidInputError(f"repeated boundary index in {kind}{{{','.join(map(str, values))}}}")
    return indices


def _build(tokens, n: int) -> List[Twist]:
    letters: List[Twist] = []
    for item in tokens:
        base = item["base"]
        twist = Twist(canonical_curve(_indices(base, n)), 1)
        if "frame" in item:
            frame_letters = _build(item["frame"][0], n)
            twist = conjugate_twist(twist, TwistWord(tuple(frame_letters), Surface(n)))
        exponent = int(item["exponent"]) if "exponent" in item else 1
        if exponent < 0:
            twist = twist.inverse()
        letters.extend([twist] * abs(exponent))
    return letters


def parse_twist_word(text: str, n: int) -> TwistWord:
    try:
        tokens = _grammar().parseString(text, parseAll=True)
    except ParseException as exc:
        raise ParseError(f"cannot parse twist word {text!r}: {exc.msg}", exc.col) from exc
    return TwistWord(tuple(_build(tokens[0], n)), Surface(n))


def format_twist(t: Twist) -> str:
    """Text for a right-handed copy of ``t`` (sign handled by the caller)."""
    if t.is_delta:
        return f"d{t.enclosed[0]}"
    if t.curve.is_prefix and not t.curve.frame:
        return f"g{t.enclosed[-1]}"
    text = "t{" + ",".join(str(i) for i in t.enclosed) + "}"
    if t.curve.frame:
        text += "[" + print_twist_word(t.curve.frame) + "]"
    return text


def print_twist_word(letters) -> str:
    letters = list(letters)
    chunks: List[str] = []
    i = 0
    while i < len(letters):
        j = i
        while j + 1 < len(letters) and letters[j + 1] == letters[i]:
            j += 1
        exponent = (j - i + 1) * letters[i].sign
        base = format_twist(letters[i])
        chunks.append(base if exponent == 1 else f"{base}^{exponent}")
        i = j + 1
    return " ".join(chunks)
