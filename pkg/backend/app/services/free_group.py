"""Reduced words in the free group on x1..xn.

A word is a tuple of nonzero ints: ``i`` stands for x_i and ``-i`` for its
inverse. Every function here returns freely reduced words.
"""
from typing import Iterable, Tuple

FreeWord = Tuple[int, ...]

EMPTY: FreeWord = ()


def reduce_word(letters: Iterable[int]) -> FreeWord:
    stack = []
    for letter in letters:
        if letter == 0:
            raise ValueError("0 is not a generator")
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def multiply(*words: FreeWord) -> FreeWord:
    out = []
    for w in words:
        out.extend(w)
    return reduce_word(out)


def invert(word: FreeWord) -> FreeWord:
    return tuple(-letter for letter in reversed(word))


def power(word: FreeWord, exponent: int) -> FreeWord:
    base = word if exponent >= 0 else invert(word)
    return reduce_word(base * abs(exponent))


def substitute(word: FreeWord, images) -> FreeWord:
    """Apply the endomorphism x_i -> images[i-1] to ``word``."""
    out = []
    for letter in word:
        image = images[abs(letter) - 1]
        out.extend(image if letter > 0 else invert(image))
    return reduce_word(out)


def increasing_product(indices: Iterable[int]) -> FreeWord:
    return tuple(sorted(indices))


def max_generator(word: FreeWord) -> int:
    return max((abs(letter) for letter in word), default=0)


def format_word(word: FreeWord) -> str:
    if not word:
        return "1"
    return " ".join(f"x{letter}" if letter > 0 else f"x{-letter}^-1" for letter in word)
