"""Surfaces, curves and Dehn twists on a planar surface.

The surface has an outer boundary B0 and inner boundaries B1..Bn. A curve
is recorded by the set of inner boundaries it encloses, its boundary word
in the free group, and an optional frame: a sequence of twists whose
product maps the canonical curve on the same set onto this one.
"""
import functools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Tuple

from ..errors import InvalidInputError
from .free_group import FreeWord, increasing_product, reduce_word


@dataclass(frozen=True)
class Surface:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"surface needs at least one inner boundary, got n={self.n}")

    def check_index(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise InvalidInputError(f"boundary index {i} outside 1..{self.n}")


@functools.total_ordering
@dataclass(frozen=True)
class ComplexityValue:
    """Either an index in 1..n or minus infinity (``value is None``)."""

    value: Optional[int] = None

    @property
    def is_minus_infinity(self) -> bool:
        return self.value is None

    def _key(self) -> int:
        return 0 if self.value is None else self.value

    def __lt__(self, other: "ComplexityValue") -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        return "-inf" if self.value is None else str(self.value)


MINUS_INFINITY = ComplexityValue(None)


def _normalize_set(indices: Iterable[int]) -> Tuple[int, ...]:
    s = tuple(sorted(set(indices)))
    if not s:
        raise InvalidInputError("enclosed set must be nonempty")
    if s[0] < 1:
        raise InvalidInputError(f"boundary index {s[0]} is not positive")
    return s


def complexity(indices: Iterable[int]) -> ComplexityValue:
    """Largest index below max(S) missing from S, or -inf for a prefix set."""
    s = _normalize_set(indices)
    missing = set(range(1, s[-1] + 1)) - set(s)
    if not missing:
        return MINUS_INFINITY
    return ComplexityValue(max(missing))


@dataclass(frozen=True)
class CurveSpec:
    enclosed: Tuple[int, ...]
    word: FreeWord
    frame: Tuple["Twist", ...] = field(default=())

    def __post_init__(self):
        if not self.enclosed:
            raise InvalidInputError("enclosed set must be nonempty")
        if tuple(sorted(set(self.enclosed))) != tuple(self.enclosed):
            raise InvalidInputError(f"enclosed set {self.enclosed} is not sorted")
        if not self.word or reduce_word(self.word) != tuple(self.word):
            raise InvalidInputError(f"curve word {self.word} is empty or not reduced")

    @property
    def is_canonical(self) -> bool:
        return not self.frame and self.word == increasing_product(self.enclosed)

    @property
    def is_boundary_parallel(self) -> bool:
        return len(self.enclosed) == 1

    @property
    def is_prefix(self) -> bool:
        return self.enclosed == tuple(range(1, len(self.enclosed) + 1))

    @property
    def max_index(self) -> int:
        return self.enclosed[-1]

    def complexity(self) -> ComplexityValue:
        return complexity(self.enclosed)


def canonical_curve(indices: Iterable[int]) -> CurveSpec:
    s = _normalize_set(indices)
    return CurveSpec(enclosed=s, word=increasing_product(s))


@dataclass(frozen=True)
class Twist:
    curve: CurveSpec
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidInputError(f"twist sign must be +1 or -1, got {self.sign}")

    @property
    def enclosed(self) -> Tuple[int, ...]:
        return self.curve.enclosed

    @property
    def is_right(self) -> bool:
        return self.sign == 1

    @property
    def is_delta(self) -> bool:
        return self.curve.is_boundary_parallel

    @property
    def is_gamma(self) -> bool:
        return self.curve.is_prefix and len(self.enclosed) >= 2 and self.curve.is_canonical

    def inverse(self) -> "Twist":
        return Twist(self.curve, -self.sign)


def delta(i: int, sign: int = 1) -> Twist:
    return Twist(canonical_curve([i]), sign)


def gamma(j: int, sign: int = 1) -> Twist:
    if j < 2:
        raise InvalidInputError(f"gamma_{j} is not defined; use j >= 2")
    return Twist(canonical_curve(range(1, j + 1)), sign)


def canonical_twist(indices: Iterable[int], sign: int = 1) -> Twist:
    return Twist(canonical_curve(indices), sign)


@dataclass(frozen=True)
class TwistWord:
    """Letters act left to right: the leftmost twist is applied first."""

    letters: Tuple[Twist, ...]
    surface: Surface

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for twist in self.letters:
            self._check_twist(twist)

    def _check_twist(self, twist: Twist) -> None:
        for i in twist.enclosed:
            self.surface.check_index(i)
        for letter in twist.curve.frame:
            self._check_twist(letter)

    @property
    def n(self) -> int:
        return self.surface.n

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: "TwistWord") -> "TwistWord":
        if other.surface != self.surface:
            raise InvalidInputError(f"cannot join words on n={self.n} and n={other.n}")
        return TwistWord(self.letters + other.letters, self.surface)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple(t.inverse() for t in reversed(self.letters)), self.surface)


def twist_word(letters: Iterable[Twist], n: int) -> TwistWord:
    return TwistWord(tuple(letters), Surface(n))
