"""Action of planar mapping classes on the free group, used to decide word equality.

Conventions: the basepoint sits on B0 and x_i is a loop around B_i, ordered
so that the boundary word x1 x2 ... xn is parallel to B0. The arc a_i runs
from B0 to B_i along the stalk of x_i; a mapping class sends a_i to
u_i . a_i. Loops together with arcs cut the surface into a disk, so the pair
(loop images, arc prefixes) determines the mapping class, including the
boundary twists that act trivially on loops.
"""
import functools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Tuple

from ..errors import DimensionMismatchError, InvalidInputError
from .curves import CurveSpec, Twist, TwistWord
from .free_group import EMPTY, FreeWord, increasing_product, invert, multiply, power, substitute

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MappingClassAction:
    n: int
    loop_images: Tuple[FreeWord, ...]
    arc_prefixes: Tuple[FreeWord, ...]
    inverse_loop_images: Tuple[FreeWord, ...] = field(compare=False, repr=False, default=())
    inverse_arc_prefixes: Tuple[FreeWord, ...] = field(compare=False, repr=False, default=())

    def inverse(self) -> "MappingClassAction":
        return MappingClassAction(
            n=self.n,
            loop_images=self.inverse_loop_images,
            arc_prefixes=self.inverse_arc_prefixes,
            inverse_loop_images=self.loop_images,
            inverse_arc_prefixes=self.arc_prefixes,
        )

    @property
    def is_identity(self) -> bool:
        return equal(self, identity(self.n))


@functools.lru_cache(maxsize=None)
def identity(n: int) -> MappingClassAction:
    loops = tuple((i,) for i in range(1, n + 1))
    arcs = tuple(EMPTY for _ in range(n))
    return MappingClassAction(n, loops, arcs, loops, arcs)


def _check_same_n(g: MappingClassAction, h: MappingClassAction) -> None:
    if g.n != h.n:
        raise DimensionMismatchError(f"actions on n={g.n} and n={h.n} cannot be combined")


def _canonical_conjugators(enclosed: Tuple[int, ...], sign: int, n: int) -> Tuple[FreeWord, ...]:
    # c_i = W^e on the enclosed set; elsewhere the commutator W^e P^-1 W^-e P,
    # with P the part of W below i, which is trivial outside [min S, max S].
    members = set(enclosed)
    w = increasing_product(enclosed)
    w_e = power(w, sign)
    conjugators = []
    for i in range(1, n + 1):
        if i in members:
            conjugators.append(w_e)
        else:
            below = tuple(a for a in enclosed if a < i)
            conjugators.append(multiply(w_e, invert(below), invert(w_e), below))
    return tuple(conjugators)


def _conjugation_action(conjugators: Tuple[FreeWord, ...]) -> Tuple[Tuple[FreeWord, ...], Tuple[FreeWord, ...]]:
    loops = tuple(multiply(c, (i,), invert(c)) for i, c in enumerate(conjugators, start=1))
    return loops, conjugators


@functools.lru_cache(maxsize=None)
def canonical_twist_action(enclosed: Tuple[int, ...], sign: int, n: int) -> MappingClassAction:
    if enclosed[-1] > n:
        raise InvalidInputError(f"curve encloses B{enclosed[-1]} but the surface has n={n}")
    loops, arcs = _conjugation_action(_canonical_conjugators(enclosed, sign, n))
    inv_loops, inv_arcs = _conjugation_action(_canonical_conjugators(enclosed, -sign, n))
    return MappingClassAction(n, loops, arcs, inv_loops, inv_arcs)


@functools.lru_cache(maxsize=4096)
def twist_action(curve: CurveSpec, sign: int, n: int) -> MappingClassAction:
    """Action of the Dehn twist along ``curve`` (right-handed for sign +1)."""
    if sign not in (1, -1):
        raise InvalidInputError(f"twist sign must be +1 or -1, got {sign}")
    base = canonical_twist_action(curve.enclosed, sign, n)
    if not curve.frame:
        if curve.word != increasing_product(curve.enclosed):
            raise InvalidInputError(f"curve word {curve.word} has no frame relating it to a canonical curve")
        return base
    # frame F: the twist along F(c) acts as F^-1 . t_c . F
    frame = word_action(curve.frame, n)
    return compose(compose(frame.inverse(), base), frame)


def compose(g: MappingClassAction, h: MappingClassAction) -> MappingClassAction:
    """The action of ``g`` followed by ``h``."""
    _check_same_n(g, h)
    loops = tuple(substitute(image, h.loop_images) for image in g.loop_images)
    arcs = tuple(
        multiply(substitute(prefix, h.loop_images), h_prefix)
        for prefix, h_prefix in zip(g.arc_prefixes, h.arc_prefixes)
    )
    inv_loops = tuple(substitute(image, g.inverse_loop_images) for image in h.inverse_loop_images)
    inv_arcs = tuple(
        multiply(substitute(prefix, g.inverse_loop_images), g_prefix)
        for prefix, g_prefix in zip(h.inverse_arc_prefixes, g.inverse_arc_prefixes)
    )
    return MappingClassAction(g.n, loops, arcs, inv_loops, inv_arcs)


def inverse(g: MappingClassAction) -> MappingClassAction:
    return g.inverse()


def word_action(letters: Iterable[Twist], n: int) -> MappingClassAction:
    action = identity(n)
    for twist in letters:
        action = compose(action, twist_action(twist.curve, twist.sign, n))
    return action


def word_to_action(w: TwistWord) -> MappingClassAction:
    return word_action(w.letters, w.n)


def equal(g: MappingClassAction, h: MappingClassAction) -> bool:
    _check_same_n(g, h)
    return g.loop_images == h.loop_images and g.arc_prefixes == h.arc_prefixes


def words_equal(lhs: TwistWord, rhs: TwistWord) -> bool:
    if lhs.n != rhs.n:
        raise DimensionMismatchError(f"words live on n={lhs.n} and n={rhs.n}")
    return equal(word_to_action(lhs), word_to_action(rhs))


def is_invertible(g: MappingClassAction) -> bool:
    """Witness invertibility by composing with the stored inverse."""
    ident = identity(g.n)
    return equal(compose(g, g.inverse()), ident) and equal(compose(g.inverse(), g), ident)


def curve_image(word: FreeWord, g: MappingClassAction) -> FreeWord:
    return substitute(word, g.loop_images)
