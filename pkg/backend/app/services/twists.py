"""Lantern-relation rewriting of planar Dehn twist words.

Every right-handed twist along a curve that is neither boundary parallel
(a delta) nor a standard prefix curve (a gamma) is replaced by six twists
coming from a lantern relation. Repeating this on the leftmost such letter
ends in a word whose right-handed letters are all deltas and gammas; those
are then conjugated to the front, which gives the factorization

    prod delta_i^{n_i} . prod gamma_j^{m_j} . (left-handed tail).
"""
import functools
import logging
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, Iterator, List, Sequence, Tuple

from ..config import get_settings
from ..errors import InvalidInputError, OracleError, RewriteError
from .curves import (
    CurveSpec,
    Surface,
    Twist,
    TwistWord,
    canonical_curve,
    canonical_twist,
    complexity,
    delta,
    gamma,
)
from .oracle import curve_image, equal, twist_action, word_action, words_equal

logger = logging.getLogger(__name__)

MeasureKey = Tuple[int, int]


def is_terminal(t: Twist) -> bool:
    return t.sign == -1 or t.is_delta or t.is_gamma


def _require_n(n: int, indices: Sequence[int]) -> None:
    Surface(n)
    if max(indices) > n:
        raise InvalidInputError(f"boundary index {max(indices)} outside 1..{n}")


def conjugate_twist(t: Twist, f: TwistWord) -> Twist:
    """The twist f^-1 . t . f, i.e. the twist along f(c) with the sign of t.

    Boundary twists are central, so they are dropped from the frame.
    """
    frame = tuple(letter for letter in f.letters if not letter.is_delta)
    if t.is_delta or not frame:
        return t
    new_frame = t.curve.frame + frame
    word = curve_image(t.curve.word, word_action(frame, f.n))
    curve = CurveSpec(enclosed=t.curve.enclosed, word=word, frame=new_frame)
    canonical = canonical_curve(t.curve.enclosed)
    if word == canonical.word and equal(
        twist_action(curve, t.sign, f.n), twist_action(canonical, t.sign, f.n)
    ):
        return Twist(canonical, t.sign)
    return Twist(curve, t.sign)


def _lambda2_candidates(rest: Tuple[int, ...], q: int, r: int, n: int) -> Iterator[Twist]:
    """Curves around {q, r} inside the lantern, most likely first.

    The usual choice pushes the canonical {q, r} curve across the part of
    A below q; if that fails, conjugates by one or two canonical twists on
    subsets of A + {q, r} are tried.
    """
    surface = Surface(n)
    plain = canonical_twist((q, r), -1)
    below_q = tuple(a for a in rest if a < q)
    if below_q:
        yield conjugate_twist(plain, TwistWord((canonical_twist(below_q + (q,)),), surface))
    yield plain
    support = tuple(sorted(rest + (q, r)))
    movers = [
        canonical_twist(subset, sign)
        for size in range(2, len(support) + 1)
        for subset in combinations(support, size)
        for sign in (1, -1)
    ]
    for length in (1, 2):
        for frame in product(movers, repeat=length):
            yield conjugate_twist(plain, TwistWord(frame, surface))


def _lantern_letters(enclosed: Tuple[int, ...], lambda2: Twist) -> Tuple[Twist, ...]:
    r = enclosed[-1]
    rest = enclosed[:-1]
    q = complexity(enclosed).value
    return (
        canonical_twist(rest),
        delta(r),
        delta(q),
        canonical_twist(rest + (q, r)),
        lambda2,
        canonical_twist(rest + (q,), -1),
    )


@functools.lru_cache(maxsize=None)
def lantern_template(enclosed: Tuple[int, ...], n: int) -> Tuple[Twist, ...]:
    r = enclosed[-1]
    rest = enclosed[:-1]
    q = complexity(enclosed).value
    candidates = _lambda2_candidates(rest, q, r, n)
    if not get_settings().VALIDATE_LANTERN:
        return _lantern_letters(enclosed, next(candidates))
    lhs = twist_action(canonical_curve(enclosed), 1, n)
    seen = set()
    for tried, lambda2 in enumerate(candidates, start=1):
        if lambda2 in seen:
            continue
        seen.add(lambda2)
        letters = _lantern_letters(enclosed, lambda2)
        if equal(lhs, word_action(letters, n)):
            logger.debug(f"Validated lantern template for {enclosed} on n={n} (candidate {tried})")
            return letters
    raise OracleError(f"no lantern template for {set(enclosed)} on n={n} is oracle-equal to its input")


def lantern_step(t: Twist, n: int) -> Tuple[Twist, ...]:
    """Six twists whose product equals the non-terminal right twist ``t``.

    Output order: beta, delta_r, delta_q, lambda_0 (right-handed), then
    lambda_2^-1, lambda_1^-1, where r = max S, A = S - {r}, q = c(S).
    """
    if t.sign != 1 or is_terminal(t):
        raise InvalidInputError("lantern_step needs a right-handed twist that is neither a delta nor a gamma")
    if not t.curve.is_canonical:
        raise InvalidInputError(f"lantern_step needs a canonical curve, got word {t.curve.word}")
    _require_n(n, t.enclosed)
    return lantern_template(t.enclosed, n)


def _measure(letters: Sequence[Twist]) -> Counter:
    return Counter(
        (complexity(t.enclosed).value, t.curve.max_index)
        for t in letters
        if t.sign == 1 and not is_terminal(t)
    )


def dershowitz_manna_less(smaller: Counter, larger: Counter) -> bool:
    """Multiset order: every added element is dominated by a removed one."""
    added = smaller - larger
    removed = larger - smaller
    if not added and not removed:
        return False
    return all(any(x > y for x in removed) for y in added)


def unframe(w: TwistWord) -> TwistWord:
    """Expand framed letters F^-1 . t_c . F into letters along canonical curves."""
    out: List[Twist] = []

    def expand(t: Twist) -> None:
        if not t.curve.frame or t.is_delta:
            out.append(Twist(canonical_curve(t.enclosed), t.sign) if t.is_delta else t)
            return
        frame = t.curve.frame
        for letter in reversed(frame):
            expand(letter.inverse())
        out.append(Twist(canonical_curve(t.enclosed), t.sign))
        for letter in frame:
            expand(letter)

    for t in w.letters:
        expand(t)
    return TwistWord(tuple(out), w.surface)


def reduce_right_twists(w: TwistWord) -> TwistWord:
    settings = get_settings()
    letters = list(unframe(w).letters)
    measure = _measure(letters)
    steps = 0
    while True:
        index = next((i for i, t in enumerate(letters) if t.sign == 1 and not is_terminal(t)), None)
        if index is None:
            break
        steps += 1
        if steps > settings.MAX_REWRITE_STEPS:
            raise RewriteError(f"gave up after {settings.MAX_REWRITE_STEPS} lantern steps")
        replacement = lantern_step(letters[index], w.n)
        letters[index:index + 1] = replacement
        if settings.CHECK_MEASURE:
            new_measure = _measure(letters)
            if not dershowitz_manna_less(new_measure, measure):
                raise RewriteError(f"lantern step {steps} did not decrease the measure: {dict(measure)} -> {dict(new_measure)}")
            measure = new_measure
    logger.debug(f"reduce_right_twists: {steps} lantern steps, {len(letters)} letters")
    return TwistWord(tuple(letters), w.surface)


@dataclass(frozen=True)
class Factorization:
    delta_exponents: Dict[int, int]
    gamma_exponents: Dict[int, int]
    tail: TwistWord

    @property
    def n(self) -> int:
        return self.tail.n

    def positive_letters(self) -> Tuple[Twist, ...]:
        letters: List[Twist] = []
        for i in sorted(self.delta_exponents):
            letters.extend([delta(i)] * self.delta_exponents[i])
        for j in sorted(self.gamma_exponents):
            letters.extend([gamma(j)] * self.gamma_exponents[j])
        return tuple(letters)

    def reassemble(self) -> TwistWord:
        return TwistWord(self.positive_letters() + self.tail.letters, self.tail.surface)

    def check_invariants(self) -> None:
        if set(self.delta_exponents) != set(range(1, self.n + 1)):
            raise OracleError(f"delta exponents missing: {self.delta_exponents}")
        if set(self.gamma_exponents) != set(range(2, self.n + 1)):
            raise OracleError(f"gamma exponents missing: {self.gamma_exponents}")
        if any(e < 1 for e in list(self.delta_exponents.values()) + list(self.gamma_exponents.values())):
            raise OracleError("factorization has a nonpositive exponent")
        if any(t.sign != -1 for t in self.tail):
            raise OracleError("factorization tail contains a right-handed twist")


def factorize(w: TwistWord) -> Factorization:
    reduced = reduce_right_twists(w)
    n = w.n
    front: List[Twist] = []
    pending: List[Twist] = []
    for t in reduced.letters:
        if t.sign == -1:
            pending.append(t)
            continue
        if not (t.is_delta or t.is_gamma):
            raise OracleError(f"right-handed letter on {t.enclosed} survived rewriting")
        if not t.is_delta:
            mover = TwistWord((t,), w.surface)
            pending = [conjugate_twist(p, mover) for p in pending]
        front.append(Twist(canonical_curve(t.enclosed), 1))

    deltas = Counter(t.enclosed[0] for t in front if t.is_delta)
    gammas = Counter(t.curve.max_index for t in front if not t.is_delta)
    padding: List[Twist] = []
    for i in range(1, n + 1):
        if not deltas[i]:
            deltas[i] = 1
            padding.append(delta(i, -1))
    for j in range(2, n + 1):
        if not gammas[j]:
            gammas[j] = 1
            padding.append(gamma(j, -1))

    result = Factorization(
        delta_exponents={i: deltas[i] for i in range(1, n + 1)},
        gamma_exponents={j: gammas[j] for j in range(2, n + 1)},
        tail=TwistWord(tuple(padding + pending), w.surface),
    )
    result.check_invariants()
    logger.info(
        f"Factorized {len(w)} letters on n={n}: deltas {result.delta_exponents}, "
        f"gammas {result.gamma_exponents}, tail of {len(result.tail)}"
    )
    return result


def positive_part(f: Factorization) -> Factorization:
    """The positive monodromy prod delta^n prod gamma^m with the tail dropped."""
    return Factorization(dict(f.delta_exponents), dict(f.gamma_exponents), TwistWord((), f.tail.surface))


def verify_factorization(original: TwistWord, f: Factorization) -> bool:
    return words_equal(original, f.reassemble())


def stabilize(w: TwistWord, attach_to: int) -> TwistWord:
    """Giroux stabilization: add B_{n+1} through a new 1-handle and twist along it."""
    w.surface.check_index(attach_to)
    surface = Surface(w.n + 1)
    return TwistWord(w.letters + (canonical_twist((attach_to, w.n + 1)),), surface)
