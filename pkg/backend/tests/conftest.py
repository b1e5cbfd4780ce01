from hypothesis import strategies as st

from app.services.curves import Surface, TwistWord, canonical_twist


def subsets(n: int):
    return st.sets(st.integers(1, n), min_size=1).map(lambda s: tuple(sorted(s)))


def twists(n: int):
    return st.builds(canonical_twist, subsets(n), st.sampled_from((1, -1)))


@st.composite
def twist_words(draw, n: int = None, min_n: int = 1, max_n: int = 5, max_length: int = 6):
    if n is None:
        n = draw(st.integers(min_n, max_n))
    letters = draw(st.lists(twists(n), max_size=max_length))
    return TwistWord(tuple(letters), Surface(n))


@st.composite
def words_with_letter(draw, min_n: int = 1, max_n: int = 5, max_length: int = 6):
    """A word together with one extra letter on the same surface."""
    w = draw(twist_words(min_n=min_n, max_n=max_n, max_length=max_length))
    return w, draw(twists(w.n))


@st.composite
def symmetric_rows(draw, min_size: int = 1, max_size: int = 6, unit_at: bool = False):
    """Rows of a random symmetric integer matrix; with unit_at, also an index whose diagonal is +-1."""
    size = draw(st.integers(min_size, max_size))
    rows = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            rows[i][j] = rows[j][i] = draw(st.integers(-4, 4))
    if not unit_at:
        return rows
    k = draw(st.integers(0, size - 1))
    rows[k][k] = draw(st.sampled_from((1, -1)))
    return rows, k
