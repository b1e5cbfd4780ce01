"""Framed-link surgery diagrams at the level of linking matrices.

A diagram is a list of component labels plus a symmetric integer matrix
(framings on the diagonal, linking numbers off it). Kirby moves act by
integral congruence; blow-downs remove a +-1 framed unknot.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
from sympy import Matrix, Rational, ceiling, floor, sqrt

from ..config import get_settings
from ..errors import DegenerateFormError, DimensionMismatchError, InvalidInputError, KirbyError
from .twists import Factorization, factorize, positive_part
from .curves import TwistWord

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class FramedDiagram:
    components: Tuple[str, ...]
    matrix: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in row) for row in self.matrix))
        size = len(self.components)
        if len(self.matrix) != size or any(len(row) != size for row in self.matrix):
            raise DimensionMismatchError(f"{size} components but matrix is not {size}x{size}")
        for i in range(size):
            for j in range(i):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise InvalidInputError(f"linking matrix is not symmetric at ({i}, {j})")

    @property
    def size(self) -> int:
        return len(self.components)

    def index(self, label: str) -> int:
        try:
            return self.components.index(label)
        except ValueError:
            raise KirbyError(f"no component labelled {label!r}") from None

    def framing(self, k: int) -> int:
        return self.matrix[k][k]

    def linking(self, i: int, j: int) -> int:
        return self.matrix[i][j]

    def neighbours(self, k: int) -> List[int]:
        return [j for j in range(self.size) if j != k and self.matrix[k][j] != 0]

    def as_sympy(self) -> Matrix:
        return Matrix(self.size, self.size, lambda i, j: self.matrix[i][j])

    def determinant(self) -> int:
        if self.size == 0:
            return 1
        return int(self.as_sympy().det(method="bareiss"))


def from_rows(rows: Sequence[Sequence[int]], components: Optional[Sequence[str]] = None) -> FramedDiagram:
    labels = tuple(components) if components is not None else tuple(f"K{i + 1}" for i in range(len(rows)))
    return FramedDiagram(labels, tuple(tuple(row) for row in rows))


def block_sum(*diagrams: FramedDiagram) -> FramedDiagram:
    labels: List[str] = []
    size = sum(d.size for d in diagrams)
    rows = [[0] * size for _ in range(size)]
    offset = 0
    for d in diagrams:
        labels.extend(d.components)
        for i in range(d.size):
            for j in range(d.size):
                rows[offset + i][offset + j] = d.matrix[i][j]
        offset += d.size
    return FramedDiagram(tuple(labels), tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class ModelDiagram:
    """Chain model: unknots U_1..U_n framed 0, p_i (-1)-circles linking
    U_i and U_{i+1}, q_i (-1)-meridians of U_i; plus split lens summands,
    each an unknot framed 0 with k meridians."""

    n: int
    p: Tuple[int, ...]
    q: Tuple[int, ...]
    lens_summands: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(self.p))
        object.__setattr__(self, "q", tuple(self.q))
        object.__setattr__(self, "lens_summands", tuple(sorted(self.lens_summands)))
        if self.n < 1:
            raise InvalidInputError(f"model needs n >= 1, got {self.n}")
        if len(self.p) != self.n - 1 or len(self.q) != self.n:
            raise InvalidInputError(f"model with n={self.n} needs {self.n - 1} p values and {self.n} q values")
        if any(v < 1 for v in self.p + self.q):
            raise InvalidInputError(f"model parameters must be >= 1, got p={self.p} q={self.q}")
        if any(k < 1 for k in self.lens_summands):
            raise InvalidInputError(f"lens summand orders must be >= 1, got {self.lens_summands}")

    def without_summands(self) -> "ModelDiagram":
        return ModelDiagram(self.n, self.p, self.q)


@dataclass(frozen=True)
class FormInvariants:
    det: int
    signature: int
    b2_plus: int
    b2_minus: int
    b2_zero: int

    @property
    def rank(self) -> int:
        return self.b2_plus + self.b2_minus + self.b2_zero

    @property
    def is_positive_definite(self) -> bool:
        return self.b2_plus == self.rank

    @property
    def is_negative_definite(self) -> bool:
        return self.b2_minus == self.rank


# Moves ----------------------------------------------------------------------

def handle_slide(d: FramedDiagram, i: int, j: int, sign: int = 1) -> FramedDiagram:
    """Slide component i over component j: [K_i] -> [K_i] + sign * [K_j].

    ``sign`` may be any integer, meaning repeated slides.
    """
    if i == j:
        raise InvalidInputError("cannot slide a component over itself")
    rows = [list(r) for r in d.matrix]
    for k in range(d.size):
        rows[i][k] += sign * d.matrix[j][k]
    for k in range(d.size):
        rows[k][i] = rows[i][k]
    rows[i][i] = d.matrix[i][i] + 2 * sign * d.matrix[i][j] + sign * sign * d.matrix[j][j]
    return FramedDiagram(d.components, tuple(tuple(r) for r in rows))


def delete_component(d: FramedDiagram, k: int) -> FramedDiagram:
    keep = [i for i in range(d.size) if i != k]
    return FramedDiagram(
        tuple(d.components[i] for i in keep),
        tuple(tuple(d.matrix[i][j] for j in keep) for i in keep),
    )


def reorient(d: FramedDiagram, k: int) -> FramedDiagram:
    rows = [list(r) for r in d.matrix]
    for j in range(d.size):
        if j != k:
            rows[k][j] = -rows[k][j]
            rows[j][k] = -rows[j][k]
    return FramedDiagram(d.components, tuple(tuple(r) for r in rows))


def blow_down(d: FramedDiagram, k: int) -> FramedDiagram:
    eps = d.matrix[k][k]
    if eps not in (1, -1):
        raise InvalidInputError(f"component {d.components[k]} has framing {eps}; only +-1 can be blown down")
    keep = [i for i in range(d.size) if i != k]
    rows = tuple(
        tuple(d.matrix[i][j] - eps * d.matrix[i][k] * d.matrix[j][k] for j in keep)
        for i in keep
    )
    return FramedDiagram(tuple(d.components[i] for i in keep), rows)


def blow_down_all(d: FramedDiagram, framing: int = -1, skip: Sequence[str] = ()) -> FramedDiagram:
    """Blow down components framed ``framing`` until none is left."""
    while True:
        k = next(
            (i for i in range(d.size) if d.matrix[i][i] == framing and d.components[i] not in skip),
            None,
        )
        if k is None:
            return d
        d = blow_down(d, k)


def cancel_hopf_pair(d: FramedDiagram, u: int, k: int) -> FramedDiagram:
    """Cancel a 0-framed component u against a component k it links once.

    Every other component is first slid off the pair so that it becomes
    orthogonal to both, then u and k are removed.
    """
    if d.matrix[u][u] != 0:
        raise KirbyError(f"{d.components[u]} must be 0-framed to cancel, has framing {d.matrix[u][u]}")
    if d.matrix[u][k] not in (1, -1):
        raise KirbyError(f"{d.components[u]} and {d.components[k]} link {d.matrix[u][k]} times, need +-1")
    if d.matrix[u][k] == -1:
        d = reorient(d, k)
    labels = (d.components[u], d.components[k])
    for x in range(d.size):
        if x in (u, k):
            continue
        a = d.matrix[x][u]
        if a:
            d = handle_slide(d, x, k, -a)
        b = d.matrix[x][k]
        if b:
            d = handle_slide(d, x, u, -b)
    # after the slides, x.u = 0 and x.k = 0 for every other x
    for label in labels:
        d = delete_component(d, d.index(label))
    return d


def normalize_orientations(d: FramedDiagram) -> FramedDiagram:
    """Reorient components so that every nonzero linking number is positive."""
    g = nx.Graph()
    g.add_nodes_from(range(d.size))
    g.add_edges_from((i, j) for i in range(d.size) for j in range(i + 1, d.size) if d.matrix[i][j])
    signs: Dict[int, int] = {}
    for root in range(d.size):
        if root in signs:
            continue
        signs[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if v not in signs:
                    signs[v] = signs[u] * (1 if d.matrix[u][v] > 0 else -1)
                    queue.append(v)
    rows = tuple(
        tuple(d.matrix[i][j] * (signs[i] * signs[j] if i != j else 1) for j in range(d.size))
        for i in range(d.size)
    )
    out = FramedDiagram(d.components, rows)
    if any(out.matrix[i][j] < 0 for i, j in g.edges):
        raise KirbyError("linking signs cannot all be made positive by reorienting components")
    return out


# Constructions ---------------------------------------------------------------

def _lens_block(k: int, tag: str) -> FramedDiagram:
    labels = (f"{tag}.U",) + tuple(f"{tag}.m{t}" for t in range(1, k + 1))
    size = k + 1
    rows = [[0] * size for _ in range(size)]
    for t in range(1, size):
        rows[t][t] = -1
        rows[0][t] = rows[t][0] = 1
    return FramedDiagram(labels, tuple(tuple(r) for r in rows))


def linking_matrix(m: ModelDiagram) -> FramedDiagram:
    """Order: U_1..U_n, chain circles c{i}.{k}, meridians m{i}.{k}, lens summands."""
    labels: List[str] = [f"U{i}" for i in range(1, m.n + 1)]
    links: List[Tuple[int, ...]] = []
    for i, count in enumerate(m.p, start=1):
        for k in range(1, count + 1):
            labels.append(f"c{i}.{k}")
            links.append((i - 1, i))
    for i, count in enumerate(m.q, start=1):
        for k in range(1, count + 1):
            labels.append(f"m{i}.{k}")
            links.append((i - 1,))
    size = len(labels)
    rows = [[0] * size for _ in range(size)]
    for offset, us in enumerate(links, start=m.n):
        rows[offset][offset] = -1
        for u in us:
            rows[offset][u] = rows[u][offset] = 1
    main = FramedDiagram(tuple(labels), tuple(tuple(r) for r in rows))
    blocks = [_lens_block(k, f"L{s}") for s, k in enumerate(m.lens_summands, start=1)]
    return block_sum(main, *blocks)


def diagram_from_factorization(f: Factorization) -> FramedDiagram:
    """Surgery diagram of the open book with monodromy prod delta^n prod gamma^m.

    Each right-handed twist becomes a (-1)-framed circle; delta_i links U_i
    once and gamma_j links U_1..U_j once each.
    """
    if len(f.tail):
        raise InvalidInputError(f"factorization tail has {len(f.tail)} letters; only positive monodromies have a surgery diagram")
    n = f.n
    delta_exponents, gamma_exponents = f.delta_exponents, f.gamma_exponents
    for i in range(1, n + 1):
        if delta_exponents.get(i, 0) < 1:
            raise InvalidInputError(f"delta_{i} exponent must be >= 1, got {delta_exponents.get(i, 0)}")
    for j in range(2, n + 1):
        if gamma_exponents.get(j, 0) < 1:
            raise InvalidInputError(f"gamma_{j} exponent must be >= 1, got {gamma_exponents.get(j, 0)}")
    labels: List[str] = [f"U{i}" for i in range(1, n + 1)]
    links: List[range] = []
    for i in range(1, n + 1):
        for k in range(1, delta_exponents[i] + 1):
            labels.append(f"d{i}.{k}")
            links.append(range(i - 1, i))
    for j in range(2, n + 1):
        for k in range(1, gamma_exponents[j] + 1):
            labels.append(f"g{j}.{k}")
            links.append(range(0, j))
    size = len(labels)
    rows = [[0] * size for _ in range(size)]
    for offset, us in enumerate(links, start=n):
        rows[offset][offset] = -1
        for u in us:
            rows[offset][u] = rows[u][offset] = 1
    return FramedDiagram(tuple(labels), tuple(tuple(r) for r in rows))


def _unknot_indices(d: FramedDiagram) -> List[int]:
    return [i for i, label in enumerate(d.components) if label.startswith("U")]


def _factorization_shape(d: FramedDiagram) -> Tuple[int, Dict[int, int], Dict[int, int]]:
    us = _unknot_indices(d)
    n = len(us)
    if n == 0 or us != list(range(n)):
        raise KirbyError("diagram must start with its 0-framed unknots U1..Un")
    deltas = {i: 0 for i in range(1, n + 1)}
    gammas = {j: 0 for j in range(2, n + 1)}
    for a in us:
        if any(d.matrix[a][b] for b in us):
            raise KirbyError("the 0-framed unknots must be framed 0 and pairwise unlinked")
    for x in range(n, d.size):
        if d.matrix[x][x] != -1:
            raise KirbyError(f"{d.components[x]} is not (-1)-framed")
        if any(d.matrix[x][y] for y in range(n, d.size) if y != x):
            raise KirbyError(f"{d.components[x]} links another (-1)-framed circle")
        linked = [u + 1 for u in us if d.matrix[x][u]]
        if any(abs(d.matrix[x][u]) != 1 for u in us if d.matrix[x][u]):
            raise KirbyError(f"{d.components[x]} links a 0-framed unknot more than once")
        if len(linked) == 1:
            deltas[linked[0]] += 1
        elif linked == list(range(1, len(linked) + 1)):
            gammas[len(linked)] += 1
        else:
            raise KirbyError(f"{d.components[x]} links U{linked}, which is neither a meridian nor a prefix")
    return n, deltas, gammas


def recognize_model(d: FramedDiagram) -> ModelDiagram:
    """Read chain-model parameters off a diagram.

    Split (+-1)-framed unknots are blown down first. Split blocks of the
    form -(I + J) of size k - 1 (up to orientation), or labelled lens
    blocks, become lens summands of order k.
    """
    while True:
        k = next((i for i in range(d.size) if d.matrix[i][i] in (1, -1) and not d.neighbours(i)), None)
        if k is None:
            break
        d = blow_down(d, k)
    g = nx.Graph()
    g.add_nodes_from(range(d.size))
    g.add_edges_from((i, j) for i in range(d.size) for j in range(i + 1, d.size) if d.matrix[i][j])
    main: Optional[List[int]] = None
    summands: List[int] = []
    for block in sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0]):
        labels = [d.components[i] for i in block]
        if all(label.startswith("L") for label in labels):
            summands.append(abs(_sub(d, block).determinant()))
        elif _is_minus_i_plus_j(_sub(d, block)):
            summands.append(len(block) + 1)
        elif main is None and any(d.matrix[i][i] == 0 for i in block):
            main = block
        else:
            raise KirbyError(f"unrecognised split block {labels}")
    if main is None:
        raise KirbyError("diagram has no chain of 0-framed unknots")
    return _recognize_chain(normalize_orientations(_sub(d, main)), tuple(summands))


def _sub(d: FramedDiagram, block: Sequence[int]) -> FramedDiagram:
    return FramedDiagram(
        tuple(d.components[i] for i in block),
        tuple(tuple(d.matrix[i][j] for j in block) for i in block),
    )


def _is_minus_i_plus_j(block: FramedDiagram) -> bool:
    # complete graph, framings -2, links +-1 and |det| = size + 1
    size = block.size
    if any(block.matrix[i][i] != -2 for i in range(size)):
        return False
    if any(abs(block.matrix[i][j]) != 1 for i in range(size) for j in range(size) if i != j):
        return False
    return abs(block.determinant()) == size + 1


def _recognize_chain(d: FramedDiagram, summands: Tuple[int, ...]) -> ModelDiagram:
    us = [i for i in range(d.size) if d.matrix[i][i] == 0]
    position = {u: t for t, u in enumerate(us)}
    n = len(us)
    p = [0] * (n - 1)
    q = [0] * n
    for x in range(d.size):
        if x in position:
            if any(d.matrix[x][u] for u in us if u != x):
                raise KirbyError("0-framed unknots must be pairwise unlinked")
            continue
        if d.matrix[x][x] != -1:
            raise KirbyError(f"{d.components[x]} has framing {d.matrix[x][x]}, expected -1")
        if any(d.matrix[x][y] for y in range(d.size) if y != x and y not in position):
            raise KirbyError(f"{d.components[x]} links another (-1)-framed circle")
        linked = sorted(position[u] for u in us if d.matrix[x][u])
        if any(d.matrix[x][u] != 1 for u in us if d.matrix[x][u]):
            raise KirbyError(f"{d.components[x]} links a 0-framed unknot more than once")
        if len(linked) == 1:
            q[linked[0]] += 1
        elif len(linked) == 2 and linked[1] == linked[0] + 1:
            p[linked[0]] += 1
        else:
            raise KirbyError(f"{d.components[x]} does not fit the chain model")
    return ModelDiagram(n, tuple(p), tuple(q), summands)


def chain_slide(d: FramedDiagram) -> ModelDiagram:
    """Slide U_i over U_{i+1} with opposite orientation for i = 1..n-1.

    Afterwards a delta_{i+1} circle links U_i and U_{i+1}, delta_1 and
    gamma_j circles are meridians, which is the chain model.
    """
    n, deltas, gammas = _factorization_shape(d)
    slid = d
    for i in range(n - 1):
        slid = handle_slide(slid, i, i + 1, -1)
    if abs(slid.determinant()) != abs(d.determinant()):
        raise KirbyError("handle slides changed |det|")
    model = recognize_model(normalize_orientations(slid))
    expected = ModelDiagram(
        n,
        tuple(deltas[i + 1] for i in range(1, n)),
        (deltas[1],) + tuple(gammas[j] for j in range(2, n + 1)),
    )
    if model != expected:
        raise KirbyError(f"slid diagram reads as {model}, expected {expected}")
    logger.debug(f"chain_slide: n={n} -> p={model.p} q={model.q}")
    return model


def drop_last_meridian(m: ModelDiagram) -> ModelDiagram:
    if m.q[-1] < 2:
        raise InvalidInputError("U_n has a single meridian; delete it with cancel_or_delete_last")
    return ModelDiagram(m.n, m.p, m.q[:-1] + (m.q[-1] - 1,), m.lens_summands)


def last_meridian_label(m: ModelDiagram) -> str:
    return f"m{m.n}.{m.q[-1]}"


def cancel_or_delete_last(m: ModelDiagram, mode: str) -> ModelDiagram:
    """Remove U_n by surgery on its last meridian K.

    zero-surgery-cancel: K gets framing 0 and cancels U_n, so the chain
    circles of U_{n-1}, U_n become meridians of U_{n-1}.
    delete-meridian (q_n = 1): K is deleted; a chain circle then cancels
    U_n and the remaining p_{n-1} - 1 circles split off as a lens summand.
    """
    if m.n < 2:
        raise InvalidInputError("cancel_or_delete_last needs n >= 2")
    d = linking_matrix(m)
    k = d.index(last_meridian_label(m))
    u = d.index(f"U{m.n}")
    if mode == "zero-surgery-cancel":
        rows = [list(r) for r in d.matrix]
        rows[k][k] = 0
        d = FramedDiagram(d.components, tuple(tuple(r) for r in rows))
        d = cancel_hopf_pair(d, k, u)
    elif mode == "delete-meridian":
        if m.q[-1] != 1:
            raise InvalidInputError(f"delete-meridian needs q_n = 1, got q_n = {m.q[-1]}")
        d = delete_component(d, k)
        u = d.index(f"U{m.n}")
        partner = d.index(f"c{m.n - 1}.1")
        d = cancel_hopf_pair(d, u, partner)
    else:
        raise InvalidInputError(f"unknown mode {mode!r}")
    result = recognize_model(d)
    logger.debug(f"{mode}: {m} -> {result}")
    return result


def lens_base_case(m: ModelDiagram) -> FramedDiagram:
    """Blow down every meridian of a one-unknot model: a single unknot framed q_1."""
    if m.n != 1:
        raise InvalidInputError(f"lens base case needs n = 1, got n = {m.n}")
    return blow_down_all(linking_matrix(m.without_summands()))


# Quadratic forms --------------------------------------------------------------

def congruence_diagonal(d: FramedDiagram) -> List[Rational]:
    """Diagonal entries of a rational congruence diagonalization."""
    size = d.size
    a = [[Rational(x) for x in row] for row in d.matrix]
    out: List[Rational] = []
    for k in range(size):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, size) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for row in a:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, size) if a[k][j] != 0), None)
                if j is not None:
                    # add row/column j to k; the pivot becomes 2 a[k][j]
                    for c in range(size):
                        a[k][c] += a[j][c]
                    for r in range(size):
                        a[r][k] += a[r][j]
        pivot = a[k][k]
        out.append(pivot)
        if pivot == 0:
            continue
        for i in range(k + 1, size):
            factor = a[i][k] / pivot
            if factor == 0:
                continue
            for c in range(k, size):
                a[i][c] -= factor * a[k][c]
            for r in range(k, size):
                a[r][i] -= factor * a[r][k]
    return out


def form_invariants(d: FramedDiagram) -> FormInvariants:
    diagonal = congruence_diagonal(d)
    plus = sum(1 for x in diagonal if x > 0)
    minus = sum(1 for x in diagonal if x < 0)
    zero = len(diagonal) - plus - minus
    return FormInvariants(d.determinant(), plus - minus, plus, minus, zero)


def _short_vectors(gram: List[List[Rational]], bound: int) -> List[Tuple[int, ...]]:
    """All nonzero integer vectors with x^T G x <= bound (Fincke-Pohst)."""
    r = len(gram)
    # G(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2
    q = [row[:] for row in gram]
    for i in range(r):
        for j in range(i + 1, r):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, r):
            for l in range(k, r):
                q[k][l] -= q[k][i] * q[i][l]
    found: List[Tuple[int, ...]] = []
    x = [0] * r

    def search(i: int, remaining: Rational) -> None:
        center = -sum((q[i][j] * x[j] for j in range(i + 1, r)), Rational(0))
        radius = sqrt(remaining / q[i][i])
        for value in range(int(ceiling(center - radius)), int(floor(center + radius)) + 1):
            x[i] = value
            used = q[i][i] * (value - center) ** 2
            if used > remaining:
                continue
            if i == 0:
                if any(x):
                    found.append(tuple(x))
            else:
                search(i - 1, remaining - used)
        x[i] = 0

    search(r - 1, Rational(bound))
    return found


def is_diagonalizable_over_integers(d: FramedDiagram) -> bool:
    """True iff the definite form is isomorphic over Z to a diagonal +-1 form.

    Norm-one vectors of an integral definite lattice are pairwise orthogonal
    or equal up to sign, so the form is standard exactly when it has rank
    many of them up to sign.
    """
    inv = form_invariants(d)
    if inv.b2_zero:
        raise InvalidInputError("form is degenerate")
    if not (inv.is_positive_definite or inv.is_negative_definite):
        raise InvalidInputError(f"form is indefinite (b2+ = {inv.b2_plus}, b2- = {inv.b2_minus})")
    limit = get_settings().MAX_LATTICE_RANK
    if d.size > limit:
        raise InvalidInputError(f"rank {d.size} exceeds the enumeration limit {limit}")
    sign = 1 if inv.is_positive_definite else -1
    gram = [[Rational(sign * x) for x in row] for row in d.matrix]
    units = [v for v in _short_vectors(gram, 1) if v > tuple(-t for t in v)]
    logger.debug(f"{len(units)} unit vectors up to sign in rank {d.size}")
    return len(units) == d.size


def require_nondegenerate(d: FramedDiagram) -> int:
    det = d.determinant()
    if det == 0:
        raise DegenerateFormError("form is degenerate (det = 0)")
    return det


def model_from_word(w: TwistWord) -> ModelDiagram:
    """Chain model of the positive part of the factorization of ``w``."""
    return chain_slide(diagram_from_factorization(positive_part(factorize(w))))
