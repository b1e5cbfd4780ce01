#!/usr/bin/env python3
"""
Acceptance sweep for the planar monodromy toolkit.
Runs the randomized and exhaustive checks over the library and reports PASS/FAIL.
"""

import logging
import random
import sys
import time
from itertools import combinations
from pathlib import Path

import networkx as nx
from dotenv import load_dotenv
from sympy import Rational

# Load environment variables from .env file
load_dotenv()

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "backend"))

from app.errors import InvalidInputError, PlanarError, RewriteError  # noqa: E402
from app.services.contact import (  # noqa: E402
    HypothesisSet,
    LegendrianKnotData,
    d3_from_filling,
    legendrian_surgery_presentation,
    obstruction_report,
)
from app.services.curves import MINUS_INFINITY, Surface, TwistWord, canonical_curve, canonical_twist, complexity  # noqa: E402
from app.services.graph_link import consistency_check, spanning_tree_count  # noqa: E402
from app.services.kirby import (  # noqa: E402
    ModelDiagram,
    blow_down,
    form_invariants,
    from_rows,
    is_diagonalizable_over_integers,
    lens_base_case,
    linking_matrix,
)
from app.services.lspace import lspace_certificate, model_grid  # noqa: E402
from app.services.oracle import equal, twist_action, word_action  # noqa: E402
from app.services.twists import factorize, lantern_step, verify_factorization  # noqa: E402

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)
logging.getLogger("app").setLevel(logging.WARNING)

SEED = 20240601


def _random_word(rng: random.Random, n: int, max_length: int) -> TwistWord:
    letters = []
    for _ in range(rng.randint(0, max_length)):
        subset = sorted(rng.sample(range(1, n + 1), rng.randint(1, n)))
        letters.append(canonical_twist(subset, rng.choice((1, -1))))
    return TwistWord(tuple(letters), Surface(n))


def test_factorization_round_trip(count: int = 200) -> bool:
    """Random words factor into deltas, gammas and a left-handed tail equal to the input."""
    logger.info(f"Factorizing {count} random words (n <= 5, length <= 6)")
    rng = random.Random(SEED)
    start = time.perf_counter()
    failures = 0
    for k in range(count):
        n = rng.randint(1, 5)
        w = _random_word(rng, n, 6)
        try:
            f = factorize(w)
            f.check_invariants()
            if not verify_factorization(w, f):
                logger.error(f"✗ word {k} (n={n}) does not reassemble to its input")
                failures += 1
        except RewriteError as e:
            logger.error(f"✗ word {k} (n={n}): measure check failed: {e}")
            failures += 1
        except PlanarError as e:
            logger.error(f"✗ word {k} (n={n}): {e}")
            failures += 1
    elapsed = time.perf_counter() - start
    logger.info(f"  {count - failures}/{count} round trips in {elapsed:.1f}s")
    if elapsed > 60:
        logger.error(f"✗ round trips took {elapsed:.1f}s, limit is 60s")
        return False
    return failures == 0


def test_lantern_relation(max_n: int = 5) -> bool:
    """Every non-terminal subset rewrites to an oracle-equal six-letter word."""
    logger.info(f"Checking lantern instances for n <= {max_n}")
    checked = 0
    for n in range(2, max_n + 1):
        for size in range(2, n + 1):
            for s in combinations(range(1, n + 1), size):
                if complexity(s) == MINUS_INFINITY:
                    continue
                out = lantern_step(canonical_twist(s), n)
                if not equal(twist_action(canonical_curve(s), 1, n), word_action(out, n)):
                    logger.error(f"✗ lantern for {set(s)} on n={n} is not oracle-equal")
                    return False
                checked += 1
    logger.info(f"  ✓ {checked} lantern instances")
    return True


def test_determinant_triple(max_n: int = 3, max_param: int = 3) -> bool:
    """|det| of the linking matrix, the spanning-tree count and |det| of the Goeritz matrix agree."""
    logger.info(f"Comparing determinants on the grid n <= {max_n}, parameters <= {max_param}")
    start = time.perf_counter()
    bad = [m for m in model_grid(max_n, max_param) if not consistency_check(m).passed]
    elapsed = time.perf_counter() - start
    for m in bad[:5]:
        logger.error(f"✗ {m}: {consistency_check(m)}")
    logger.info(f"  done in {elapsed:.1f}s")
    return not bad


def _brute_force_trees(g: nx.MultiGraph) -> int:
    nodes = list(g.nodes())
    count = 0
    for chosen in combinations(list(g.edges(keys=True)), len(nodes) - 1):
        h = nx.MultiGraph()
        h.add_nodes_from(nodes)
        h.add_edges_from(chosen)
        if nx.is_connected(h):
            count += 1
    return count


def test_spanning_tree_counts(count: int = 200) -> bool:
    """The matrix-tree count matches enumeration on multigraphs with <= 7 vertices and <= 12 edges."""
    rng = random.Random(SEED)
    for k in range(count):
        size = rng.randint(2, 7)
        g = nx.MultiGraph()
        g.add_nodes_from(range(size))
        for _ in range(rng.randint(0, 12)):
            u, v = rng.sample(range(size), 2)
            g.add_edge(u, v)
        expected = _brute_force_trees(g)
        if spanning_tree_count(g) != expected:
            logger.error(f"✗ graph {k}: matrix-tree count {spanning_tree_count(g)}, enumeration {expected}")
            return False
    logger.info(f"  ✓ {count} random multigraphs")
    return True


def test_lens_base_case() -> bool:
    """One-unknot models blow down to an unknot framed q1."""
    for q1 in range(1, 11):
        m = ModelDiagram(1, (), (q1,))
        reduced = lens_base_case(m)
        if reduced.matrix != ((q1,),) or abs(linking_matrix(m).determinant()) != q1:
            logger.error(f"✗ q1={q1} reduced to {reduced.matrix}")
            return False
        logger.info(f"  ✓ q1={q1}: L({q1}, 1)")
    return True


def test_lspace_certificates(max_n: int = 3, max_param: int = 3) -> bool:
    """Every grid model certifies, with the determinant identity and a positive definite W3 residual."""
    logger.info(f"Certifying the grid n <= {max_n}, parameters <= {max_param}")
    failures = 0
    total = 0
    for m in model_grid(max_n, max_param):
        total += 1
        cert = lspace_certificate(m)
        triads = [s for s in cert.steps if s.kind == "triad"]
        if not cert.succeeded or not all(s.identity_holds and s.w3.positive_definite for s in triads):
            logger.error(f"✗ certificate failed for {m}")
            failures += 1
    logger.info(f"  {total - failures}/{total} certificates succeeded")
    return failures == 0


def test_blow_down_invariants(count: int = 1000) -> bool:
    """Blow-downs keep |det| and shift the signature by the blown-down framing."""
    rng = random.Random(SEED)
    for k in range(count):
        size = rng.randint(1, 8)
        rows = [[0] * size for _ in range(size)]
        for i in range(size):
            for j in range(i, size):
                rows[i][j] = rows[j][i] = rng.randint(-4, 4)
        pivot = rng.randrange(size)
        eps = rng.choice((1, -1))
        rows[pivot][pivot] = eps
        d = from_rows(rows)
        out = blow_down(d, pivot)
        if abs(out.determinant()) != abs(d.determinant()):
            logger.error(f"✗ matrix {k}: |det| changed")
            return False
        if form_invariants(d).signature != form_invariants(out).signature + eps:
            logger.error(f"✗ matrix {k}: signature did not shift by {eps}")
            return False
    logger.info(f"  ✓ {count} random blow-downs")
    return True


def test_diagonalizability() -> bool:
    """-I_k is standard for k <= 8, -E8 is not."""
    start = time.perf_counter()
    for k in range(1, 9):
        rows = [[-1 if i == j else 0 for j in range(k)] for i in range(k)]
        if not is_diagonalizable_over_integers(from_rows(rows)):
            logger.error(f"✗ -I_{k} rejected")
            return False
    e8 = [[-2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)]:
        e8[i][j] = e8[j][i] = 1
    if is_diagonalizable_over_integers(from_rows(e8)):
        logger.error("✗ -E8 accepted")
        return False
    elapsed = time.perf_counter() - start
    logger.info(f"  ✓ -I_1..-I_8 accepted, -E8 rejected in {elapsed:.2f}s")
    return elapsed <= 5


def test_d3_values() -> bool:
    """tb = 0 surgeries give d3 = (1 - rot^2) / 4; even rotation numbers are rejected."""
    for rot in (1, -1, 3, -3, 5, -5):
        d3 = d3_from_filling(legendrian_surgery_presentation(LegendrianKnotData(0, rot)))
        expected = Rational(1 - rot * rot, 4)
        if d3 != expected:
            logger.error(f"✗ rot={rot}: d3 = {d3}, expected {expected}")
            return False
        logger.info(f"  ✓ rot={rot}: d3 = {d3}")
    try:
        LegendrianKnotData(0, 2)
    except InvalidInputError:
        logger.info("  ✓ tb=0, rot=2 rejected")
        return True
    logger.error("✗ tb=0, rot=2 accepted")
    return False


def test_obstruction_engine() -> bool:
    """R3 fires on tb = 0, nothing follows from nothing, R4 compares exact rationals."""
    r3 = obstruction_report(HypothesisSet.model_validate({"rules": {"legendrian_tb0": {"rot": 1}}}))
    empty = obstruction_report(HypothesisSet())
    r4 = obstruction_report(HypothesisSet.model_validate(
        {"rules": {"fillable_qhs": {"d_correction": "0", "d3": "-2"}}}
    ))
    ok = (
        [v.rule for v in r3.verdicts] == ["R3"]
        and empty.summary == "no obstruction derived"
        and [(v.rule, v.status) for v in r4.verdicts] == [("R4", "violated")]
    )
    if not ok:
        logger.error(f"✗ unexpected reports: {r3.summary} / {empty.summary} / {r4.summary}")
    return ok


def run_all_tests() -> bool:
    """
    Run all acceptance checks.

    Returns:
        True if all checks pass, False otherwise
    """
    logger.info("=" * 60)
    logger.info("Planar Monodromy Acceptance Checks")
    logger.info("=" * 60)

    tests = [
        ("Factorization round trip", test_factorization_round_trip),
        ("Lantern relation", test_lantern_relation),
        ("Determinant triple", test_determinant_triple),
        ("Spanning tree counts", test_spanning_tree_counts),
        ("Lens base case", test_lens_base_case),
        ("L-space certificates", test_lspace_certificates),
        ("Blow-down invariants", test_blow_down_invariants),
        ("Diagonalizability", test_diagonalizability),
        ("d3 values", test_d3_values),
        ("Obstruction engine", test_obstruction_engine),
    ]

    results = {}
    for name, test_func in tests:
        logger.info(f"\n--- Testing {name} ---")
        try:
            results[name] = test_func()
        except PlanarError as e:
            logger.error(f"✗ {name} raised {type(e).__name__}: {e}")
            results[name] = False

    logger.info("\n" + "=" * 60)
    logger.info("Test Results Summary")
    logger.info("=" * 60)

    all_passed = True
    for name, passed in results.items():
        status = "✓ PASS" if passed else "✗ FAIL"
        logger.info(f"{name:28} {status}")
        if not passed:
            all_passed = False

    logger.info("=" * 60)

    if all_passed:
        logger.info("All acceptance checks passed.")
    else:
        logger.error("Some acceptance checks failed.")

    return all_passed


if __name__ == "__main__":
    success = run_all_tests()
    exit(0 if success else 1)
