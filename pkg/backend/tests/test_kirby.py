import pytest
from hypothesis import given, settings, strategies as st

from app.errors import DimensionMismatchError, InvalidInputError, KirbyError
from app.services.curves import Surface, TwistWord, canonical_twist, twist_word
from app.services.kirby import (
    FramedDiagram,
    ModelDiagram,
    blow_down,
    blow_down_all,
    cancel_hopf_pair,
    cancel_or_delete_last,
    chain_slide,
    congruence_diagonal,
    diagram_from_factorization,
    form_invariants,
    from_rows,
    handle_slide,
    is_diagonalizable_over_integers,
    lens_base_case,
    linking_matrix,
    model_from_word,
    normalize_orientations,
    recognize_model,
    require_nondegenerate,
)
from app.services.twists import Factorization
from app.errors import DegenerateFormError

from .conftest import symmetric_rows


def factorization(deltas, gammas):
    n = len(deltas)
    return Factorization(
        {i: e for i, e in enumerate(deltas, start=1)},
        {j: e for j, e in enumerate(gammas, start=2)},
        TwistWord((), Surface(n)),
    )


def minus_e8():
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)]
    rows = [[0] * 8 for _ in range(8)]
    for i in range(8):
        rows[i][i] = -2
    for i, j in edges:
        rows[i][j] = rows[j][i] = 1
    return from_rows(rows)


def minus_identity(k):
    return from_rows([[-1 if i == j else 0 for j in range(k)] for i in range(k)])


class TestDiagrams:
    def test_matrix_must_be_square_and_symmetric(self):
        with pytest.raises(DimensionMismatchError):
            FramedDiagram(("a", "b"), ((0, 1),))
        with pytest.raises(InvalidInputError):
            from_rows([[0, 1], [2, 0]])

    def test_one_boundary_diagram(self):
        d = diagram_from_factorization(factorization([1], []))
        assert d.components == ("U1", "d1.1")
        assert d.matrix == ((0, 1), (1, -1))

    def test_two_boundary_diagram(self):
        d = diagram_from_factorization(factorization([1, 1], [1]))
        assert d.components == ("U1", "U2", "d1.1", "d2.1", "g2.1")
        assert d.matrix[2] == (1, 0, -1, 0, 0)
        assert d.matrix[3] == (0, 1, 0, -1, 0)
        assert d.matrix[4] == (1, 1, 0, 0, -1)

    def test_nonpositive_exponent_or_tail_is_rejected(self):
        with pytest.raises(InvalidInputError):
            diagram_from_factorization(factorization([1, 0], [1]))
        tail = twist_word([canonical_twist((1, 2), -1)], 2)
        with pytest.raises(InvalidInputError):
            diagram_from_factorization(Factorization({1: 1, 2: 1}, {2: 1}, tail))

    def test_model_parameters_must_be_positive(self):
        with pytest.raises(InvalidInputError):
            ModelDiagram(2, (0,), (1, 1))
        with pytest.raises(InvalidInputError):
            ModelDiagram(2, (1,), (1,))

    @pytest.mark.parametrize(
        "model, det",
        [
            (ModelDiagram(1, (), (5,)), 5),
            (ModelDiagram(2, (1,), (1, 1)), 3),
            (ModelDiagram(2, (2,), (2, 2)), 12),
            (ModelDiagram(2, (2,), (1, 1), (3,)), 15),
        ],
    )
    def test_linking_matrix_determinants(self, model, det):
        d = linking_matrix(model)
        assert abs(d.determinant()) == det
        assert d.size == model.n + sum(model.p) + sum(model.q) + sum(k + 1 for k in model.lens_summands)


class TestMoves:
    def test_blow_down_examples(self):
        assert blow_down(from_rows([[-1]]), 0).size == 0
        assert blow_down(from_rows([[0, 1], [1, -1]]), 1).matrix == ((1,),)
        with pytest.raises(InvalidInputError):
            blow_down(from_rows([[2]]), 0)

    @settings(max_examples=100, deadline=None)
    @given(symmetric_rows(min_size=2, max_size=6, unit_at=True))
    def test_blow_down_preserves_det_and_shifts_signature(self, case):
        rows, k = case
        d = from_rows(rows)
        eps = d.framing(k)
        out = blow_down(d, k)
        assert abs(out.determinant()) == abs(d.determinant())
        before, after = form_invariants(d), form_invariants(out)
        assert before.signature == after.signature + eps
        assert before.b2_zero == after.b2_zero

    @settings(max_examples=100, deadline=None)
    @given(symmetric_rows(min_size=2, max_size=6), st.data())
    def test_handle_slides_preserve_the_form(self, rows, data):
        d = from_rows(rows)
        i, j = data.draw(st.permutations(list(range(d.size))))[:2]
        out = handle_slide(d, i, j, data.draw(st.sampled_from((1, -1, 2, -3))))
        assert out.determinant() == d.determinant()
        assert form_invariants(out) == form_invariants(d)

    def test_slide_onto_itself_is_rejected(self):
        with pytest.raises(InvalidInputError):
            handle_slide(from_rows([[0]]), 0, 0)

    def test_cancel_hopf_pair(self):
        d = from_rows([[0, 1, 1], [1, -3, 2], [1, 2, -2]], ["u", "k", "x"])
        out = cancel_hopf_pair(d, 0, 1)
        assert out.components == ("x",)
        assert abs(out.determinant()) == abs(d.determinant())
        with pytest.raises(KirbyError):
            cancel_hopf_pair(from_rows([[1, 1], [1, 0]]), 0, 1)

    def test_normalize_orientations(self):
        d = from_rows([[0, -1, 0], [-1, -1, 1], [0, 1, 0]])
        assert all(x >= 0 for i, row in enumerate(normalize_orientations(d).matrix) for j, x in enumerate(row) if i != j)
        triangle = from_rows([[-2, -1, 1], [-1, -2, 1], [1, 1, -2]])
        with pytest.raises(KirbyError):
            normalize_orientations(triangle)

    def test_blow_down_all(self):
        d = linking_matrix(ModelDiagram(1, (), (3,)))
        assert blow_down_all(d).matrix == ((3,),)


class TestChainSlide:
    @pytest.mark.parametrize(
        "deltas, gammas, expected",
        [
            ([1], [], ModelDiagram(1, (), (1,))),
            ([3], [], ModelDiagram(1, (), (3,))),
            ([1, 1], [1], ModelDiagram(2, (1,), (1, 1))),
            ([2, 3], [1], ModelDiagram(2, (3,), (2, 1))),
            ([1, 2, 1], [1, 1], ModelDiagram(3, (2, 1), (1, 1, 1))),
            ([1, 1, 2], [2, 3], ModelDiagram(3, (1, 2), (1, 2, 3))),
        ],
    )
    def test_examples(self, deltas, gammas, expected):
        d = diagram_from_factorization(factorization(deltas, gammas))
        assert chain_slide(d) == expected

    def test_grid_preserves_determinant(self):
        for deltas in ([1, 1, 1], [2, 1, 2], [1, 3, 1]):
            for gammas in ([1, 1], [2, 1], [1, 2]):
                d = diagram_from_factorization(factorization(deltas, gammas))
                model = chain_slide(d)
                assert abs(linking_matrix(model).determinant()) == abs(d.determinant())

    def test_model_from_word(self):
        w = twist_word([canonical_twist((1, 3))], 3)
        model = model_from_word(w)
        assert model == ModelDiagram(3, (1, 1), (1, 1, 1))


class TestRecognize:
    @pytest.mark.parametrize(
        "model",
        [
            ModelDiagram(1, (), (4,)),
            ModelDiagram(3, (2, 1), (1, 3, 2)),
            ModelDiagram(2, (1,), (2, 1), (2, 5)),
        ],
    )
    def test_recognizes_its_own_linking_matrix(self, model):
        assert recognize_model(linking_matrix(model)) == model

    def test_minus_i_plus_j_block_is_a_lens_summand(self):
        d = linking_matrix(ModelDiagram(1, (), (2,)))
        block = from_rows([[-2, 1], [1, -2]], ["a", "b"])
        rows = [list(r) + [0, 0] for r in d.matrix] + [[0] * d.size + list(r) for r in block.matrix]
        combined = from_rows(rows, list(d.components) + ["a", "b"])
        assert recognize_model(combined) == ModelDiagram(1, (), (2,), (3,))


class TestCancelOrDelete:
    def test_zero_surgery(self):
        assert cancel_or_delete_last(ModelDiagram(2, (1,), (1, 1)), "zero-surgery-cancel") == ModelDiagram(1, (), (2,))
        assert cancel_or_delete_last(ModelDiagram(3, (1, 2), (1, 1, 2)), "zero-surgery-cancel") == ModelDiagram(2, (1,), (1, 3))

    def test_delete_meridian(self):
        assert cancel_or_delete_last(ModelDiagram(2, (1,), (1, 1)), "delete-meridian") == ModelDiagram(1, (), (1,))
        assert cancel_or_delete_last(ModelDiagram(2, (3,), (2, 1)), "delete-meridian") == ModelDiagram(1, (), (2,), (3,))

    def test_errors(self):
        with pytest.raises(InvalidInputError):
            cancel_or_delete_last(ModelDiagram(1, (), (2,)), "zero-surgery-cancel")
        with pytest.raises(InvalidInputError):
            cancel_or_delete_last(ModelDiagram(2, (1,), (1, 2)), "delete-meridian")
        with pytest.raises(InvalidInputError):
            cancel_or_delete_last(ModelDiagram(2, (1,), (1, 1)), "sideways")

    @pytest.mark.parametrize("q1", range(1, 11))
    def test_lens_base_case(self, q1):
        out = lens_base_case(ModelDiagram(1, (), (q1,)))
        assert out.components == ("U1",)
        assert out.matrix == ((q1,),)


class TestForms:
    @pytest.mark.parametrize(
        "rows, expected",
        [
            ([[-1, 0], [0, -1]], (1, -2, 0, 2, 0)),
            ([[0, 1], [1, 0]], (-1, 0, 1, 1, 0)),
            ([[0, 0], [0, 0]], (0, 0, 0, 0, 2)),
            ([[1, 1], [1, 1]], (0, 1, 1, 0, 1)),
            ([[0, 1, 0], [1, 0, 0], [0, 0, 3]], (-3, 1, 2, 1, 0)),
        ],
    )
    def test_form_invariants(self, rows, expected):
        inv = form_invariants(from_rows(rows))
        assert (inv.det, inv.signature, inv.b2_plus, inv.b2_minus, inv.b2_zero) == expected

    @settings(max_examples=50, deadline=None)
    @given(symmetric_rows(min_size=1, max_size=6))
    def test_invariants_are_self_consistent(self, rows):
        d = from_rows(rows)
        inv = form_invariants(d)
        assert inv.rank == d.size
        assert inv.signature == inv.b2_plus - inv.b2_minus
        assert (inv.det == 0) == (inv.b2_zero > 0)
        assert len(congruence_diagonal(d)) == d.size

    def test_minus_e8_is_not_diagonalizable(self):
        e8 = minus_e8()
        assert e8.determinant() == 1
        assert form_invariants(e8).is_negative_definite
        assert not is_diagonalizable_over_integers(e8)

    @pytest.mark.parametrize("k", range(1, 9))
    def test_minus_identity_is_diagonalizable(self, k):
        assert is_diagonalizable_over_integers(minus_identity(k))

    def test_non_diagonal_standard_form(self):
        assert is_diagonalizable_over_integers(from_rows([[-2, 1], [1, -1]]))
        assert not is_diagonalizable_over_integers(from_rows([[2, 1], [1, 2]]))

    def test_indefinite_or_degenerate_is_rejected(self):
        with pytest.raises(InvalidInputError):
            is_diagonalizable_over_integers(from_rows([[0, 1], [1, 0]]))
        with pytest.raises(InvalidInputError):
            is_diagonalizable_over_integers(from_rows([[-1, 0], [0, 0]]))

    def test_require_nondegenerate(self):
        assert require_nondegenerate(from_rows([[2]])) == 2
        with pytest.raises(DegenerateFormError):
            require_nondegenerate(from_rows([[1, 1], [1, 1]]))
