import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, Rational

from app.errors import ContradictoryHypothesesError, DegenerateFormError, DimensionMismatchError, InvalidInputError
from app.services.contact import (
    FillingData,
    HypothesisSet,
    LegendrianKnotData,
    c1_squared,
    d3_from_filling,
    legendrian_surgery_presentation,
    obstruction_report,
    parse_rational,
    torus_knot_legendrian,
)

from .test_kirby import minus_e8


def report_for(rules):
    return obstruction_report(HypothesisSet.model_validate({"rules": rules}))


class TestD3:
    @pytest.mark.parametrize(
        "matrix, rot, sigma, chi, expected",
        [
            ([[-1]], [1], -1, 1, Rational(0)),
            ([[-1]], [3], -1, 1, Rational(-2)),
            ([[-1, 0], [0, -1]], [1, 1], -2, 2, Rational(0)),
        ],
    )
    def test_formula_examples(self, matrix, rot, sigma, chi, expected):
        assert d3_from_filling(FillingData(matrix, rot, chi, sigma)) == expected

    def test_signature_defaults_to_the_form(self):
        assert FillingData([[-1, 0], [0, -1]], [1, 1], 2).signature() == -2

    def test_c1_squared(self):
        assert c1_squared([[-1]], [3]) == -9
        assert c1_squared([[-2]], [0]) == 0
        assert c1_squared([[2, 1], [1, 2]], [1, 1]) == Rational(2, 3)
        with pytest.raises(DegenerateFormError):
            c1_squared([[1, 1], [1, 1]], [1, 0])
        with pytest.raises(DimensionMismatchError):
            c1_squared([[-1]], [1, 1])

    @settings(max_examples=25, deadline=None)
    @given(st.data())
    def test_congruence_invariance(self, data):
        size = data.draw(st.integers(1, 4))
        q = Matrix.diag(*data.draw(st.lists(st.sampled_from((-3, -2, -1, 1, 2)), min_size=size, max_size=size)))
        r = Matrix(data.draw(st.lists(st.integers(-3, 3), min_size=size, max_size=size)))
        e = Matrix.eye(size)
        if size >= 2:
            for _ in range(6):
                i, j = data.draw(st.permutations(list(range(size))))[:2]
                step = Matrix.eye(size)
                step[i, j] = data.draw(st.sampled_from((-2, -1, 1, 2)))
                e = e * step
        q2, r2 = e.T * q * e, e.T * r
        before = d3_from_filling(FillingData(q.tolist(), list(r), 3))
        after = d3_from_filling(FillingData(q2.tolist(), list(r2), 3))
        assert before == after


class TestLegendrian:
    def test_tb_zero_rot_one(self):
        filling = legendrian_surgery_presentation(LegendrianKnotData(0, 1))
        assert filling.matrix == ((-1,),)
        assert filling.rot == (1,)
        assert d3_from_filling(filling) == 0

    @pytest.mark.parametrize("rot, expected", [(1, 0), (-1, 0), (3, -2), (-3, -2), (5, -6), (-5, -6)])
    def test_tb_zero_closed_form(self, rot, expected):
        d3 = d3_from_filling(legendrian_surgery_presentation(LegendrianKnotData(0, rot)))
        assert d3 == expected == Rational(1 - rot * rot, 4)

    def test_parity_law(self):
        with pytest.raises(InvalidInputError):
            LegendrianKnotData(0, 2)
        with pytest.raises(InvalidInputError):
            LegendrianKnotData(-1, 1)

    def test_tb_minus_one(self):
        filling = legendrian_surgery_presentation(LegendrianKnotData(-1, 0))
        assert filling.matrix == ((-2,),)
        assert c1_squared(filling.matrix, filling.rot) == 0

    def test_tb_one_is_degenerate(self):
        with pytest.raises(DegenerateFormError):
            legendrian_surgery_presentation(LegendrianKnotData(1, 0))

    def test_torus_knots(self):
        assert torus_knot_legendrian(2, 3, 0) == LegendrianKnotData(0, -1)
        k = torus_knot_legendrian(3, 4, 1)
        assert k == LegendrianKnotData(0, -3)
        assert d3_from_filling(legendrian_surgery_presentation(k)) == -2
        with pytest.raises(InvalidInputError):
            torus_knot_legendrian(2, 4, 0)
        with pytest.raises(InvalidInputError):
            torus_knot_legendrian(2, 3, 2)


def test_parse_rational():
    assert parse_rational("-1/2") == Rational(-1, 2)
    assert parse_rational(3) == 3
    with pytest.raises(InvalidInputError):
        parse_rational("one half")


class TestRules:
    def test_no_hypotheses(self):
        report = report_for({})
        assert report.verdicts == []
        assert report.summary == "no obstruction derived"
        assert not report.obstructed

    def test_legendrian_tb0(self):
        report = report_for({"legendrian_tb0": {"rot": 1}})
        assert [v.rule for v in report.verdicts] == ["R3"]
        assert report.obstructed
        assert "does not support a planar open book" in report.verdicts[0].conclusion

    def test_nontorsion_with_contact_invariant(self):
        report = report_for({"c1_spin_nontorsion": True, "cplus_nonzero": True})
        assert [v.rule for v in report.verdicts] == ["R1"]
        assert report_for({"c1_spin_nontorsion": True}).verdicts == []

    def test_stein_filling(self):
        report = report_for({"stein_filling_c1_nonzero": True, "c1_xi_zero": True})
        assert [v.rule for v in report.verdicts] == ["R2"]
        assert [v.rule for v in report_for({"stein_c1_nonzero": True, "c1_xi_zero": True}).verdicts] == ["R2"]

    def test_correction_term_violated(self):
        report = report_for({"fillable_qhs": {"d_correction": "0", "d3": "-2"}})
        (verdict,) = report.verdicts
        assert (verdict.rule, verdict.status) == ("R4", "violated")
        assert report.obstructed

    def test_correction_term_satisfied(self):
        report = report_for({"fillable_qhs": {"d_correction": "-1/2", "d3": "-1/2"}})
        assert [(v.rule, v.status) for v in report.verdicts] == [("R4", "satisfied")]
        assert not report.obstructed

    def test_correction_term_from_a_filling_or_a_knot(self):
        filling = {"matrix": [[-1]], "rot": [3], "chi_x0": 1}
        report = report_for({"fillable_qhs": {"d_correction": "0", "filling": filling}})
        assert report.verdicts[0].details["d3"] == "-2"
        report = report_for({"legendrian_tb0": {"rot": 3}, "fillable_qhs": {"d_correction": "0"}})
        assert [(v.rule, v.status) for v in report.verdicts] == [("R3", "obstructed"), ("R4", "violated")]

    def test_correction_term_without_d3_is_undecided(self):
        report = report_for({"fillable_qhs": {"d_correction": "0"}})
        assert [(v.rule, v.status) for v in report.verdicts] == [("R4", "undecided")]
        assert not report.obstructed
        assert report.summary == "no obstruction derived"

    def test_undecided_correction_term_keeps_other_verdicts(self):
        base = {"stein_filling_c1_nonzero": True, "c1_xi_zero": True}
        report = report_for({**base, "fillable_qhs": {"d_correction": "0"}})
        assert [(v.rule, v.status) for v in report.verdicts] == [("R2", "obstructed"), ("R4", "undecided")]
        assert report.obstructed
        assert report.summary == "not supported by a planar open book (R2)"

    def test_contradictions(self):
        with pytest.raises(ContradictoryHypothesesError):
            report_for({"c1_spin_nontorsion": True, "rational_homology_sphere": True})
        with pytest.raises(ContradictoryHypothesesError):
            report_for({"legendrian_tb0": {"rot": 2}})
        with pytest.raises(ContradictoryHypothesesError):
            report_for({"legendrian_tb0": {"tb": 1, "rot": 0}})
        filling = {"matrix": [[-1]], "rot": [3], "chi_x0": 1}
        with pytest.raises(ContradictoryHypothesesError):
            report_for({"fillable_qhs": {"d_correction": "0", "d3": "0", "filling": filling}})

    def test_filling_with_positive_part(self):
        report = report_for({"symplectic_filling": {"b2_plus": 1}})
        assert [v.rule for v in report.verdicts] == ["R5"]
        report = report_for({"symplectic_filling": {"boundary_connected": False}})
        assert [v.rule for v in report.verdicts] == ["R5"]
        report = report_for({"symplectic_filling": {"intersection_form": [[0, 1], [1, 0]]}})
        assert [v.rule for v in report.verdicts] == ["R5"]

    def test_filling_of_an_integral_homology_sphere(self):
        e8 = [list(row) for row in minus_e8().matrix]
        report = report_for({"integral_homology_sphere": True, "symplectic_filling": {"intersection_form": e8}})
        assert [v.rule for v in report.verdicts] == ["R5"]
        assert report.verdicts[0].details == {"diagonalizable": False}
        diagonal = [[-1, 0], [0, -1]]
        assert report_for({"integral_homology_sphere": True, "symplectic_filling": {"intersection_form": diagonal}}).verdicts == []

    def test_filling_with_first_betti_number(self):
        report = report_for({"rational_homology_sphere": True, "symplectic_filling": {"b1": 2}})
        assert [v.rule for v in report.verdicts] == ["R6"]
        assert report_for({"symplectic_filling": {"b1": 2}}).verdicts == []

    def test_rules_are_monotone(self):
        steps = [
            {"cplus_nonzero": True},
            {"stein_filling_c1_nonzero": True},
            {"c1_xi_zero": True},
            {"legendrian_tb0": {"rot": 3}},
            {"fillable_qhs": {"d_correction": "0"}},
            {"symplectic_filling": {"b1": 1}},
        ]
        rules, seen = {}, set()
        for step in steps:
            rules.update(step)
            current = {v.rule for v in report_for(rules).verdicts}
            assert seen <= current
            seen = current
        assert seen == {"R2", "R3", "R4", "R6"}
