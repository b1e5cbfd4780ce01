"""d3 invariants from fillings and the planarity obstruction rules.

Hypotheses are declared by the user; nothing here checks Steinness,
fillability or nonvanishing of contact invariants. The engine only derives
the consequences that follow from them.
"""
import logging
from dataclasses import dataclass
from math import gcd
from typing import List, Optional, Sequence

from pydantic import AliasChoices, BaseModel, Field, field_validator
from sympy import Matrix, Rational

from ..errors import (
    ContradictoryHypothesesError,
    DegenerateFormError,
    DimensionMismatchError,
    InvalidInputError,
)
from .kirby import form_invariants, from_rows, is_diagonalizable_over_integers

logger = logging.getLogger(__name__)


def parse_rational(value) -> Rational:
    try:
        return Rational(str(value).strip())
    except (TypeError, ValueError, SyntaxError) as exc:
        raise InvalidInputError(f"{value!r} is not a rational number") from exc


@dataclass(frozen=True)
class FillingData:
    matrix: Sequence[Sequence[int]]
    rot: Sequence[int]
    chi_x0: int
    sigma: Optional[int] = None

    def __post_init__(self):
        size = len(self.matrix)
        if any(len(row) != size for row in self.matrix):
            raise DimensionMismatchError("intersection form must be square")
        if len(self.rot) != size:
            raise DimensionMismatchError(f"rotation vector has {len(self.rot)} entries for a rank {size} form")

    def signature(self) -> int:
        if self.sigma is not None:
            return self.sigma
        return form_invariants(from_rows(self.matrix)).signature


@dataclass(frozen=True)
class LegendrianKnotData:
    tb: int
    rot: int

    def __post_init__(self):
        if (self.tb + self.rot) % 2 == 0:
            raise InvalidInputError(f"tb + rot must be odd, got tb={self.tb} rot={self.rot}")


def c1_squared(matrix: Sequence[Sequence[int]], rot: Sequence[int]) -> Rational:
    """r . Q^-1 r, the square of the class evaluating to r on H2."""
    q = Matrix(matrix) if len(matrix) else Matrix.zeros(0, 0)
    if q.rows != len(rot):
        raise DimensionMismatchError(f"rotation vector has {len(rot)} entries for a rank {q.rows} form")
    if q.rows == 0:
        return Rational(0)
    if q.det(method="bareiss") == 0:
        raise DegenerateFormError("intersection form is degenerate; c1 is not torsion on the boundary")
    r = Matrix(list(rot))
    a = q.LUsolve(r)
    return Rational((r.T * a)[0, 0])


def d3_from_filling(f: FillingData) -> Rational:
    c1sq = c1_squared(f.matrix, f.rot)
    return Rational(1, 4) * (c1sq - 3 * f.signature() - 2 * f.chi_x0)


def legendrian_surgery_presentation(k: LegendrianKnotData) -> FillingData:
    """Filling from contact (-1)-surgery on a Legendrian knot in S^3."""
    framing = k.tb - 1
    if framing == 0:
        raise DegenerateFormError("tb = 1 gives a 0-framed handle; the filling form is degenerate")
    return FillingData(matrix=((framing,),), rot=(k.rot,), chi_x0=1, sigma=1 if framing > 0 else -1)


def torus_knot_legendrian(p: int, q: int, positive_stabilizations: int) -> LegendrianKnotData:
    """Stabilize the max-tb Legendrian positive (p, q) torus knot down to tb = 0.

    Max tb is pq - p - q with rot = 0; each stabilization lowers tb by one
    and moves rot by +-1.
    """
    if p < 2 or q < 2 or gcd(p, q) != 1:
        raise InvalidInputError(f"need coprime p, q >= 2, got ({p}, {q})")
    count = p * q - p - q
    if not 0 <= positive_stabilizations <= count:
        raise InvalidInputError(f"positive stabilizations must lie in 0..{count}")
    return LegendrianKnotData(tb=0, rot=2 * positive_stabilizations - count)


# Rule engine -------------------------------------------------------------------

class LegendrianHypothesis(BaseModel):
    tb: int = 0
    rot: int
    ambient: str = "S3"


class FillableQHSHypothesis(BaseModel):
    d_correction: str = Field(description="correction term d(-Y, s) as a rational, e.g. '-1/2'")
    d3: Optional[str] = None
    filling: Optional["FillingInput"] = None


class FillingInput(BaseModel):
    matrix: List[List[int]]
    rot: List[int]
    chi_x0: int
    sigma: Optional[int] = None

    def to_data(self) -> FillingData:
        return FillingData(tuple(map(tuple, self.matrix)), tuple(self.rot), self.chi_x0, self.sigma)


class SymplecticFillingHypothesis(BaseModel):
    b1: int = Field(0, ge=0)
    b2_plus: int = Field(0, ge=0)
    b2_zero: int = Field(0, ge=0)
    boundary_connected: bool = True
    intersection_form: Optional[List[List[int]]] = None


class HypothesisRules(BaseModel):
    c1_spin_nontorsion: bool = False
    cplus_nonzero: bool = False
    stein_filling_c1_nonzero: bool = Field(False, validation_alias=AliasChoices("stein_filling_c1_nonzero", "stein_c1_nonzero"))
    c1_xi_zero: bool = False
    rational_homology_sphere: bool = False
    integral_homology_sphere: bool = False
    legendrian_tb0: Optional[LegendrianHypothesis] = None
    fillable_qhs: Optional[FillableQHSHypothesis] = None
    symplectic_filling: Optional[SymplecticFillingHypothesis] = None


class HypothesisSet(BaseModel):
    rules: HypothesisRules = Field(default_factory=HypothesisRules)


class Verdict(BaseModel):
    rule: str
    status: str
    conclusion: str
    citation: str
    details: dict = Field(default_factory=dict)

    @field_validator("status")
    @classmethod
    def _known_status(cls, v: str) -> str:
        if v not in ("obstructed", "violated", "satisfied", "undecided"):
            raise ValueError(f"unknown verdict status {v!r}")
        return v


class ObstructionReport(BaseModel):
    verdicts: List[Verdict] = Field(default_factory=list)

    @property
    def obstructed(self) -> bool:
        return any(v.status in ("obstructed", "violated") for v in self.verdicts)

    @property
    def summary(self) -> str:
        if all(v.status == "undecided" for v in self.verdicts):
            return "no obstruction derived"
        if self.obstructed:
            rules = ", ".join(v.rule for v in self.verdicts if v.status in ("obstructed", "violated"))
            return f"not supported by a planar open book ({rules})"
        return "hypotheses are consistent with a planar open book"


NOT_PLANAR = "does not support a planar open book decomposition"


def _check_consistency(h: HypothesisRules) -> None:
    homology_sphere = h.rational_homology_sphere or h.integral_homology_sphere or h.fillable_qhs is not None
    if h.c1_spin_nontorsion and homology_sphere:
        raise ContradictoryHypothesesError("a rational homology sphere has no nontorsion spin^c classes")
    if h.legendrian_tb0 is not None:
        k = h.legendrian_tb0
        if k.tb != 0:
            raise ContradictoryHypothesesError(f"legendrian_tb0 declares tb = {k.tb}")
        if k.rot % 2 == 0:
            raise ContradictoryHypothesesError(f"a tb = 0 Legendrian knot has odd rotation number, got {k.rot}")
        if k.ambient.upper() not in ("S3", "S^3"):
            raise InvalidInputError(f"Legendrian surgery rule is stated for knots in S3, got {k.ambient!r}")
        if h.c1_spin_nontorsion:
            raise ContradictoryHypothesesError("surgery on a knot in S3 gives an integral homology sphere")
    if h.fillable_qhs is not None and h.fillable_qhs.d3 is not None and h.fillable_qhs.filling is not None:
        if parse_rational(h.fillable_qhs.d3) != d3_from_filling(h.fillable_qhs.filling.to_data()):
            raise ContradictoryHypothesesError("declared d3 differs from the d3 of the declared filling")


def _qhs_d3(h: HypothesisRules) -> Optional[Rational]:
    qhs = h.fillable_qhs
    if qhs.d3 is not None:
        return parse_rational(qhs.d3)
    if qhs.filling is not None:
        return d3_from_filling(qhs.filling.to_data())
    if h.legendrian_tb0 is not None:
        k = LegendrianKnotData(h.legendrian_tb0.tb, h.legendrian_tb0.rot)
        return d3_from_filling(legendrian_surgery_presentation(k))
    return None


def obstruction_report(hypotheses: HypothesisSet) -> ObstructionReport:
    h = hypotheses.rules
    _check_consistency(h)
    verdicts: List[Verdict] = []

    if h.c1_spin_nontorsion and h.cplus_nonzero:
        verdicts.append(Verdict(
            rule="R1", status="obstructed", conclusion=NOT_PLANAR,
            citation="nonvanishing contact invariant with nontorsion spin^c structure",
        ))
    if h.stein_filling_c1_nonzero and h.c1_xi_zero:
        verdicts.append(Verdict(
            rule="R2", status="obstructed", conclusion=NOT_PLANAR,
            citation="Stein filling with c1(X, J) != 0 while c1(xi) = 0",
        ))
    if h.legendrian_tb0 is not None:
        verdicts.append(Verdict(
            rule="R3", status="obstructed", conclusion=NOT_PLANAR,
            citation="contact (-1)-surgery on a tb = 0 Legendrian knot in S3",
            details={"tb": h.legendrian_tb0.tb, "rot": h.legendrian_tb0.rot},
        ))
    if h.fillable_qhs is not None:
        d = parse_rational(h.fillable_qhs.d_correction)
        d3 = _qhs_d3(h)
        if d3 is None:
            verdicts.append(Verdict(
                rule="R4", status="undecided", conclusion="no d3 to compare against the correction term",
                citation="a planar fillable structure on a QHS has d3(xi) = d(-Y, s)",
                details={"d_correction": str(d)},
            ))
        else:
            holds = d3 == d
            verdicts.append(Verdict(
                rule="R4", status="satisfied" if holds else "violated",
                conclusion="d3 agrees with the correction term" if holds
                else "xi cannot be both fillable and supported by a planar open book",
                citation="a planar fillable structure on a QHS has d3(xi) = d(-Y, s)",
                details={"d3": str(d3), "d_correction": str(d)},
            ))
    if h.symplectic_filling is not None:
        verdicts.extend(_filling_verdicts(h))

    report = ObstructionReport(verdicts=verdicts)
    logger.info(f"Obstruction report: {report.summary}")
    return report


def _filling_verdicts(h: HypothesisRules) -> List[Verdict]:
    f = h.symplectic_filling
    out: List[Verdict] = []
    b2_plus, b2_zero = f.b2_plus, f.b2_zero
    diagonalizable = None
    if f.intersection_form is not None:
        inv = form_invariants(from_rows(f.intersection_form))
        b2_plus, b2_zero = max(b2_plus, inv.b2_plus), max(b2_zero, inv.b2_zero)
        if h.integral_homology_sphere and inv.is_negative_definite and inv.rank:
            diagonalizable = is_diagonalizable_over_integers(from_rows(f.intersection_form))
    if b2_plus > 0 or b2_zero > 0 or not f.boundary_connected:
        out.append(Verdict(
            rule="R5", status="obstructed", conclusion=NOT_PLANAR,
            citation="fillings of planar structures have b2+ = b2^0 = 0 and connected boundary",
            details={"b2_plus": b2_plus, "b2_zero": b2_zero, "boundary_connected": f.boundary_connected},
        ))
    elif diagonalizable is False:
        out.append(Verdict(
            rule="R5", status="obstructed", conclusion=NOT_PLANAR,
            citation="fillings of planar structures on integral homology spheres have diagonalizable forms",
            details={"diagonalizable": False},
        ))
    homology_sphere = h.rational_homology_sphere or h.integral_homology_sphere or h.fillable_qhs is not None
    if homology_sphere and f.b1 > 0:
        out.append(Verdict(
            rule="R6", status="obstructed", conclusion=NOT_PLANAR,
            citation="fillings of planar structures on rational homology spheres have b1 = 0",
            details={"b1": f.b1},
        ))
    return out


FillableQHSHypothesis.model_rebuild()
