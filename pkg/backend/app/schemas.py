"""Request models and JSON encoders shared by the HTTP API and the CLI.

Integers beyond 64 bits are written as decimal strings.
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from .services.curves import Twist, TwistWord
from .services.free_group import format_word
from .services.grammar import print_twist_word
from .services.graph_link import ConsistencyReport
from .services.kirby import FormInvariants, FramedDiagram, ModelDiagram
from .services.lspace import CertificateStep, LSpaceCertificate, W3Evidence
from .services.twists import Factorization

INT64_MAX = 2 ** 63 - 1


def encode_int(value: int):
    value = int(value)
    return value if -INT64_MAX - 1 <= value <= INT64_MAX else str(value)


def decode_int(value) -> int:
    return int(str(value).strip())


class FactorizeRequest(BaseModel):
    n: int = Field(..., ge=1)
    word: str


class VerifyRequest(BaseModel):
    n: int = Field(..., ge=1)
    lhs: str
    rhs: str


class ModelRequest(BaseModel):
    n: int = Field(..., ge=1)
    p: List[int] = Field(default_factory=list)
    q: List[int]
    lens_summands: List[int] = Field(default_factory=list)

    def to_model(self) -> ModelDiagram:
        return ModelDiagram(self.n, tuple(self.p), tuple(self.q), tuple(self.lens_summands))


class MatrixRequest(BaseModel):
    components: Optional[List[str]] = None
    matrix: List[List[Any]]

    def to_diagram(self) -> FramedDiagram:
        rows = [[decode_int(x) for x in row] for row in self.matrix]
        labels = self.components or [f"K{i + 1}" for i in range(len(rows))]
        return FramedDiagram(tuple(labels), tuple(tuple(r) for r in rows))


class D3Request(BaseModel):
    matrix: List[List[int]]
    rot: List[int]
    chi_x0: int
    sigma: Optional[int] = None


def twist_to_dict(t: Twist) -> Dict[str, Any]:
    return {
        "text": print_twist_word([t]),
        "enclosed": list(t.enclosed),
        "sign": t.sign,
        "word": format_word(t.curve.word),
        "frame": print_twist_word(t.curve.frame),
    }


def word_to_dict(w: TwistWord) -> Dict[str, Any]:
    return {"n": w.n, "text": print_twist_word(w.letters), "letters": [twist_to_dict(t) for t in w]}


def factorization_to_dict(f: Factorization, verified: Optional[bool] = None) -> Dict[str, Any]:
    out = {
        "n": f.n,
        "delta_exponents": {str(i): encode_int(e) for i, e in sorted(f.delta_exponents.items())},
        "gamma_exponents": {str(j): encode_int(e) for j, e in sorted(f.gamma_exponents.items())},
        "tail": print_twist_word(f.tail.letters),
        "tail_length": len(f.tail),
    }
    if verified is not None:
        out["oracle_verified"] = verified
    return out


def diagram_to_dict(d: FramedDiagram) -> Dict[str, Any]:
    return {
        "components": list(d.components),
        "matrix": [[encode_int(x) for x in row] for row in d.matrix],
    }


def model_to_dict(m: ModelDiagram) -> Dict[str, Any]:
    out: Dict[str, Any] = {"n": m.n, "p": list(m.p), "q": list(m.q)}
    if m.lens_summands:
        out["lens_summands"] = list(m.lens_summands)
    return out


def invariants_to_dict(inv: FormInvariants) -> Dict[str, Any]:
    return {
        "det": encode_int(inv.det),
        "signature": inv.signature,
        "b2_plus": inv.b2_plus,
        "b2_minus": inv.b2_minus,
        "b2_zero": inv.b2_zero,
    }


def consistency_to_dict(report: ConsistencyReport) -> Dict[str, Any]:
    return {
        "linking_det": encode_int(report.linking_det),
        "tree_count": encode_int(report.tree_count),
        "goeritz_det": encode_int(report.goeritz_det),
        "passed": report.passed,
    }


def _w3_to_dict(w3: W3Evidence) -> Dict[str, Any]:
    return {
        "residual": diagram_to_dict(w3.residual),
        "invariants": invariants_to_dict(w3.invariants),
        "positive_definite": w3.positive_definite,
        "b2_plus_w3": w3.b2_plus_w3,
    }


def step_to_dict(step: CertificateStep) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "kind": step.kind,
        "model": model_to_dict(step.model),
        "det": encode_int(step.det),
        "passed": step.passed,
    }
    if step.kind == "triad":
        out.update({
            "branch": step.branch,
            "y1": model_to_dict(step.y1),
            "y3": model_to_dict(step.y3),
            "det_y1": encode_int(step.det_y1),
            "det_y3": encode_int(step.det_y3),
            "identity_holds": step.identity_holds,
            "w3": _w3_to_dict(step.w3),
        })
    if step.note:
        out["note"] = step.note
    return out


def certificate_to_dict(cert: LSpaceCertificate) -> Dict[str, Any]:
    return {
        "model": model_to_dict(cert.model),
        "verdict": cert.verdict,
        "steps": [step_to_dict(s) for s in cert.steps],
    }
