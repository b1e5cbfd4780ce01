"""Command line front end.

Exit codes: 0 success, 1 negative verdict (unequal words, failed
certificate, derived obstruction), 2 usage or input error.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .config import get_settings
from .errors import InvalidInputError, PlanarError
from .schemas import (
    MatrixRequest,
    certificate_to_dict,
    consistency_to_dict,
    diagram_to_dict,
    factorization_to_dict,
    invariants_to_dict,
    model_to_dict,
)
from .services.contact import (
    FillingData,
    HypothesisSet,
    LegendrianKnotData,
    c1_squared,
    d3_from_filling,
    legendrian_surgery_presentation,
    obstruction_report,
    torus_knot_legendrian,
)
from .services.graph_link import consistency_check, dot_graph, graph_from_model
from .services.kirby import ModelDiagram, form_invariants, is_diagonalizable_over_integers, linking_matrix
from .services.lspace import certificate_service
from .services.words import word_service

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


def _int_list(text: str) -> List[int]:
    text = (text or "").strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _emit(payload) -> None:
    if isinstance(payload, str):
        sys.stdout.write(payload)
    else:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InvalidInputError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"{path} is not valid JSON: {e}")


def _read_matrix(path: str):
    data = _read_json(path)
    if isinstance(data, list):
        data = {"matrix": data}
    return MatrixRequest(**data).to_diagram()


def _model_from_args(args) -> ModelDiagram:
    if getattr(args, "word", None):
        return word_service.model(args.n, args.word)
    if args.q is None:
        raise InvalidInputError("give --q (and --p when n > 1), or --word")
    return ModelDiagram(args.n, tuple(args.p or ()), tuple(args.q))


def cmd_factorize(args) -> int:
    result, verified = word_service.factorize(args.n, args.word)
    _emit(factorization_to_dict(result, verified))
    return EXIT_OK if verified else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    equal = word_service.verify(args.n, args.lhs, args.rhs)
    _emit({"n": args.n, "equal": equal})
    return EXIT_OK if equal else EXIT_NEGATIVE


def cmd_model(args) -> int:
    model = _model_from_args(args)
    if args.emit == "graph":
        _emit(dot_graph(graph_from_model(model)))
    elif args.emit == "matrix":
        _emit(diagram_to_dict(linking_matrix(model)))
    else:
        _emit({**model_to_dict(model), **consistency_to_dict(consistency_check(model))})
    return EXIT_OK


def cmd_lspace_cert(args) -> int:
    cert = certificate_service.lspace_certificate(_model_from_args(args))
    _emit(certificate_to_dict(cert))
    return EXIT_OK if cert.succeeded else EXIT_NEGATIVE


def cmd_sweep(args) -> int:
    rows = certificate_service.sweep(args.max_n, args.max_param, args.jobs)
    passed = all(r["certificate"] == "success" and r["consistent"] for r in rows)
    _emit({"models": len(rows), "passed": passed, "results": rows})
    return EXIT_OK if passed else EXIT_NEGATIVE


def cmd_invariants(args) -> int:
    diagram = _read_matrix(args.matrix)
    inv = form_invariants(diagram)
    diagonalizable = None
    if inv.rank and inv.b2_zero == 0 and (inv.is_positive_definite or inv.is_negative_definite):
        diagonalizable = is_diagonalizable_over_integers(diagram)
    _emit({**invariants_to_dict(inv), "diagonalizable": diagonalizable})
    return EXIT_OK


def cmd_d3(args) -> int:
    if args.torus_knot:
        if len(args.torus_knot) != 2:
            raise InvalidInputError("--torus-knot takes P,Q")
        knot = torus_knot_legendrian(args.torus_knot[0], args.torus_knot[1], args.positive_stabilizations)
        filling = legendrian_surgery_presentation(knot)
    elif args.tb is not None:
        if len(args.rot) != 1:
            raise InvalidInputError("a Legendrian knot has a single rotation number")
        knot = LegendrianKnotData(args.tb, args.rot[0])
        filling = legendrian_surgery_presentation(knot)
    elif args.matrix:
        if args.chi is None:
            raise InvalidInputError("--chi is required with --matrix")
        diagram = _read_matrix(args.matrix)
        filling = FillingData(diagram.matrix, tuple(args.rot), args.chi, args.sigma)
    else:
        raise InvalidInputError("give --matrix, --tb or --torus-knot")
    value = d3_from_filling(filling)
    out = {
        "d3": str(value),
        "c1_squared": str(c1_squared(filling.matrix, filling.rot)),
        "sigma": filling.signature(),
        "chi_x0": filling.chi_x0,
    }
    if args.torus_knot or args.tb is not None:
        out["legendrian"] = {"tb": knot.tb, "rot": knot.rot}
    _emit(out)
    return EXIT_OK


def cmd_obstruct(args) -> int:
    hypotheses = HypothesisSet(**_read_json(args.hypotheses))
    report = obstruction_report(hypotheses)
    _emit({**report.model_dump(), "obstructed": report.obstructed, "summary": report.summary})
    return EXIT_NEGATIVE if report.obstructed else EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("main:app", host=args.host, port=args.port, reload=False)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="planar", description="Planar open book monodromies and their model manifolds")
    parser.add_argument("--log-level", default=None, help="override PLANAR_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factorize", help="factor a twist word into deltas, gammas and a left-handed tail")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("verify", help="decide whether two twist words give the same mapping class")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(func=cmd_verify)

    for name, func, helptext in (
        ("model", cmd_model, "chain model: linking matrix, planar graph or parameters"),
        ("lspace-cert", cmd_lspace_cert, "replay the L-space induction for a chain model"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--p", type=_int_list, default=None)
        p.add_argument("--q", type=_int_list, default=None)
        p.add_argument("--word", default=None, help="build the model from the positive part of a factorized word")
        if name == "model":
            p.add_argument("--emit", choices=("matrix", "graph", "json"), default="json")
        p.set_defaults(func=func)

    p = sub.add_parser("sweep", help="certificates and determinant checks over a parameter grid")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-param", type=int, default=3)
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("invariants", help="determinant, signature, inertia and diagonalizability of a form")
    p.add_argument("--matrix", required=True, help="JSON file: [[...]] or {\"components\": ..., \"matrix\": ...}")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("d3", help="d3 invariant from a filling or a tb = 0 Legendrian surgery")
    p.add_argument("--matrix", default=None)
    p.add_argument("--rot", type=_int_list, default=[])
    p.add_argument("--chi", type=int, default=None)
    p.add_argument("--sigma", type=int, default=None)
    p.add_argument("--tb", type=int, default=None)
    p.add_argument("--torus-knot", type=_int_list, default=None, help="P,Q of a positive torus knot")
    p.add_argument("--positive-stabilizations", type=int, default=0)
    p.set_defaults(func=cmd_d3)

    p = sub.add_parser("obstruct", help="derive planarity obstructions from declared hypotheses")
    p.add_argument("--hypotheses", required=True)
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = args.log_level or get_settings().LOG_LEVEL
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except PlanarError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    except ValueError as e:
        # pydantic validation of JSON inputs
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
