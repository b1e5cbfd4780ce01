from fastapi import APIRouter, HTTPException

from ..errors import PlanarError
from ..schemas import (
    MatrixRequest,
    ModelRequest,
    certificate_to_dict,
    consistency_to_dict,
    diagram_to_dict,
    invariants_to_dict,
    model_to_dict,
)
from ..services.graph_link import consistency_check, edge_multiplicities, graph_from_model
from ..services.kirby import form_invariants, is_diagonalizable_over_integers, linking_matrix
from ..services.lspace import certificate_service

router = APIRouter(prefix="/models", tags=["models"])


@router.post("/matrix")
async def model_matrix(request: ModelRequest):
    try:
        diagram = linking_matrix(request.to_model())
    except PlanarError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return diagram_to_dict(diagram)


@router.post("/graph")
async def model_graph(request: ModelRequest):
    try:
        g = graph_from_model(request.to_model())
    except PlanarError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {
        "vertices": sorted(g.nodes()),
        "edges": [{"u": u, "v": v, "multiplicity": k} for (u, v), k in sorted(edge_multiplicities(g).items())],
    }


@router.post("/consistency")
async def model_consistency(request: ModelRequest):
    try:
        model = request.to_model()
        report = consistency_check(model)
    except PlanarError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {"model": model_to_dict(model), **consistency_to_dict(report)}


@router.post("/certificate")
async def model_certificate(request: ModelRequest):
    try:
        cert = certificate_service.lspace_certificate(request.to_model())
    except PlanarError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return certificate_to_dict(cert)


@router.post("/invariants")
async def matrix_invariants(request: MatrixRequest):
    try:
        diagram = request.to_diagram()
        inv = form_invariants(diagram)
        diagonalizable = None
        if inv.b2_zero == 0 and (inv.is_positive_definite or inv.is_negative_definite) and inv.rank:
            diagonalizable = is_diagonalizable_over_integers(diagram)
    except PlanarError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {**invariants_to_dict(inv), "diagonalizable": diagonalizable}
