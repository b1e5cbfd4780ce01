from fastapi import APIRouter, HTTPException

from ..errors import PlanarError
from ..schemas import D3Request
from ..services.contact import FillingData, HypothesisSet, c1_squared, d3_from_filling, obstruction_report

router = APIRouter(prefix="/contact", tags=["contact"])


@router.post("/d3")
async def d3(request: D3Request):
    try:
        filling = FillingData(tuple(map(tuple, request.matrix)), tuple(request.rot), request.chi_x0, request.sigma)
        value = d3_from_filling(filling)
        c1sq = c1_squared(filling.matrix, filling.rot)
    except PlanarError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {"d3": str(value), "c1_squared": str(c1sq), "sigma": filling.signature(), "chi_x0": request.chi_x0}


@router.post("/obstruct")
async def obstruct(hypotheses: HypothesisSet):
    try:
        report = obstruction_report(hypotheses)
    except PlanarError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {**report.model_dump(), "obstructed": report.obstructed, "summary": report.summary}
