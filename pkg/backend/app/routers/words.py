from fastapi import APIRouter, HTTPException

from ..errors import PlanarError
from ..schemas import FactorizeRequest, VerifyRequest, factorization_to_dict, model_to_dict
from ..services.words import word_service

router = APIRouter(prefix="/words", tags=["words"])


@router.post("/factorize")
async def factorize_word(request: FactorizeRequest):
    try:
        result, verified = word_service.factorize(request.n, request.word)
    except PlanarError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return factorization_to_dict(result, verified)


@router.post("/verify")
async def verify_words(request: VerifyRequest):
    try:
        equal = word_service.verify(request.n, request.lhs, request.rhs)
    except PlanarError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {"n": request.n, "equal": equal}


@router.post("/model")
async def model_of_word(request: FactorizeRequest):
    try:
        model = word_service.model(request.n, request.word)
    except PlanarError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return model_to_dict(model)
