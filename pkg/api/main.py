"""
FastAPI Service - REST API for the distribution matcher
Single-block quantize, encode and decode, plus blocklength sweeps
"""
import logging
from typing import List, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.encoders import jsonable_encoder
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

import config
from matcher import analysis, typemath
from matcher.coder import decode_stream, encode_stream
from matcher.errors import CCDMError, CompositionMismatch, DistributionFormatError, NotACodeword
from matcher.ranker import format_bits, parse_bits
from models.distribution import CodeParams, Distribution, distribution_from_values
from models.records import SweepRecord

# Get logger for this module
logger = logging.getLogger(__name__)

SERVICE_NAME = "CCDM Service"
SERVICE_VERSION = "1.0.0"

# Initialize FastAPI
app = FastAPI(
    title="CCDM API",
    description="Constant composition distribution matching over HTTP",
    version=SERVICE_VERSION
)


@app.exception_handler(RequestValidationError)
async def validation_error_handler(request: Request, exc: RequestValidationError):
    """Malformed request bodies are invalid parameters"""
    logger.warning(f"Invalid request to {request.url.path}: {exc.errors()}")
    return JSONResponse(status_code=400, content={"detail": jsonable_encoder(exc.errors())})


class QuantizeRequest(BaseModel):
    """Target distribution and output blocklength"""
    probs: List[float]
    n: int = Field(ge=1)


class QuantizeResponse(BaseModel):
    counts: List[int]
    n: int
    m: int
    type_class_size: str
    h_bar: float
    kl_gap: float
    ndiv: float
    rate: float


class EncodeRequest(QuantizeRequest):
    bits: str = Field(pattern=r"^[01]*$")


class EncodeResponse(BaseModel):
    symbols: List[int]
    m: int
    n: int


class DecodeRequest(QuantizeRequest):
    symbols: List[int]
    strict: bool = True


class DecodeResponse(BaseModel):
    bits: str
    m: int
    n: int


class SweepRequest(BaseModel):
    """n_values defaults to the preset grid when omitted; an empty list is rejected"""
    probs: List[float]
    n_values: Optional[List[int]] = None


def _distribution(probs: List[float]) -> Distribution:
    """Same checks and exact renormalization as a distribution file"""
    try:
        return distribution_from_values(probs)
    except DistributionFormatError as e:
        raise HTTPException(status_code=400, detail=f"invalid distribution: {e}")


def _raise_http(operation: str, e: Exception):
    """Translate a failure into the matching HTTPException"""
    if isinstance(e, (CompositionMismatch, NotACodeword)):
        logger.warning(f"{operation} rejected: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    if isinstance(e, (CCDMError, ValueError)):
        logger.warning(f"{operation} failed: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    logger.error(f"Error in {operation}: {str(e)}", exc_info=True)
    raise HTTPException(status_code=500, detail=f"Error in {operation}: {str(e)}")


@app.get("/")
async def root():
    """Root endpoint"""
    return {
        "service": SERVICE_NAME,
        "version": SERVICE_VERSION,
        "status": "running",
        "endpoints": {
            "quantize": "/quantize - POST probs and n for the code parameters",
            "encode": "/encode - POST probs, n and an m-bit string",
            "decode": "/decode - POST probs, n and a symbol list",
            "sweep": "/sweep - POST probs and optional n_values",
            "health": "/health - Check API health"
        }
    }


@app.get("/health")
async def health_check():
    """Health check endpoint"""
    return {
        "status": "healthy",
        "message": "CCDM API is running",
        "enumeration_limit": config.CCDM_ENUMERATION_LIMIT,
    }


@app.post("/quantize", response_model=QuantizeResponse)
def quantize(request: QuantizeRequest):
    """
    Quantize a distribution to an n-type and derive m and |T|

    Example:
    ```json
    {"probs": [0.5, 0.5], "n": 4}
    ```
    """
    dist = _distribution(request.probs)
    try:
        params = CodeParams.for_distribution(dist, request.n)
        comp = params.composition
        return QuantizeResponse(
            counts=list(comp.counts),
            n=params.n,
            m=params.m,
            type_class_size=str(params.type_class_size),
            h_bar=typemath.entropy(comp),
            kl_gap=typemath.kl_divergence(comp, dist),
            ndiv=typemath.normalized_divergence(dist, comp),
            rate=params.m / params.n,
        )
    except Exception as e:
        _raise_http("quantize", e)


@app.post("/encode", response_model=EncodeResponse)
def encode(request: EncodeRequest):
    """
    Match one m-bit block to its codeword

    Example:
    ```json
    {"probs": [0.5, 0.5], "n": 4, "bits": "01"}
    ```
    """
    dist = _distribution(request.probs)
    try:
        params = CodeParams.for_distribution(dist, request.n)
        symbols = encode_stream(parse_bits(request.bits), params)
        logger.debug(f"Encoded {request.bits!r} to {symbols}")
        return EncodeResponse(symbols=list(symbols), m=params.m, n=params.n)
    except Exception as e:
        _raise_http("encode", e)


@app.post("/decode", response_model=DecodeResponse)
def decode(request: DecodeRequest):
    """
    Dematch one codeword back to its m-bit block

    Example:
    ```json
    {"probs": [0.5, 0.5], "n": 4, "symbols": [1, 0, 0, 1]}
    ```
    """
    dist = _distribution(request.probs)
    try:
        params = CodeParams.for_distribution(dist, request.n)
        bits = decode_stream(request.symbols, params, strict=request.strict)
        return DecodeResponse(bits=format_bits(bits), m=params.m, n=params.n)
    except Exception as e:
        _raise_http("decode", e)


@app.post("/sweep", response_model=List[SweepRecord])
def sweep(request: SweepRequest):
    """Rate, divergence and bounds over a list of blocklengths"""
    dist = _distribution(request.probs)
    n_values = list(analysis.PRESET_GRID) if request.n_values is None else request.n_values
    try:
        return analysis.sweep(dist, n_values, workers=1)
    except Exception as e:
        _raise_http("sweep", e)


if __name__ == "__main__":
    import uvicorn
    logger.info("=" * 70)
    logger.info("🚀 Starting CCDM API Server")
    logger.info("=" * 70)
    logger.info(f"API Documentation: http://localhost:{config.CCDM_API_PORT}/docs")
    logger.info(f"Health Check: http://localhost:{config.CCDM_API_PORT}/health")
    logger.info("=" * 70)

    uvicorn.run(app, host=config.CCDM_API_HOST, port=config.CCDM_API_PORT)
