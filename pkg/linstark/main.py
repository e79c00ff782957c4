"""
linstark service - read-only JSON API over the spectrum and Stark-shift reports.
"""

import logging
from typing import Any, Dict, List, Literal, Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import ValidationError

from linstark import __version__
from linstark.config import get_settings
from linstark.errors import InvalidParameterError, LinstarkError
from linstark.models import (
    ErrorDetail,
    ErrorResponse,
    PhysicalScales,
    ReportRow,
    StarkInput,
    StarkReport,
    SumRuleResult,
)
from linstark.reports import (
    expansion_coefficients,
    spectrum_rows,
    stark_report,
    sumrule_rows,
    zeros_rows,
)
from linstark.systems import system_factory

logger = logging.getLogger(__name__)

SERVICE_NAME = "linstark"

# Initialize FastAPI app
app = FastAPI(
    title="linstark",
    description="Airy-function spectra and Stark shifts of the quantum bouncer and the symmetric linear well",
    version=__version__,
)

# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=get_settings().cors_origins.split(","),
    allow_credentials=True,
    allow_methods=["GET"],
    allow_headers=["*"],
)


def _error(status_code: int, error_type: str, message: str) -> JSONResponse:
    body = ErrorResponse(error=ErrorDetail(type=error_type, message=message))
    return JSONResponse(status_code=status_code, content=body.model_dump())


@app.exception_handler(LinstarkError)
async def linstark_exception_handler(request, exc: LinstarkError):
    """Domain and numerical failures become 400 with the error envelope."""
    logger.info("rejected %s: %s", request.url.path, exc)
    return _error(400, exc.error_type, str(exc))


@app.exception_handler(ValidationError)
async def validation_exception_handler(request, exc: ValidationError):
    return _error(400, "invalid_parameter", exc.errors()[0]["msg"])


@app.exception_handler(HTTPException)
async def http_exception_handler(request, exc: HTTPException):
    """Custom exception handler for HTTPException."""
    return _error(exc.status_code, "invalid_request_error", str(exc.detail))


def _scales(mass: float, slope: float, hbar: float) -> PhysicalScales:
    return PhysicalScales(mass=mass, slope=slope, hbar=hbar)


@app.get("/")
async def root():
    """Root endpoint."""
    return {
        "service": SERVICE_NAME,
        "version": __version__,
        "status": "operational",
        "docs": "/docs",
    }


@app.get("/health")
async def health_check():
    """Health check endpoint."""
    return {
        "status": "healthy",
        "service": SERVICE_NAME,
        "version": __version__,
        "systems": system_factory.get_available_systems(),
    }


@app.get("/v1/zeros")
def list_zeros(count: int = Query(10, ge=1, le=10000)) -> Dict[str, Any]:
    """First `count` zeros of Ai (zeta) and Ai' (chi), as positive magnitudes."""
    return {"data": zeros_rows(count)}


@app.get("/v1/spectrum")
def spectrum(
    system: str = "bouncer",
    count: int = Query(10, ge=1, le=1000),
    delta: float = 0.0,
    mass: float = 0.5,
    slope: float = 1.0,
    hbar: float = 1.0,
) -> Dict[str, List[ReportRow]]:
    """Exact energies with the WKB estimate as the comparison value."""
    return {"data": spectrum_rows(system, count, _scales(mass, slope, hbar), delta)}


@app.get("/v1/stark", response_model=StarkReport)
def stark(
    system: str = "bouncer",
    n: int = Query(1, ge=1),
    parity: Optional[Literal["even", "odd"]] = None,
    delta: Optional[float] = None,
    fbar: Optional[float] = None,
    oracle: bool = False,
    kmax: Optional[int] = Query(None, ge=10),
    grid_points: Optional[int] = Query(None, ge=5),
    omega: Optional[float] = None,
    half_width: Optional[float] = None,
    well_level: Optional[int] = Query(None, ge=0),
    mass: float = 0.5,
    slope: float = 1.0,
    hbar: float = 1.0,
):
    """
    Every estimate of one Stark-shifted level against the exact energy.

    Exactly one of `delta` and `fbar` is required. The finite-difference
    oracle is off by default; it takes seconds per level.
    """
    if (delta is None) == (fbar is None):
        raise InvalidParameterError("give exactly one of delta and fbar")
    scales = _scales(mass, slope, hbar)
    field = StarkInput.from_delta(delta, scales) if fbar is None else StarkInput.from_force(fbar, scales)
    references = {
        key: value
        for key, value in (("omega", omega), ("half_width", half_width), ("well_level", well_level))
        if value is not None
    }
    return stark_report(
        system, n, field, scales,
        parity=parity,
        with_oracle=oracle,
        k_max=kmax,
        grid_points=grid_points,
        references=references or None,
    )


@app.get("/v1/expand")
def expand(
    system: str = "symmetric",
    parity: Literal["even", "odd"] = "odd",
    order: int = Query(4, ge=1),
) -> Dict[str, Any]:
    """Exact coefficients R_1..R_order as "p/q" strings."""
    name = system_factory.get_system(system).name
    return {
        "system": name,
        "parity": parity if name == "symmetric" else None,
        "coefficients": expansion_coefficients(name, parity, order),
    }


@app.get("/v1/sumrule")
def sumrule(
    family: str = "bouncer",
    n: List[int] = Query([1]),
    kmax: Optional[int] = Query(None, ge=10),
) -> Dict[str, List[SumRuleResult]]:
    """Truncated second-order sums with tail correction against their closed forms."""
    return {"data": sumrule_rows(family, n, kmax)}


if __name__ == "__main__":
    import uvicorn

    settings = get_settings()
    uvicorn.run(
        "linstark.main:app",
        host=settings.host,
        port=settings.port,
        reload=True,
    )
