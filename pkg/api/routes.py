"""
API routes for the Chevalley kernel.
"""

import logging

from fastapi import APIRouter, HTTPException, Query

from models import (
    CheckReport,
    DecomposeReport,
    DecomposeRequest,
    InterpReport,
    InterpRequest,
    RootFamily,
    RootsReport,
    RunConfig,
    Suite,
)
from services.errors import ChevalleyError, GroupTooLarge
from services.reports import decompose_report, interp_report, roots_report
from services.suites import run_check

logger = logging.getLogger(__name__)

router = APIRouter()


def _http_error(exc: Exception, action: str) -> HTTPException:
    """Map a service exception onto an HTTP status."""
    logger.warning("%s failed: %s: %s", action, type(exc).__name__, exc)
    if isinstance(exc, ValueError):
        return HTTPException(status_code=400, detail=str(exc))
    if isinstance(exc, GroupTooLarge):
        return HTTPException(status_code=413, detail=str(exc))
    if isinstance(exc, ChevalleyError):
        return HTTPException(status_code=500, detail=f"{type(exc).__name__}: {exc}")
    return HTTPException(status_code=500, detail=f"Error during {action}: {str(exc)}")


@router.get("/")
def read_root():
    """
    Root endpoint providing API information.

    Returns:
        dict: Welcome message and endpoint list
    """
    return {
        "message": "Welcome to the Chevalley kernel API",
        "version": "1.0.0",
        "endpoints": {
            "/systems": "Get the admissible root system families",
            "/suites": "Get the verification suites",
            "/roots": "Roots, B-set and deletion trace for a choice of alpha_1",
            "/check": "Run verification suites (POST)",
            "/decompose": "Gauss decomposition of a generator word (POST)",
            "/interp": "Ring or group round trip (POST)",
            "/docs": "Interactive API documentation"
        }
    }


@router.get("/systems")
def get_systems():
    """
    Get the root system families with their admissible ranks.

    Returns:
        dict: Families and descriptions
    """
    return RootFamily.get_all_with_descriptions()


@router.get("/suites")
def get_suites():
    """
    Get the verification suite registry.

    Returns:
        dict: Suite names and descriptions
    """
    return Suite.get_all_with_descriptions()


@router.get("/roots", response_model=RootsReport)
def get_roots(
    system: str = Query(..., description="Root system label, e.g. G2"),
    alpha: str = Query(..., description="Root literal for alpha_1, e.g. [1,0]")
):
    try:
        return roots_report(system, alpha)
    except Exception as e:
        raise _http_error(e, "roots")


@router.post("/check", response_model=CheckReport)
def check(config: RunConfig):
    """
    Run the requested verification suites.

    Suites needing a group above the cap come back as "skipped (capped)".
    """
    try:
        return run_check(config)
    except Exception as e:
        raise _http_error(e, "check")


@router.post("/decompose", response_model=DecomposeReport)
def decompose(request: DecomposeRequest):
    try:
        return decompose_report(request.system, request.ring, request.word)
    except Exception as e:
        raise _http_error(e, "decompose")


@router.post("/interp", response_model=InterpReport)
def interp(request: InterpRequest):
    try:
        return interp_report(request.system, request.ring, request.direction,
                             seed=request.seed, cap=request.cap, pairs=request.pairs)
    except Exception as e:
        raise _http_error(e, "interp")
