from contextlib import contextmanager
from datetime import datetime
import logging

from fastapi import FastAPI, HTTPException, status

import complexity
import core
import rangebound
from convert import v_to_z, z_to_v
from errors import ZonoError
from file_utils import (
    parse_expr, parse_matrix, parse_vpoly, parse_zpoly, serialize_vpoly, serialize_zpoly,
)
from log_utils import setup_logging
from models import ComplexityCase
from schemas import (
    SetText, ValidateResponse, ConvertRequest, SetResponse, MapRequest, PairRequest,
    BoundRequest, BoundResponse, ComplexityRequest, ComplexityResponse,
)
from setops import convex_hull, linear_map, minkowski_sum

logger = logging.getLogger(__name__)

app = FastAPI(title="Z-Representation Polytope Service", version="1.0.0")

# Configure logging on startup
@app.on_event("startup")
def startup_event():
    setup_logging()

@contextmanager
def domain_errors():
    """Turn library errors into 400 responses."""
    try:
        yield
    except ZonoError as exc:
        logger.info("request rejected", extra={"error": type(exc).__name__, "detail": exc.detail})
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=exc.detail
        ) from exc

def _set_response(P) -> SetResponse:
    return SetResponse(text=serialize_zpoly(P), stats=core.size_stats(P))

# Validation

@app.post("/validate", response_model=ValidateResponse)
def validate_set(payload: SetText):
    """Report every invariant a zpoly text violates."""
    with domain_errors():
        P = parse_zpoly(payload.text, check=False)
    violations = core.validate(P)
    return ValidateResponse(valid=not violations, violations=violations)

# Conversions

@app.post("/convert/to-z", response_model=SetResponse)
def convert_to_z(request: ConvertRequest):
    """Vertex list to Z-representation."""
    with domain_errors():
        P = v_to_z(parse_vpoly(request.text), request.order)
        return _set_response(P)

@app.post("/convert/to-v", response_model=SetResponse)
def convert_to_v(request: ConvertRequest):
    """Z-representation to its vertex list."""
    with domain_errors():
        V = z_to_v(parse_zpoly(request.text), tol=request.tol)
        return SetResponse(text=serialize_vpoly(V))

# Set operations

@app.post("/ops/map", response_model=SetResponse)
def map_set(request: MapRequest):
    with domain_errors():
        return _set_response(linear_map(parse_matrix(request.matrix), parse_zpoly(request.set)))

@app.post("/ops/sum", response_model=SetResponse)
def sum_sets(request: PairRequest):
    with domain_errors():
        return _set_response(minkowski_sum(parse_zpoly(request.first), parse_zpoly(request.second)))

@app.post("/ops/hull", response_model=SetResponse)
def hull_sets(request: PairRequest):
    with domain_errors():
        return _set_response(convex_hull(parse_zpoly(request.first), parse_zpoly(request.second)))

@app.post("/regularize", response_model=SetResponse)
def regularize_set(payload: SetText):
    """Merge generators with equal variable parts and renumber factors."""
    with domain_errors():
        regular, _ = core.regularize(parse_zpoly(payload.text))
        return _set_response(regular)

# Range bounding

@app.post("/bound", response_model=BoundResponse)
def bound_expression(request: BoundRequest):
    """Interval enclosing the expression's range over the set."""
    with domain_errors():
        result = rangebound.bound(parse_expr(request.expr), parse_zpoly(request.set), request.config)
    return BoundResponse(lo=result.lo, hi=result.hi, method=request.config.method)

# Representation complexity

@app.post("/complexity", response_model=ComplexityResponse)
def complexity_table(request: ComplexityRequest):
    if request.case == ComplexityCase.ZONO_POINT and not request.m:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail="zono-point needs m values"
        )
    if request.case == ComplexityCase.ZONO_ZONO and not (request.m1 and request.m2):
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail="zono-zono needs m1 and m2 values"
        )
    with domain_errors():
        rows = complexity.emit_table(request.case, request.n, request.m, request.m1, request.m2)
    return ComplexityResponse(rows=rows)

# Health check endpoint
@app.get("/health")
def health_check():
    """Health check endpoint."""
    return {"status": "healthy", "timestamp": datetime.utcnow()}

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
