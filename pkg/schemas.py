from pydantic import BaseModel, validator
from typing import Optional, List, Tuple
from models import BoundMethod, BoundKind, ComplexityCase, VertexOrder

# Size bookkeeping
class SizeStats(BaseModel):
    p: int
    h: int
    mu: int
    n_z: int

    class Config:
        frozen = True

    @validator('p', 'h', 'mu', 'n_z')
    def counts_must_be_nonnegative(cls, v):
        if v < 0:
            raise ValueError('Counts must be nonnegative')
        return v

    def as_text(self) -> str:
        return f"p={self.p} h={self.h} mu={self.mu} Nz={self.n_z}"

# Representation complexity
class ComplexityRow(BaseModel):
    case: ComplexityCase
    n: int
    m: Optional[int] = None
    m1: Optional[int] = None
    m2: Optional[int] = None
    n_v: int
    n_h: int
    n_z: int
    # Kinds of (n_v, n_h, n_z) in that order
    bound_kind: Tuple[BoundKind, BoundKind, BoundKind]

    class Config:
        frozen = True

    @validator('n', 'n_v', 'n_h', 'n_z')
    def counts_must_be_nonnegative(cls, v):
        if v < 0:
            raise ValueError('Counts must be nonnegative')
        return v

    @property
    def bound_kind_text(self) -> str:
        return "/".join(kind.value for kind in self.bound_kind)

# Range bounding
class BoundConfig(BaseModel):
    taylor_order: int = 6
    degree_cap: int = 8
    split_depth: int = 4
    split_fanout: int = 2
    method: BoundMethod = BoundMethod.PZ
    inflate: bool = False

    class Config:
        frozen = True

    @validator('taylor_order', 'degree_cap')
    def must_be_positive(cls, v):
        if v < 1:
            raise ValueError('Taylor order and degree cap must be at least 1')
        return v

    @validator('split_depth')
    def split_depth_must_be_nonnegative(cls, v):
        if v < 0:
            raise ValueError('Split depth must be nonnegative')
        return v

    @validator('split_fanout')
    def split_fanout_must_be_positive(cls, v):
        if v < 1:
            raise ValueError('Split fanout must be at least 1')
        return v

# HTTP service payloads
class SetText(BaseModel):
    text: str

    @validator('text')
    def text_must_not_be_empty(cls, v):
        if not v.strip():
            raise ValueError('Set text must not be empty')
        return v

class ValidateResponse(BaseModel):
    valid: bool
    violations: List[str]

class ConvertRequest(BaseModel):
    text: str
    order: VertexOrder = VertexOrder.INPUT
    tol: float = 1e-9

    @validator('tol')
    def tol_must_be_positive(cls, v):
        if v <= 0:
            raise ValueError('Tolerance must be positive')
        return v

class SetResponse(BaseModel):
    text: str
    stats: Optional[SizeStats] = None

class MapRequest(BaseModel):
    matrix: str
    set: str

class PairRequest(BaseModel):
    first: str
    second: str

class BoundRequest(BaseModel):
    expr: str
    set: str
    config: BoundConfig = BoundConfig()

class BoundResponse(BaseModel):
    lo: float
    hi: float
    method: BoundMethod

class ComplexityRequest(BaseModel):
    case: ComplexityCase
    n: List[int]
    m: Optional[List[int]] = None
    m1: Optional[List[int]] = None
    m2: Optional[List[int]] = None

    @validator('n')
    def dimensions_must_be_valid(cls, v):
        if any(n < 2 for n in v):
            raise ValueError('Dimensions must be at least 2')
        return v

class ComplexityResponse(BaseModel):
    rows: List[ComplexityRow]
