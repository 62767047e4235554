"""Pydantic request/response models; the JSON wire formats of the service and CLI.

Matrices travel as {"n": int, "rows": [[entry, ...], ...]} where entries are
numbers or exact rational strings such as "21/80".  Nodes are 1-indexed in
every payload.
"""

from __future__ import annotations

from typing import ClassVar

import numpy as np
from pydantic import BaseModel, Field, PrivateAttr, model_validator

from ..digraph import ITree
from ..matrixio import MatrixParseError, parse_rows


class MatrixPayload(BaseModel):
    """A matrix of nonnegative entries; rectangular unless a subclass tightens it."""

    _require_square: ClassVar[bool] = False

    n: int | None = None
    rows: list[list[float | str]]
    _parsed: list[list[float]] = PrivateAttr(default_factory=list)

    @model_validator(mode="after")
    def _parse(self):
        try:
            arr = parse_rows(self.n, self.rows, square=self._require_square)
        except MatrixParseError as exc:
            raise ValueError(str(exc)) from exc
        self._parsed = arr.tolist()
        return self

    def to_array(self) -> np.ndarray:
        return np.array(self._parsed, dtype=float)


class SquareMatrixPayload(MatrixPayload):
    _require_square: ClassVar[bool] = True


class MatrixRequest(BaseModel):
    matrix: SquareMatrixPayload
    tol: float = Field(default=1e-9, gt=0.0)


class KleeneRequest(MatrixRequest):
    rescale: bool = False


class ClassicalRstRequest(MatrixRequest):
    max_enum: int = Field(default=9, ge=1)


class DequantizeRequest(MatrixRequest):
    p_values: list[int] | None = None
    max_enum: int = Field(default=9, ge=1)


class JudgesRequest(BaseModel):
    judges: MatrixPayload
    competitors: MatrixPayload
    tol: float = Field(default=1e-9, gt=0.0)


class MatrixOut(BaseModel):
    n: int
    rows: list[list[float]]


class MuResponse(BaseModel):
    mu: float


class KleeneResponse(BaseModel):
    n: int
    star: list[list[float]]
    positive: bool


class CriticalResponse(BaseModel):
    mu: float
    critical_nodes: list[int]
    critical_edges: list[list[int]]
    dc_components: list[list[int]]
    dcstar_components: list[list[int]]


class TreePayload(BaseModel):
    root: int
    edges: list[list[int]]
    weight: float


class RstResponse(BaseModel):
    w: list[float]
    witnesses: list[TreePayload]
    residual: float


class ClassicalRstResponse(BaseModel):
    w: list[float]
    stationary: list[float]
    residual: float


class DequantStepPayload(BaseModel):
    p: int
    err_matrix: float
    err_vector: float
    bound: float
    w: list[float]


class DequantizeResponse(BaseModel):
    p0: int
    steps: list[DequantStepPayload]


class CheckPayload(BaseModel):
    name: str
    passed: bool
    detail: str


class VerifyResponse(BaseModel):
    normalized: bool
    checks: list[CheckPayload]
    passed: bool


class RankResponse(BaseModel):
    weights: list[float]
    order: list[int]
    ties: list[list[int]]
    residual: float


class JudgesResponse(BaseModel):
    chat: MatrixOut
    weights: list[float]
    order: list[int]
    ties: list[list[int]]
    residual: float


def matrix_out(A: np.ndarray) -> MatrixOut:
    return MatrixOut(n=int(A.shape[0]), rows=[[float(v) for v in row] for row in A])


def tree_payload(tree: ITree) -> TreePayload:
    """Serialize a tree with 1-indexed nodes."""
    return TreePayload(
        root=tree.root + 1,
        edges=[[t + 1, h + 1] for t, h in tree.edges],
        weight=float(tree.weight),
    )
