"""FastAPI application exposing every pipeline.

Handlers are plain functions: the CLI calls them in process, and the routes
call them over HTTP.  Domain errors (reducible input, divergent star, non-SR
matrix, ...) map to 400; malformed payloads are rejected by the models as 422.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..arborescence import max_rst_vector, sum_rst_vector
from ..dequantize import convergence_run, default_p_sweep, p0_threshold, theoretical_error_bound
from ..errors import DomainError
from ..ranking import ahp_rank, generalized_eigen_residual, is_sr_matrix, judge_competitor_rank
from ..semiring import Tolerance, is_max_stochastic, normalize_max_stochastic
from ..spectral import (
    critical_structure,
    kleene_star,
    max_cycle_geometric_mean,
    min_critical_row,
    verify_vis_kleene_blocks,
)
from .schemas import (
    CheckPayload,
    ClassicalRstRequest,
    ClassicalRstResponse,
    CriticalResponse,
    DequantStepPayload,
    DequantizeRequest,
    DequantizeResponse,
    JudgesRequest,
    JudgesResponse,
    KleeneRequest,
    KleeneResponse,
    MatrixOut,
    MatrixRequest,
    MuResponse,
    RankResponse,
    RstResponse,
    VerifyResponse,
    matrix_out,
    tree_payload,
)

app = FastAPI(
    title="maxtree",
    version=__version__,
    description="Max-algebra spanning-tree machinery over JSON matrices.",
)


@app.exception_handler(DomainError)
async def _domain_error(request: Request, exc: DomainError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/mu", response_model=MuResponse)
def compute_mu(req: MatrixRequest) -> MuResponse:
    return MuResponse(mu=max_cycle_geometric_mean(req.matrix.to_array()))


@app.post("/kleene", response_model=KleeneResponse)
def compute_kleene(req: KleeneRequest) -> KleeneResponse:
    ks = kleene_star(req.matrix.to_array(), Tolerance(req.tol), rescale=req.rescale)
    return KleeneResponse(
        n=ks.star.shape[0],
        star=[[float(v) for v in row] for row in ks.star],
        positive=ks.positive,
    )


@app.post("/critical", response_model=CriticalResponse)
def compute_critical(req: MatrixRequest) -> CriticalResponse:
    cs = critical_structure(req.matrix.to_array(), Tolerance(req.tol))
    return CriticalResponse(
        mu=cs.mu,
        critical_nodes=[v + 1 for v in cs.critical_nodes],
        critical_edges=[[i + 1, j + 1] for i, j in cs.critical_edges],
        dc_components=[[v + 1 for v in comp] for comp in cs.dc_components],
        dcstar_components=[[v + 1 for v in comp] for comp in cs.dcstar_components],
    )


@app.post("/rst", response_model=RstResponse)
def compute_rst(req: MatrixRequest) -> RstResponse:
    report = max_rst_vector(req.matrix.to_array(), Tolerance(req.tol))
    return RstResponse(
        w=[float(x) for x in report.vector],
        witnesses=[tree_payload(t) for t in report.witnesses],
        residual=report.residual,
    )


@app.post("/classical-rst", response_model=ClassicalRstResponse)
def compute_classical_rst(req: ClassicalRstRequest) -> ClassicalRstResponse:
    report = sum_rst_vector(req.matrix.to_array(), req.max_enum)
    total = float(report.vector.sum())
    return ClassicalRstResponse(
        w=[float(x) for x in report.vector],
        stationary=[float(x / total) for x in report.vector],
        residual=report.residual,
    )


@app.post("/dequantize", response_model=DequantizeResponse)
def compute_dequantize(req: DequantizeRequest) -> DequantizeResponse:
    A = req.matrix.to_array()
    tol = Tolerance(req.tol)
    p0 = p0_threshold(A, tol)
    p_values = req.p_values if req.p_values else default_p_sweep(p0)
    steps = convergence_run(A, p_values, tol, req.max_enum)
    payloads = [
        DequantStepPayload(
            p=step.p,
            err_matrix=step.err_matrix,
            err_vector=step.err_vector,
            bound=theoretical_error_bound(A, step.p, tol, req.max_enum),
            w=[float(x) for x in step.wp],
        )
        for step in steps
    ]
    return DequantizeResponse(p0=p0, steps=payloads)


@app.post("/verify", response_model=VerifyResponse)
def compute_verify(req: MatrixRequest) -> VerifyResponse:
    A = req.matrix.to_array()
    tol = Tolerance(req.tol)
    normalized = not is_max_stochastic(A, tol)
    Ahat = normalize_max_stochastic(A)[0] if normalized else A

    report = max_rst_vector(Ahat, tol)
    checks = [
        CheckPayload(
            name="max_mctt_residual",
            passed=report.residual <= tol.rel_eps,
            detail=f"left max-eigen residual = {report.residual:.3e}",
        )
    ]

    ks = kleene_star(Ahat, tol)
    cs = critical_structure(Ahat, tol)
    mcr = min_critical_row(ks, cs)
    slack = tol.rel_eps * np.maximum(1.0, mcr)
    bound_ok = bool(np.all(report.vector <= mcr + slack))
    equality = bool(np.all(np.abs(report.vector - mcr) <= slack))
    checks.append(
        CheckPayload(
            name="rst_bound",
            passed=bound_ok,
            detail=(
                f"w <= min critical row holds: {bound_ok}; equality: {equality}; "
                f"critical components: {len(cs.dc_components)}"
            ),
        )
    )

    block = verify_vis_kleene_blocks(Ahat, tol)
    checks.append(
        CheckPayload(
            name="kleene_block_law",
            passed=block.ok,
            detail=f"{len(block.violations)} violating entries",
        )
    )

    w_orig = max_rst_vector(A, tol).vector if normalized else report.vector
    g = generalized_eigen_residual(A, w_orig)
    checks.append(
        CheckPayload(
            name="generalized_eigen_residual",
            passed=g <= tol.rel_eps,
            detail=f"A^T (x) w = Dw residual = {g:.3e}",
        )
    )

    return VerifyResponse(
        normalized=normalized,
        checks=checks,
        passed=all(c.passed for c in checks),
    )


@app.post("/rank", response_model=RankResponse)
def compute_rank(req: MatrixRequest) -> RankResponse:
    A = req.matrix.to_array()
    tol = Tolerance(req.tol)
    if not is_sr_matrix(A, tol):
        raise DomainError(
            "matrix is not symmetrically reciprocal: need positive entries with a_ij * a_ji = 1"
        )
    result = ahp_rank(A, tol)
    return RankResponse(
        weights=[float(x) for x in result.weights],
        order=[v + 1 for v in result.order],
        ties=[[v + 1 for v in group] for group in result.ties],
        residual=result.residual,
    )


@app.post("/judges", response_model=JudgesResponse)
def compute_judges(req: JudgesRequest) -> JudgesResponse:
    chat, result = judge_competitor_rank(
        req.judges.to_array(), req.competitors.to_array(), Tolerance(req.tol)
    )
    return JudgesResponse(
        chat=matrix_out(chat),
        weights=[float(x) for x in result.weights],
        order=[v + 1 for v in result.order],
        ties=[[v + 1 for v in group] for group in result.ties],
        residual=result.residual,
    )


@app.post("/echo", response_model=MatrixOut)
def compute_echo(req: MatrixRequest) -> MatrixOut:
    return matrix_out(req.matrix.to_array())
