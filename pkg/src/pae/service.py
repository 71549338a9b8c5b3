"""Evaluation service: pydantic request/response models and a FastAPI app.

The evaluator keeps warm caches (Jones-Wenzl elements, component values),
so a long-running process amortizes them across requests.  The CLI uses the
same handler functions in-process; run the HTTP service with::

    uvicorn pae.service:app
"""

from __future__ import annotations

from typing import List, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import dsl, engine, projections, tl
from .scalars import render_gaussian, render_rational
from .tl import ArityError, InadmissibleTriple


class ServiceError(Exception):
    """Input or evaluation error; maps to CLI exit code 1 / HTTP 400."""

    def __init__(self, message: str, code: int = 400):
        super().__init__(message)
        self.code = code


class ValueOut(BaseModel):
    re: str
    im: str
    text: str


def _value_out(v) -> ValueOut:
    return ValueOut(re=render_rational(v.re), im=render_rational(v.im), text=render_gaussian(v))


class EvalRequest(BaseModel):
    program: str
    max_jw: int = Field(default=12, ge=4)
    strategy: str = Field(default="first", pattern="^(first|last)$")
    trace_steps: bool = False


class EvalResponse(BaseModel):
    value: ValueOut
    terms_peak: int
    s2_applications: int
    crossings_resolved: int
    wall_ms: int
    steps: Optional[List[str]] = None


class JwResponse(BaseModel):
    k: int
    trace: str
    text: str


class ThetaResponse(BaseModel):
    a: int
    b: int
    c: int
    value: str
    absolute: str


class ChenEntry(BaseModel):
    k: int
    value: str


class ChenResponse(BaseModel):
    a: int
    b: int
    coefficients: List[ChenEntry]


class VerifyRequest(BaseModel):
    suite: str
    extended: bool = False
    threads: int = Field(default=1, ge=1)


class CheckOut(BaseModel):
    model_config = {"populate_by_name": True}

    id: str
    anchor: str
    expected: str
    computed: str
    passed: bool = Field(alias="pass")
    ms: int


class VerifyResponse(BaseModel):
    suite: str
    passed: bool
    checks: List[CheckOut]


class GramRequest(BaseModel):
    expressions: List[str]
    max_jw: int = Field(default=12, ge=4)


class GramResponse(BaseModel):
    matrix: List[List[str]]
    rank: int


# ---------------------------------------------------------------------------
# handlers (shared by the CLI and the HTTP endpoints)


def handle_eval(req: EvalRequest) -> EvalResponse:
    tl.set_jw_cap(max(req.max_jw, tl.jw_cap()))
    steps: Optional[List[str]] = [] if req.trace_steps else None

    def trace(step: engine.ReductionStep):
        steps.append(f"{step.kind} {step.detail}".rstrip())

    config = engine.EvalConfig(strategy=req.strategy, trace=trace if req.trace_steps else None)
    try:
        el = dsl.run_program(req.program)
    except dsl.DslError as exc:
        raise ServiceError(str(exc))
    try:
        value = engine.evaluate_closed(el, config)
    except engine.NotClosed as exc:
        raise ServiceError(f"program is not a closed diagram: {exc}")
    except engine.StuckDiagram as exc:
        raise ServiceError(f"evaluation got stuck: {exc}", code=500)
    st = config.stats
    return EvalResponse(
        value=_value_out(value),
        terms_peak=st.terms_peak,
        s2_applications=st.s2_applications,
        crossings_resolved=st.crossings_resolved,
        wall_ms=st.wall_ms,
        steps=steps,
    )


def handle_jw(k: int, max_jw: int = 12) -> JwResponse:
    tl.set_jw_cap(max(max_jw, tl.jw_cap()))
    try:
        el = tl.jones_wenzl(k)
    except (ArityError, ValueError) as exc:
        raise ServiceError(str(exc))
    trace = tl.trace_close_right(el)
    text = tl.render_e_words(el) if k <= 8 else str(el)
    return JwResponse(k=k, trace=render_gaussian(trace), text=text)


def handle_theta(a: int, b: int, c: int) -> ThetaResponse:
    try:
        v = tl.theta(a, b, c)
    except InadmissibleTriple as exc:
        raise ServiceError(str(exc))
    return ThetaResponse(a=a, b=b, c=c, value=render_rational(v),
                         absolute=render_rational(abs(v)))


def handle_chen(a: int, b: int) -> ChenResponse:
    try:
        coeffs = tl.chen_coefficients(a, b)
    except ValueError as exc:
        raise ServiceError(str(exc))
    return ChenResponse(
        a=a, b=b,
        coefficients=[ChenEntry(k=k, value=render_rational(v)) for k, v in coeffs],
    )


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    try:
        report = projections.run_suite(req.suite, extended=req.extended, threads=req.threads)
    except projections.UnknownName as exc:
        raise ServiceError(str(exc.args[0]), code=404)
    return VerifyResponse(
        suite=report.suite,
        passed=report.passed,
        checks=[CheckOut(**c.to_dict()) for c in report.checks],
    )


def handle_gram(req: GramRequest) -> GramResponse:
    tl.set_jw_cap(max(req.max_jw, tl.jw_cap()))
    els = []
    try:
        for src in req.expressions:
            els.append(dsl.elaborate(dsl.parse_expression(src)))
    except dsl.DslError as exc:
        raise ServiceError(str(exc))
    if not els:
        return GramResponse(matrix=[], rank=0)
    shapes = {(e.m, e.n) for e in els}
    if len(shapes) > 1:
        raise ServiceError(f"expressions have mixed arities: {sorted(shapes)}")
    try:
        g = engine.gram_matrix(els)
    except ArityError as exc:
        raise ServiceError(str(exc))
    return GramResponse(
        matrix=[[render_gaussian(v) for v in row] for row in g],
        rank=engine.matrix_rank(g),
    )


# ---------------------------------------------------------------------------
# FastAPI app

app = FastAPI(title="pae", description="Exact planar-algebra evaluation service")


def _wrap(fn, *args):
    try:
        return fn(*args)
    except ServiceError as exc:
        raise HTTPException(status_code=exc.code, detail=str(exc))


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/eval", response_model=EvalResponse, response_model_exclude_none=True)
def eval_endpoint(req: EvalRequest) -> EvalResponse:
    return _wrap(handle_eval, req)


@app.get("/jw/{k}", response_model=JwResponse)
def jw_endpoint(k: int, max_jw: int = 12) -> JwResponse:
    return _wrap(handle_jw, k, max_jw)


@app.get("/theta", response_model=ThetaResponse)
def theta_endpoint(a: int, b: int, c: int) -> ThetaResponse:
    return _wrap(handle_theta, a, b, c)


@app.get("/chen", response_model=ChenResponse)
def chen_endpoint(a: int, b: int) -> ChenResponse:
    return _wrap(handle_chen, a, b)


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest) -> VerifyResponse:
    return _wrap(handle_verify, req)


@app.post("/gram", response_model=GramResponse)
def gram_endpoint(req: GramRequest) -> GramResponse:
    return _wrap(handle_gram, req)
