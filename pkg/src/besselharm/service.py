"""HTTP facade over the recipe runner.

The CLI talks to this app in-process by default, so every execution
path goes through the same request models whether or not a network is
involved.  Rows with non-finite numbers (failed cells) are serialized
with nulls to stay inside strict JSON.
"""

from __future__ import annotations

import math
from typing import Any

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .recipes import (
    SUITE_ORDER,
    ExperimentRecipe,
    ReportRow,
    list_recipes,
    report_metadata,
    run_recipe,
    validate,
)

app = FastAPI(title="besselharm", version=__version__)


class RecipeModel(BaseModel):
    experiment_id: str
    lams: list[float] = Field(default_factory=list)
    betas: list[float] = Field(default_factory=list)
    ps: list[float] = Field(default_factory=list)
    space: str = ""
    grid: dict[str, float] = Field(default_factory=dict)
    seed: int = 0
    tolerances: dict[str, float] = Field(default_factory=dict)

    def to_recipe(self) -> ExperimentRecipe:
        grid = {
            k: int(v) if k in ("panels", "nodes_per_panel") else float(v)
            for k, v in self.grid.items()
        }
        return ExperimentRecipe(
            experiment_id=self.experiment_id,
            lams=tuple(self.lams),
            betas=tuple(self.betas),
            ps=tuple(self.ps),
            space=self.space,
            grid=grid,
            seed=self.seed,
            tolerances=dict(self.tolerances),
        )


def _clean(v: float) -> float | None:
    return float(v) if math.isfinite(v) else None


class RowModel(BaseModel):
    experiment_id: str
    params: dict[str, Any]
    value: float | None
    oracle: float | None
    residual: float | None
    passed: bool
    runtime_s: float

    @classmethod
    def from_row(cls, row: ReportRow) -> "RowModel":
        return cls(
            experiment_id=row.experiment_id,
            params=row.params,
            value=_clean(row.value),
            oracle=_clean(row.oracle),
            residual=_clean(row.residual),
            passed=row.passed,
            runtime_s=row.runtime_s,
        )


class RunResponse(BaseModel):
    rows: list[RowModel]
    metadata: dict[str, Any]


class ValidateResponse(BaseModel):
    ok: bool
    diagnostics: list[str]


class SuiteRequest(BaseModel):
    seed: int = 0
    recipes: list[str] = Field(default_factory=list)


class SuiteResponse(BaseModel):
    reports: list[RunResponse]
    all_pass: bool


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/recipes")
def recipes() -> dict:
    return {"recipes": list_recipes()}


@app.post("/recipes/validate", response_model=ValidateResponse)
def recipes_validate(recipe: RecipeModel) -> ValidateResponse:
    diagnostics = validate(recipe.to_recipe())
    return ValidateResponse(ok=not diagnostics, diagnostics=diagnostics)


def _execute(recipe: ExperimentRecipe) -> RunResponse:
    diagnostics = validate(recipe)
    if diagnostics:
        raise HTTPException(status_code=422, detail=diagnostics)
    rows = run_recipe(recipe)
    return RunResponse(
        rows=[RowModel.from_row(r) for r in rows],
        metadata=report_metadata(recipe, rows),
    )


@app.post("/recipes/run", response_model=RunResponse)
def recipes_run(recipe: RecipeModel) -> RunResponse:
    return _execute(recipe.to_recipe())


@app.post("/suite", response_model=SuiteResponse)
def suite(request: SuiteRequest) -> SuiteResponse:
    names = request.recipes or list(SUITE_ORDER)
    unknown = [n for n in names if n not in SUITE_ORDER]
    if unknown:
        raise HTTPException(status_code=422, detail=[f"unknown recipe {n!r}" for n in unknown])
    reports = [
        _execute(ExperimentRecipe(experiment_id=name, seed=request.seed)) for name in names
    ]
    return SuiteResponse(
        reports=reports,
        all_pass=all(row.passed for rep in reports for row in rep.rows),
    )
