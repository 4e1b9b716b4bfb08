"""
Experiments API endpoints
Replication runs, consistency sweeps, QQ data and the run log
"""

from fastapi import APIRouter, HTTPException
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, Field
from typing import List, Optional
from io import BytesIO
import sys
import os

# Add parent directory to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))
from utils.audit_utils import get_run_log
from utils.experiments import (
    PUBLISHED_MEAN_ALPHA_HAT, ExperimentConfig, compare_with_reference, consistency_sweep, qq_data, replicate
)
from utils.export_utils import create_experiment_report
from utils.settings_utils import get_default_settings, get_full_grid_settings

router = APIRouter()


def _rows(df):
    """DataFrame rows as dicts with NaN mapped to None"""
    return df.astype(object).where(df.notna(), None).to_dict(orient="records")


@router.get("/defaults")
async def defaults(full_grid: bool = False):
    """Desk-scale or full-grid experiment settings"""
    return {"success": True, "settings": get_full_grid_settings() if full_grid else get_default_settings()}


@router.get("/reference")
async def reference():
    """Published mean alpha_hat per (delta, n) for Model B"""
    table = [{"delta": d, "n": n, "mean_alpha_hat": v} for (d, n), v in PUBLISHED_MEAN_ALPHA_HAT.items()]
    return {"success": True, "reference": table}


class ReplicateRequest(BaseModel):
    config: ExperimentConfig
    write: bool = False
    include_records: bool = False


@router.post("/replicate")
async def run_replication(request: ReplicateRequest):
    """Replicated minimum-distance estimation; returns the summary with published means"""
    try:
        result = replicate(request.config, write=request.write)
        response = {
            "success": True,
            "config_hash": request.config.config_hash(),
            "summary": _rows(compare_with_reference(result.summary)),
            "qq_lines": {name: data.line() for name, data in result.qq.items()},
        }
        if request.include_records:
            response["records"] = _rows(result.records)
        return response
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Replication Error: {str(e)}")


@router.post("/replicate/report")
async def replication_report(config: ExperimentConfig):
    """Excel report of a replication run"""
    try:
        result = replicate(config, write=False)
        report = create_experiment_report(
            result.records, result.summary, config.model_dump(mode="json"),
            config.config_hash(), compare_with_reference(result.summary)
        )
        return StreamingResponse(
            BytesIO(report),
            media_type="application/vnd.openxmlformats-officedocument.spreadsheetml.sheet",
            headers={"Content-Disposition": "attachment; filename=replication_report.xlsx"}
        )
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Report Error: {str(e)}")


class ConsistencyRequest(BaseModel):
    deltas: List[float] = Field(default_factory=lambda: [0.0, 1.0], min_length=1)
    ns: List[int] = Field(default_factory=lambda: [10_000], min_length=1)
    reps: int = Field(20, ge=1)
    seed: int = 2019


@router.post("/consistency")
async def consistency(request: ConsistencyRequest):
    """Model A Hill estimates at k_n = ceil(sqrt(n log n))"""
    try:
        table = consistency_sweep(request.deltas, request.ns, request.reps, request.seed)
        return {"success": True, "cells": _rows(table)}
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Consistency Error: {str(e)}")


class QQRequest(BaseModel):
    values: List[float] = Field(..., min_length=1)


@router.post("/qq")
async def qq(request: QQRequest):
    """Normal QQ pairs and the quartile reference line"""
    try:
        data = qq_data(request.values)
        return {
            "success": True,
            "line": data.line(),
            "points": _rows(data.frame),
        }
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"QQ Error: {str(e)}")


@router.get("/runs")
async def runs(output_dir: str = "results", event_type: Optional[str] = None, limit: int = 100):
    """Run log entries of an output directory, newest first"""
    try:
        return {"success": True, "runs": get_run_log(output_dir, event_type, limit)}
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Run Log Error: {str(e)}")
