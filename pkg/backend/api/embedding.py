"""
Embedding API endpoints
Branching times, embedded degree batches and birth-process samplers
"""

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field
import numpy as np
import sys
import os

# Add parent directory to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))
from utils.bi_embedding import (
    bi_shot_noise, birth_process_ctmc, birth_process_mixed_poisson, embedding_batch,
    hill_on_branching_points, limit_law_checks, simulate_branching_times
)
from utils.pa_graph import Model

router = APIRouter()


class BranchingRequest(BaseModel):
    model: Model = Model.A
    delta: float = Field(0.0, gt=-1.0)
    n: int = Field(..., ge=1, le=1_000_000)
    seed: int = 0
    include_times: bool = False


@router.post("/branching-times")
async def branching_times(request: BranchingRequest):
    """T_1..T_n and the scaled terminal statistic w_hat"""
    try:
        times = simulate_branching_times(request.model, request.delta, request.n, request.seed)
        result = {"success": True, "T_n": times.terminal, "w_hat": times.w_hat()}
        if request.include_times:
            result["times"] = times.times.tolist()
        return result
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Branching Error: {str(e)}")


class BatchRequest(BaseModel):
    model: Model = Model.A
    delta: float = Field(0.0, gt=-1.0)
    n: int = Field(1_000, ge=2, le=1_000_000)
    reps: int = Field(100, ge=1, le=100_000)
    seed: int = 0
    check: bool = True


@router.post("/batch")
async def batch(request: BatchRequest):
    """Embedded runs with optional KS checks against the limit laws"""
    try:
        table = embedding_batch(request.model, request.delta, request.n, request.reps, request.seed)
        result = {"success": True, "records": table.to_dict(orient="records")}
        if request.check and request.reps >= 2:
            result["checks"] = limit_law_checks(table, request.model, request.delta).to_dict(orient="records")
        return result
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Embedding Error: {str(e)}")


class BirthProcessRequest(BaseModel):
    process: str = "mixed_poisson"  # mixed_poisson, ctmc, shot_noise
    lam: float = Field(1.0, gt=0)
    t: float = Field(1.0, ge=0)
    theta: float = Field(1.0, ge=0)
    size: int = Field(1_000, ge=1, le=1_000_000)
    seed: int = 0


@router.post("/birth-process")
async def birth_process(request: BirthProcessRequest):
    """Sample mean and e^{-lambda t} scaled mean of a birth or birth-immigration process"""
    try:
        if request.process == "mixed_poisson":
            counts = birth_process_mixed_poisson(request.lam, request.t, request.seed, request.size).count
        elif request.process == "ctmc":
            counts = birth_process_ctmc(request.lam, request.t, request.seed, request.size).count
        elif request.process == "shot_noise":
            counts = bi_shot_noise(request.theta, request.lam, request.t, request.seed, request.size)
        else:
            raise ValueError(f"unknown process '{request.process}'")
        scaled = counts * np.exp(-request.lam * request.t)
        return {
            "success": True,
            "process": request.process,
            "mean": float(counts.mean()),
            "scaled_mean": float(scaled.mean()),
            "max": int(counts.max()),
        }
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Birth Process Error: {str(e)}")


@router.get("/hill-branching")
async def hill_branching(delta: float = 0.0, n: int = 10_001, k: int = 10_000, seed: int = 0):
    """Hill estimator on e^{-T_i} of Model A, both computations"""
    try:
        telescoped = hill_on_branching_points(delta, n, k, seed, method="telescoped")
        direct = hill_on_branching_points(delta, n, k, seed, method="direct")
        return {"success": True, "hill": telescoped, "direct": direct, "target": 1.0 / (2.0 + delta)}
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Hill Error: {str(e)}")
